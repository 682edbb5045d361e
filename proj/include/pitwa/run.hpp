// Copyright 2026 The pitwa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pitwa/config.hpp"

namespace pitwa {

// Polar angle and azimuth of the mean spin of the initial coherent state, in
// the convention of coherent_state (theta = 0 is fully inverted).
std::pair<double, double> initial_direction(const InitialState& init);

// Exact reference for a config: the Dicke solver for one ensemble, the
// brute-force oracle otherwise or when requested.
ObservableTable run_exact(const RunConfig& cfg);

struct RunOutcome {
    ObservableTable table;
    nlohmann::json meta;
    std::vector<std::string> files;  // written artifacts
    bool compare_pass = true;
};

// Executes one run. With write_files set, creates the output directory and
// writes results.csv, meta.json and any mode-specific artifacts.
// Throws std::invalid_argument on validation errors and IntegratorAbort when
// too many trajectories fail.
RunOutcome execute_run(const RunConfig& cfg, bool write_files = true);

}  // namespace pitwa
