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

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pitwa/calibration.hpp"
#include "pitwa/exact_dicke.hpp"
#include "pitwa/io.hpp"
#include "pitwa/system.hpp"
#include "pitwa/twa.hpp"

namespace pitwa {

enum class RunMode { Exact, Twa, Chain, Sweep, Calibrate, Compare };

std::string to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& s);

struct CompareSettings {
    std::vector<std::string> observables;  // empty compares every shared column
    double threshold = 0.1;
};

struct SweepSettings {
    std::vector<int> ensembles{20, 50};
    std::vector<double> drive_over_gamma{0.0, 0.05, 0.1, 0.2};
    double total_phase = 31.41592653589793;
    double cooperativity = 100.0;
    double t_eval = 2.0;
    double window_fraction = 0.05;
    int window_records = 6;
};

struct CalibrateSettings {
    std::vector<int> symbol_n{1, 2, 5, 10};
    CalibrationOptions symbols;
    std::vector<int> second_moment_n{10, 20, 50, 100};
    std::vector<double> second_moment_thetas{0.0, 0.7, 1.5707963267948966, 2.4, 3.141592653589793};
    int quadrature_order = 64;
};

// A complete, versioned description of one run. The resolved form written to
// meta.json parses back to an identical config.
struct RunConfig {
    int schema_version = kSchemaVersion;
    RunMode mode = RunMode::Twa;
    SystemSpec spec;
    InitialState init;
    IntegratorConfig integrator;
    std::size_t n_traj = 1000;
    std::uint64_t seed = 1;
    unsigned workers = 0;  // 0 selects the default worker count
    std::string output = "out";
    std::vector<double> p_grid;
    double onsite_alpha = kOnsiteAlpha;
    std::string exact_method = "auto";  // auto, dicke or brute_force
    ExactOptions exact;
    CompareSettings compare;
    SweepSettings sweep;
    CalibrateSettings calibrate;
};

// Throws std::invalid_argument on unknown keys, bad values or a schema mismatch.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

// Record-time helpers used by config files.
std::vector<double> linear_times(double t_max, int intervals);
std::vector<double> log_times(double t_min, double t_max, int count);  // 0 followed by count log-spaced points

}  // namespace pitwa
