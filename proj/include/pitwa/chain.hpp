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

#include <vector>

#include "pitwa/observables.hpp"
#include "pitwa/system.hpp"
#include "pitwa/twa.hpp"

namespace pitwa {

// Uniform grid of `points` quasi-momenta on [-pi, pi].
std::vector<double> default_p_grid(int points = 41);

// TWA run of a chain spec, filling in the default p grid when none is given.
ObservableTable run_chain(const SystemSpec& spec, const InitialState& init, const IntegratorConfig& cfg,
                          TwaRunOptions opts);

// Mean of a series over the records with time in [t_end - fraction * t_end, t_end].
// The error is the mean of the per-record errors, an upper bound for
// correlated records.
Estimate late_window_average(const ObservableTable& table, const std::string& name, double fraction = 0.05);

struct SweepConfig {
    SystemSpec base;                      // n, chain_gamma and any other fixed settings
    std::vector<int> ensembles{20, 50};   // M values
    std::vector<double> drive_over_gamma{0.0, 0.01, 0.02, 0.05, 0.1};
    double total_phase = 0.0;             // M * phi_prop, held fixed
    double cooperativity = 100.0;         // chain_gamma * N_tot / gamma_pump, held fixed
    double t_eval = 2.0;
    double window_fraction = 0.05;
    int window_records = 6;
    IntegratorConfig integrator;          // dt settings; t_max and record times are set per run
    TwaRunOptions run;
};

struct SweepRow {
    int M = 0;
    double drive_over_gamma = 0.0;
    double omega_drive = 0.0;
    double phi_prop = 0.0;
    double pump = 0.0;
    double forward_fraction = 0.0;
    double stderr_ = 0.0;
    long alive = 0;
};

// Forward emission fraction at t_eval, averaged over the last window_fraction of
// the run, for every (M, drive) pair. Ensembles start in the ground state.
std::vector<SweepRow> directionality_sweep(const SweepConfig& cfg);

}  // namespace pitwa
