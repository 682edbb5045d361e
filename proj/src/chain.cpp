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

#include "pitwa/chain.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pitwa {

std::vector<double> default_p_grid(int points) {
    if (points < 2) throw std::invalid_argument("p grid needs at least two points");
    std::vector<double> p(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) p[static_cast<std::size_t>(k)] = -std::numbers::pi + 2.0 * std::numbers::pi * k / (points - 1);
    return p;
}

ObservableTable run_chain(const SystemSpec& spec, const InitialState& init, const IntegratorConfig& cfg,
                          TwaRunOptions opts) {
    if (!spec.is_chain()) throw std::invalid_argument("run_chain: spec describes a single uncoupled ensemble");
    if (opts.p_grid.empty()) opts.p_grid = default_p_grid();
    return run_twa(spec, init, cfg, opts);
}

Estimate late_window_average(const ObservableTable& table, const std::string& name, double fraction) {
    if (table.times.empty()) throw std::invalid_argument("late_window_average: empty table");
    const double t_end = table.times.back();
    const double t_start = t_end - fraction * t_end - 1e-12;
    const auto& v = table.series(name);
    const auto& e = table.error_series(name);
    Estimate out;
    int count = 0;
    for (std::size_t k = 0; k < table.times.size(); ++k) {
        if (table.times[k] < t_start || std::isnan(v[k])) continue;
        out.mean += v[k];
        out.stderr_ += e[k];
        ++count;
    }
    if (count == 0) throw std::invalid_argument("late_window_average: no records in window for " + name);
    out.mean /= count;
    out.stderr_ /= count;
    return out;
}

std::vector<SweepRow> directionality_sweep(const SweepConfig& cfg) {
    if (cfg.t_eval <= 0.0) throw std::invalid_argument("directionality_sweep: t_eval must be positive");
    if (cfg.window_records < 1) throw std::invalid_argument("directionality_sweep: window_records must be >= 1");
    if (cfg.cooperativity <= 0.0) throw std::invalid_argument("directionality_sweep: cooperativity must be positive");
    std::vector<SweepRow> rows;
    for (int m : cfg.ensembles) {
        for (double ratio : cfg.drive_over_gamma) {
            SystemSpec spec = cfg.base;
            spec.M = m;
            spec.phi_prop = cfg.total_phase / m;
            spec.gamma[2] = spec.chain_gamma * spec.n * m / cfg.cooperativity;
            spec.omega_drive = ratio * spec.gamma[2];
            spec.hamiltonian = HamiltonianKind::ChainSine;

            IntegratorConfig integ = cfg.integrator;
            integ.t_max = cfg.t_eval;
            integ.record_times.clear();
            const double t0 = cfg.t_eval * (1.0 - cfg.window_fraction);
            for (int k = 0; k < cfg.window_records; ++k) {
                integ.record_times.push_back(cfg.window_records == 1
                                                 ? cfg.t_eval
                                                 : t0 + (cfg.t_eval - t0) * k / (cfg.window_records - 1));
            }
            InitialState init;
            init.polarization = Polarization::Down;
            TwaRunOptions run = cfg.run;
            run.p_grid.clear();
            const ObservableTable table = run_twa(spec, init, integ, run);
            const Estimate f = late_window_average(table, "forward_fraction", cfg.window_fraction);
            SweepRow row;
            row.M = m;
            row.drive_over_gamma = ratio;
            row.omega_drive = spec.omega_drive;
            row.phi_prop = spec.phi_prop;
            row.pump = spec.gamma[2];
            row.forward_fraction = f.mean;
            row.stderr_ = f.stderr_;
            row.alive = table.alive.back();
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace pitwa
