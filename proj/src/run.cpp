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

#include "pitwa/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "pitwa/chain.hpp"

#ifndef PITWA_VERSION
#define PITWA_VERSION "unknown"
#endif

namespace pitwa {

using nlohmann::json;

std::pair<double, double> initial_direction(const InitialState& init) {
    const double sign = init.polarization == Polarization::Up ? 1.0 : -1.0;
    const Vec3 n = Eigen::AngleAxisd(init.phi, Vec3::UnitZ()) * Eigen::AngleAxisd(init.theta, Vec3::UnitY()) *
                   Vec3(0.0, 0.0, sign);
    return {polar_angle(n), azimuth(n)};
}

ObservableTable run_exact(const RunConfig& cfg) {
    const auto [theta, phi] = initial_direction(cfg.init);
    const bool brute = cfg.exact_method == "brute_force" || (cfg.exact_method == "auto" && cfg.spec.M > 1);
    if (brute) return brute_force_reference(cfg.spec, cfg.integrator.record_times, theta, phi, cfg.exact);
    const LiouvillianOp op = build_liouvillian(cfg.spec, cfg.exact);
    return evolve(op, coherent_state(op, theta, phi), cfg.integrator.record_times, cfg.exact);
}

namespace {

TwaRunOptions run_options(const RunConfig& cfg) {
    TwaRunOptions o;
    o.n_traj = cfg.n_traj;
    o.seed = cfg.seed;
    o.workers = cfg.workers == 0 ? default_workers() : cfg.workers;
    o.p_grid = cfg.p_grid;
    o.onsite_alpha = cfg.onsite_alpha;
    return o;
}

std::string format_g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

// Appends exact and TWA curves plus error summary rows into one table.
ObservableTable merge_for_compare(const ObservableTable& exact, const ObservableTable& twa,
                                  const std::vector<SeriesComparison>& rows) {
    ObservableTable out;
    out.times = twa.times;
    out.alive = twa.alive;
    out.small_spin_fraction = twa.small_spin_fraction;
    for (const auto& r : rows) {
        for (const auto& [prefix, src] : {std::pair<std::string, const ObservableTable*>{"exact:", &exact},
                                          std::pair<std::string, const ObservableTable*>{"twa:", &twa}}) {
            const std::size_t k = out.ensure(prefix + r.name);
            out.values[k] = src->series(r.name);
            out.errors[k] = src->error_series(r.name);
        }
    }
    // Summary rows sit at the time of the largest deviation; other records stay undefined.
    for (const auto& r : rows) {
        const std::size_t a = out.ensure("max_abs_error:" + r.name);
        const std::size_t b = out.ensure("rms_error:" + r.name);
        for (std::size_t t = 0; t < out.times.size(); ++t) {
            const bool here = out.times[t] == r.time_of_max;
            out.values[a][t] = here ? r.diff.max_abs : kUndefined;
            out.errors[a][t] = here ? r.combined_stderr_at_max : kUndefined;
            out.values[b][t] = here ? r.diff.rms : kUndefined;
            out.errors[b][t] = here ? 0.0 : kUndefined;
        }
    }
    return out;
}

void drop_undefined_summary(std::string& csv) {
    // Keep only the defined summary rows so each appears once.
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        const bool summary = line.find(",max_abs_error:") != std::string::npos ||
                             line.find(",rms_error:") != std::string::npos;
        if (summary && line.find(",NaN,") != std::string::npos) continue;
        out << line << '\n';
    }
    csv = out.str();
}

}  // namespace

RunOutcome execute_run(const RunConfig& cfg, bool write_files) {
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome out;
    json extra = json::object();
    std::vector<std::pair<std::string, std::string>> artifacts;

    switch (cfg.mode) {
        case RunMode::Exact:
            out.table = run_exact(cfg);
            break;
        case RunMode::Twa:
            out.table = run_twa(cfg.spec, cfg.init, cfg.integrator, run_options(cfg));
            break;
        case RunMode::Chain:
            out.table = run_chain(cfg.spec, cfg.init, cfg.integrator, run_options(cfg));
            break;
        case RunMode::Compare: {
            const ObservableTable exact = run_exact(cfg);
            const ObservableTable twa = run_twa(cfg.spec, cfg.init, cfg.integrator, run_options(cfg));
            const auto rows = compare_tables(exact, twa, cfg.compare.observables);
            out.table = merge_for_compare(exact, twa, rows);
            json summary = json::array();
            for (const auto& r : rows) {
                const bool pass = r.diff.max_abs < cfg.compare.threshold;
                if (!cfg.compare.observables.empty()) out.compare_pass = out.compare_pass && pass;
                summary.push_back({{"observable", r.name},
                                   {"max_abs_error", r.diff.max_abs},
                                   {"rms_error", r.diff.rms},
                                   {"time_of_max", r.time_of_max},
                                   {"pass", pass}});
            }
            extra["compare"] = {{"threshold", cfg.compare.threshold}, {"pass", out.compare_pass}, {"series", summary}};
            break;
        }
        case RunMode::Sweep: {
            SweepConfig s;
            s.base = cfg.spec;
            s.ensembles = cfg.sweep.ensembles;
            s.drive_over_gamma = cfg.sweep.drive_over_gamma;
            s.total_phase = cfg.sweep.total_phase;
            s.cooperativity = cfg.sweep.cooperativity;
            s.t_eval = cfg.sweep.t_eval;
            s.window_fraction = cfg.sweep.window_fraction;
            s.window_records = cfg.sweep.window_records;
            s.integrator = cfg.integrator;
            s.run = run_options(cfg);
            const auto rows = directionality_sweep(s);
            out.table.times = {cfg.sweep.t_eval};
            out.table.alive = {rows.empty() ? 0 : rows.front().alive};
            out.table.small_spin_fraction = {0.0};
            std::ostringstream sweep_csv;
            sweep_csv << "M,drive_over_gamma,omega_drive,phi_prop,pump,forward_fraction,stderr,n_traj_alive\r\n";
            for (const auto& r : rows) {
                const std::size_t k =
                    out.table.ensure("forward_fraction[M=" + std::to_string(r.M) + ";drive_over_gamma=" +
                                     format_g(r.drive_over_gamma) + "]");
                out.table.values[k] = {r.forward_fraction};
                out.table.errors[k] = {r.stderr_};
                char buf[256];
                std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%ld\r\n", r.M,
                              r.drive_over_gamma, r.omega_drive, r.phi_prop, r.pump, r.forward_fraction, r.stderr_,
                              r.alive);
                sweep_csv << buf;
            }
            artifacts.emplace_back("sweep.csv", sweep_csv.str());
            break;
        }
        case RunMode::Calibrate: {
            out.table.times = {0.0};
            out.table.alive = {0};
            out.table.small_spin_fraction = {0.0};
            json fixtures = json::array();
            for (int n : cfg.calibrate.symbol_n) {
                const SymbolCalibration sc = calibrate_symbols(n, cfg.calibrate.symbols);
                const std::string name = "chi_n" + std::to_string(n) + ".csv";
                artifacts.emplace_back(name, symbol_fixture_text(sc));
                fixtures.push_back(name);
                double worst = 0.0;
                for (const auto& r : sc.residuals) worst = std::max(worst, std::abs(r.twa - r.exact) / r.tolerance);
                const std::size_t k = out.table.ensure("symbol_residual_over_tolerance[n=" + std::to_string(n) + "]");
                out.table.values[k] = {worst};
                out.table.errors[k] = {0.0};
            }
            const SecondMomentCalibration sm = calibrate_second_moments(
                cfg.calibrate.second_moment_n, cfg.calibrate.second_moment_thetas, cfg.calibrate.quadrature_order);
            artifacts.emplace_back("second_moments.csv", second_moment_fixture_text(sm));
            fixtures.push_back("second_moments.csv");
            for (const auto& [name, value] : {std::pair<std::string, double>{"onsite_alpha", sm.alpha},
                                              {"second_moment_residual", sm.max_residual_corrected},
                                              {"second_moment_residual_uncorrected", sm.max_residual_uncorrected}}) {
                const std::size_t k = out.table.ensure(name);
                out.table.values[k] = {value};
                out.table.errors[k] = {0.0};
            }
            extra["calibration"] = {{"fixtures", fixtures}, {"onsite_alpha", sm.alpha}};
            break;
        }
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.meta = {{"schema_version", kSchemaVersion},
                {"pitwa_version", PITWA_VERSION},
                {"config", to_json(cfg)},
                {"seed", cfg.seed},
                {"workers", cfg.workers == 0 ? default_workers() : cfg.workers},
                {"wall_time_s", wall},
                {"record_times", out.table.times},
                {"small_spin_fraction", out.table.small_spin_fraction}};
    for (auto it = extra.begin(); it != extra.end(); ++it) out.meta[it.key()] = it.value();

    if (write_files) {
        std::filesystem::create_directories(cfg.output);
        const std::filesystem::path dir(cfg.output);
        std::ostringstream csv;
        write_results_csv(csv, out.table);
        std::string text = csv.str();
        if (cfg.mode == RunMode::Compare) drop_undefined_summary(text);
        write_text_file((dir / "results.csv").string(), text);
        write_text_file((dir / "meta.json").string(), out.meta.dump(2) + "\n");
        out.files = {(dir / "results.csv").string(), (dir / "meta.json").string()};
        for (const auto& [name, body] : artifacts) {
            write_text_file((dir / name).string(), body);
            out.files.push_back((dir / name).string());
        }
    }
    return out;
}

}  // namespace pitwa
