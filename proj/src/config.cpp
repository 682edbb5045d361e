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

#include "pitwa/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace pitwa {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) throw std::invalid_argument("unknown key '" + it.key() + "' in " + where);
    }
}

Polarization polarization_from_string(const std::string& s) {
    if (s == "up") return Polarization::Up;
    if (s == "down") return Polarization::Down;
    throw std::invalid_argument("polarization must be 'up' or 'down', got '" + s + "'");
}

IntegratorConfig parse_integrator(const json& j) {
    check_keys(j, {"dt", "t_max", "record_times", "records", "dt_schedule", "flag_threshold_J"}, "integrator");
    IntegratorConfig c;
    c.t_max = j.at("t_max").get<double>();
    c.dt = j.value("dt", 0.0);
    c.flag_threshold_J = j.value("flag_threshold_J", 1.0);
    if (j.contains("record_times") && j.contains("records")) {
        throw std::invalid_argument("integrator: give either record_times or records, not both");
    }
    if (j.contains("record_times")) {
        c.record_times = j.at("record_times").get<std::vector<double>>();
    } else if (j.contains("records")) {
        const json& r = j.at("records");
        check_keys(r, {"linear", "log", "t_min"}, "integrator.records");
        if (r.contains("linear")) {
            c.record_times = linear_times(c.t_max, r.at("linear").get<int>());
        } else if (r.contains("log")) {
            c.record_times = log_times(r.at("t_min").get<double>(), c.t_max, r.at("log").get<int>());
        } else {
            throw std::invalid_argument("integrator.records needs 'linear' or 'log'");
        }
    } else {
        c.record_times = linear_times(c.t_max, 50);
    }
    if (j.contains("dt_schedule")) {
        for (const json& seg : j.at("dt_schedule")) {
            check_keys(seg, {"from", "dt"}, "integrator.dt_schedule entry");
            c.dt_schedule.push_back({seg.at("from").get<double>(), seg.at("dt").get<double>()});
        }
    }
    c.validate();
    return c;
}

json integrator_json(const IntegratorConfig& c) {
    json sched = json::array();
    for (const auto& s : c.dt_schedule) sched.push_back({{"from", s.from}, {"dt", s.dt}});
    return json{{"dt", c.dt},
                {"t_max", c.t_max},
                {"record_times", c.record_times},
                {"dt_schedule", sched},
                {"flag_threshold_J", c.flag_threshold_J}};
}

}  // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::Exact: return "exact";
        case RunMode::Twa: return "twa";
        case RunMode::Chain: return "chain";
        case RunMode::Sweep: return "sweep";
        case RunMode::Calibrate: return "calibrate";
        case RunMode::Compare: return "compare";
    }
    return "twa";
}

RunMode run_mode_from_string(const std::string& s) {
    for (RunMode m : {RunMode::Exact, RunMode::Twa, RunMode::Chain, RunMode::Sweep, RunMode::Calibrate,
                      RunMode::Compare}) {
        if (to_string(m) == s) return m;
    }
    throw std::invalid_argument("unknown mode '" + s + "'");
}

std::vector<double> linear_times(double t_max, int intervals) {
    if (intervals < 1) throw std::invalid_argument("need at least one record interval");
    std::vector<double> t(static_cast<std::size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i) t[static_cast<std::size_t>(i)] = t_max * i / intervals;
    return t;
}

std::vector<double> log_times(double t_min, double t_max, int count) {
    if (count < 2 || !(t_min > 0.0) || !(t_max > t_min)) {
        throw std::invalid_argument("log records need count >= 2 and 0 < t_min < t_max");
    }
    std::vector<double> t{0.0};
    const double a = std::log(t_min), b = std::log(t_max);
    for (int i = 0; i < count; ++i) t.push_back(i + 1 == count ? t_max : std::exp(a + (b - a) * i / (count - 1)));
    return t;
}

RunConfig parse_run_config(const json& j) {
    check_keys(j,
               {"schema_version", "mode", "system", "initial", "integrator", "n_traj", "seed", "workers", "output",
                "p_grid", "onsite_alpha", "exact", "compare", "sweep", "calibrate", "description"},
               "config");
    RunConfig c;
    c.schema_version = j.value("schema_version", kSchemaVersion);
    if (c.schema_version != kSchemaVersion) {
        throw std::invalid_argument("schema_version " + std::to_string(c.schema_version) + " is not supported (expected " +
                                    std::to_string(kSchemaVersion) + ")");
    }
    c.mode = run_mode_from_string(j.at("mode").get<std::string>());
    if (c.mode != RunMode::Calibrate) c.spec = j.at("system").get<SystemSpec>();
    if (j.contains("initial")) {
        const json& i = j.at("initial");
        check_keys(i, {"polarization", "theta", "phi"}, "initial");
        c.init.polarization = polarization_from_string(i.value("polarization", std::string("up")));
        c.init.theta = i.value("theta", 0.0);
        c.init.phi = i.value("phi", 0.0);
    }
    if (c.mode != RunMode::Calibrate && c.mode != RunMode::Sweep) c.integrator = parse_integrator(j.at("integrator"));
    if (c.mode == RunMode::Sweep && j.contains("integrator")) {
        json ij = j.at("integrator");
        if (!ij.contains("t_max")) ij["t_max"] = j.contains("sweep") ? j.at("sweep").value("t_eval", 2.0) : 2.0;
        c.integrator = parse_integrator(ij);
    }
    const long n_traj = j.value("n_traj", 1000L);
    if (n_traj < 1) throw std::invalid_argument("n_traj must be >= 1");
    c.n_traj = static_cast<std::size_t>(n_traj);
    c.seed = j.value("seed", std::uint64_t{1});
    const long workers = j.value("workers", 0L);
    if (workers < 0) throw std::invalid_argument("workers must be >= 0");
    c.workers = static_cast<unsigned>(workers);
    c.output = j.value("output", std::string("out"));
    if (j.contains("p_grid")) {
        const json& p = j.at("p_grid");
        if (p.is_array()) {
            c.p_grid = p.get<std::vector<double>>();
        } else {
            check_keys(p, {"points"}, "p_grid");
            const int points = p.at("points").get<int>();
            if (points < 2) throw std::invalid_argument("p_grid.points must be >= 2");
            for (int k = 0; k < points; ++k) c.p_grid.push_back(-std::numbers::pi + 2.0 * std::numbers::pi * k / (points - 1));
        }
    }
    c.onsite_alpha = j.value("onsite_alpha", kOnsiteAlpha);
    if (j.contains("exact")) {
        const json& e = j.at("exact");
        check_keys(e, {"method", "rtol", "atol", "general_cap", "diagonal_cap"}, "exact");
        c.exact_method = e.value("method", std::string("auto"));
        if (c.exact_method != "auto" && c.exact_method != "dicke" && c.exact_method != "brute_force") {
            throw std::invalid_argument("exact.method must be auto, dicke or brute_force");
        }
        c.exact.rtol = e.value("rtol", c.exact.rtol);
        c.exact.atol = e.value("atol", c.exact.atol);
        c.exact.general_cap = e.value("general_cap", c.exact.general_cap);
        c.exact.diagonal_cap = e.value("diagonal_cap", c.exact.diagonal_cap);
    }
    if (j.contains("compare")) {
        const json& e = j.at("compare");
        check_keys(e, {"observables", "threshold"}, "compare");
        c.compare.observables = e.value("observables", std::vector<std::string>{});
        c.compare.threshold = e.value("threshold", c.compare.threshold);
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        check_keys(s, {"ensembles", "drive_over_gamma", "total_phase", "cooperativity", "t_eval", "window_fraction",
                       "window_records"},
                   "sweep");
        SweepSettings& w = c.sweep;
        w.ensembles = s.value("ensembles", w.ensembles);
        w.drive_over_gamma = s.value("drive_over_gamma", w.drive_over_gamma);
        w.total_phase = s.value("total_phase", w.total_phase);
        w.cooperativity = s.value("cooperativity", w.cooperativity);
        w.t_eval = s.value("t_eval", w.t_eval);
        w.window_fraction = s.value("window_fraction", w.window_fraction);
        w.window_records = s.value("window_records", w.window_records);
        if (w.ensembles.empty() || w.drive_over_gamma.empty()) throw std::invalid_argument("sweep grids must be non-empty");
        for (int m : w.ensembles) {
            if (m < 1) throw std::invalid_argument("sweep ensembles must be >= 1");
        }
        if (!(w.window_fraction > 0.0 && w.window_fraction < 1.0)) {
            throw std::invalid_argument("sweep.window_fraction must lie in (0, 1)");
        }
    }
    if (c.mode == RunMode::Sweep) c.integrator.t_max = c.sweep.t_eval;
    if (j.contains("calibrate")) {
        const json& s = j.at("calibrate");
        check_keys(s, {"symbol_n", "samples", "seed", "thetas", "second_moment_n", "second_moment_thetas",
                       "quadrature_order"},
                   "calibrate");
        CalibrateSettings& k = c.calibrate;
        k.symbol_n = s.value("symbol_n", k.symbol_n);
        k.symbols.samples = s.value("samples", k.symbols.samples);
        k.symbols.seed = s.value("seed", k.symbols.seed);
        k.symbols.thetas = s.value("thetas", k.symbols.thetas);
        k.second_moment_n = s.value("second_moment_n", k.second_moment_n);
        k.second_moment_thetas = s.value("second_moment_thetas", k.second_moment_thetas);
        k.quadrature_order = s.value("quadrature_order", k.quadrature_order);
        for (int n : k.symbol_n) {
            if (n < 1 || n > 30) throw std::invalid_argument("calibrate.symbol_n entries must lie in [1, 30]");
        }
    }
    if ((c.mode == RunMode::Exact || c.mode == RunMode::Compare) && c.exact_method == "dicke" && c.spec.M != 1) {
        throw std::invalid_argument("exact.method 'dicke' needs M = 1");
    }
    if (c.mode == RunMode::Chain && !c.spec.is_chain()) {
        throw std::invalid_argument("mode 'chain' needs a chain system (M > 1, chain_gamma or chain_sine)");
    }
    return c;
}

RunConfig load_run_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_run_config(j);
}

json to_json(const RunConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["mode"] = to_string(c.mode);
    if (c.mode != RunMode::Calibrate) j["system"] = c.spec;
    j["initial"] = {{"polarization", c.init.polarization == Polarization::Up ? "up" : "down"},
                    {"theta", c.init.theta},
                    {"phi", c.init.phi}};
    if (c.mode != RunMode::Calibrate) {
        json ij = integrator_json(c.integrator);
        j["integrator"] = ij;
    }
    j["n_traj"] = c.n_traj;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["output"] = c.output;
    j["p_grid"] = c.p_grid;
    j["onsite_alpha"] = c.onsite_alpha;
    j["exact"] = {{"method", c.exact_method},
                  {"rtol", c.exact.rtol},
                  {"atol", c.exact.atol},
                  {"general_cap", c.exact.general_cap},
                  {"diagonal_cap", c.exact.diagonal_cap}};
    j["compare"] = {{"observables", c.compare.observables}, {"threshold", c.compare.threshold}};
    j["sweep"] = {{"ensembles", c.sweep.ensembles},
                  {"drive_over_gamma", c.sweep.drive_over_gamma},
                  {"total_phase", c.sweep.total_phase},
                  {"cooperativity", c.sweep.cooperativity},
                  {"t_eval", c.sweep.t_eval},
                  {"window_fraction", c.sweep.window_fraction},
                  {"window_records", c.sweep.window_records}};
    j["calibrate"] = {{"symbol_n", c.calibrate.symbol_n},
                      {"samples", c.calibrate.symbols.samples},
                      {"seed", c.calibrate.symbols.seed},
                      {"thetas", c.calibrate.symbols.thetas},
                      {"second_moment_n", c.calibrate.second_moment_n},
                      {"second_moment_thetas", c.calibrate.second_moment_thetas},
                      {"quadrature_order", c.calibrate.quadrature_order}};
    return j;
}

}  // namespace pitwa
