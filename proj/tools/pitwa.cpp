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

// Command-line front end: simulate, compare, calibrate and sweep.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "pitwa/io.hpp"
#include "pitwa/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitAbort = 3;

void diagnose(const std::string& kind, const std::string& message) {
    std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
}

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> out;
    bool quiet = false;
};

int run_config(const std::string& path, const Overrides& ov, std::optional<pitwa::RunMode> required) {
    pitwa::RunConfig cfg;
    try {
        cfg = pitwa::load_run_config(path);
        if (required && cfg.mode != *required) {
            throw std::invalid_argument("config mode '" + pitwa::to_string(cfg.mode) + "' does not match command '" +
                                        pitwa::to_string(*required) + "'");
        }
        if (ov.seed) cfg.seed = *ov.seed;
        if (ov.workers) cfg.workers = *ov.workers;
        if (ov.out) cfg.output = *ov.out;
    } catch (const std::exception& e) {
        diagnose("validation", e.what());
        return kExitValidation;
    }
    try {
        const pitwa::RunOutcome r = pitwa::execute_run(cfg);
        if (!ov.quiet) {
            for (const auto& f : r.files) std::cout << "wrote " << f << "\n";
            if (r.meta.contains("compare")) {
                for (const auto& s : r.meta["compare"]["series"]) {
                    std::cout << (s["pass"].get<bool>() ? "PASS " : "FAIL ") << s["observable"].get<std::string>()
                              << " max_abs_error=" << s["max_abs_error"].get<double>() << "\n";
                }
            }
        }
        if (!r.compare_pass) {
            diagnose("compare_threshold", "at least one compared observable exceeded the threshold");
            return kExitFailure;
        }
        return kExitOk;
    } catch (const pitwa::IntegratorAbort& e) {
        diagnose("integrator_abort", e.what());
        return kExitAbort;
    } catch (const std::invalid_argument& e) {
        diagnose("validation", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        diagnose("failure", e.what());
        return kExitFailure;
    }
}

std::string results_path(const std::string& p) {
    return std::filesystem::is_directory(p) ? (std::filesystem::path(p) / "results.csv").string() : p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truncated Wigner simulations of permutation-invariant emitter ensembles"};
    app.set_version_flag("--version", PITWA_VERSION);
    app.require_subcommand(1);

    Overrides ov;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::string out;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Override the master seed");
        sub->add_option("--workers", workers, "Worker threads (default: PITWA_WORKERS or hardware concurrency)");
        sub->add_option("--out", out, "Output directory");
        sub->add_flag("--quiet", ov.quiet, "Suppress progress output");
    };

    std::string config;
    auto* simulate = app.add_subcommand("simulate", "Run a config of any mode");
    simulate->add_option("config", config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    add_common(simulate);
    auto* calibrate = app.add_subcommand("calibrate", "Run a calibration config and write fixtures");
    calibrate->add_option("config", config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    add_common(calibrate);
    auto* sweep = app.add_subcommand("sweep", "Run a directionality sweep config");
    sweep->add_option("config", config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    add_common(sweep);

    std::string a, b, observables_csv;
    double threshold = -1.0;
    auto* compare = app.add_subcommand("compare", "Compare two results.csv files");
    compare->add_option("a", a, "First run (results.csv or run directory)")->required();
    compare->add_option("b", b, "Second run (results.csv or run directory)")->required();
    compare->add_option("--observables", observables_csv, "Comma-separated observables to compare");
    compare->add_option("--threshold", threshold, "Fail (exit 1) if any max-abs error reaches this value");
    compare->add_option("--out", out, "Write the comparison CSV here instead of stdout");
    compare->add_flag("--quiet", ov.quiet, "Suppress the pass/fail line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitValidation;
    }

    auto apply = [&](CLI::App* sub) {
        if (sub->count("--seed")) ov.seed = seed;
        if (sub->count("--workers")) ov.workers = workers;
        if (sub->count("--out")) ov.out = out;
    };

    if (*simulate) {
        apply(simulate);
        return run_config(config, ov, std::nullopt);
    }
    if (*calibrate) {
        apply(calibrate);
        return run_config(config, ov, pitwa::RunMode::Calibrate);
    }
    if (*sweep) {
        apply(sweep);
        return run_config(config, ov, pitwa::RunMode::Sweep);
    }

    try {
        std::vector<std::string> only;
        std::stringstream ss(observables_csv);
        for (std::string item; std::getline(ss, item, ',');) {
            if (!item.empty()) only.push_back(item);
        }
        const auto rows = pitwa::compare_tables(pitwa::read_results_csv(results_path(a)),
                                                pitwa::read_results_csv(results_path(b)), only);
        std::ostringstream csv;
        pitwa::write_comparison_csv(csv, rows);
        if (compare->count("--out")) {
            pitwa::write_text_file(out, csv.str());
        } else {
            std::cout << csv.str();
        }
        if (threshold > 0.0) {
            bool pass = true;
            for (const auto& r : rows) pass = pass && r.diff.max_abs < threshold;
            if (!ov.quiet) std::cerr << (pass ? "PASS" : "FAIL") << " threshold=" << threshold << "\n";
            return pass ? kExitOk : kExitFailure;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        diagnose("validation", e.what());
        return kExitValidation;
    }
}
