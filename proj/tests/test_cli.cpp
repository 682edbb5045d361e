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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "pitwa/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("pitwa_cli_" + std::to_string(std::rand()) + "_" +
                                           std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(dir);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string file(const std::string& name, const std::string& text) const {
        const auto p = (dir / name).string();
        pitwa::write_text_file(p, text);
        return p;
    }
};

int cli(const std::string& args) {
    const std::string cmd = std::string(PITWA_CLI) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json twa_config(const std::string& out) {
    return json{{"schema_version", 1},
                {"mode", "twa"},
                {"system", {{"N", 6}, {"collective", {{"decay", 1.0}}}, {"local", {{"pump", 1.5}}}}},
                {"initial", {{"polarization", "up"}}},
                {"integrator", {{"t_max", 0.5}, {"dt", 0.005}, {"records", {{"linear", 5}}}}},
                {"n_traj", 200},
                {"seed", 7},
                {"output", out}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("bad configs exit with the validation code") {
    Scratch s;
    CHECK(cli("simulate " + s.file("bad.json", "{ not json")) == 2);
    json j = twa_config((s.dir / "o").string());
    j["integrator"]["dt"] = -1.0;
    CHECK(cli("simulate " + s.file("neg.json", j.dump())) == 2);
    json k = twa_config((s.dir / "o").string());
    k["surprise"] = true;
    CHECK(cli("simulate " + s.file("extra.json", k.dump())) == 2);
    // A twa config handed to the sweep command is a mismatch.
    CHECK(cli("sweep " + s.file("mode.json", twa_config((s.dir / "o").string()).dump())) == 2);
    CHECK(cli("") != 0);
}

TEST_CASE("results are byte-identical across worker counts and reproducible from meta.json") {
    Scratch s;
    const std::string cfg = s.file("run.json", twa_config((s.dir / "a").string()).dump());
    REQUIRE(cli("simulate " + cfg + " --workers 1 --quiet") == 0);
    REQUIRE(cli("simulate " + cfg + " --workers 8 --quiet --out " + (s.dir / "b").string()) == 0);
    const std::string a = pitwa::read_text_file((s.dir / "a" / "results.csv").string());
    const std::string b = pitwa::read_text_file((s.dir / "b" / "results.csv").string());
    CHECK(a == b);
    CHECK(a.rfind("time,observable,value,stderr,n_traj_alive\r\n", 0) == 0);

    const json meta = json::parse(pitwa::read_text_file((s.dir / "a" / "meta.json").string()));
    for (const char* key : {"schema_version", "pitwa_version", "config", "seed", "workers", "wall_time_s",
                            "record_times", "small_spin_fraction"}) {
        CAPTURE(key);
        CHECK(meta.contains(key));
    }
    json replay = meta["config"];
    replay["output"] = (s.dir / "c").string();
    REQUIRE(cli("simulate " + s.file("replay.json", replay.dump()) + " --quiet") == 0);
    CHECK(pitwa::read_text_file((s.dir / "c" / "results.csv").string()) == a);

    REQUIRE(cli("simulate " + cfg + " --seed 8 --quiet --out " + (s.dir / "d").string()) == 0);
    CHECK(pitwa::read_text_file((s.dir / "d" / "results.csv").string()) != a);
}

TEST_CASE("compare subcommand") {
    Scratch s;
    const std::string cfg = s.file("run.json", twa_config((s.dir / "a").string()).dump());
    REQUIRE(cli("simulate " + cfg + " --quiet") == 0);
    REQUIRE(cli("simulate " + cfg + " --quiet --seed 9 --out " + (s.dir / "b").string()) == 0);
    const std::string a = (s.dir / "a").string(), b = (s.dir / "b").string();
    const std::string report = (s.dir / "cmp.csv").string();
    CHECK(cli("compare " + a + " " + a + " --threshold 1e-12 --out " + report) == 0);
    const auto rows = pitwa::read_text_file(report);
    CHECK(rows.find("observable") != std::string::npos);
    CHECK(cli("compare " + a + " " + b + " --observables Jz --threshold 1e-9") == 1);
    CHECK(cli("compare " + a + " " + b + " --observables Jz --threshold 10") == 0);
    CHECK(cli("compare " + a + " " + b + " --observables nope") == 2);
}

TEST_CASE("compare mode exits nonzero when the threshold is exceeded") {
    Scratch s;
    json j = twa_config((s.dir / "a").string());
    j["mode"] = "compare";
    j["n_traj"] = 20;
    j["compare"] = {{"observables", {"Jz_per_N"}}, {"threshold", 1e-6}};
    CHECK(cli("simulate " + s.file("c.json", j.dump()) + " --quiet") == 1);
    j["compare"]["threshold"] = 10.0;
    CHECK(cli("simulate " + s.file("d.json", j.dump()) + " --quiet") == 0);
    const std::string res = pitwa::read_text_file((s.dir / "a" / "results.csv").string());
    CHECK(res.find("max_abs_error:Jz_per_N") != std::string::npos);
    CHECK(res.find("exact:Jz_per_N") != std::string::npos);
}

}
