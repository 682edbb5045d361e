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

#include <cmath>
#include <sstream>

#include "pitwa/config.hpp"
#include "pitwa/io.hpp"

using namespace pitwa;
using nlohmann::json;

namespace {

ObservableTable sample_table() {
    ObservableTable t;
    t.times = {0.0, 0.1, 0.30000000000000004};
    t.alive = {100, 99, 98};
    t.small_spin_fraction = {0.0, 0.0, 0.0};
    const auto a = t.ensure("Jz");
    const auto b = t.ensure("S(p=0.100000)");
    const auto c = t.ensure("odd, \"name\"");
    t.values[a] = {5.0, 4.123456789012345, -1e-300};
    t.errors[a] = {0.0, 0.01, 0.02};
    t.values[b] = {1.0, kUndefined, 3.0};
    t.errors[b] = {0.1, kUndefined, 0.3};
    t.values[c] = {7.0, 8.0, 9.0};
    t.errors[c] = {0.0, 0.0, 0.0};
    return t;
}

json minimal_config() {
    return json::parse(R"({
        "schema_version": 1,
        "mode": "twa",
        "system": {"N": 6, "collective": {"decay": 1.0}, "local": {"pump": 0.5, "dephasing": 0.2}},
        "initial": {"polarization": "up", "theta": 0.3},
        "integrator": {"t_max": 1.0, "dt": 0.01, "records": {"linear": 4}},
        "n_traj": 50,
        "seed": 7,
        "output": "out/x"
    })");
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("results CSV round trip is exact") {
    const ObservableTable t = sample_table();
    std::ostringstream os;
    write_results_csv(os, t);
    const std::string text = os.str();
    CHECK(text.rfind("time,observable,value,stderr,n_traj_alive\r\n", 0) == 0);
    CHECK(text.find("\"odd, \"\"name\"\"\"") != std::string::npos);
    std::istringstream is(text);
    const ObservableTable r = read_results_csv(is);
    REQUIRE(r.times == t.times);
    REQUIRE(r.names.size() == t.names.size());
    for (const auto& name : t.names) {
        const auto& x = t.series(name);
        const auto& y = r.series(name);
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (std::isnan(x[k])) {
                CHECK(std::isnan(y[k]));
            } else {
                CHECK(x[k] == y[k]);
            }
        }
    }
    CHECK(r.alive == t.alive);
    std::ostringstream again;
    write_results_csv(again, r);
    CHECK(again.str() == text);
}

TEST_CASE("CSV splitting handles quotes") {
    const auto f = split_csv_line("a,\"b,c\",\"d\"\"e\",");
    REQUIRE(f.size() == 4);
    CHECK(f[1] == "b,c");
    CHECK(f[2] == "d\"e");
    CHECK(f[3].empty());
    CHECK(csv_field("plain") == "plain");
}

TEST_CASE("hash primitives") {
    CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
    CHECK(git_blob_id("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("fixtures carry a verifiable content id") {
    const std::string text = fixture_text(sample_table(), R"({"N":2})", 1e-8, "unit test");
    const Fixture f = parse_fixture(text);
    CHECK(f.header.at("tolerance") == "1e-08");
    CHECK(f.header.at("description") == "unit test");
    CHECK(f.table.series("Jz")[1] == 4.123456789012345);
    std::string tampered = text;
    const auto pos = tampered.find("4.123456789012345");
    REQUIRE(pos != std::string::npos);
    tampered[pos] = '5';
    CHECK_THROWS(parse_fixture(tampered));
}

TEST_CASE("table comparison") {
    const ObservableTable t = sample_table();
    const auto same = compare_tables(t, t);
    for (const auto& r : same) {
        CHECK(r.diff.max_abs == 0.0);
        CHECK(r.diff.rms == 0.0);
    }
    ObservableTable u = t;
    u.values[u.index_of("Jz")][2] += 0.5;
    const auto diff = compare_tables(t, u, {"Jz"});
    REQUIRE(diff.size() == 1);
    CHECK(diff[0].diff.max_abs == doctest::Approx(0.5));
    CHECK(diff[0].time_of_max == doctest::Approx(t.times[2]));
    ObservableTable shifted = t;
    shifted.times[1] = 0.2;
    CHECK_THROWS_AS(compare_tables(t, shifted), std::invalid_argument);
    CHECK_THROWS_AS(compare_tables(t, t, {"missing"}), std::invalid_argument);
}

TEST_CASE("config survives a resolve and reparse") {
    const RunConfig a = parse_run_config(minimal_config());
    CHECK(a.spec.n == 6);
    CHECK(a.spec.local_rate(1) == doctest::Approx(0.5));
    CHECK(a.integrator.record_times.size() == 5);
    const json ja = to_json(a);
    const RunConfig b = parse_run_config(ja);
    CHECK(to_json(b) == ja);
}

TEST_CASE("config validation rejects malformed input") {
    json bad = minimal_config();
    bad["system"]["typo"] = 1;
    CHECK_THROWS_AS(parse_run_config(bad), std::invalid_argument);
    json bad_mode = minimal_config();
    bad_mode["mode"] = "teleport";
    CHECK_THROWS_AS(parse_run_config(bad_mode), std::invalid_argument);
    json bad_version = minimal_config();
    bad_version["schema_version"] = 99;
    CHECK_THROWS_AS(parse_run_config(bad_version), std::invalid_argument);
    json neg = minimal_config();
    neg["system"]["local"]["pump"] = -1.0;
    CHECK_THROWS_AS(parse_run_config(neg), std::invalid_argument);
}

TEST_CASE("record-time helpers") {
    const auto lin = linear_times(2.0, 4);
    CHECK(lin == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    const auto lg = log_times(1e-3, 1.0, 4);
    REQUIRE(lg.size() == 5);
    CHECK(lg[0] == 0.0);
    CHECK(lg[1] == doctest::Approx(1e-3));
    CHECK(lg[2] == doctest::Approx(1e-2));
    CHECK(lg[4] == doctest::Approx(1.0));
}

}
