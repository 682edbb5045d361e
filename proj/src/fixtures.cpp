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

#include "pitwa/fixtures.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "pitwa/calibration.hpp"
#include "pitwa/config.hpp"
#include "pitwa/exact_dicke.hpp"
#include "pitwa/io.hpp"

namespace pitwa {

namespace {

std::string table_fixture(const SystemSpec& spec, const ObservableTable& t, const std::string& description) {
    nlohmann::json j = spec;
    return fixture_text(t, j.dump(), 1e-8, description);
}

std::vector<std::string> tokens(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("# content_id", 0) == 0) continue;
        std::string cur;
        for (char c : line) {
            if (c == ',' || c == ' ' || c == '\r' || c == '\t') {
                if (!cur.empty()) out.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) out.push_back(cur);
        out.emplace_back("\n");
    }
    return out;
}

bool parse_number(const std::string& s, double& v) {
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

}  // namespace

std::vector<ReferenceFixture> reference_fixtures() {
    std::vector<ReferenceFixture> out;
    out.push_back({"chi_n10.csv", [] { return symbol_fixture_text(calibrate_symbols(10)); }});
    out.push_back({"second_moments.csv", [] {
                       const CalibrateSettings d;
                       return second_moment_fixture_text(
                           calibrate_second_moments(d.second_moment_n, d.second_moment_thetas, d.quadrature_order));
                   }});
    out.push_back({"n2_collective_decay.csv", [] {
                       SystemSpec s;
                       s.n = 2;
                       s.Gamma = {1.0, 0.0, 0.0};
                       const auto t = brute_force_reference(s, linear_times(5.0, 50), 0.0, 0.0, {1e-11, 1e-12});
                       return table_fixture(s, t, "two emitters, collective decay from the doubly excited state");
                   }});
    out.push_back({"n10_laser_exact.csv", [] {
                       SystemSpec s;
                       s.n = 10;
                       s.Gamma = {1.0, 0.0, 0.0};
                       s.gamma = {0.0, 0.0, 2.5};
                       const LiouvillianOp op = build_liouvillian(s);
                       const auto t = evolve(op, coherent_state(op, 0.0), linear_times(3.0, 60), {1e-11, 1e-12});
                       return table_fixture(s, t, "ten-emitter superradiant laser from full inversion");
                   }});
    out.push_back({"chain_m2_n2_phi_pi2.csv", [] {
                       SystemSpec s;
                       s.M = 2;
                       s.n = 2;
                       s.chain_gamma = 1.0;
                       s.phi_prop = std::numbers::pi / 2;
                       s.gamma = {0.0, 0.0, 10.0};
                       s.hamiltonian = HamiltonianKind::ChainSine;
                       const auto t = brute_force_reference(s, linear_times(3.0, 60), std::numbers::pi, 0.0,
                                                            {1e-11, 1e-12});
                       return table_fixture(s, t, "two pumped two-emitter sites on a chain, quarter-wave spacing");
                   }});
    return out;
}

bool fixture_texts_match(const std::string& a, const std::string& b, double rel_tol, std::string* why) {
    const auto ta = tokens(a);
    const auto tb = tokens(b);
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (ta.size() != tb.size()) {
        return fail("token count " + std::to_string(ta.size()) + " vs " + std::to_string(tb.size()));
    }
    for (std::size_t i = 0; i < ta.size(); ++i) {
        if (ta[i] == tb[i]) continue;
        double x = 0.0, y = 0.0;
        if (parse_number(ta[i], x) && parse_number(tb[i], y) && std::abs(x - y) <= rel_tol * (1.0 + std::abs(x))) {
            continue;
        }
        return fail("token " + std::to_string(i) + ": '" + ta[i] + "' vs '" + tb[i] + "'");
    }
    return true;
}

}  // namespace pitwa
