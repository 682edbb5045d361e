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
#include <set>
#include <vector>

#include "pitwa/rng.hpp"

using pitwa::Philox4x32;

TEST_SUITE("rng") {

TEST_CASE("philox known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block(C{0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::block(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::block(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("unit conversion stays inside the open interval") {
    CHECK(pitwa::to_unit_open(0, 0) > 0.0);
    CHECK(pitwa::to_unit_open(0xffffffffu, 0xffffffffu) < 1.0);
}

TEST_CASE("normal pairs have unit variance and no correlation") {
    const int n = 200000;
    double s1 = 0, s2 = 0, q1 = 0, q2 = 0, c = 0;
    for (int i = 0; i < n; ++i) {
        const auto z = pitwa::normal_pair({7, static_cast<std::uint32_t>(i), 3, 0});
        s1 += z[0];
        s2 += z[1];
        q1 += z[0] * z[0];
        q2 += z[1] * z[1];
        c += z[0] * z[1];
    }
    const double tol = 5.0 / std::sqrt(double(n));
    CHECK(std::abs(s1 / n) < tol);
    CHECK(std::abs(s2 / n) < tol);
    CHECK(std::abs(q1 / n - 1.0) < 2 * tol * std::sqrt(2.0));
    CHECK(std::abs(q2 / n - 1.0) < 2 * tol * std::sqrt(2.0));
    CHECK(std::abs(c / n) < tol);
}

TEST_CASE("streams differ in every counter field") {
    std::set<std::array<std::uint32_t, 4>> seen;
    seen.insert(pitwa::raw_block({1, 0, 0, 0}));
    seen.insert(pitwa::raw_block({2, 0, 0, 0}));
    seen.insert(pitwa::raw_block({1, 1, 0, 0}));
    seen.insert(pitwa::raw_block({1, 0, 1, 0}));
    seen.insert(pitwa::raw_block({1, 0, 0, 1}));
    seen.insert(pitwa::raw_block({1, 0, 0, std::uint64_t{1} << 32}));
    seen.insert(pitwa::raw_block({std::uint64_t{1} << 32 | 1, 0, 0, 0}));
    CHECK(seen.size() == 7);
}

}
