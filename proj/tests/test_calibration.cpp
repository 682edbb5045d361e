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

#include "pitwa/calibration.hpp"

using namespace pitwa;

TEST_SUITE("calibration") {

TEST_CASE("symbol calibration passes for small ensembles") {
    for (int n : {1, 2, 5, 10}) {
        CAPTURE(n);
        const SymbolCalibration cal = calibrate_symbols(n);
        CHECK(cal.pass);
        CHECK(!cal.residuals.empty());
        CHECK(cal.j_grid.front() == doctest::Approx((n % 2) / 2.0));
        for (const auto& r : cal.residuals) CHECK(std::abs(r.twa - r.exact) <= r.tolerance);
    }
}

TEST_CASE("Ito generator of a linear observable is the drift") {
    SystemSpec s;
    s.n = 6;
    s.hamiltonian = HamiltonianKind::TransverseField;
    s.omega = 1.5;
    const TwaModel model(s);
    PhasePoint p;
    p.s = Vec3(0.5, -1.0, 2.5);
    const BodyFrame f = to_frame(p);
    const double z[6] = {f.s.x(), f.s.y(), f.s.z(), f.e1.x(), f.e1.y(), f.e1.z()};
    const double g = ito_generator(
        model, z, [](const double* v) { return v[2]; },
        [](const double*, double* grad) {
            for (int i = 0; i < 6; ++i) grad[i] = i == 2 ? 1.0 : 0.0;
        });
    CHECK(g == doctest::Approx(1.5 * p.s.y()));
}

}
