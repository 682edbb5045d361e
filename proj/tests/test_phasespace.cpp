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
#include <numbers>
#include <random>

#include "pitwa/phasespace.hpp"

using namespace pitwa;

namespace {

constexpr double kPi = std::numbers::pi;

PhasePoint random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    PhasePoint z;
    do {
        z.s = Vec3(u(rng), u(rng), u(rng)) * 4.0;
    } while (z.s.norm() < 1.0 || std::hypot(z.s.x(), z.s.y()) < 0.3);
    z.psi = ang(rng);
    return z;
}

// Central differences in the canonical chart.
std::array<cd, 4> numeric_gradient(const SymbolFunction& f, const PhasePoint& z, double h = 1e-6) {
    std::array<cd, 4> g{};
    const Chart c0 = to_chart(z);
    for (int i = 0; i < 4; ++i) {
        Chart cp = c0, cm = c0;
        double* p = i == 0 ? &cp.phi : i == 1 ? &cp.p_phi : i == 2 ? &cp.psi : &cp.p_psi;
        double* m = i == 0 ? &cm.phi : i == 1 ? &cm.p_phi : i == 2 ? &cm.psi : &cm.p_psi;
        *p += h;
        *m -= h;
        g[static_cast<std::size_t>(i)] = (f(from_chart(cp)).value - f(from_chart(cm)).value) / (2 * h);
    }
    return g;
}

}  // namespace

TEST_SUITE("phasespace") {

TEST_CASE("little-d reference values") {
    for (double t : {0.0, 0.3, 1.1, 2.0, kPi}) CHECK(wigner_d_small(0, 0, t) == doctest::Approx(std::cos(t)));
    CHECK(wigner_d_small(1, 1, 0.0) == doctest::Approx(1.0));
    CHECK(wigner_d_small(1, 0, kPi / 2) == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK_THROWS(wigner_d_small(2, 0, 0.1));
    CHECK_THROWS(wigner_d_small(0, -2, 0.1));
}

TEST_CASE("little-d is orthogonal and its derivative matches finite differences") {
    for (double t : {0.1, 0.7, 1.6, 2.9}) {
        for (int a = -1; a <= 1; ++a) {
            for (int b = -1; b <= 1; ++b) {
                double dot = 0.0;
                for (int j = -1; j <= 1; ++j) dot += wigner_d_small(a, j, t) * wigner_d_small(b, j, t);
                CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
                const double h = 1e-6;
                const double fd = (wigner_d_small(a, b, t + h) - wigner_d_small(a, b, t - h)) / (2 * h);
                CHECK(wigner_d_small_deriv(a, b, t) == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
            }
        }
    }
}

TEST_CASE("chart and frame round trips") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 50; ++k) {
        const PhasePoint z = random_point(rng);
        const PhasePoint a = from_chart(to_chart(z));
        const PhasePoint b = from_frame(to_frame(z));
        CHECK((a.s - z.s).norm() < 1e-12);
        CHECK((b.s - z.s).norm() < 1e-12);
        CHECK(std::abs(std::remainder(a.psi - z.psi, 2 * kPi)) < 1e-12);
        CHECK(std::abs(std::remainder(b.psi - z.psi, 2 * kPi)) < 1e-12);
        const Chart c = to_chart(z);
        CHECK(c.p_psi == doctest::Approx(z.s.norm()));
        CHECK(c.p_phi == doctest::Approx(z.s.z()));
        CHECK(z.total_spin() == doctest::Approx(z.s.norm() - 0.5));
    }
}

TEST_CASE("canonical brackets") {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 20; ++k) {
        const PhasePoint z = random_point(rng);
        auto coord = [&](int i) { return coordinate_symbol(i, z); };
        CHECK(std::abs(poisson_bracket(coord(0), coord(1), z) - 1.0) < 1e-12);
        CHECK(std::abs(poisson_bracket(coord(2), coord(3), z) - 1.0) < 1e-12);
        CHECK(std::abs(poisson_bracket(coord(0), coord(3), z)) < 1e-12);
        CHECK(std::abs(poisson_bracket(coord(1), coord(2), z)) < 1e-12);
    }
}

TEST_CASE("spin components close the rotation algebra") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 30; ++k) {
        const PhasePoint z = random_point(rng);
        const auto sx = spin_component_symbol(0, z);
        const auto sy = spin_component_symbol(1, z);
        const auto sz = spin_component_symbol(2, z);
        CHECK(std::abs(poisson_bracket(sx, sy, z) - z.s.z()) < 1e-9);
        CHECK(std::abs(poisson_bracket(sy, sz, z) - z.s.x()) < 1e-9);
        CHECK(std::abs(poisson_bracket(sz, sx, z) - z.s.y()) < 1e-9);
        // The length is a Casimir of the collective algebra.
        const auto j2 = total_spin_squared_symbol(z);
        CHECK(std::abs(poisson_bracket(sx, j2, z)) < 1e-9);
        CHECK(std::abs(poisson_bracket(sz, j2, z)) < 1e-9);
    }
}

TEST_CASE("bracket is antisymmetric and satisfies the Jacobi identity") {
    std::mt19937_64 rng(8);
    const AmplitudeModel amp(10);
    SymbolFunction a = [&](const PhasePoint& p) { return local_symbol(-1, 1, p, amp); };
    SymbolFunction b = [&](const PhasePoint& p) { return collective_symbol(1, p, amp); };
    SymbolFunction c = [&](const PhasePoint& p) { return local_symbol(0, -1, p, amp); };
    auto bracket_fn = [](SymbolFunction f, SymbolFunction g) -> SymbolFunction {
        return [f, g](const PhasePoint& p) {
            WeylSymbolValue out;
            out.value = poisson_bracket(f, g, p);
            return out;
        };
    };
    for (int k = 0; k < 10; ++k) {
        const PhasePoint z = random_point(rng);
        CHECK(std::abs(poisson_bracket(a, b, z) + poisson_bracket(b, a, z)) < 1e-10);
        CHECK(std::abs(poisson_bracket(a, a, z)) < 1e-12);
        const cd jac = poisson_bracket(a, bracket_fn(b, c), z) + poisson_bracket(b, bracket_fn(c, a), z) +
                       poisson_bracket(c, bracket_fn(a, b), z);
        const double scale = std::abs(poisson_bracket(a, bracket_fn(b, c), z)) + 1.0;
        CHECK(std::abs(jac) / scale < 1e-4);
    }
}

TEST_CASE("symbol gradients match finite differences") {
    std::mt19937_64 rng(9);
    const AmplitudeModel amp(12);
    for (int k = 0; k < 10; ++k) {
        const PhasePoint z = random_point(rng);
        for (int q = -1; q <= 1; ++q) {
            SymbolFunction fc = [&](const PhasePoint& p) { return collective_symbol(q, p, amp); };
            const auto gc = numeric_gradient(fc, z);
            const auto vc = fc(z);
            for (int i = 0; i < 4; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                CHECK(std::abs(vc.gradient[ui] - gc[ui]) <= 1e-6 * (std::abs(gc[ui]) + 1.0));
            }
            for (int j = -1; j <= 1; ++j) {
                SymbolFunction fl = [&](const PhasePoint& p) { return local_symbol(q, j, p, amp); };
                const auto gl = numeric_gradient(fl, z);
                const auto vl = fl(z);
                for (int i = 0; i < 4; ++i) {
                    const auto ui = static_cast<std::size_t>(i);
                    CHECK(std::abs(vl.gradient[ui] - gl[ui]) <= 1e-6 * (std::abs(gl[ui]) + 1.0));
                }
            }
        }
    }
}

TEST_CASE("collective symbols ignore psi and vanish off-axis at the pole") {
    const AmplitudeModel amp(10);
    PhasePoint z;
    z.s = Vec3(0.0, 0.0, 5.5);
    CHECK(std::abs(collective_symbol(1, z, amp).value) < 1e-12);
    CHECK(std::abs(collective_symbol(-1, z, amp).value) < 1e-12);
    CHECK(std::abs(collective_symbol(0, z, amp).value - z.s.z()) < 1e-12);
    std::mt19937_64 rng(10);
    for (int k = 0; k < 10; ++k) {
        PhasePoint a = random_point(rng);
        PhasePoint b = a;
        b.psi += 1.0;
        for (int q = -1; q <= 1; ++q) {
            CHECK(std::abs(collective_symbol(q, a, amp).value - collective_symbol(q, b, amp).value) < 1e-12);
        }
    }
}

TEST_CASE("local symbols depend on psi only through a phase") {
    const AmplitudeModel amp(10);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 10; ++k) {
        PhasePoint a = random_point(rng);
        for (int q = -1; q <= 1; ++q) {
            for (int j = -1; j <= 1; ++j) {
                PhasePoint b = a, c = a;
                b.psi += 0.83;
                c.psi += 2 * kPi;
                const cd va = local_symbol(q, j, a, amp).value;
                const cd vb = local_symbol(q, j, b, amp).value;
                const cd vc = local_symbol(q, j, c, amp).value;
                CHECK(std::abs(std::abs(va) - std::abs(vb)) < 1e-12);
                CHECK(std::abs(va - vc) < 1e-10);
                if (j == 0) CHECK(std::abs(va - vb) < 1e-12);
                PhasePoint d = a;
                d.s = Eigen::AngleAxisd(0.4, Vec3::UnitZ()) * a.s;
                CHECK(std::abs(std::abs(va) - std::abs(local_symbol(q, j, d, amp).value)) < 1e-10);
            }
        }
    }
}

TEST_CASE("frame fields agree with chart brackets") {
    const AmplitudeModel amp(8);
    std::mt19937_64 rng(12);
    for (int k = 0; k < 10; ++k) {
        const PhasePoint z = random_point(rng);
        const BodyFrame f = to_frame(z);
        for (int q = -1; q <= 1; ++q) {
            for (int j = -1; j <= 1; ++j) {
                const FrameField ff = local_field(q, j, f, amp);
                const WeylSymbolValue l = local_symbol(q, j, z, amp);
                CHECK(std::abs(ff.symbol - l.value) < 1e-10);
                for (int axis = 0; axis < 3; ++axis) {
                    const cd br = poisson_bracket(spin_component_symbol(axis, z), l, z);
                    CHECK(std::abs(ff.ds(axis) - br) < 1e-8 * (1.0 + std::abs(br)));
                }
            }
        }
    }
}

}
