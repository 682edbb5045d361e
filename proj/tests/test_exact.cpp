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
#include <random>
#include <string>
#include <vector>

#include "pitwa/exact_dicke.hpp"

using namespace pitwa;

namespace {

std::vector<double> grid(double t_max, int n) {
    std::vector<double> t;
    for (int i = 0; i <= n; ++i) t.push_back(t_max * i / n);
    return t;
}

double max_diff(const ObservableTable& a, const ObservableTable& b, const std::string& name) {
    double worst = 0.0;
    const auto& x = a.series(name);
    const auto& y = b.series(name);
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    return worst;
}

struct Case {
    const char* label;
    SystemSpec spec;
    double theta;
    double phi;
};

std::vector<Case> oracle_cases() {
    std::vector<Case> out;
    for (int n = 1; n <= 5; ++n) {
        SystemSpec a;
        a.n = n;
        a.Gamma = {1.0, 0.0, 0.0};
        out.push_back({"collective decay", a, 0.0, 0.0});

        SystemSpec b;
        b.n = n;
        b.Gamma = {1.0, 0.3, 0.0};
        b.gamma = {0.4, 0.7, 0.9};
        out.push_back({"laser with dephasing", b, 0.9, 0.4});

        SystemSpec c;
        c.n = n;
        c.hamiltonian = HamiltonianKind::TransverseField;
        c.omega = 1.3;
        c.Gamma = {0.8, 0.0, 0.2};
        c.gamma = {0.3, 0.0, 0.0};
        out.push_back({"driven with pump", c, 2.2, 1.0});
    }
    return out;
}

}  // namespace

TEST_SUITE("exact") {

TEST_CASE("Dicke solver matches the brute-force oracle for N up to 5") {
    const auto times = grid(2.0, 20);
    for (const auto& c : oracle_cases()) {
        CAPTURE(c.label);
        CAPTURE(c.spec.n);
        const LiouvillianOp op(c.spec, false);
        const auto dicke = evolve(op, coherent_state(op, c.theta, c.phi), times);
        const auto brute = brute_force_reference(c.spec, times, c.theta, c.phi);
        for (const char* name : {"Jz", "Jx", "Jy", "J2", "JpJm"}) {
            CAPTURE(name);
            CHECK(max_diff(dicke, brute, name) < 1e-6);
        }
    }
}

TEST_CASE("every channel kind with random rates matches the oracle to 1e-8") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> rate(0.0, 2.0);
    const auto times = grid(5.0, 25);
    ExactOptions tight;
    tight.rtol = 1e-11;
    tight.atol = 1e-12;
    for (int n = 1; n <= 5; ++n) {
        for (int kind = 0; kind < 9; ++kind) {
            // Kinds 0..2: collective q; 3..5: local q; 6..8: local q with a collective partner.
            SystemSpec s;
            s.n = n;
            const int q = kind % 3;
            if (kind < 3) {
                s.Gamma[static_cast<std::size_t>(q)] = rate(rng);
            } else {
                s.gamma[static_cast<std::size_t>(q)] = rate(rng);
                if (kind >= 6) s.Gamma[static_cast<std::size_t>((q + 1) % 3)] = rate(rng);
            }
            s.hamiltonian = HamiltonianKind::TransverseField;
            s.omega = rate(rng);
            const double theta = 3.0 * rate(rng) / 2.0;
            CAPTURE(n);
            CAPTURE(kind);
            const LiouvillianOp op(s, false);
            const auto dicke = evolve(op, coherent_state(op, theta, 0.5), times, tight);
            const auto brute = brute_force_reference(s, times, theta, 0.5, tight);
            for (const char* name : {"Jz", "Jx", "Jy", "J2", "JpJm"}) {
                CAPTURE(name);
                CHECK(max_diff(dicke, brute, name) < 1e-8);
            }
        }
    }
}

TEST_CASE("collective channels conserve sector populations") {
    SystemSpec s;
    s.n = 6;
    s.Gamma = {1.0, 0.5, 0.3};
    s.hamiltonian = HamiltonianKind::TransverseField;
    s.omega = 1.0;
    const LiouvillianOp op(s, false);
    const auto states = evolve_states(op, coherent_state(op, 0.8), grid(3.0, 6));
    for (const auto& r : states) {
        CHECK(r.block_matrix(0).trace().real() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("zero rates and no Hamiltonian leave the state fixed") {
    SystemSpec s;
    s.n = 4;
    const LiouvillianOp op(s, false);
    const auto rho0 = coherent_state(op, 1.1, 0.2);
    const auto states = evolve_states(op, rho0, {0.0, 5.0});
    CHECK((states.back().data - rho0.data).norm() < 1e-12);
}

TEST_CASE("laser steady state is stationary") {
    SystemSpec s;
    s.n = 10;
    s.Gamma = {1.0, 0.0, 0.0};
    s.gamma = {0.0, 0.0, 2.5};
    const LiouvillianOp op(s, false);
    const auto states = evolve_states(op, coherent_state(op, 0.0), {0.0, 60.0});
    CHECK(op.apply(states.back().data).norm() < 1e-8);
}

TEST_CASE("diagonal-only mode reproduces the full generator when coherences never appear") {
    SystemSpec s;
    s.n = 6;
    s.Gamma = {1.0, 0.0, 0.0};
    s.gamma = {0.2, 0.5, 1.5};
    const auto times = grid(3.0, 15);
    const LiouvillianOp full(s, false);
    const LiouvillianOp diag(s, true);
    CHECK(diagonal_friendly(s));
    CHECK(diag.matrix().rows() < full.matrix().rows());
    const auto a = evolve(full, coherent_state(full, 0.0), times);
    const auto b = evolve(diag, coherent_state(diag, 0.0), times);
    CHECK(max_diff(a, b, "Jz") < 1e-7);
    CHECK(max_diff(a, b, "JpJm") < 1e-7);
}

TEST_CASE("evolution preserves trace and Hermiticity") {
    SystemSpec s;
    s.n = 7;
    s.hamiltonian = HamiltonianKind::TransverseField;
    s.omega = 2.0;
    s.Gamma = {1.0, 0.2, 0.1};
    s.gamma = {0.3, 0.4, 0.5};
    const LiouvillianOp op(s, false);
    const auto states = evolve_states(op, coherent_state(op, 1.2, 0.3), grid(2.0, 8));
    for (const auto& r : states) {
        CHECK(r.trace() == doctest::Approx(1.0).epsilon(1e-8));
        for (int b = 0; b < op.space().blocks(); ++b) {
            const Eigen::MatrixXcd m = r.block_matrix(b);
            CHECK((m - m.adjoint()).norm() < 1e-9);
            // Positivity up to integrator error.
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
            CHECK(es.eigenvalues().minCoeff() > -1e-7);
        }
    }
}

TEST_CASE("coherent state moments") {
    SystemSpec s;
    s.n = 10;
    const LiouvillianOp op(s, false);
    for (double theta : {0.0, 0.7, 1.9, 3.14159}) {
        const Moments m = measure_moments(coherent_state(op, theta, 0.4));
        CHECK(m.jz == doctest::Approx(5.0 * std::cos(theta)).epsilon(1e-10));
        CHECK(m.jx == doctest::Approx(5.0 * std::sin(theta) * std::cos(0.4)).epsilon(1e-10));
        CHECK(m.jy == doctest::Approx(5.0 * std::sin(theta) * std::sin(0.4)).epsilon(1e-10));
        CHECK(m.j2 == doctest::Approx(30.0).epsilon(1e-10));
        CHECK(m.jpjm == doctest::Approx(coherent_state_jpjm(10, theta)).epsilon(1e-10));
        CHECK(squeezing_xi2(m, 10) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("single-emitter decay follows the rate convention") {
    SystemSpec s;
    s.n = 1;
    s.gamma = {0.7, 0.0, 0.0};
    const auto times = grid(4.0, 8);
    const LiouvillianOp op(s, false);
    const auto t = evolve(op, coherent_state(op, 0.0), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(t.series("JpJm")[i] == doctest::Approx(std::exp(-0.7 * times[i])).epsilon(1e-7));
    }
    // Fully mixed spin-1/2 has no mean polarization and J^2 = 3/4.
    CHECK(squeezing_xi2(Moments{0.0, 0.0, 0.0, 0.75, 0.0}, 1) == doctest::Approx(1.5));
}

TEST_CASE("sector degeneracies count every emitter configuration") {
    for (int n : {1, 2, 5, 8, 13}) {
        const DickeSpace sp(n);
        double total = 0.0;
        for (int b = 0; b < sp.blocks(); ++b) total += std::exp(sp.log_degeneracy(b)) * sp.dim(b);
        CHECK(total == doctest::Approx(std::pow(2.0, n)).epsilon(1e-10));
    }
}

TEST_CASE("exact solver rejects oversize problems") {
    SystemSpec s;
    s.n = 300;
    s.hamiltonian = HamiltonianKind::TransverseField;
    s.omega = 1.0;
    CHECK_THROWS_AS(build_liouvillian(s), std::invalid_argument);
    SystemSpec big;
    big.n = 7;
    CHECK_THROWS_AS(brute_force_reference(big, {0.0}), std::invalid_argument);
}

}
