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

#include "pitwa/chain.hpp"
#include "pitwa/exact_dicke.hpp"

using namespace pitwa;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_state(int M, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 3.0);
    std::vector<double> z(static_cast<std::size_t>(6 * M));
    for (int m = 0; m < M; ++m) {
        PhasePoint p;
        p.s = Vec3(g(rng), g(rng), g(rng) + 1.0);
        p.psi = 0.3 * m;
        const BodyFrame f = to_frame(p);
        for (int a = 0; a < 3; ++a) {
            z[static_cast<std::size_t>(6 * m + a)] = f.s[a];
            z[static_cast<std::size_t>(6 * m + 3 + a)] = f.e1[a];
        }
    }
    return z;
}

SystemSpec chain_spec(int M, int n, double phi, double pump) {
    SystemSpec s;
    s.M = M;
    s.n = n;
    s.chain_gamma = 1.0;
    s.phi_prop = phi;
    s.gamma = {0.0, 0.0, pump};
    s.hamiltonian = HamiltonianKind::ChainSine;
    return s;
}

IntegratorConfig config(double t_max, int records, double dt) {
    IntegratorConfig c;
    c.t_max = t_max;
    c.dt = dt;
    for (int i = 0; i <= records; ++i) c.record_times.push_back(t_max * i / records);
    return c;
}

}  // namespace

TEST_SUITE("chain") {

TEST_CASE("linear-time chain gradient equals the direct double sum") {
    std::mt19937_64 rng(21);
    for (int M : {8, 13, 40, 101}) {
        for (double phi : {0.0, 0.3, kPi / 10, kPi / 2, 2.9}) {
            SystemSpec s = chain_spec(M, 10, phi, 1.0);
            s.omega_drive = 0.7;
            const TwaModel model(s);
            const auto z = random_state(M, rng);
            std::vector<double> fast(static_cast<std::size_t>(3 * M)), slow(fast.size());
            model.hamiltonian_gradient(z.data(), fast.data());
            model.hamiltonian_gradient_direct(z.data(), slow.data());
            double scale = 0.0, worst = 0.0;
            for (std::size_t i = 0; i < fast.size(); ++i) {
                scale = std::max(scale, std::abs(slow[i]));
                worst = std::max(worst, std::abs(fast[i] - slow[i]));
            }
            CAPTURE(M);
            CAPTURE(phi);
            CHECK(worst <= 1e-10 * std::max(scale, 1.0));
        }
    }
}

TEST_CASE("chain Hamiltonian gradient matches finite differences") {
    std::mt19937_64 rng(22);
    SystemSpec s = chain_spec(5, 10, 0.8, 1.0);
    s.omega_drive = 0.4;
    const TwaModel model(s);
    auto z = random_state(5, rng);
    std::vector<double> g(15);
    model.hamiltonian_gradient(z.data(), g.data());
    for (int m = 0; m < 5; ++m) {
        for (int a = 0; a < 3; ++a) {
            const auto i = static_cast<std::size_t>(6 * m + a);
            const double h = 1e-6;
            const double z0 = z[i];
            z[i] = z0 + h;
            const double hp = model.hamiltonian(z.data());
            z[i] = z0 - h;
            const double hm = model.hamiltonian(z.data());
            z[i] = z0;
            CHECK(g[static_cast<std::size_t>(3 * m + a)] == doctest::Approx((hp - hm) / (2 * h)).epsilon(1e-6));
        }
    }
}

TEST_CASE("channel layout") {
    const auto ch = enumerate_channels(chain_spec(3, 5, 0.2, 1.0));
    int directional = 0, local = 0;
    for (const auto& c : ch) {
        directional += c.kind == ChannelKind::CollectiveDirectional;
        local += c.kind == ChannelKind::Local;
        if (c.kind == ChannelKind::CollectiveDirectional) CHECK(c.rate == doctest::Approx(0.5));
    }
    CHECK(directional == 2);
    CHECK(local == 9);
}

TEST_CASE("a single site radiates equally in both directions") {
    SystemSpec s;
    s.n = 4;
    s.chain_gamma = 1.0;
    s.phi_prop = 0.9;
    const TwaModel model(s);
    std::mt19937_64 rng(23);
    const auto z = random_state(1, rng);
    CHECK(std::abs(model.channel_symbol(0, z.data())) == doctest::Approx(std::abs(model.channel_symbol(1, z.data()))));
}

TEST_CASE("zero propagation phase gives mirror-symmetric emission and identical sites") {
    TwaRunOptions opts;
    opts.n_traj = 400;
    opts.seed = 8;
    opts.workers = 4;
    InitialState init;
    init.polarization = Polarization::Down;
    const auto t = run_chain(chain_spec(3, 6, 0.0, 4.0), init, config(1.0, 5, 2e-3), opts);
    CHECK(t.series("I_F") == t.series("I_B"));
    const std::size_t k = t.times.size() - 1;
    for (int m = 2; m <= 3; ++m) {
        const std::string a = "I[1]", b = "I[" + std::to_string(m) + "]";
        const double diff = t.series(a)[k] - t.series(b)[k];
        CHECK(std::abs(diff) <= 4 * std::hypot(t.error_series(a)[k], t.error_series(b)[k]));
    }
}

TEST_CASE("ground-state start has an empty structure factor") {
    TwaRunOptions opts;
    opts.n_traj = 4000;
    opts.seed = 9;
    InitialState init;
    init.polarization = Polarization::Down;
    const auto t = run_chain(chain_spec(6, 10, 0.5, 1.0), init, config(0.0, 0, 1e-3), opts);
    for (double p : default_p_grid(9)) {
        char name[64];
        std::snprintf(name, sizeof name, "S(p=%.6f)", p);
        REQUIRE(t.has(name));
        CHECK(std::abs(t.series(name)[0]) <= 3 * t.error_series(name)[0] + 0.05);
    }
}

TEST_CASE("structure factor of one site is the on-site moment") {
    const std::vector<Vec3> one{Vec3(1.0, -2.0, 3.0)};
    const auto sp = structure_factor_sample(one, {-1.0, 0.0, 2.5});
    for (double v : sp) CHECK(v == doctest::Approx(onsite_second_moment(one[0])));
    // Coplanar transverse components give p -> -p symmetric spectra.
    const std::vector<Vec3> pair{Vec3(1.0, 0.0, 0.0), Vec3(2.0, 0.0, 0.3)};
    const auto s2 = structure_factor_sample(pair, {-0.7, 0.7});
    CHECK(s2[0] == doctest::Approx(s2[1]));
}

TEST_CASE("late-window average uses the trailing records") {
    ObservableTable t;
    t.times = {0.0, 0.5, 0.96, 0.98, 1.0};
    const auto i = t.ensure("x");
    t.values[i] = {9.0, 9.0, 1.0, 2.0, 3.0};
    t.errors[i] = {0.0, 0.0, 0.1, 0.2, 0.3};
    const Estimate e = late_window_average(t, "x", 0.05);
    CHECK(e.mean == doctest::Approx(2.0));
    CHECK(e.stderr_ == doctest::Approx(0.2));
    CHECK_THROWS(late_window_average(t, "y"));
}

TEST_CASE("undriven sweep point is balanced") {
    SweepConfig cfg;
    cfg.base.n = 8;
    cfg.base.chain_gamma = 1.0;
    cfg.ensembles = {6};
    cfg.drive_over_gamma = {0.0};
    cfg.total_phase = 3.0;
    cfg.cooperativity = 10.0;
    cfg.t_eval = 0.4;
    cfg.integrator.dt = 2e-3;
    cfg.run.n_traj = 200;
    cfg.run.workers = 4;
    const auto rows = directionality_sweep(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].pump == doctest::Approx(1.0 * 8 * 6 / 10.0));
    CHECK(rows[0].phi_prop == doctest::Approx(0.5));
    CHECK(std::abs(rows[0].forward_fraction - 0.5) <= 3 * rows[0].stderr_ + 0.01);
}

}
