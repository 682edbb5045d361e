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
#include <sstream>

#include "pitwa/io.hpp"
#include "pitwa/twa.hpp"

using namespace pitwa;

namespace {

IntegratorConfig config(double t_max, int records, double dt) {
    IntegratorConfig c;
    c.t_max = t_max;
    c.dt = dt;
    for (int i = 0; i <= records; ++i) c.record_times.push_back(t_max * i / records);
    return c;
}

double at0(const ObservableTable& t, const char* name) { return t.series(name)[0]; }
double se0(const ObservableTable& t, const char* name) { return t.error_series(name)[0]; }

std::string csv(const ObservableTable& t) {
    std::ostringstream os;
    write_results_csv(os, t);
    return os.str();
}

}  // namespace

TEST_SUITE("twa") {

TEST_CASE("polarized samples reproduce coherent-state moments") {
    SystemSpec s;
    s.n = 10;
    TwaRunOptions opts;
    opts.n_traj = 20000;
    opts.seed = 3;
    InitialState up;
    const auto t = run_twa(s, up, config(0.0, 0, 0.01), opts);
    CHECK(std::abs(at0(t, "Jz") - 5.0) <= 3 * se0(t, "Jz") + 1e-12);
    CHECK(std::abs(at0(t, "xi2") - 1.0) <= 3 * se0(t, "xi2"));
    CHECK(std::abs(at0(t, "J2") - 30.0) <= 3 * se0(t, "J2"));
    CHECK(std::abs(at0(t, "JpJm") - 10.0) <= 3 * se0(t, "JpJm") + 0.1);

    InitialState down;
    down.polarization = Polarization::Down;
    const auto d = run_twa(s, down, config(0.0, 0, 0.01), opts);
    CHECK(std::abs(at0(d, "Jz") + 5.0) <= 1e-12);
    CHECK(std::abs(at0(d, "JpJm")) <= 3 * se0(d, "JpJm") + 0.1);
}

TEST_CASE("tilted samples point along the requested direction") {
    SystemSpec s;
    s.n = 20;
    InitialState init;
    init.theta = 1.0;
    init.phi = 0.6;
    const auto b = sample_initial(s, init, 4000, 9);
    Vec3 mean = Vec3::Zero();
    for (std::size_t i = 0; i < b.size(); ++i) mean += b.point(i, 0).s;
    mean /= double(b.size());
    const Vec3 expect = 10.0 * Vec3(std::sin(1.0) * std::cos(0.6), std::sin(1.0) * std::sin(0.6), std::cos(1.0));
    CHECK((mean - expect).norm() < 0.15);
}

TEST_CASE("output is bit-identical across worker counts") {
    SystemSpec s;
    s.n = 8;
    s.Gamma = {1.0, 0.0, 0.0};
    s.gamma = {0.1, 0.2, 2.0};
    TwaRunOptions opts;
    opts.n_traj = 300;
    opts.seed = 77;
    const auto cfg = config(1.0, 10, 0.01);
    opts.workers = 1;
    const std::string a = csv(run_twa(s, {}, cfg, opts));
    opts.workers = 3;
    const std::string b = csv(run_twa(s, {}, cfg, opts));
    opts.workers = 8;
    const std::string c = csv(run_twa(s, {}, cfg, opts));
    CHECK(a == b);
    CHECK(a == c);
    opts.seed = 78;
    CHECK(a != csv(run_twa(s, {}, cfg, opts)));
}

TEST_CASE("total spin is conserved without local channels") {
    SystemSpec s;
    s.n = 12;
    s.Gamma = {1.0, 0.5, 0.2};
    s.hamiltonian = HamiltonianKind::TransverseField;
    s.omega = 3.0;
    const TwaModel model(s);
    InitialState init;
    init.theta = 0.4;
    auto batch = sample_initial(s, init, 200, 5);
    std::vector<double> before;
    for (std::size_t i = 0; i < batch.size(); ++i) before.push_back(batch.point(i, 0).total_spin());
    IntegratorConfig cfg = config(2.0, 1, 1e-3);
    advance(batch, model, cfg, 2.0, 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        worst = std::max(worst, std::abs(batch.point(i, 0).total_spin() - before[i]));
    }
    CHECK(worst < 1e-8 * 2.0 * s.n);
}

TEST_CASE("noiseless Heun step integrates the precession") {
    SystemSpec s;
    s.n = 10;
    s.hamiltonian = HamiltonianKind::TransverseField;
    s.omega = 2.0;
    const TwaModel model(s);
    PhasePoint z0;
    z0.s = Vec3(0.3, 1.0, 4.0);
    BodyFrame f = to_frame(z0);
    std::vector<double> z{f.s.x(), f.s.y(), f.s.z(), f.e1.x(), f.e1.y(), f.e1.z()};

    // Drift equals the bracket {S, Omega S_x}.
    const auto fields = model.drift_and_diffusion(z.data());
    CHECK(fields.drift[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(fields.drift[1] == doctest::Approx(-2.0 * z0.s.z()));
    CHECK(fields.drift[2] == doctest::Approx(2.0 * z0.s.y()));
    CHECK(fields.noise.empty());

    std::vector<double> scratch(64);
    const double dt = 1e-3;
    const int steps = 1000;
    for (int k = 0; k < steps; ++k) REQUIRE(model.heun_step(z.data(), nullptr, dt, scratch.data()));
    const Vec3 expect = Eigen::AngleAxisd(2.0 * dt * steps, Vec3::UnitX()) * z0.s;
    CHECK((Vec3(z[0], z[1], z[2]) - expect).norm() < 1e-5);
}

TEST_CASE("collective decay lowers the inversion monotonically") {
    SystemSpec s;
    s.n = 10;
    s.Gamma = {1.0, 0.0, 0.0};
    TwaRunOptions opts;
    opts.n_traj = 2000;
    opts.seed = 4;
    opts.workers = 4;
    const auto t = run_twa(s, {}, config(1.0, 20, 2e-3), opts);
    const auto& jz = t.series("Jz");
    const auto& se = t.error_series("Jz");
    for (std::size_t k = 1; k < jz.size(); ++k) CHECK(jz[k] <= jz[k - 1] + 3 * (se[k] + se[k - 1]));
    CHECK(jz.back() < -3.0);
}

TEST_CASE("default and scheduled step sizes") {
    SystemSpec s;
    s.n = 10;
    s.Gamma = {2.0, 0.0, 0.0};
    IntegratorConfig c;
    CHECK(c.dt_at(0.0, s) == doctest::Approx(1e-3 / max_rate_scale(s)));
    c.dt = 0.01;
    c.dt_schedule = {{0.0, 1e-4}, {0.5, 1e-3}};
    CHECK(c.dt_at(0.1, s) == doctest::Approx(1e-4));
    CHECK(c.dt_at(0.7, s) == doctest::Approx(1e-3));
    c.record_times = {0.2, 0.1};
    c.t_max = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("constant estimator has zero standard error") {
    const Estimate e = mean_and_error(std::vector<double>(50, 3.25));
    CHECK(e.mean == 3.25);
    CHECK(e.stderr_ == 0.0);
}

}
