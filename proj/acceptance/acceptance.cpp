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

// Acceptance suite: one PASS/FAIL line per criterion, with sub-check details
// indented beneath. Tolerances are pinned here, next to the checks.
//
// Exit status is 0 when every failing criterion is listed in --known-red
// and every criterion listed there actually fails or passes as recorded;
// the printed verdicts are never altered.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/distributions/normal.hpp>

#include "pitwa/chain.hpp"
#include "pitwa/config.hpp"
#include "pitwa/exact_dicke.hpp"
#include "pitwa/io.hpp"
#include "pitwa/run.hpp"
#include "pitwa/twa.hpp"

using namespace pitwa;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass = true;
    std::vector<std::string> lines;

    // Records a sub-check; the criterion passes only if all of them do.
    void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
    void note(const char* fmt, ...) __attribute__((format(printf, 2, 3)));
};

void Verdict::check(bool ok, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + buf);
    pass = pass && ok;
}

void Verdict::note(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    lines.push_back(std::string("     ") + buf);
}

struct Settings {
    std::string recipes = std::string(PITWA_SOURCE_DIR) + "/recipes";
    unsigned workers = 0;
};

Settings g_settings;

unsigned workers() { return g_settings.workers == 0 ? default_workers() : g_settings.workers; }

RunConfig recipe(const std::string& name) { return load_run_config(g_settings.recipes + "/" + name + ".json"); }

TwaRunOptions options(const RunConfig& cfg) {
    TwaRunOptions o;
    o.n_traj = cfg.n_traj;
    o.seed = cfg.seed;
    o.workers = workers();
    o.p_grid = cfg.p_grid;
    o.onsite_alpha = cfg.onsite_alpha;
    return o;
}

ObservableTable twa_of(const RunConfig& cfg) {
    return cfg.spec.is_chain() ? run_chain(cfg.spec, cfg.init, cfg.integrator, options(cfg))
                               : run_twa(cfg.spec, cfg.init, cfg.integrator, options(cfg));
}

double max_abs_diff(const ObservableTable& a, const ObservableTable& b, const std::string& name) {
    return diff_series(a.series(name), b.series(name)).max_abs;
}

std::vector<double> grid(double t_max, int n) { return linear_times(t_max, n); }

// ---------------------------------------------------------------------------

Verdict oracle_equivalence() {
    Verdict v;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> rate(0.0, 2.0);
    ExactOptions tight;
    tight.rtol = 1e-11;
    tight.atol = 1e-12;
    const auto times = grid(5.0, 50);
    const double tol = 1e-8;
    double worst = 0.0;
    std::string worst_at;
    int cases = 0;
    const char* kinds[] = {"collective", "local"};
    for (int n = 1; n <= 5; ++n) {
        for (int local = 0; local <= 1; ++local) {
            for (int q = -1; q <= 1; ++q) {
                SystemSpec s;
                s.n = n;
                (local ? s.gamma : s.Gamma)[static_cast<std::size_t>(q + 1)] = rate(rng);
                const double theta = 0.5 * kPi * rate(rng), phi = kPi * rate(rng);
                const LiouvillianOp op(s, false);
                const auto a = evolve(op, coherent_state(op, theta, phi), times, tight);
                const auto b = brute_force_reference(s, times, theta, phi, tight);
                for (const char* name : {"Jz", "JpJm", "xi2", "s"}) {
                    const auto& x = a.series(name);
                    const auto& y = b.series(name);
                    const auto& jz = a.series("Jz");
                    for (std::size_t k = 0; k < x.size(); ++k) {
                        // s = <J+J->/<Jz + N/2> is 0/0 near the ground state, so it is compared only
                        // where the denominator is at least 0.01; both factors are compared everywhere.
                        if (std::string(name) == "s" && jz[k] + 0.5 * n < 0.01) continue;
                        const bool nx = std::isnan(x[k]), ny = std::isnan(y[k]);
                        const double d = nx || ny ? (nx == ny ? 0.0 : 1.0) : std::abs(x[k] - y[k]);
                        if (d > worst) {
                            worst = d;
                            char buf[128];
                            std::snprintf(buf, sizeof buf, "N=%d %s q=%+d %s t=%.2f", n, kinds[local], q, name,
                                          times[k]);
                            worst_at = buf;
                        }
                    }
                }
                ++cases;
            }
        }
    }
    v.check(worst < tol, "%d cases (N<=5, 6 channel kinds, random rates), Jz JpJm xi2 s over [0,5]: max diff %.2e < %.0e%s%s",
            cases, worst, tol, worst_at.empty() ? "" : " at ", worst_at.c_str());
    return v;
}

Verdict single_emitter() {
    Verdict v;
    const double gamma = 1.0;
    SystemSpec s;
    s.n = 1;
    s.gamma = {gamma, 0.0, 0.0};
    const auto times = grid(5.0, 25);
    ExactOptions tight;
    tight.rtol = 1e-11;
    tight.atol = 1e-13;
    const LiouvillianOp op(s, false);
    const auto ex = evolve(op, coherent_state(op, 0.0), times, tight);
    double worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        worst = std::max(worst, std::abs(ex.series("JpJm")[k] - std::exp(-gamma * times[k])));
    }
    v.check(worst < 1e-8, "exact <s+s-> vs exp(-gamma t): max diff %.2e < 1e-8", worst);

    IntegratorConfig cfg;
    cfg.t_max = 5.0;
    cfg.dt = 0.01;
    cfg.record_times = times;
    TwaRunOptions o;
    o.n_traj = 100000;
    o.seed = 1;
    o.workers = workers();
    const auto tw = run_twa(s, {}, cfg, o);
    // dt allowance: first-order weak error of the Heun scheme on this problem, gamma dt.
    const double dt_allow = gamma * cfg.dt;
    double worst_z = 0.0, worst_t = 0.0, worst_d = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double d = std::abs(tw.series("JpJm")[k] - std::exp(-gamma * times[k]));
        const double z = d / (3.0 * tw.error_series("JpJm")[k] + dt_allow);
        if (z > worst_z) {
            worst_z = z;
            worst_t = times[k];
            worst_d = tw.series("JpJm")[k] - std::exp(-gamma * times[k]);
        }
    }
    v.check(worst_z <= 1.0, "TWA (1e5 trajectories) within 3 SE + gamma*dt: worst ratio %.2f at t=%.2f (deviation %+.4f)",
            worst_z, worst_t, worst_d);
    v.note("TWA <s+s-> at t = 1, 2.5, 5: %.4f %.4f %.4f (exact %.4f %.4f %.4f)", tw.series("JpJm")[5],
           tw.series("JpJm")[12], tw.series("JpJm")[25], std::exp(-1.0), std::exp(-2.5), std::exp(-5.0));
    return v;
}

Verdict fig2a() {
    Verdict v;
    std::map<int, std::map<std::string, double>> err;
    for (int n : {10, 100}) {
        RunConfig cfg = recipe("fig2a_n" + std::to_string(n));
        cfg.n_traj = 10000;
        const auto ex = run_exact(cfg);
        const auto tw = twa_of(cfg);
        for (const char* name : {"JpJm_per_N2", "Jz_per_N"}) {
            const double e = max_abs_diff(ex, tw, name);
            err[n][name] = e;
            v.check(e < 0.1, "N=%d %s max abs error %.4f < 0.1", n, name, e);
        }
    }
    for (const char* name : {"JpJm_per_N2", "Jz_per_N"}) {
        v.check(err[100][name] < err[10][name], "%s error shrinks with N: %.4f (N=100) < %.4f (N=10)", name,
                err[100][name], err[10][name]);
    }
    return v;
}

Verdict fig2b() {
    Verdict v;
    RunConfig cfg = recipe("fig2b_n25");
    const auto ex = run_exact(cfg);
    const auto tw = twa_of(cfg);
    const auto& xe = ex.series("xi2");
    const auto& xt = tw.series("xi2");
    const auto kmin_e = static_cast<std::size_t>(std::min_element(xe.begin(), xe.end()) - xe.begin());
    const auto kmin_t = static_cast<std::size_t>(std::min_element(xt.begin(), xt.end()) - xt.begin());
    v.check(xt[kmin_t] < 1.0, "TWA xi2 transient minimum %.4f < 1 at t=%.2f", xt[kmin_t], tw.times[kmin_t]);
    const double d_at = std::abs(xt[kmin_e] - xe[kmin_e]);
    v.check(d_at < 0.05, "xi2 at the exact minimum (t=%.2f): exact %.4f, TWA %.4f, |diff| %.4f < 0.05",
            ex.times[kmin_e], xe[kmin_e], xt[kmin_e], d_at);
    const double d_min = std::abs(xt[kmin_t] - xe[kmin_e]);
    v.check(d_min < 0.05, "minimum values: exact %.4f, TWA %.4f, |diff| %.4f < 0.05", xe[kmin_e], xt[kmin_t], d_min);

    const auto& se = ex.series("s");
    const auto& st = tw.series("s");
    const auto& ie = ex.series("JpJm");
    const auto& it = tw.series("JpJm");
    // "Order one" emission is read as exact <J+J-> below 3. Above it s must
    // agree to 10%; below it the emission error must stay under one photon.
    constexpr double kFewPhotons = 3.0;
    int below_t = 0, below_e = 0;
    double worst_rel = 0.0, worst_rel_t = 0.0, worst_any = 0.0, worst_any_i = 0.0, worst_abs = 0.0;
    for (std::size_t k = 0; k < se.size(); ++k) {
        below_t += st[k] < 1.0;
        below_e += se[k] < 1.0;
        if (ie[k] < kFewPhotons) worst_abs = std::max(worst_abs, std::abs(it[k] - ie[k]));
        if (std::isnan(se[k]) || std::isnan(st[k])) continue;
        const double rel = std::abs(st[k] - se[k]) / se[k];
        if (ie[k] >= kFewPhotons && rel > worst_rel) {
            worst_rel = rel;
            worst_rel_t = ex.times[k];
        }
        if (rel > worst_any) {
            worst_any = rel;
            worst_any_i = ie[k];
        }
    }
    v.check(below_t > 0, "TWA s < 1 window: %d records (exact: %d)", below_t, below_e);
    v.check(worst_rel < 0.1, "s relative deviation where exact <J+J-> >= 3: %.4f < 0.1 (worst at t=%.2f)", worst_rel,
            worst_rel_t);
    v.check(worst_abs < 1.0, "|<J+J-> error| where exact <J+J-> < 3: %.4f < 1 photon", worst_abs);
    v.note("largest s relative deviation overall %.3f, at exact <J+J-> = %.3f", worst_any, worst_any_i);
    return v;
}

// Counts sign changes of x - mean(x) with a hysteresis band, over records with t >= t_from.
int oscillation_crossings(const ObservableTable& t, const std::string& name, double t_from, double band) {
    const auto& x = t.series(name);
    double mean = 0.0;
    int cnt = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (t.times[k] >= t_from) {
            mean += x[k];
            ++cnt;
        }
    }
    mean /= cnt;
    int state = 0, crossings = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (t.times[k] < t_from) continue;
        const double d = x[k] - mean;
        const int s = d > band ? 1 : d < -band ? -1 : 0;
        if (s != 0 && state != 0 && s != state) ++crossings;
        if (s != 0) state = s;
    }
    return crossings;
}

// Peak-to-peak amplitude of x over [a, b).
double swing(const ObservableTable& t, const std::string& name, double a, double b) {
    double lo = 1e300, hi = -1e300;
    for (std::size_t k = 0; k < t.times.size(); ++k) {
        if (t.times[k] < a || t.times[k] >= b) continue;
        lo = std::min(lo, t.series(name)[k]);
        hi = std::max(hi, t.series(name)[k]);
    }
    return hi - lo;
}

Verdict fig5() {
    Verdict v;
    const double band = 0.02;
    for (const char* variant : {"clean", "dephasing", "decay"}) {
        RunConfig cfg = recipe(std::string("fig5_n50_") + variant);
        const auto ex = run_exact(cfg);
        const auto tw = twa_of(cfg);
        const double e = max_abs_diff(ex, tw, "Jz_per_N");
        v.check(e < 0.05, "N=50 Omega=N %s: TWA vs exact max abs error on Jz/N %.4f < 0.05", variant, e);
        const double tm = cfg.integrator.t_max;
        const double early = swing(ex, "Jz_per_N", 0.25 * tm, 0.5 * tm);
        const double late = swing(ex, "Jz_per_N", 0.75 * tm, tm + 1e-12);
        const int crossings = oscillation_crossings(tw, "Jz_per_N", 0.25 * tm, band);
        if (std::string(variant) == "clean") {
            v.check(crossings >= 3 && late > 0.5 * early,
                    "clean: undamped oscillation, %d crossings of the late mean, late/early swing %.3f/%.3f", crossings,
                    late, early);
        } else {
            v.check(late < 0.5 * early, "%s: damped, late/early swing %.3f/%.3f < 0.5", variant, late, early);
        }
    }
    RunConfig below = recipe("fig5_n50_clean");
    below.spec.omega = 0.4 * below.spec.n;
    const auto ex = run_exact(below);
    const auto tw = twa_of(below);
    const int ce = oscillation_crossings(ex, "Jz_per_N", 0.25 * below.integrator.t_max, band);
    const int ct = oscillation_crossings(tw, "Jz_per_N", 0.25 * below.integrator.t_max, band);
    v.check(ct <= 1 && ce <= 1, "Omega=0.4N below threshold: no oscillation (crossings exact %d, TWA %d, <= 1)", ce, ct);
    v.note("Omega=0.4N late Jz/N: exact %.4f, TWA %.4f", ex.series("Jz_per_N").back(), tw.series("Jz_per_N").back());
    return v;
}

Verdict chain_validation() {
    Verdict v;
    for (int n : {2, 3}) {
        SystemSpec s;
        s.M = 2;
        s.n = n;
        s.chain_gamma = 1.0;
        s.phi_prop = kPi / 2;
        s.gamma = {0.0, 0.0, 10.0};
        s.hamiltonian = HamiltonianKind::ChainSine;
        IntegratorConfig cfg;
        cfg.t_max = 3.0;
        cfg.dt = 1e-3;
        cfg.record_times = grid(3.0, 60);
        const auto ex = brute_force_reference(s, cfg.record_times, kPi);
        TwaRunOptions o;
        o.n_traj = 4000;
        o.seed = 3;
        o.workers = workers();
        InitialState init;
        init.polarization = Polarization::Down;
        const auto tw = run_chain(s, init, cfg, o);
        const auto& fe = ex.series("I_F");
        const double peak = *std::max_element(fe.begin(), fe.end());
        const double e = max_abs_diff(ex, tw, "I_F") / peak;
        const auto steady_e = late_window_average(ex, "I_F", 0.2).mean;
        const auto steady_t = late_window_average(tw, "I_F", 0.2).mean;
        v.check(e < 0.15, "M=2 N=%d phi=pi/2: max |I_F error| / peak exact I_F = %.3f < 0.15 (steady exact %.4f, TWA %.4f)",
                n, e, steady_e, steady_t);
    }
    double steady[2];
    int i = 0;
    for (const char* name : {"fig3b_phi0", "fig3b_phi_pi2"}) {
        RunConfig cfg = recipe(name);
        cfg.n_traj = 2000;
        const auto tw = twa_of(cfg);
        steady[i++] = late_window_average(tw, "I_F", 0.2).mean;
    }
    const double ratio = steady[1] / steady[0];
    v.check(std::abs(ratio - 0.5) <= 0.1, "M=2 N=20 steady I_F(pi/2)/I_F(0) = %.4f / %.4f = %.3f within 0.5 +- 0.1",
            steady[1], steady[0], ratio);

    return v;
}

Verdict fig4() {
    Verdict v;
    RunConfig cfg = recipe("fig4abc");
    cfg.n_traj = 8;
    const auto t0 = std::chrono::steady_clock::now();
    const auto tw = twa_of(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.note("M=100 N=250 recipe with %zu trajectories completed in %.0f s, %ld alive", cfg.n_traj, secs,
           tw.alive.back());

    auto window = [&](double a, double b) {
        double sum = 0.0;
        int n = 0;
        for (std::size_t k = 0; k < tw.times.size(); ++k) {
            if (tw.times[k] >= a && tw.times[k] <= b) {
                sum += tw.series("I_F_per_Ntot2")[k];
                ++n;
            }
        }
        return sum / n;
    };
    const double early = window(0.01, 0.1), late = window(0.1, 1.0);
    const auto& f = tw.series("I_F_per_Ntot2");
    const double burst = *std::max_element(f.begin(), f.end());
    v.check(std::abs(early - late) <= 0.3 * late,
            "(i) steady forward emission from t=0.01: mean I_F/Ntot^2 over [0.01,0.1] %.5f vs [0.1,1] %.5f (within 30%%), burst peak %.5f",
            early, late, burst);

    const auto p = cfg.p_grid;
    std::vector<double> sp;
    for (double x : p) {
        char name[64];
        std::snprintf(name, sizeof name, "S(p=%.6f)", x);
        sp.push_back(tw.series(name).back());
    }
    std::size_t ineg = 0, ipos = p.size() - 1;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] < 0 && sp[k] > sp[ineg]) ineg = k;
        if (p[k] > 0 && (p[ipos] <= 0 || sp[k] > sp[ipos])) ipos = k;
    }
    std::vector<double> sorted = sp;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double spacing = p[1] - p[0];
    const bool mirrored = std::abs(p[ipos] + p[ineg]) <= spacing + 1e-9;
    v.check(mirrored && sp[ipos] > 5 * median && sp[ineg] > 5 * median,
            "(ii) S(p) at t=1: peaks at p=%.3f and %.3f (mirror within one grid step %.3f), heights %.3g and %.3g vs median %.3g",
            p[ineg], p[ipos], spacing, sp[ineg], sp[ipos], median);

    RunConfig sw = recipe("fig4d");
    SweepConfig sc;
    sc.base = sw.spec;
    sc.ensembles = {20, 50};
    sc.drive_over_gamma = {0.0, 0.05, 0.1, 0.2};
    sc.total_phase = sw.sweep.total_phase;
    sc.cooperativity = sw.sweep.cooperativity;
    sc.t_eval = sw.sweep.t_eval;
    sc.window_fraction = sw.sweep.window_fraction;
    sc.window_records = sw.sweep.window_records;
    sc.integrator = sw.integrator;
    sc.run = options(sw);
    sc.run.n_traj = 12;
    const auto rows = directionality_sweep(sc);
    for (int m : sc.ensembles) {
        std::vector<SweepRow> r;
        for (const auto& row : rows) {
            if (row.M == m) r.push_back(row);
        }
        std::ostringstream line;
        bool monotone = true;
        for (std::size_t k = 0; k < r.size(); ++k) {
            char buf[64];
            std::snprintf(buf, sizeof buf, " %.3f+-%.3f", r[k].forward_fraction, r[k].stderr_);
            line << buf;
            if (k > 0) {
                const double se = std::hypot(r[k].stderr_, r[k - 1].stderr_);
                monotone = monotone && r[k].forward_fraction >= r[k - 1].forward_fraction - 2 * se;
            }
        }
        const double z = std::abs(r[0].forward_fraction - 0.5) / std::max(r[0].stderr_, 1e-12);
        v.check(z <= 3.0 && monotone,
                "(iii) M=%d forward fraction vs drive/pump {0,.05,.1,.2}:%s; undriven |f-0.5| = %.1f SE, non-decreasing within 2 SE: %s",
                m, line.str().c_str(), z, monotone ? "yes" : "no");
    }
    return v;
}

Verdict statistics() {
    Verdict v;
    SystemSpec s;
    s.n = 10;
    s.Gamma = {1.0, 0.0, 0.0};
    s.gamma = {0.0, 0.0, 2.5};
    IntegratorConfig cfg;
    cfg.t_max = 0.3;
    cfg.dt = 0.005;
    cfg.record_times = {0.3};
    std::vector<double> se;
    for (std::size_t n : {1000, 10000, 100000}) {
        TwaRunOptions o;
        o.n_traj = n;
        o.seed = 5;
        o.workers = workers();
        se.push_back(run_twa(s, {}, cfg, o).error_series("JpJm").back());
    }
    const double r1 = se[0] / se[1] / std::sqrt(10.0), r2 = se[1] / se[2] / std::sqrt(10.0);
    v.check(std::abs(r1 - 1) < 0.2 && std::abs(r2 - 1) < 0.2,
            "SE of <J+J-> at 1e3/1e4/1e5 trajectories: %.4f %.4f %.4f; ratios / sqrt(10) = %.3f %.3f (within 20%%)",
            se[0], se[1], se[2], r1, r2);

    // dt halving on the laser benchmark and on the clean time crystal. Every
    // (observable, record) pair is a separate comparison, so the bound is the
    // Bonferroni two-sided normal quantile at a 1% family-wise level.
    for (const char* name : {"fig2a_n10", "fig5_n50_clean"}) {
        RunConfig c = recipe(name);
        c.n_traj = 4000;
        const auto a = twa_of(c);
        c.integrator.dt *= 0.5;
        const auto b = twa_of(c);
        double worst = 0.0;
        std::string at;
        int comparisons = 0;
        for (const auto& obs : a.names) {
            if (!b.has(obs)) continue;
            const auto& x = a.series(obs);
            const auto& y = b.series(obs);
            const auto& ex = a.error_series(obs);
            const auto& ey = b.error_series(obs);
            for (std::size_t k = 0; k < x.size(); ++k) {
                const double sig = std::hypot(ex[k], ey[k]);
                if (std::isnan(x[k]) || std::isnan(y[k]) || sig == 0.0) continue;
                ++comparisons;
                const double z = std::abs(x[k] - y[k]) / sig;
                if (z > worst) {
                    worst = z;
                    at = obs;
                }
            }
        }
        const double bound = boost::math::quantile(boost::math::normal(), 1.0 - 0.01 / (2.0 * comparisons));
        v.check(worst < bound, "%s: dt halving shifts every observable by at most %.2f combined SE (< %.2f over %d comparisons; worst %s)",
                name, worst, bound, comparisons, at.c_str());
    }

    {
        RunConfig c = recipe("fig2a_n10");
        c.n_traj = 500;
        std::ostringstream a, b;
        TwaRunOptions o = options(c);
        o.workers = 1;
        write_results_csv(a, run_twa(c.spec, c.init, c.integrator, o));
        o.workers = 8;
        write_results_csv(b, run_twa(c.spec, c.init, c.integrator, o));
        v.check(a.str() == b.str(), "results.csv byte-identical for 1 and 8 workers (%zu bytes)", a.str().size());
    }

    {
        SystemSpec c;
        c.n = 50;
        c.Gamma = {1.0, 0.3, 0.2};
        c.hamiltonian = HamiltonianKind::TransverseField;
        c.omega = 50.0;
        const TwaModel model(c);
        InitialState init;
        init.theta = 0.3;
        auto batch = sample_initial(c, init, 200, 13);
        std::vector<double> j0;
        for (std::size_t i = 0; i < batch.size(); ++i) j0.push_back(batch.point(i, 0).total_spin());
        IntegratorConfig ic;
        ic.dt = 2e-4;
        ic.t_max = 1.0;
        advance(batch, model, ic, 1.0, workers());
        double worst = 0.0;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            worst = std::max(worst, std::abs(batch.point(i, 0).total_spin() - j0[i]));
        }
        v.check(worst <= 1e-8 * ic.t_max, "collective-only dynamics: max |J drift| over t=1 is %.2e <= 1e-8", worst);
    }
    return v;
}

struct Criterion {
    std::string key;
    std::string title;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance suite"};
    std::vector<std::string> only, known_red;
    app.add_option("--only", only, "Run only these criteria");
    app.add_option("--known-red", known_red, "Criteria documented as unattainable");
    app.add_option("--workers", g_settings.workers, "Worker threads");
    app.add_option("--recipes", g_settings.recipes, "Recipe directory");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {"oracle", "Dicke solver equals the brute-force Lindblad oracle", oracle_equivalence},
        {"single_emitter", "Single-emitter decay closed form", single_emitter},
        {"fig2a", "Superradiant laser emission and inversion, N = 10 and 100", fig2a},
        {"fig2b", "Squeezing and subradiance, N = 25", fig2b},
        {"fig5", "Boundary time crystal, N = 50", fig5},
        {"chain", "Two-ensemble chain against the oracle and phase suppression", chain_validation},
        {"fig4", "Hundred-ensemble chain: burst, structure factor, directionality", fig4},
        {"statistics", "Sampling error, step-size, determinism and Casimir properties", statistics},
    };
    const std::set<std::string> red(known_red.begin(), known_red.end());
    int unexpected = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.key) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.check(false, "threw: %s", e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool expected_red = red.count(c.key) > 0;
        std::printf("%s  %-15s %s (%.0f s)%s\n", v.pass ? "PASS" : "FAIL", c.key.c_str(), c.title.c_str(), secs,
                    !v.pass && expected_red ? "  [known red]" : "");
        for (const auto& l : v.lines) std::printf("      %s\n", l.c_str());
        std::fflush(stdout);
        if (v.pass == expected_red) {
            ++unexpected;
            if (v.pass) std::printf("      note: listed as known red but passed; update the list\n");
        }
    }
    return unexpected == 0 ? 0 : 1;
}
