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

#include "pitwa/calibration.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace pitwa {

namespace {

std::string q_label(int q) { return q < 0 ? "-1" : (q == 0 ? "0" : "+1"); }


double generator_term(const TwaModel& model, const double* z, const FrameGradient& grad_o, const Eigen::VectorXd& b,
                      double h, int k, bool imag_part) {
    // (b . grad)(b . grad O) by central differences of g(z') = b(z') . grad O(z').
    const std::size_t dim = model.dimension();
    std::vector<double> zp(z, z + dim), zm(z, z + dim), gp(dim), gm(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        zp[i] += h * b[static_cast<Eigen::Index>(i)];
        zm[i] -= h * b[static_cast<Eigen::Index>(i)];
    }
    auto directional = [&](const std::vector<double>& pt, std::vector<double>& g) {
        const auto f = model.drift_and_diffusion(pt.data());
        const Eigen::VectorXcd& v = f.noise[static_cast<std::size_t>(k)];
        const Eigen::VectorXd bk = imag_part ? Eigen::VectorXd(-v.imag()) : Eigen::VectorXd(v.real());
        grad_o(pt.data(), g.data());
        double s = 0.0;
        for (std::size_t i = 0; i < dim; ++i) s += bk[static_cast<Eigen::Index>(i)] * g[i];
        return s;
    };
    return (directional(zp, gp) - directional(zm, gm)) / (2.0 * h);
}

}  // namespace

double ito_generator(const TwaModel& model, const double* z, const FrameObservable& o, const FrameGradient& grad_o,
                     double h) {
    (void)o;
    const std::size_t dim = model.dimension();
    const auto f = model.drift_and_diffusion(z);
    std::vector<double> g(dim);
    grad_o(z, g.data());
    double out = 0.0;
    for (std::size_t i = 0; i < dim; ++i) out += f.drift[static_cast<Eigen::Index>(i)] * g[i];
    for (std::size_t k = 0; k < f.noise.size(); ++k) {
        const Eigen::VectorXd b1 = f.noise[k].real();
        const Eigen::VectorXd b2 = -f.noise[k].imag();
        const double scale = std::max(1.0, b1.norm() + b2.norm());
        const double step = h * std::max(1.0, std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2])) / scale;
        out += 0.5 * generator_term(model, z, grad_o, b1, step, static_cast<int>(k), false);
        out += 0.5 * generator_term(model, z, grad_o, b2, step, static_cast<int>(k), true);
    }
    return out;
}

SymbolCalibration calibrate_symbols(int n, const CalibrationOptions& opts) {
    if (n < 1) throw std::invalid_argument("calibrate_symbols: n must be >= 1");
    SymbolCalibration cal;
    cal.n = n;
    cal.options = opts;

    struct Obs {
        const char* name;
        FrameObservable f;
        FrameGradient g;
    };
    const std::vector<Obs> observables{
        {"Jz", [](const double* z) { return z[2]; },
         [](const double*, double* g) {
             std::fill(g, g + 6, 0.0);
             g[2] = 1.0;
         }},
        {"Jx", [](const double* z) { return z[0]; },
         [](const double*, double* g) {
             std::fill(g, g + 6, 0.0);
             g[0] = 1.0;
         }},
        {"J2",
         [](const double* z) {
             const double r = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
             return r * r - 0.25;
         },
         [](const double* z, double* g) {
             std::fill(g, g + 6, 0.0);
             for (int i = 0; i < 3; ++i) g[i] = 2.0 * z[i];
         }},
    };

    struct Chan {
        std::string name;
        SystemSpec spec;
    };
    std::vector<Chan> chans;
    for (int q = -1; q <= 1; ++q) {
        SystemSpec s;
        s.n = n;
        s.Gamma[static_cast<std::size_t>(q + 1)] = 1.0;
        chans.push_back({"collective q=" + q_label(q), s});
    }
    for (int q = -1; q <= 1; ++q) {
        SystemSpec s;
        s.n = n;
        s.gamma[static_cast<std::size_t>(q + 1)] = 1.0;
        chans.push_back({"local q=" + q_label(q), s});
    }

    std::ostringstream report;
    for (const Chan& ch : chans) {
        const TwaModel model(ch.spec);
        const LiouvillianOp op(ch.spec, false);
        for (double theta : opts.thetas) {
            const DickeBlockMatrix rho = coherent_state(op, theta, 0.0);
            DickeBlockMatrix drho = rho;
            drho.data = op.apply(rho.data);
            const Moments dm = measure_moments(drho);
            const double exact_vals[3] = {dm.jz, dm.jx, dm.j2};

            InitialState init;
            init.theta = theta;
            const TrajectoryBatch batch = sample_initial(ch.spec, init, opts.samples, opts.seed);
            for (std::size_t o = 0; o < observables.size(); ++o) {
                std::vector<double> vals(batch.size());
                for (std::size_t i = 0; i < batch.size(); ++i) {
                    vals[i] = ito_generator(model, batch.state.data() + 6 * i, observables[o].f, observables[o].g);
                }
                const Estimate e = mean_and_error(vals);
                ChannelResidual r;
                r.channel = ch.name;
                r.observable = observables[o].name;
                r.theta = theta;
                r.exact = exact_vals[o];
                r.twa = e.mean;
                r.stderr_ = e.stderr_;
                const double allowance =
                    o == 2 ? opts.j_squared_tol + opts.j_squared_tol_per_n * n : opts.first_moment_tol;
                r.tolerance = 5.0 * e.stderr_ + allowance;
                r.pass = std::abs(r.twa - r.exact) <= r.tolerance;
                if (!r.pass) {
                    cal.pass = false;
                    char line[256];
                    std::snprintf(line, sizeof line, "%s %s theta=%.3f exact=%.6g twa=%.6g se=%.2g tol=%.2g\n",
                                  ch.name.c_str(), r.observable.c_str(), theta, r.exact, r.twa, r.stderr_,
                                  r.tolerance);
                    report << line;
                }
                cal.residuals.push_back(r);
            }
        }
    }

    // Amplitude tables on the J grid.
    const AmplitudeModel amp(n);
    for (int two_j = n % 2; two_j <= n + 2; two_j += 2) cal.j_grid.push_back(0.5 * two_j);
    for (int q = -1; q <= 1; ++q) {
        cal.channel_names.push_back("collective q=" + q_label(q));
        std::vector<cd> row;
        for (double jv : cal.j_grid) row.emplace_back(amp.collective_amplitude(q, jv + 0.5)[0], 0.0);
        cal.amplitudes.push_back(row);
    }
    for (int q = -1; q <= 1; ++q) {
        for (int j = -1; j <= 1; ++j) {
            cal.channel_names.push_back("local q=" + q_label(q) + " j=" + q_label(j));
            std::vector<cd> row;
            for (double jv : cal.j_grid) row.emplace_back(amp.local_amplitude(q, j, jv + 0.5)[0], 0.0);
            cal.amplitudes.push_back(row);
        }
    }

    if (!cal.pass) throw std::runtime_error("symbol calibration failed:\n" + report.str());
    return cal;
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int order) {
    if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials.
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) jac(k, k - 1) = jac(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    std::vector<double> x(static_cast<std::size_t>(order)), w(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        x[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
        const double v = es.eigenvectors()(0, i);
        w[static_cast<std::size_t>(i)] = v * v;
    }
    return {x, w};
}

SecondMomentCalibration calibrate_second_moments(const std::vector<int>& ns, const std::vector<double>& thetas,
                                                 int quadrature_order) {
    SecondMomentCalibration cal;
    const auto [x, w] = gauss_hermite(quadrature_order);
    double num = 0.0, den = 0.0;
    for (int n : ns) {
        if (n < 1) throw std::invalid_argument("calibrate_second_moments: n must be >= 1");
        const double sd = std::sqrt(0.25 * n + 0.125);
        for (double theta : thetas) {
            const Eigen::Matrix3d rot = Eigen::AngleAxisd(theta, Vec3::UnitY()).toRotationMatrix();
            double base = 0.0, corr = 0.0;
            for (std::size_t a = 0; a < x.size(); ++a) {
                for (std::size_t b = 0; b < x.size(); ++b) {
                    const Vec3 s = rot * Vec3(sd * x[a], sd * x[b], 0.5 * n);
                    const double c = onsite_second_moment(s, 0.0);
                    base += w[a] * w[b] * c;
                    corr += w[a] * w[b] * (onsite_second_moment(s, 1.0) - c);
                }
            }
            const double exact = coherent_state_jpjm(n, theta);
            cal.rows.push_back({n, theta, exact, base, corr});
            num += corr * (exact - base);
            den += corr * corr;
        }
    }
    cal.alpha = den > 0.0 ? num / den : 0.0;
    for (const auto& r : cal.rows) {
        cal.max_residual_uncorrected = std::max(cal.max_residual_uncorrected, std::abs(r.exact - r.base));
        cal.max_residual_corrected =
            std::max(cal.max_residual_corrected, std::abs(r.exact - r.base - cal.alpha * r.correction));
    }
    return cal;
}

std::string symbol_fixture_text(const SymbolCalibration& cal) {
    std::ostringstream os;
    os << "# pitwa symbol calibration fixture v1\n";
    os << "# n = " << cal.n << "\n";
    char buf[160];
    double worst = 0.0;
    for (const auto& r : cal.residuals) worst = std::max(worst, std::abs(r.twa - r.exact) / r.tolerance);
    std::snprintf(buf, sizeof buf,
                  "# oracle_tolerance = 5 SE + %.3g (first moments), 5 SE + %.3g + %.3g n (J^2); samples = %zu\n",
                  cal.options.first_moment_tol, cal.options.j_squared_tol, cal.options.j_squared_tol_per_n,
                  cal.options.samples);
    os << buf;
    std::snprintf(buf, sizeof buf, "# worst_residual_over_tolerance = %.3f\n", worst);
    os << buf;
    os << "J,channel,re,im\n";
    for (std::size_t c = 0; c < cal.channel_names.size(); ++c) {
        for (std::size_t g = 0; g < cal.j_grid.size(); ++g) {
            std::snprintf(buf, sizeof buf, "%.1f,%s,%.17g,%.17g\n", cal.j_grid[g], cal.channel_names[c].c_str(),
                          cal.amplitudes[c][g].real(), cal.amplitudes[c][g].imag());
            os << buf;
        }
    }
    return os.str();
}

std::string second_moment_fixture_text(const SecondMomentCalibration& cal) {
    std::ostringstream os;
    char buf[160];
    os << "# pitwa second-moment calibration v1\n";
    std::snprintf(buf, sizeof buf, "# alpha = %.6f\n", cal.alpha);
    os << buf;
    os << "n,theta,exact,base,correction\n";
    for (const auto& r : cal.rows) {
        std::snprintf(buf, sizeof buf, "%d,%.6f,%.10g,%.10g,%.10g\n", r.n, r.theta, r.exact, r.base, r.correction);
        os << buf;
    }
    return os.str();
}

}  // namespace pitwa
