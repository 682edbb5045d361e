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

#include "pitwa/twa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "pitwa/rng.hpp"

namespace pitwa {

namespace {

constexpr std::uint32_t kSamplingChannel = 0x80000000u;

inline Vec3 load3(const double* p) { return Vec3(p[0], p[1], p[2]); }

inline BodyFrame load_frame(const double* z, int m) {
    BodyFrame f;
    f.s = load3(z + 6 * m);
    f.e1 = load3(z + 6 * m + 3);
    return f;
}

// inc[6m..6m+5] += Re[coeff * (ds, de1)]
inline void add_field(double* inc, int m, const FrameField& ff, cd coeff) {
    double* o = inc + 6 * m;
    for (int a = 0; a < 3; ++a) {
        o[a] += (coeff * ff.ds[a]).real();
        o[3 + a] += (coeff * ff.de1[a]).real();
    }
}

std::string format_p(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "S(p=%.6f)", p);
    return buf;
}

}  // namespace

void IntegratorConfig::validate() const {
    if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be >= 0");
    for (double t : record_times) {
        if (t < 0.0 || t > t_max + 1e-12) throw std::invalid_argument("record time outside [0, t_max]");
    }
    if (!std::is_sorted(record_times.begin(), record_times.end())) {
        throw std::invalid_argument("record times must be sorted");
    }
    for (const auto& seg : dt_schedule) {
        if (!(seg.dt > 0.0)) throw std::invalid_argument("dt schedule entries need dt > 0");
    }
    if (dt < 0.0) throw std::invalid_argument("dt must be > 0");
}

double IntegratorConfig::dt_at(double t, const SystemSpec& spec) const {
    double out = dt > 0.0 ? dt : 1e-3 / max_rate_scale(spec);
    for (const auto& seg : dt_schedule) {
        if (t + 1e-12 >= seg.from) out = seg.dt;
    }
    return out;
}

BodyFrame TrajectoryBatch::frame(std::size_t traj, int m) const {
    return load_frame(state.data() + traj * 6 * static_cast<std::size_t>(M), m);
}

PhasePoint TrajectoryBatch::point(std::size_t traj, int m) const { return from_frame(frame(traj, m)); }

void TrajectoryBatch::set_frame(std::size_t traj, int m, const BodyFrame& f) {
    double* z = state.data() + traj * 6 * static_cast<std::size_t>(M) + 6 * static_cast<std::size_t>(m);
    for (int a = 0; a < 3; ++a) {
        z[a] = f.s[a];
        z[3 + a] = f.e1[a];
    }
}

long TrajectoryBatch::alive() const {
    return static_cast<long>(std::count(failed.begin(), failed.end(), std::uint8_t{0}));
}

TwaModel::TwaModel(SystemSpec spec) : spec_(std::move(spec)), amp_(spec_.n), channels_(enumerate_channels(spec_)) {
    spec_.validate();
    collective_only_ = spec_.gamma == std::array<double, 3>{0.0, 0.0, 0.0};
    for (int m = 0; m < spec_.M; ++m) site_phase_fwd_.push_back(std::exp(kI * (spec_.phi_prop * (m + 1.0))));
}

double TwaModel::hamiltonian(const double* z) const {
    double h = 0.0;
    for (int m = 0; m < spec_.M; ++m) {
        const double* s = z + 6 * m;
        if (spec_.hamiltonian == HamiltonianKind::TransverseField) h += spec_.omega * s[0];
        if (spec_.omega_drive != 0.0) {
            // The drive excites the mode that L_F emits into: e^{-i phi m} J+ + h.c.
            const cd c = std::conj(site_phase_fwd_[static_cast<std::size_t>(m)]);
            h += 2.0 * spec_.omega_drive * (c.real() * s[0] - c.imag() * s[1]);
        }
    }
    if (spec_.hamiltonian == HamiltonianKind::ChainSine) {
        for (int m = 0; m < spec_.M; ++m) {
            for (int mp = m + 1; mp < spec_.M; ++mp) {
                const double w = spec_.chain_gamma * std::sin(spec_.phi_prop * (mp - m));
                h += w * (z[6 * m] * z[6 * mp] + z[6 * m + 1] * z[6 * mp + 1]);
            }
        }
    }
    return h;
}

void TwaModel::hamiltonian_gradient_direct(const double* z, double* grad) const {
    std::fill(grad, grad + 3 * spec_.M, 0.0);
    for (int m = 0; m < spec_.M; ++m) {
        double* g = grad + 3 * m;
        if (spec_.hamiltonian == HamiltonianKind::TransverseField) g[0] += spec_.omega;
        if (spec_.omega_drive != 0.0) {
            const cd c = std::conj(site_phase_fwd_[static_cast<std::size_t>(m)]);
            g[0] += 2.0 * spec_.omega_drive * c.real();
            g[1] -= 2.0 * spec_.omega_drive * c.imag();
        }
        if (spec_.hamiltonian == HamiltonianKind::ChainSine) {
            for (int mp = 0; mp < spec_.M; ++mp) {
                if (mp == m) continue;
                const double w = spec_.chain_gamma * std::sin(spec_.phi_prop * std::abs(m - mp));
                g[0] += w * z[6 * mp];
                g[1] += w * z[6 * mp + 1];
            }
        }
    }
}

void TwaModel::hamiltonian_gradient(const double* z, double* grad) const {
    if (spec_.hamiltonian != HamiltonianKind::ChainSine || spec_.M < 8) {
        hamiltonian_gradient_direct(z, grad);
        return;
    }
    // sum_{m'} sin(phi |m - m'|) x_{m'} = Im(A_m + B_m) with the one-sided sums
    // A_m = sum_{m'<m} e^{i phi (m - m')} x_{m'} and B_m = sum_{m'>m} e^{i phi (m' - m)} x_{m'},
    // each built by a stable recursion. O(M) instead of O(M^2).
    const int mm = spec_.M;
    const cd rot = std::exp(kI * spec_.phi_prop);
    std::vector<cd> ax(static_cast<std::size_t>(mm)), ay(static_cast<std::size_t>(mm));
    cd sx{0.0, 0.0}, sy{0.0, 0.0};
    for (int m = 0; m < mm; ++m) {
        ax[static_cast<std::size_t>(m)] = sx;
        ay[static_cast<std::size_t>(m)] = sy;
        sx = rot * (sx + z[6 * m]);
        sy = rot * (sy + z[6 * m + 1]);
    }
    sx = sy = cd{0.0, 0.0};
    for (int m = mm - 1; m >= 0; --m) {
        ax[static_cast<std::size_t>(m)] += sx;
        ay[static_cast<std::size_t>(m)] += sy;
        sx = rot * (sx + z[6 * m]);
        sy = rot * (sy + z[6 * m + 1]);
    }
    for (int m = 0; m < mm; ++m) {
        double* g = grad + 3 * m;
        g[0] = spec_.chain_gamma * ax[static_cast<std::size_t>(m)].imag();
        g[1] = spec_.chain_gamma * ay[static_cast<std::size_t>(m)].imag();
        g[2] = 0.0;
        if (spec_.omega_drive != 0.0) {
            const cd c = std::conj(site_phase_fwd_[static_cast<std::size_t>(m)]);
            g[0] += 2.0 * spec_.omega_drive * c.real();
            g[1] -= 2.0 * spec_.omega_drive * c.imag();
        }
    }
}

cd TwaModel::channel_symbol(std::size_t k, const double* z) const {
    const ChannelSpec& ch = channels_[k];
    switch (ch.kind) {
        case ChannelKind::Collective:
            return linear_field(collective_direction(ch.q), load_frame(z, ch.ensemble)).symbol;
        case ChannelKind::CollectiveDirectional: {
            const CVec3 w = collective_direction(ch.q);
            cd l{0.0, 0.0};
            for (int m = 0; m < spec_.M; ++m) {
                const cd c = ch.direction == Direction::Forward ? site_phase_fwd_[static_cast<std::size_t>(m)]
                                                                : std::conj(site_phase_fwd_[static_cast<std::size_t>(m)]);
                l += c * (w[0] * z[6 * m] + w[1] * z[6 * m + 1] + w[2] * z[6 * m + 2]);
            }
            return l;
        }
        default:
            return local_field(ch.q, ch.j, load_frame(z, ch.ensemble), amp_).symbol;
    }
}

TwaModel::Fields TwaModel::drift_and_diffusion(const double* z) const {
    const std::size_t dim = dimension();
    Fields f;
    f.drift = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    std::vector<double> grad(static_cast<std::size_t>(3 * spec_.M));
    hamiltonian_gradient(z, grad.data());
    for (int m = 0; m < spec_.M; ++m) {
        const Vec3 g = load3(grad.data() + 3 * m);
        const BodyFrame fr = load_frame(z, m);
        f.drift.segment<3>(6 * m) += g.cross(fr.s);
        f.drift.segment<3>(6 * m + 3) += g.cross(fr.e1);
    }
    for (std::size_t k = 0; k < channels_.size(); ++k) {
        const ChannelSpec& ch = channels_[k];
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
        cd l{0.0, 0.0};
        auto put = [&](int m, const FrameField& ff, cd c) {
            v.segment<3>(6 * m) += c * ff.ds;
            v.segment<3>(6 * m + 3) += c * ff.de1;
        };
        if (ch.kind == ChannelKind::Local) {
            const FrameField ff = local_field(ch.q, ch.j, load_frame(z, ch.ensemble), amp_);
            l = ff.symbol;
            put(ch.ensemble, ff, 1.0);
        } else if (ch.kind == ChannelKind::Collective) {
            const FrameField ff = linear_field(collective_direction(ch.q), load_frame(z, ch.ensemble));
            l = ff.symbol;
            put(ch.ensemble, ff, 1.0);
        } else {
            for (int m = 0; m < spec_.M; ++m) {
                const cd c = ch.direction == Direction::Forward ? site_phase_fwd_[static_cast<std::size_t>(m)]
                                                                : std::conj(site_phase_fwd_[static_cast<std::size_t>(m)]);
                const FrameField ff = linear_field(collective_direction(ch.q), load_frame(z, m));
                l += c * ff.symbol;
                put(m, ff, c);
            }
        }
        f.drift += ch.rate * (kI * std::conj(l) * v).real();
        f.noise.push_back(std::sqrt(ch.rate) * v);
    }
    return f;
}

void TwaModel::increment(const double* z, const cd* dw, double dt, double* inc) const {
    const int mm = spec_.M;
    std::fill(inc, inc + 6 * mm, 0.0);
    if (spec_.hamiltonian != HamiltonianKind::None || spec_.omega_drive != 0.0) {
        double gstack[48];
        std::vector<double> gheap;
        double* grad = gstack;
        if (3 * mm > 48) {
            gheap.resize(static_cast<std::size_t>(3 * mm));
            grad = gheap.data();
        }
        hamiltonian_gradient(z, grad);
        for (int m = 0; m < mm; ++m) {
            const Vec3 g = load3(grad + 3 * m);
            const Vec3 ds = g.cross(load3(z + 6 * m));
            const Vec3 de = g.cross(load3(z + 6 * m + 3));
            for (int a = 0; a < 3; ++a) {
                inc[6 * m + a] += dt * ds[a];
                inc[6 * m + 3 + a] += dt * de[a];
            }
        }
    }
    for (std::size_t k = 0; k < channels_.size(); ++k) {
        const ChannelSpec& ch = channels_[k];
        const double r = ch.rate;
        const double sr = std::sqrt(r);
        if (ch.kind == ChannelKind::Local) {
            const FrameField ff = local_field(ch.q, ch.j, load_frame(z, ch.ensemble), amp_);
            if (ff.symbol == cd{0.0, 0.0} && ff.ds.isZero() && ff.de1.isZero()) continue;
            add_field(inc, ch.ensemble, ff, kI * r * dt * std::conj(ff.symbol) + sr * dw[k]);
        } else if (ch.kind == ChannelKind::Collective) {
            const FrameField ff = linear_field(collective_direction(ch.q), load_frame(z, ch.ensemble));
            add_field(inc, ch.ensemble, ff, kI * r * dt * std::conj(ff.symbol) + sr * dw[k]);
        } else {
            const CVec3 w = collective_direction(ch.q);
            cd l{0.0, 0.0};
            for (int m = 0; m < mm; ++m) {
                const cd c = ch.direction == Direction::Forward ? site_phase_fwd_[static_cast<std::size_t>(m)]
                                                                : std::conj(site_phase_fwd_[static_cast<std::size_t>(m)]);
                l += c * (w[0] * z[6 * m] + w[1] * z[6 * m + 1] + w[2] * z[6 * m + 2]);
            }
            const cd coeff = kI * r * dt * std::conj(l) + sr * dw[k];
            for (int m = 0; m < mm; ++m) {
                const cd c = ch.direction == Direction::Forward ? site_phase_fwd_[static_cast<std::size_t>(m)]
                                                                : std::conj(site_phase_fwd_[static_cast<std::size_t>(m)]);
                add_field(inc, m, linear_field(w, load_frame(z, m)), coeff * c);
            }
        }
    }
}

bool TwaModel::heun_step(double* z, const cd* dw, double dt, double* scratch) const {
    const std::size_t dim = dimension();
    double* inc0 = scratch;
    double* inc1 = scratch + dim;
    double* pred = scratch + 2 * dim;
    double* radius = scratch + 3 * dim;
    if (collective_only_) {
        for (int m = 0; m < spec_.M; ++m) radius[m] = Eigen::Map<const Vec3>(z + 6 * m).norm();
    }
    increment(z, dw, dt, inc0);
    for (std::size_t i = 0; i < dim; ++i) pred[i] = z[i] + inc0[i];
    increment(pred, dw, dt, inc1);
    bool finite = true;
    for (std::size_t i = 0; i < dim; ++i) {
        z[i] += 0.5 * (inc0[i] + inc1[i]);
        finite = finite && std::isfinite(z[i]);
    }
    if (!finite) return false;
    // Without local channels the exact flow is a rotation of each spin, so
    // the Casimir is restored exactly instead of accumulating Heun error.
    if (collective_only_) {
        for (int m = 0; m < spec_.M; ++m) {
            Eigen::Map<Vec3> sv(z + 6 * m);
            sv *= radius[m] / sv.norm();
        }
    }
    project_frame(z, spec_.M);
    for (std::size_t i = 0; i < dim; ++i) {
        if (!std::isfinite(z[i])) return false;
    }
    return true;
}

void TwaModel::draw_noise(std::uint64_t seed, std::uint32_t stream, std::uint64_t step, double dt, cd* dw) const {
    const double sq = std::sqrt(dt);
    for (std::size_t k = 0; k < channels_.size(); ++k) {
        const auto xi = normal_pair(StreamId{seed, stream, static_cast<std::uint32_t>(k), step});
        dw[k] = cd(xi[0] * sq, xi[1] * sq);
    }
}

void project_frame(double* z, int M) {
    for (int m = 0; m < M; ++m) {
        double* s = z + 6 * m;
        double* e = s + 3;
        const double r = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
        const double dot = (e[0] * s[0] + e[1] * s[1] + e[2] * s[2]) / r;
        for (int a = 0; a < 3; ++a) e[a] -= dot * s[a] / r;
        const double ne = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
        for (int a = 0; a < 3; ++a) e[a] /= ne;
    }
}

TrajectoryBatch sample_initial(const SystemSpec& spec, const InitialState& init, std::size_t n_traj,
                               std::uint64_t seed) {
    spec.validate();
    if (n_traj < 1) throw std::invalid_argument("n_traj must be >= 1");
    TrajectoryBatch b;
    b.M = spec.M;
    b.seed = seed;
    b.stream_ids.resize(n_traj);
    b.failed.assign(n_traj, 0);
    b.state.assign(n_traj * 6 * static_cast<std::size_t>(spec.M), 0.0);
    const double n = spec.n;
    const double var = init.transverse_variance >= 0.0 ? init.transverse_variance : 0.25 * n + 0.125;
    const double sd = std::sqrt(var);
    const double sz = init.polarization == Polarization::Up ? 0.5 * n : -0.5 * n;
    const Eigen::Matrix3d rot = (Eigen::AngleAxisd(init.phi, Vec3::UnitZ()) *
                                 Eigen::AngleAxisd(init.theta, Vec3::UnitY())).toRotationMatrix();
    for (std::size_t i = 0; i < n_traj; ++i) {
        b.stream_ids[i] = static_cast<std::uint32_t>(i);
        for (int m = 0; m < spec.M; ++m) {
            const auto ch = kSamplingChannel | static_cast<std::uint32_t>(2 * m);
            const auto xi = normal_pair(StreamId{seed, b.stream_ids[i], ch, 0});
            const auto u = uniform_pair(StreamId{seed, b.stream_ids[i], ch + 1, 0});
            PhasePoint z;
            z.s = Vec3(sd * xi[0], sd * xi[1], sz);
            z.psi = 2.0 * std::numbers::pi * u[0];
            BodyFrame f = to_frame(z);
            f.s = rot * f.s;
            f.e1 = rot * f.e1;
            b.set_frame(i, m, f);
        }
    }
    return b;
}

void advance(TrajectoryBatch& batch, const TwaModel& model, const IntegratorConfig& cfg, double t_end,
             unsigned workers) {
    // Step sizes are shared by every trajectory so step indices address the same RNG counters.
    std::vector<double> dts;
    double t = batch.time;
    while (t < t_end - 1e-12) {
        const double h = std::min(cfg.dt_at(t, model.spec()), t_end - t);
        dts.push_back(h);
        t += h;
    }
    if (dts.empty()) return;
    const std::size_t dim = model.dimension();
    const std::size_t nch = model.channels().size();
    const std::uint64_t step0 = batch.steps;
    parallel_for(batch.size(), workers, [&](std::size_t i) {
        if (batch.failed[i]) return;
        std::vector<double> scratch(4 * dim);
        std::vector<cd> dw(nch);
        double* z = batch.state.data() + i * dim;
        for (std::size_t s = 0; s < dts.size(); ++s) {
            model.draw_noise(batch.seed, batch.stream_ids[i], step0 + s + 1, dts[s], dw.data());
            if (!model.heun_step(z, dw.data(), dts[s], scratch.data())) {
                batch.failed[i] = 1;
                return;
            }
        }
    });
    batch.steps += dts.size();
    batch.time = t_end;
}

Estimator::Estimator(const SystemSpec& spec, std::vector<double> p_grid, double onsite_alpha)
    : spec_(spec), p_grid_(std::move(p_grid)), alpha_(onsite_alpha), chain_(spec.is_chain()) {
    if (!chain_) {
        columns_ = {"Sx", "Sy", "Sz", "J2", "JpJm"};
        if (spec_.chain_gamma > 0.0) {
            columns_.push_back("I_F");
            columns_.push_back("I_B");
        }
        return;
    }
    for (int m = 1; m <= spec_.M; ++m) columns_.push_back("Sz[" + std::to_string(m) + "]");
    for (int m = 1; m <= spec_.M; ++m) columns_.push_back("I[" + std::to_string(m) + "]");
    columns_.push_back("I_F");
    columns_.push_back("I_B");
    for (double p : p_grid_) columns_.push_back(format_p(p));
}

void Estimator::sample(const double* z, double* out) const {
    const int mm = spec_.M;
    auto directional = [&](double sign, double& diag_sum) {
        cd acc{0.0, 0.0};
        diag_sum = 0.0;
        for (int m = 0; m < mm; ++m) {
            const double* s = z + 6 * m;
            const cd c = std::exp(kI * (sign * spec_.phi_prop * (m + 1.0)));
            acc += c * cd(s[0], -s[1]);
            diag_sum += onsite_second_moment(load3(s), alpha_) - (s[0] * s[0] + s[1] * s[1]);
        }
        return std::norm(acc) + diag_sum;
    };
    if (!chain_) {
        const Vec3 s = load3(z);
        out[0] = s.x();
        out[1] = s.y();
        out[2] = s.z();
        out[3] = s.squaredNorm() - 0.25;
        out[4] = onsite_second_moment(s, alpha_);
        if (spec_.chain_gamma > 0.0) {
            double d = 0.0;
            out[5] = directional(1.0, d);
            out[6] = directional(-1.0, d);
        }
        return;
    }
    std::size_t c = 0;
    for (int m = 0; m < mm; ++m) out[c++] = z[6 * m + 2];
    for (int m = 0; m < mm; ++m) out[c++] = onsite_second_moment(load3(z + 6 * m), alpha_);
    double d = 0.0;
    out[c++] = directional(1.0, d);
    out[c++] = directional(-1.0, d);
    if (!p_grid_.empty()) {
        std::vector<Vec3> spins(static_cast<std::size_t>(mm));
        for (int m = 0; m < mm; ++m) spins[static_cast<std::size_t>(m)] = load3(z + 6 * m);
        const auto sp = structure_factor_sample(spins, p_grid_, alpha_);
        for (double v : sp) out[c++] = v;
    }
}

void Estimator::reduce(const std::vector<std::vector<double>>& cols, ObservableTable& table, std::size_t k) const {
    auto put = [&](const std::string& name, const Estimate& e) {
        const std::size_t i = table.ensure(name);
        table.values[i][k] = e.mean;
        table.errors[i][k] = e.stderr_;
    };
    auto scaled = [](Estimate e, double f) {
        e.mean *= f;
        e.stderr_ *= std::abs(f);
        return e;
    };
    const int n = spec_.n;
    const double nd = n;
    if (!chain_) {
        const Estimate sx = mean_and_error(cols[0]);
        const Estimate sy = mean_and_error(cols[1]);
        const Estimate sz = mean_and_error(cols[2]);
        const Estimate j2 = mean_and_error(cols[3]);
        const Estimate pm = mean_and_error(cols[4]);
        put("Jz", sz);
        put("Jx", sx);
        put("Jy", sy);
        put("J2", j2);
        put("JpJm", pm);
        put("xi2", jackknife({cols[0], cols[1], cols[2], cols[3]}, [n](const std::vector<double>& v) {
                return squeezing_xi2(Moments{v[0], v[1], v[2], v[3], 0.0}, n);
            }));
        put("s", jackknife({cols[2], cols[4]}, [n](const std::vector<double>& v) {
                return subradiance_s(Moments{0.0, 0.0, v[0], 0.0, v[1]}, n);
            }));
        put("Jz_per_N", scaled(sz, 1.0 / nd));
        put("JpJm_per_N2", scaled(pm, 1.0 / (nd * nd)));
        if (spec_.chain_gamma > 0.0) {
            put("I_F", mean_and_error(cols[5]));
            put("I_B", mean_and_error(cols[6]));
            put("forward_fraction", jackknife({cols[5], cols[6]}, [](const std::vector<double>& v) {
                    return v[0] + v[1] > 1e-12 ? v[0] / (v[0] + v[1]) : kUndefined;
                }));
        }
        return;
    }
    const int mm = spec_.M;
    const double ntot = spec_.total_emitters();
    std::vector<double> total(cols[0].size(), 0.0);
    for (int m = 0; m < mm; ++m) {
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += cols[static_cast<std::size_t>(m)][i];
    }
    const Estimate jz = mean_and_error(total);
    put("Jz", jz);
    put("Jz_per_N", scaled(jz, 1.0 / ntot));
    const std::size_t c_if = static_cast<std::size_t>(2 * mm);
    const Estimate i_f = mean_and_error(cols[c_if]);
    const Estimate i_b = mean_and_error(cols[c_if + 1]);
    put("I_F", i_f);
    put("I_B", i_b);
    put("I_F_per_Ntot2", scaled(i_f, 1.0 / (ntot * ntot)));
    put("I_B_per_Ntot2", scaled(i_b, 1.0 / (ntot * ntot)));
    put("forward_fraction", jackknife({cols[c_if], cols[c_if + 1]}, [](const std::vector<double>& v) {
            return v[0] + v[1] > 1e-12 ? v[0] / (v[0] + v[1]) : kUndefined;
        }));
    for (int m = 0; m < mm; ++m) {
        put("Jz[" + std::to_string(m + 1) + "]", mean_and_error(cols[static_cast<std::size_t>(m)]));
        put("I[" + std::to_string(m + 1) + "]", mean_and_error(cols[static_cast<std::size_t>(mm + m)]));
    }
    for (std::size_t p = 0; p < p_grid_.size(); ++p) put(format_p(p_grid_[p]), mean_and_error(cols[c_if + 2 + p]));
    (void)nd;
}

ObservableTable run_twa(const SystemSpec& spec, const InitialState& init, const IntegratorConfig& cfg,
                        const TwaRunOptions& opts) {
    cfg.validate();
    const TwaModel model(spec);
    const Estimator est(spec, opts.p_grid, opts.onsite_alpha);
    TrajectoryBatch batch = sample_initial(spec, init, opts.n_traj, opts.seed);
    const std::size_t dim = model.dimension();
    const std::size_t ncol = est.columns().size();

    ObservableTable table;
    table.times = cfg.record_times;
    table.alive.assign(table.times.size(), 0);
    table.small_spin_fraction.assign(table.times.size(), 0.0);
    std::vector<double> samples;
    for (std::size_t k = 0; k < cfg.record_times.size(); ++k) {
        advance(batch, model, cfg, cfg.record_times[k], opts.workers);
        const long alive = batch.alive();
        const double failed_fraction = 1.0 - static_cast<double>(alive) / static_cast<double>(batch.size());
        if (failed_fraction > opts.max_failed_fraction) {
            std::ostringstream msg;
            msg << "integrator abort: " << (batch.size() - static_cast<std::size_t>(alive))
                << " of " << batch.size() << " trajectories non-finite by t = " << batch.time;
            throw IntegratorAbort(msg.str());
        }
        samples.assign(batch.size() * ncol, 0.0);
        parallel_for(batch.size(), opts.workers, [&](std::size_t i) {
            if (!batch.failed[i]) est.sample(batch.state.data() + i * dim, samples.data() + i * ncol);
        });
        std::vector<std::vector<double>> cols(ncol);
        for (auto& c : cols) c.reserve(static_cast<std::size_t>(alive));
        long small = 0;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (batch.failed[i]) continue;
            for (std::size_t c = 0; c < ncol; ++c) cols[c].push_back(samples[i * ncol + c]);
            const double* z = batch.state.data() + i * dim;
            bool flag = false;
            for (int m = 0; m < spec.M; ++m) {
                const double r = std::sqrt(z[6 * m] * z[6 * m] + z[6 * m + 1] * z[6 * m + 1] + z[6 * m + 2] * z[6 * m + 2]);
                flag = flag || (r - 0.5 < cfg.flag_threshold_J);
            }
            small += flag ? 1 : 0;
        }
        if (alive == 0) throw IntegratorAbort("no surviving trajectories");
        est.reduce(cols, table, k);
        table.alive[k] = alive;
        table.small_spin_fraction[k] = static_cast<double>(small) / static_cast<double>(alive);
    }
    return table;
}

unsigned default_workers() {
    if (const char* env = std::getenv("PITWA_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace pitwa
