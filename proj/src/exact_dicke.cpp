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

#include "pitwa/exact_dicke.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace pitwa {

namespace {

using State = std::vector<cd>;

SparseC identity(int d) {
    SparseC id(d, d);
    id.setIdentity();
    return id;
}

SparseC from_triplets(int rows, int cols, const std::vector<Eigen::Triplet<cd>>& t) {
    SparseC m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Integrates dv/dt = L v and hands the state at each requested time to sink.
template <class Sink>
void integrate_linear(const SparseC& l, Eigen::VectorXcd v0, const std::vector<double>& times,
                      const ExactOptions& opts, Sink&& sink) {
    namespace ode = boost::numeric::odeint;
    if (times.empty()) return;
    State x(v0.data(), v0.data() + v0.size());
    auto rhs = [&l](const State& xs, State& dx, double) {
        Eigen::Map<const Eigen::VectorXcd> in(xs.data(), static_cast<Eigen::Index>(xs.size()));
        Eigen::Map<Eigen::VectorXcd> out(dx.data(), static_cast<Eigen::Index>(dx.size()));
        out.noalias() = l * in;
    };
    auto observer = [&sink](const State& xs, double t) {
        Eigen::Map<const Eigen::VectorXcd> v(xs.data(), static_cast<Eigen::Index>(xs.size()));
        sink(t, Eigen::VectorXcd(v));
    };
    if (times.size() == 1 || times.back() == times.front()) {
        for (double t : times) observer(x, t);
        return;
    }
    auto stepper = ode::make_dense_output(opts.atol, opts.rtol, ode::runge_kutta_dopri5<State>());
    const double dt0 = std::max(1e-6, 1e-3 * (times.back() - times.front()));
    ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), dt0, observer);
}

cd trace_product(const Eigen::VectorXcd& rho, int d, const SparseC& op) {
    // Tr(rho O) = sum_{a,b} rho[a,b] O[b,a]
    cd acc{0.0, 0.0};
    for (int b = 0; b < op.outerSize(); ++b) {
        for (SparseC::InnerIterator it(op, b); it; ++it) {
            const auto a = static_cast<int>(it.col());
            acc += rho[static_cast<Eigen::Index>(a) * d + b] * it.value();
        }
    }
    return acc;
}

}  // namespace

SuperOperatorBuilder::SuperOperatorBuilder(std::vector<int> dims, bool diagonal_only)
    : dims_(std::move(dims)), diagonal_(diagonal_only) {
    offsets_.reserve(dims_.size());
    for (int d : dims_) {
        offsets_.push_back(size_);
        size_ += diagonal_ ? d : static_cast<long>(d) * d;
    }
}

long SuperOperatorBuilder::index(int block, int row, int col) const {
    const auto b = static_cast<std::size_t>(block);
    if (diagonal_) return row == col ? offsets_[b] + row : -1;
    return offsets_[b] + static_cast<long>(row) * dims_[b] + col;
}

void SuperOperatorBuilder::add(int dst, int src, const SparseC& a, const SparseC& b, cd coeff) {
    // dst(r, c) += coeff A(r, x) src(x, y) B(y, c)
    for (int r = 0; r < a.outerSize(); ++r) {
        for (SparseC::InnerIterator ia(a, r); ia; ++ia) {
            const auto x = static_cast<int>(ia.col());
            for (int y = 0; y < b.outerSize(); ++y) {
                for (SparseC::InnerIterator ib(b, y); ib; ++ib) {
                    const auto c = static_cast<int>(ib.col());
                    const long row = index(dst, r, c);
                    const long col = index(src, x, y);
                    if (row < 0 || col < 0) continue;
                    triplets_.emplace_back(row, col, coeff * ia.value() * ib.value());
                }
            }
        }
    }
}

void SuperOperatorBuilder::add_hamiltonian(int block, const SparseC& h) {
    const SparseC id = identity(dims_[static_cast<std::size_t>(block)]);
    add(block, block, h, id, -kI);
    add(block, block, id, h, kI);
}

void SuperOperatorBuilder::add_dissipator(int block, const SparseC& x, double rate) {
    add_transfer(block, block, x, rate);
}

void SuperOperatorBuilder::add_transfer(int dst, int src, const SparseC& x, double rate) {
    if (rate == 0.0) return;
    const SparseC xd = SparseC(x.adjoint());
    const SparseC xdx = SparseC(xd * x);
    const SparseC id = identity(dims_[static_cast<std::size_t>(src)]);
    add(dst, src, x, xd, rate);
    add(src, src, xdx, id, -0.5 * rate);
    add(src, src, id, xdx, -0.5 * rate);
}

SparseC SuperOperatorBuilder::build() const {
    SparseC l(size_, size_);
    l.setFromTriplets(triplets_.begin(), triplets_.end());
    l.makeCompressed();
    return l;
}

DickeSpace::DickeSpace(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("DickeSpace needs n >= 1");
    for (int tj = n; tj >= 0; tj -= 2) two_j_.push_back(tj);
}

int DickeSpace::block_of(int two_j) const {
    if (two_j < 0 || two_j > n_ || (n_ - two_j) % 2 != 0) return -1;
    return (n_ - two_j) / 2;
}

std::vector<int> DickeSpace::dims() const {
    std::vector<int> d;
    for (int b = 0; b < blocks(); ++b) d.push_back(dim(b));
    return d;
}

double DickeSpace::log_degeneracy(int block) const {
    const int k = (n_ - two_j(block)) / 2;
    const double a = log_binomial(n_, k);
    const double b = log_binomial(n_, k - 1);
    if (!std::isfinite(b)) return a;
    return a + std::log1p(-std::exp(b - a));
}

SparseC DickeSpace::jz(int block) const {
    const int d = dim(block);
    std::vector<Eigen::Triplet<cd>> t;
    for (int k = 0; k < d; ++k) t.emplace_back(k, k, j(block) - k);
    return from_triplets(d, d, t);
}

SparseC DickeSpace::jminus(int block) const {
    const int d = dim(block);
    const double jj = j(block);
    std::vector<Eigen::Triplet<cd>> t;
    for (int k = 0; k + 1 < d; ++k) {
        const double m = jj - k;
        t.emplace_back(k + 1, k, std::sqrt(jj * (jj + 1.0) - m * (m - 1.0)));
    }
    return from_triplets(d, d, t);
}

SparseC DickeSpace::jplus(int block) const { return SparseC(jminus(block).adjoint()); }

double clebsch_gordan_1(int two_j, int two_m, int q, int j) {
    const double jj = 0.5 * two_j;
    const double m = 0.5 * two_m;
    const double jt = jj + j;
    const double mt = m + q;
    if (jt < 0.0 || std::abs(mt) > jt + 1e-12 || std::abs(m) > jj + 1e-12) return 0.0;
    if (two_j == 0 && j <= 0) return 0.0;
    auto root = [](double x) { return std::sqrt(std::max(0.0, x)); };
    if (q == -1) {
        if (j == 0) return root((jj + m) * (jj - m + 1.0) / (2.0 * jj * (jj + 1.0)));
        if (j == -1) return root((jj + m) * (jj + m - 1.0) / (2.0 * jj * (2.0 * jj + 1.0)));
        return root((jj - m + 1.0) * (jj - m + 2.0) / ((2.0 * jj + 1.0) * (2.0 * jj + 2.0)));
    }
    if (q == 1) {
        if (j == 0) return -root((jj - m) * (jj + m + 1.0) / (2.0 * jj * (jj + 1.0)));
        if (j == -1) return root((jj - m) * (jj - m - 1.0) / (2.0 * jj * (2.0 * jj + 1.0)));
        return root((jj + m + 1.0) * (jj + m + 2.0) / ((2.0 * jj + 1.0) * (2.0 * jj + 2.0)));
    }
    if (j == 0) return m / std::sqrt(jj * (jj + 1.0));
    if (j == -1) return -root((jj - m) * (jj + m) / (jj * (2.0 * jj + 1.0)));
    return root((jj - m + 1.0) * (jj + m + 1.0) / ((jj + 1.0) * (2.0 * jj + 1.0)));
}

SparseC local_jump_block(const DickeSpace& space, int block, int q, int j) {
    const int two_j = space.two_j(block);
    const int dst = space.block_of(two_j + 2 * j);
    if (dst < 0) return SparseC();
    const double jj = 0.5 * two_j;
    const double n = space.n();
    // Reduced matrix elements of sum_n sigma_n^q between adjacent sectors.
    const double reduced = j == 0 ? 0.5 * n + 1.0 : (j < 0 ? 0.5 * n + jj + 1.0 : 0.5 * n - jj);
    const double pref = std::sqrt(AmplitudeModel::kappa(q) * reduced);
    const int d = space.dim(block);
    const int dt = space.dim(dst);
    std::vector<Eigen::Triplet<cd>> t;
    for (int k = 0; k < d; ++k) {
        const int two_m = two_j - 2 * k;
        const int two_mt = two_m + 2 * q;
        const int two_jt = two_j + 2 * j;
        if (std::abs(two_mt) > two_jt) continue;
        const int kt = (two_jt - two_mt) / 2;
        const double v = pref * clebsch_gordan_1(two_j, two_m, q, j);
        if (v != 0.0) t.emplace_back(kt, k, v);
    }
    return from_triplets(dt, d, t);
}

cd DickeBlockMatrix::element(int block, int row, int col) const {
    long off = 0;
    for (int b = 0; b < block; ++b) {
        const long d = space->dim(b);
        off += diagonal_only ? d : d * d;
    }
    if (diagonal_only) return row == col ? data[off + row] : cd{0.0, 0.0};
    return data[off + static_cast<long>(row) * space->dim(block) + col];
}

Eigen::MatrixXcd DickeBlockMatrix::block_matrix(int block) const {
    const int d = space->dim(block);
    Eigen::MatrixXcd m(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) m(r, c) = element(block, r, c);
    }
    return m;
}

double DickeBlockMatrix::trace() const {
    double tr = 0.0;
    long off = 0;
    for (int b = 0; b < space->blocks(); ++b) {
        const int d = space->dim(b);
        for (int k = 0; k < d; ++k) tr += data[diagonal_only ? off + k : off + static_cast<long>(k) * d + k].real();
        off += diagonal_only ? d : static_cast<long>(d) * d;
    }
    return tr;
}

bool diagonal_friendly(const SystemSpec& spec) {
    return spec.hamiltonian != HamiltonianKind::TransverseField && spec.omega_drive == 0.0;
}

LiouvillianOp::LiouvillianOp(const SystemSpec& spec, bool diagonal_only)
    : space_(spec.n), diagonal_(diagonal_only) {
    SuperOperatorBuilder sb(space_.dims(), diagonal_only);
    const double phase = spec.phi_prop;  // single site sits at m = 1
    for (int b = 0; b < space_.blocks(); ++b) {
        const SparseC jm = space_.jminus(b);
        const SparseC jp = space_.jplus(b);
        const SparseC jz = space_.jz(b);
        SparseC h(space_.dim(b), space_.dim(b));
        if (spec.hamiltonian == HamiltonianKind::TransverseField) h += SparseC(0.5 * spec.omega * (jp + jm));
        if (spec.omega_drive != 0.0) {
            h += SparseC(spec.omega_drive * (std::exp(-kI * phase) * jp + std::exp(kI * phase) * jm));
        }
        if (h.nonZeros() > 0) sb.add_hamiltonian(b, h);
        sb.add_dissipator(b, jm, spec.collective_rate(-1) + spec.chain_gamma);
        sb.add_dissipator(b, jz, spec.collective_rate(0));
        sb.add_dissipator(b, jp, spec.collective_rate(1));
        for (int q = -1; q <= 1; ++q) {
            const double r = spec.local_rate(q);
            if (r == 0.0) continue;
            for (int j = -1; j <= 1; ++j) {
                const int dst = space_.block_of(space_.two_j(b) + 2 * j);
                if (dst < 0) continue;
                sb.add_transfer(dst, b, local_jump_block(space_, b, q, j), r);
            }
        }
    }
    matrix_ = sb.build();
}

LiouvillianOp build_liouvillian(const SystemSpec& spec, const ExactOptions& opts) {
    spec.validate();
    if (spec.M != 1) throw std::invalid_argument("exact Dicke solver handles a single ensemble");
    const bool diag = diagonal_friendly(spec);
    const std::size_t cap = diag ? opts.diagonal_cap : opts.general_cap;
    if (static_cast<std::size_t>(spec.n) > cap) {
        throw std::invalid_argument("N = " + std::to_string(spec.n) + " exceeds the exact-solver cap " +
                                    std::to_string(cap));
    }
    return LiouvillianOp(spec, diag);
}

DickeBlockMatrix coherent_state(const LiouvillianOp& op, double theta, double phi) {
    const DickeSpace& sp = op.space();
    const int d = sp.dim(0);
    const int n = sp.n();
    Eigen::VectorXcd c(d);
    for (int k = 0; k < d; ++k) {
        const int up = n - k;  // J + M
        const double logmag = 0.5 * log_binomial(n, k) +
                              (up > 0 ? up * std::log(std::abs(std::cos(0.5 * theta))) : 0.0) +
                              (k > 0 ? k * std::log(std::abs(std::sin(0.5 * theta))) : 0.0);
        double sign = 1.0;
        if (std::cos(0.5 * theta) < 0.0 && up % 2) sign = -sign;
        if (std::sin(0.5 * theta) < 0.0 && k % 2) sign = -sign;
        const double m = 0.5 * n - k;
        c[k] = sign * std::exp(logmag) * std::exp(-kI * (m * phi));
    }
    DickeBlockMatrix rho;
    rho.space = &sp;
    rho.diagonal_only = op.diagonal_only();
    rho.data = Eigen::VectorXcd::Zero(op.matrix().rows());
    for (int r = 0; r < d; ++r) {
        for (int col = 0; col < d; ++col) {
            if (op.diagonal_only()) {
                if (r == col) rho.data[r] = std::norm(c[r]);
            } else {
                rho.data[static_cast<long>(r) * d + col] = c[r] * std::conj(c[col]);
            }
        }
    }
    return rho;
}

Moments measure_moments(const DickeBlockMatrix& rho) {
    const DickeSpace& sp = *rho.space;
    Moments m;
    cd jminus{0.0, 0.0};
    long off = 0;
    for (int b = 0; b < sp.blocks(); ++b) {
        const int d = sp.dim(b);
        const double jj = sp.j(b);
        for (int k = 0; k < d; ++k) {
            const double mm = jj - k;
            const long ik = rho.diagonal_only ? off + k : off + static_cast<long>(k) * d + k;
            const double p = rho.data[ik].real();
            m.jz += mm * p;
            m.j2 += jj * (jj + 1.0) * p;
            m.jpjm += (jj * (jj + 1.0) - mm * (mm - 1.0)) * p;
            if (!rho.diagonal_only && k + 1 < d) {
                // <J-> = sum rho[k, k+1] <k+1|J-|k>
                jminus += rho.data[off + static_cast<long>(k) * d + k + 1] * std::sqrt(jj * (jj + 1.0) - mm * (mm - 1.0));
            }
        }
        off += rho.diagonal_only ? d : static_cast<long>(d) * d;
    }
    m.jx = jminus.real();
    m.jy = -jminus.imag();
    return m;
}

void store_single_ensemble(ObservableTable& table, std::size_t k, const Moments& m, int n) {
    const double nd = n;
    const std::pair<const char*, double> cols[] = {
        {"Jz", m.jz},
        {"Jx", m.jx},
        {"Jy", m.jy},
        {"J2", m.j2},
        {"JpJm", m.jpjm},
        {"xi2", squeezing_xi2(m, n)},
        {"s", subradiance_s(m, n)},
        {"Jz_per_N", m.jz / nd},
        {"JpJm_per_N2", m.jpjm / (nd * nd)},
    };
    for (const auto& [name, v] : cols) {
        const std::size_t i = table.ensure(name);
        table.values[i][k] = v;
        table.errors[i][k] = 0.0;
    }
}

std::vector<DickeBlockMatrix> evolve_states(const LiouvillianOp& op, const DickeBlockMatrix& rho0,
                                            const std::vector<double>& times, const ExactOptions& opts) {
    std::vector<DickeBlockMatrix> out;
    integrate_linear(op.matrix(), rho0.data, times, opts, [&](double, Eigen::VectorXcd v) {
        DickeBlockMatrix r = rho0;
        r.data = std::move(v);
        out.push_back(std::move(r));
    });
    return out;
}

ObservableTable evolve(const LiouvillianOp& op, const DickeBlockMatrix& rho0, const std::vector<double>& times,
                       const ExactOptions& opts) {
    ObservableTable table;
    table.times = times;
    table.alive.assign(times.size(), 0);
    table.small_spin_fraction.assign(times.size(), 0.0);
    std::size_t k = 0;
    const int n = op.space().n();
    integrate_linear(op.matrix(), rho0.data, times, opts, [&](double, const Eigen::VectorXcd& v) {
        DickeBlockMatrix r;
        r.space = rho0.space;
        r.diagonal_only = rho0.diagonal_only;
        r.data = v;
        store_single_ensemble(table, k, measure_moments(r), n);
        ++k;
    });
    return table;
}

ObservableTable brute_force_reference(const SystemSpec& spec, const std::vector<double>& times, double theta,
                                      double phi, const ExactOptions& opts) {
    spec.validate();
    const int ntot = spec.total_emitters();
    if (ntot > 6) throw std::invalid_argument("brute-force oracle is capped at 6 emitters");
    if (spec.M > 2) throw std::invalid_argument("brute-force oracle supports M <= 2");
    const int dim = 1 << ntot;

    // Bit k of a basis index is 0 when emitter k is excited.
    std::vector<SparseC> sm(static_cast<std::size_t>(ntot));
    std::vector<SparseC> sz(static_cast<std::size_t>(ntot));
    for (int k = 0; k < ntot; ++k) {
        std::vector<Eigen::Triplet<cd>> tm, tz;
        for (int s = 0; s < dim; ++s) {
            const bool excited = ((s >> k) & 1) == 0;
            tz.emplace_back(s, s, excited ? 1.0 : -1.0);
            if (excited) tm.emplace_back(s | (1 << k), s, 1.0);
        }
        sm[static_cast<std::size_t>(k)] = from_triplets(dim, dim, tm);
        sz[static_cast<std::size_t>(k)] = from_triplets(dim, dim, tz);
    }
    std::vector<SparseC> jm(static_cast<std::size_t>(spec.M), SparseC(dim, dim));
    std::vector<SparseC> jz(static_cast<std::size_t>(spec.M), SparseC(dim, dim));
    for (int m = 0; m < spec.M; ++m) {
        for (int k = m * spec.n; k < (m + 1) * spec.n; ++k) {
            jm[static_cast<std::size_t>(m)] += sm[static_cast<std::size_t>(k)];
            jz[static_cast<std::size_t>(m)] += SparseC(0.5 * sz[static_cast<std::size_t>(k)]);
        }
    }
    auto jp = [&](int m) { return SparseC(jm[static_cast<std::size_t>(m)].adjoint()); };

    SparseC h(dim, dim);
    for (int m = 0; m < spec.M; ++m) {
        const double pos = m + 1.0;
        if (spec.hamiltonian == HamiltonianKind::TransverseField) {
            h += SparseC(0.5 * spec.omega * (jp(m) + jm[static_cast<std::size_t>(m)]));
        }
        if (spec.omega_drive != 0.0) {
            // Drive co-propagating with L_F: e^{-i phi m} J+ + h.c.
            h += SparseC(spec.omega_drive * (std::exp(-kI * (spec.phi_prop * pos)) * jp(m) +
                                             std::exp(kI * (spec.phi_prop * pos)) * jm[static_cast<std::size_t>(m)]));
        }
        if (spec.hamiltonian == HamiltonianKind::ChainSine) {
            for (int mp = 0; mp < spec.M; ++mp) {
                const double w = 0.5 * spec.chain_gamma * std::sin(spec.phi_prop * std::abs(m - mp));
                if (w != 0.0) h += SparseC(w * (jp(m) * jm[static_cast<std::size_t>(mp)]));
            }
        }
    }
    SparseC lf(dim, dim), lb(dim, dim);
    for (int m = 0; m < spec.M; ++m) {
        const double pos = m + 1.0;
        lf += SparseC(std::exp(kI * (spec.phi_prop * pos)) * jm[static_cast<std::size_t>(m)]);
        lb += SparseC(std::exp(-kI * (spec.phi_prop * pos)) * jm[static_cast<std::size_t>(m)]);
    }

    SuperOperatorBuilder sb({dim}, false);
    if (h.nonZeros() > 0) sb.add_hamiltonian(0, h);
    for (int m = 0; m < spec.M; ++m) {
        sb.add_dissipator(0, jm[static_cast<std::size_t>(m)], spec.collective_rate(-1));
        sb.add_dissipator(0, jz[static_cast<std::size_t>(m)], spec.collective_rate(0));
        sb.add_dissipator(0, jp(m), spec.collective_rate(1));
    }
    if (spec.chain_gamma > 0.0) {
        sb.add_dissipator(0, lf, 0.5 * spec.chain_gamma);
        sb.add_dissipator(0, lb, 0.5 * spec.chain_gamma);
    }
    for (int k = 0; k < ntot; ++k) {
        const auto& s = sm[static_cast<std::size_t>(k)];
        sb.add_dissipator(0, s, spec.local_rate(-1));
        sb.add_dissipator(0, sz[static_cast<std::size_t>(k)], spec.local_rate(0));
        sb.add_dissipator(0, SparseC(s.adjoint()), spec.local_rate(1));
    }
    const SparseC l = sb.build();

    // Product of single-emitter coherent states.
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    const cd ue = std::cos(0.5 * theta);
    const cd ug = std::exp(kI * phi) * std::sin(0.5 * theta);
    for (int s = 0; s < dim; ++s) {
        cd a{1.0, 0.0};
        for (int k = 0; k < ntot; ++k) a *= ((s >> k) & 1) ? ug : ue;
        psi[s] = a;
    }
    Eigen::VectorXcd rho0(static_cast<Eigen::Index>(dim) * dim);
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) rho0[static_cast<Eigen::Index>(a) * dim + b] = psi[a] * std::conj(psi[b]);
    }

    SparseC jm_tot(dim, dim), jz_tot(dim, dim);
    for (int m = 0; m < spec.M; ++m) {
        jm_tot += jm[static_cast<std::size_t>(m)];
        jz_tot += jz[static_cast<std::size_t>(m)];
    }
    const SparseC jp_tot = SparseC(jm_tot.adjoint());
    const SparseC jpjm_tot = SparseC(jp_tot * jm_tot);
    const SparseC jx_tot = SparseC(0.5 * (jp_tot + jm_tot));
    const SparseC jy_tot = SparseC(cd(0.0, -0.5) * (jp_tot - jm_tot));
    const SparseC j2_tot = SparseC(jx_tot * jx_tot + jy_tot * jy_tot + jz_tot * jz_tot);
    const SparseC i_f = SparseC(SparseC(lf.adjoint()) * lf);
    const SparseC i_b = SparseC(SparseC(lb.adjoint()) * lb);
    std::vector<SparseC> site_i;
    for (int m = 0; m < spec.M; ++m) site_i.push_back(SparseC(jp(m) * jm[static_cast<std::size_t>(m)]));

    ObservableTable table;
    table.times = times;
    table.alive.assign(times.size(), 0);
    table.small_spin_fraction.assign(times.size(), 0.0);
    std::size_t k = 0;
    integrate_linear(l, rho0, times, opts, [&](double, const Eigen::VectorXcd& v) {
        Moments mo;
        mo.jz = trace_product(v, dim, jz_tot).real();
        mo.jx = trace_product(v, dim, jx_tot).real();
        mo.jy = trace_product(v, dim, jy_tot).real();
        mo.j2 = trace_product(v, dim, j2_tot).real();
        mo.jpjm = trace_product(v, dim, jpjm_tot).real();
        store_single_ensemble(table, k, mo, ntot);
        auto put = [&](const std::string& name, double val) {
            const std::size_t i = table.ensure(name);
            table.values[i][k] = val;
        };
        put("trace", trace_product(v, dim, identity(dim)).real());
        if (spec.M > 1 || spec.chain_gamma > 0.0) {
            const double nt = ntot;
            const double f = trace_product(v, dim, i_f).real();
            const double b = trace_product(v, dim, i_b).real();
            put("I_F", f);
            put("I_B", b);
            put("I_F_per_Ntot2", f / (nt * nt));
            put("forward_fraction", f + b > 1e-12 ? f / (f + b) : kUndefined);
            for (int m = 0; m < spec.M; ++m) {
                put("Jz[" + std::to_string(m + 1) + "]", trace_product(v, dim, jz[static_cast<std::size_t>(m)]).real());
                put("I[" + std::to_string(m + 1) + "]", trace_product(v, dim, site_i[static_cast<std::size_t>(m)]).real());
            }
        }
        ++k;
    });
    return table;
}

}  // namespace pitwa
