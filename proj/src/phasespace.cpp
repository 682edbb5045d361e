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

#include "pitwa/phasespace.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pitwa {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Bilinear cross product. Eigen's cross() conjugates complex results.
CVec3 cross(const CVec3& a, const CVec3& b) {
    return CVec3(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

void check_index(int v, const char* name) {
    if (v < -1 || v > 1) {
        throw std::invalid_argument(std::string(name) + " must be -1, 0 or +1");
    }
}

// Common chart gradient for A(R) e^{i q phi} d_{qj}(theta) e^{i j psi}.
WeylSymbolValue rotor_symbol(int q, int j, double a, double da, const PhasePoint& z) {
    const Chart c = to_chart(z);
    const double r = c.p_psi;
    const double theta = polar_angle(z.s);
    const double sin_t = std::sin(theta);
    const double cos_t = std::cos(theta);
    const cd phase = std::exp(kI * (q * c.phi + j * c.psi));
    const double d = wigner_d_small(q, j, theta);
    const double dd = wigner_d_small_deriv(q, j, theta);

    WeylSymbolValue out;
    out.value = a * d * phase;
    out.gradient[0] = kI * static_cast<double>(q) * out.value;
    out.gradient[2] = kI * static_cast<double>(j) * out.value;
    // theta depends on the momenta through cos(theta) = p_phi / p_psi.
    const cd dtheta_part = a * dd * phase / (r * sin_t);
    out.gradient[1] = -dtheta_part;
    out.gradient[3] = da * d * phase + dtheta_part * cos_t;
    return out;
}

}  // namespace

double polar_angle(const Vec3& s) {
    const double rho = std::hypot(s.x(), s.y());
    return std::atan2(rho, s.z());
}

double azimuth(const Vec3& s) { return std::atan2(s.y(), s.x()); }

Chart to_chart(const PhasePoint& z) {
    Chart c;
    c.phi = azimuth(z.s);
    c.p_phi = z.s.z();
    c.psi = z.psi;
    c.p_psi = z.s.norm();
    return c;
}

PhasePoint from_chart(const Chart& c) {
    const double rho = std::sqrt(std::max(0.0, c.p_psi * c.p_psi - c.p_phi * c.p_phi));
    PhasePoint z;
    z.s = Vec3(rho * std::cos(c.phi), rho * std::sin(c.phi), c.p_phi);
    z.psi = c.psi;
    return z;
}

BodyFrame to_frame(const PhasePoint& z) {
    const double theta = polar_angle(z.s);
    const double phi = azimuth(z.s);
    const Vec3 e_theta(std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta));
    const Vec3 e_phi(-std::sin(phi), std::cos(phi), 0.0);
    BodyFrame f;
    f.s = z.s;
    f.e1 = std::cos(z.psi) * e_theta + std::sin(z.psi) * e_phi;
    return f;
}

PhasePoint from_frame(const BodyFrame& f) {
    const double theta = polar_angle(f.s);
    const double phi = azimuth(f.s);
    const Vec3 e_theta(std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta));
    const Vec3 e_phi(-std::sin(phi), std::cos(phi), 0.0);
    PhasePoint z;
    z.s = f.s;
    z.psi = std::atan2(f.e1.dot(e_phi), f.e1.dot(e_theta));
    return z;
}

double wigner_d_small(int q, int j, double theta) {
    check_index(q, "q");
    check_index(j, "j");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    switch (3 * (q + 1) + (j + 1)) {
        case 0: return 0.5 * (1.0 + c);   // (-1,-1)
        case 1: return s * kInvSqrt2;     // (-1, 0)
        case 2: return 0.5 * (1.0 - c);   // (-1,+1)
        case 3: return -s * kInvSqrt2;    // ( 0,-1)
        case 4: return c;                 // ( 0, 0)
        case 5: return s * kInvSqrt2;     // ( 0,+1)
        case 6: return 0.5 * (1.0 - c);   // (+1,-1)
        case 7: return -s * kInvSqrt2;    // (+1, 0)
        default: return 0.5 * (1.0 + c);  // (+1,+1)
    }
}

double wigner_d_small_deriv(int q, int j, double theta) {
    check_index(q, "q");
    check_index(j, "j");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    switch (3 * (q + 1) + (j + 1)) {
        case 0: return -0.5 * s;
        case 1: return c * kInvSqrt2;
        case 2: return 0.5 * s;
        case 3: return -c * kInvSqrt2;
        case 4: return -s;
        case 5: return c * kInvSqrt2;
        case 6: return 0.5 * s;
        case 7: return -c * kInvSqrt2;
        default: return -0.5 * s;
    }
}

cd wigner_D(int q, int j, double phi, double theta, double psi) {
    return std::exp(-kI * static_cast<double>(q) * phi) * wigner_d_small(q, j, theta) *
           std::exp(-kI * static_cast<double>(j) * psi);
}

double AmplitudeModel::collective_coefficient(int q) {
    check_index(q, "q");
    if (q == 0) return 1.0;
    return q < 0 ? kSqrt2 : -kSqrt2;
}

std::array<double, 3> AmplitudeModel::d_function(double r) const {
    const double k = 0.5 * n_ + 1.0;
    if (r < 0.02) {
        // Taylor series; the closed form cancels catastrophically near R = 0.
        const double r2 = r * r, r3 = r2 * r, r4 = r3 * r, r5 = r4 * r, r6 = r5 * r;
        const double d0 = 2.0 * r + k * (-2.0 * r + 8.0 * r2 / 3.0 - 2.0 * r3 + 16.0 * r4 / 15.0 -
                                         4.0 * r5 / 9.0 + 16.0 * r6 / 105.0);
        const double d1 = 2.0 + k * (-2.0 + 16.0 * r / 3.0 - 6.0 * r2 + 64.0 * r3 / 15.0 -
                                     20.0 * r4 / 9.0 + 32.0 * r5 / 35.0 - 14.0 * r6 / 45.0);
        const double d2 = k * (16.0 / 3.0 - 12.0 * r + 64.0 * r2 / 5.0 - 80.0 * r3 / 9.0 +
                               32.0 * r4 / 7.0 - 28.0 * r5 / 15.0 + 256.0 * r6 / 405.0);
        return {d0, d1, d2};
    }
    const double e = std::exp(-2.0 * r);
    const double om = -std::expm1(-2.0 * r);
    const double d0 = 2.0 * r + 2.0 * k * e - k * om / r;
    const double d1 = 2.0 - 4.0 * k * e - 2.0 * k * e / r + k * om / (r * r);
    const double d2 = 8.0 * k * e + 4.0 * k * e / r + 4.0 * k * e / (r * r) - 2.0 * k * om / (r * r * r);
    return {d0, d1, d2};
}

std::array<double, 2> AmplitudeModel::sector_weight(int j, double r) const {
    check_index(j, "j");
    const auto [d0, d1, d2] = d_function(r);
    if (j == 0) {
        return {0.5 * n_ + d0 / (2.0 * r), (d1 * r - d0) / (2.0 * r * r)};
    }
    const double sj = static_cast<double>(j);
    return {0.5 * (n_ + 0.5 * d1 - sj * d0), 0.5 * (0.5 * d2 - sj * d1)};
}

std::array<double, 2> AmplitudeModel::local_amplitude(int q, int j, double r) const {
    const auto [b, db] = sector_weight(j, r);
    const double kap = kappa(q);
    const double w = kap * b;
    if (!(w > 0.0)) return {0.0, 0.0};
    const double a = std::sqrt(w);
    return {a, kap * db / (2.0 * a)};
}

std::array<double, 2> AmplitudeModel::collective_amplitude(int q, double r) const {
    const double c = collective_coefficient(q);
    return {c * r, c};
}

WeylSymbolValue collective_symbol(int q, const PhasePoint& z, const AmplitudeModel& amp) {
    const auto [a, da] = amp.collective_amplitude(q, z.s.norm());
    return rotor_symbol(q, 0, a, da, z);
}

WeylSymbolValue local_symbol(int q, int j, const PhasePoint& z, const AmplitudeModel& amp) {
    const auto [a, da] = amp.local_amplitude(q, j, z.s.norm());
    return rotor_symbol(q, j, a, da, z);
}

WeylSymbolValue coordinate_symbol(int index, const PhasePoint& z) {
    if (index < 0 || index > 3) throw std::invalid_argument("coordinate index out of range");
    const Chart c = to_chart(z);
    const double vals[4] = {c.phi, c.p_phi, c.psi, c.p_psi};
    WeylSymbolValue out;
    out.value = vals[index];
    out.gradient[static_cast<std::size_t>(index)] = 1.0;
    return out;
}

WeylSymbolValue spin_component_symbol(int axis, const PhasePoint& z) {
    const Chart c = to_chart(z);
    const double rho = std::hypot(z.s.x(), z.s.y());
    WeylSymbolValue out;
    if (axis == 2) {
        out.value = z.s.z();
        out.gradient[1] = 1.0;
        return out;
    }
    const double trig = axis == 0 ? std::cos(c.phi) : std::sin(c.phi);
    const double dtrig = axis == 0 ? -std::sin(c.phi) : std::cos(c.phi);
    out.value = rho * trig;
    out.gradient[0] = rho * dtrig;
    out.gradient[1] = -c.p_phi / rho * trig;
    out.gradient[3] = c.p_psi / rho * trig;
    return out;
}

WeylSymbolValue total_spin_squared_symbol(const PhasePoint& z) {
    const double r = z.s.norm();
    WeylSymbolValue out;
    out.value = r * r - 0.25;
    out.gradient[3] = 2.0 * r;
    return out;
}

cd poisson_bracket(const WeylSymbolValue& a, const WeylSymbolValue& b, const PhasePoint& z) {
    if (!(z.s.norm() > 0.0)) throw std::domain_error("Poisson bracket at zero-length spin");
    const auto& ga = a.gradient;
    const auto& gb = b.gradient;
    return ga[0] * gb[1] - ga[1] * gb[0] + ga[2] * gb[3] - ga[3] * gb[2];
}

cd poisson_bracket(const SymbolFunction& a, const SymbolFunction& b, const PhasePoint& z) {
    return poisson_bracket(a(z), b(z), z);
}

CVec3 spherical_basis(int q) {
    check_index(q, "q");
    if (q == 0) return CVec3(0.0, 0.0, 1.0);
    if (q < 0) return CVec3(cd(kInvSqrt2, 0.0), cd(0.0, -kInvSqrt2), 0.0);
    return CVec3(cd(-kInvSqrt2, 0.0), cd(0.0, -kInvSqrt2), 0.0);
}

CVec3 collective_direction(int q) { return AmplitudeModel::collective_coefficient(q) * spherical_basis(q); }

FrameField linear_field(const CVec3& w, const BodyFrame& f) {
    const CVec3 s = f.s.cast<cd>();
    FrameField out;
    out.symbol = (w.array() * s.array()).sum();
    out.ds = cross(w, s);
    out.de1 = cross(w, f.e1.cast<cd>());
    return out;
}

FrameField local_field(int q, int j, const BodyFrame& f, const AmplitudeModel& amp) {
    check_index(j, "j");
    const double r = f.s.norm();
    const Vec3 e3 = f.s / r;
    const Vec3 e2 = e3.cross(f.e1);
    const auto [a, da] = amp.local_amplitude(q, j, r);
    FrameField out;
    if (a == 0.0) return out;
    // Conjugated body spherical vector eps_j^*; e_q . eps_j^* = D^1*_{qj}.
    CVec3 v;
    if (j == 0) {
        v = e3.cast<cd>();
    } else if (j > 0) {
        v = -(f.e1.cast<cd>() - kI * e2.cast<cd>()) * kInvSqrt2;
    } else {
        v = (f.e1.cast<cd>() + kI * e2.cast<cd>()) * kInvSqrt2;
    }
    const CVec3 eq = spherical_basis(q);
    const cd dmat = (eq.array() * v.array()).sum();
    const cd x1 = a * (eq.array() * cross(f.e1.cast<cd>(), v).array()).sum();
    out.symbol = a * dmat;
    out.ds = a * cross(eq, v);
    out.de1 = (da * dmat) * e2.cast<cd>() + (x1 / r) * e3.cast<cd>();
    return out;
}

}  // namespace pitwa
