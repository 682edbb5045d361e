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

#pragma once

#include <array>
#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace pitwa {

using cd = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr cd kI{0.0, 1.0};

// One ensemble in the extrinsic parametrization: spin vector plus the
// auxiliary Euler angle. |s| = J + 1/2.
struct PhasePoint {
    Vec3 s = Vec3(0.0, 0.0, 0.5);
    double psi = 0.0;

    double length() const { return s.norm(); }
    double total_spin() const { return s.norm() - 0.5; }
};

// Canonical chart (phi, p_phi, psi, p_psi) with p_phi = (J+1/2) cos(theta)
// and p_psi = J + 1/2.
struct Chart {
    double phi = 0.0;
    double p_phi = 0.0;
    double psi = 0.0;
    double p_psi = 0.5;
};

// Integration state: spin vector and the body x-axis e1 (unit, orthogonal to s).
// The body frame is (e1, e3 x e1, e3) with e3 = s / |s|. Storing e1 instead of psi
// keeps the equations regular at the poles, where psi alone is ill defined.
struct BodyFrame {
    Vec3 s = Vec3(0.0, 0.0, 0.5);
    Vec3 e1 = Vec3(1.0, 0.0, 0.0);
};

struct WeylSymbolValue {
    cd value{0.0, 0.0};
    std::array<cd, 4> gradient{};  // d/d(phi, p_phi, psi, p_psi)
};

using SymbolFunction = std::function<WeylSymbolValue(const PhasePoint&)>;

double polar_angle(const Vec3& s);
double azimuth(const Vec3& s);

Chart to_chart(const PhasePoint& z);
PhasePoint from_chart(const Chart& c);

// psi is measured from e_theta towards e_phi: e1 = cos(psi) e_theta + sin(psi) e_phi.
BodyFrame to_frame(const PhasePoint& z);
PhasePoint from_frame(const BodyFrame& f);

// Spin-1 small-d matrix d^1_{qj}(theta) and its theta derivative.
double wigner_d_small(int q, int j, double theta);
double wigner_d_small_deriv(int q, int j, double theta);
// D^1_{qj} = exp(-i q phi) d^1_{qj}(theta) exp(-i j psi).
cd wigner_D(int q, int j, double phi, double theta, double psi);

// Amplitude functions of the Weyl symbols for an ensemble of n emitters.
//
// Collective: L^q = chi_q(R) D^1*_{q0}, chi_0 = R, chi_{+-1} = -+sqrt(2) R.
// Local: l^{jq} = chi_{jq}(R) D^1*_{qj}, chi_{jq} = sqrt(kappa_q B_j(R)) with
// kappa_{+-1} = 1 and kappa_0 = 2. The B_j close the first-moment hierarchy of
// every local channel exactly and stay finite as R -> 0; B_{+1} turns negative
// past R of roughly n/2 + 1 and is clamped to zero there.
class AmplitudeModel {
public:
    explicit AmplitudeModel(int n = 1) : n_(n) {}

    int n() const { return n_; }

    static double kappa(int q) { return q == 0 ? 2.0 : 1.0; }
    static double collective_coefficient(int q);

    // D(R) and its first two derivatives; the B_j are built from these.
    std::array<double, 3> d_function(double r) const;
    // Unclamped B_j(R) and dB_j/dR.
    std::array<double, 2> sector_weight(int j, double r) const;
    // chi_{jq}(R) and its derivative after clamping.
    std::array<double, 2> local_amplitude(int q, int j, double r) const;
    // chi_q(R) and its derivative.
    std::array<double, 2> collective_amplitude(int q, double r) const;

private:
    int n_;
};

WeylSymbolValue collective_symbol(int q, const PhasePoint& z, const AmplitudeModel& amp);
WeylSymbolValue local_symbol(int q, int j, const PhasePoint& z, const AmplitudeModel& amp);

// Elementary symbols used by tests and observables.
WeylSymbolValue coordinate_symbol(int index, const PhasePoint& z);  // phi, p_phi, psi, p_psi
WeylSymbolValue spin_component_symbol(int axis, const PhasePoint& z);
WeylSymbolValue total_spin_squared_symbol(const PhasePoint& z);  // J(J+1) = R^2 - 1/4

// {a, b} summed over the pairs (phi, p_phi) and (psi, p_psi).
// Throws std::domain_error for a zero-length spin.
cd poisson_bracket(const WeylSymbolValue& a, const WeylSymbolValue& b, const PhasePoint& z);
cd poisson_bracket(const SymbolFunction& a, const SymbolFunction& b, const PhasePoint& z);

// Hamiltonian vector fields in the frame representation.
struct FrameField {
    cd symbol{0.0, 0.0};
    CVec3 ds = CVec3::Zero();   // {s, L}
    CVec3 de1 = CVec3::Zero();  // {e1, L}
};

// Linear symbol w . s, e.g. the collective jumps. Coefficient c multiplies it.
FrameField linear_field(const CVec3& w, const BodyFrame& f);
FrameField local_field(int q, int j, const BodyFrame& f, const AmplitudeModel& amp);

// Space-fixed spherical basis vector e_q (e_{-1} = (x - i y)/sqrt2, e_{+1} = -(x + i y)/sqrt2).
CVec3 spherical_basis(int q);
// w_q with w_q . s equal to the collective symbol L^q.
CVec3 collective_direction(int q);

}  // namespace pitwa
