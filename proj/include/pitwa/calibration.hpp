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

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pitwa/exact_dicke.hpp"
#include "pitwa/twa.hpp"

namespace pitwa {

// Ito generator G O = a . grad O + (1/2) sum_k (b_k . grad)(b_k . grad O) of the
// model's SDE at z, with the real noise directions b_k taken from the complex
// couplings. The second-order part uses central differences along b_k.
using FrameObservable = std::function<double(const double* z)>;
using FrameGradient = std::function<void(const double* z, double* grad)>;
double ito_generator(const TwaModel& model, const double* z, const FrameObservable& o, const FrameGradient& grad_o,
                     double h = 1e-5);

struct ChannelResidual {
    std::string channel;
    std::string observable;
    double theta = 0.0;
    double exact = 0.0;
    double twa = 0.0;
    double stderr_ = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CalibrationOptions {
    std::size_t samples = 4000;
    std::uint64_t seed = 11;
    std::vector<double> thetas{0.0, 0.7, 1.5707963267948966, 2.4};
    // Residual allowance beyond 5 standard errors. The sampler's +1/8
    // transverse variance shifts first-moment rates by O(1) in absolute terms,
    // and J^2 closes only to leading order, so its allowance grows with n
    // while shrinking relative to the n^2 scale of the rate.
    double first_moment_tol = 0.3;
    double j_squared_tol = 2.0;
    double j_squared_tol_per_n = 0.15;
};

struct SymbolCalibration {
    int n = 0;
    CalibrationOptions options;
    std::vector<ChannelResidual> residuals;
    bool pass = true;
    // Amplitude tables on the J grid.
    std::vector<double> j_grid;
    std::vector<std::string> channel_names;
    std::vector<std::vector<cd>> amplitudes;  // [channel][grid]
};

// Matches the t = 0 moment derivatives of <Jz>, <Jx> and <J^2> between the TWA
// generator and the exact solver for every channel in isolation, on coherent
// states at several polar angles. Throws std::runtime_error with a
// per-channel report if any residual exceeds its tolerance.
SymbolCalibration calibrate_symbols(int n, const CalibrationOptions& opts = {});

struct SecondMomentCalibration {
    double alpha = 0.0;
    double max_residual_uncorrected = 0.0;
    double max_residual_corrected = 0.0;
    struct Row {
        int n;
        double theta;
        double exact;
        double base;
        double correction;
    };
    std::vector<Row> rows;
};

// Least-squares fit of the on-site correction coefficient over coherent states
// of n in `ns` at the given polar angles. Expectations over the t = 0 sampler's
// Gaussian are taken by tensor Gauss-Hermite quadrature, so the fit is
// deterministic.
SecondMomentCalibration calibrate_second_moments(const std::vector<int>& ns, const std::vector<double>& thetas,
                                                 int quadrature_order = 64);

// Nodes and weights for expectations over a standard normal variable.
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int order);

// Human-readable fixture files.
std::string symbol_fixture_text(const SymbolCalibration& cal);
std::string second_moment_fixture_text(const SecondMomentCalibration& cal);

}  // namespace pitwa
