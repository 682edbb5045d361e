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

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "pitwa/phasespace.hpp"

namespace pitwa {

// Time series of named observables with error bars. Rows are record times,
// the column order is the insertion order of names.
struct ObservableTable {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;  // [observable][time]
    std::vector<std::vector<double>> errors;  // [observable][time]
    std::vector<long> alive;                  // trajectories alive per time (0 for exact)
    std::vector<double> small_spin_fraction;  // fraction with J < threshold per time

    std::size_t index_of(const std::string& name) const;
    bool has(const std::string& name) const;
    const std::vector<double>& series(const std::string& name) const;
    const std::vector<double>& error_series(const std::string& name) const;
    // Appends a column if absent and returns its index.
    std::size_t ensure(const std::string& name);
};

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

// First moments plus <J^2> and <J+J->, the input of every composite.
struct Moments {
    double jx = 0.0;
    double jy = 0.0;
    double jz = 0.0;
    double j2 = 0.0;
    double jpjm = 0.0;
};

// [<J^2> - <Jx>^2 - <Jy>^2 - <Jz>^2] / (N/2).
double squeezing_xi2(const Moments& m, int n);
// <J+J-> / <Jz + N/2>; kUndefined when the denominator vanishes.
double subradiance_s(const Moments& m, int n);

// Default coefficient of the on-site correction, fixed by calibrate_second_moments.
inline constexpr double kOnsiteAlpha = 0.1408;

// On-site J+J- symbol: R^2 - 1/4 - Sz^2 + Sz + alpha (Sx^2 + Sy^2 - R + 1/4) / R^2.
// alpha = 0 recovers the uncorrected symbol.
double onsite_second_moment(const Vec3& s, double alpha = kOnsiteAlpha);
inline double onsite_second_moment(const PhasePoint& z, double alpha = kOnsiteAlpha) {
    return onsite_second_moment(z.s, alpha);
}

// Exact <J+J-> on the coherent spin state of n emitters at polar angle theta.
double coherent_state_jpjm(int n, double theta);

// Structure factor S(p) = sum_{m,m'} e^{ip(m-m')} <J+_m J-_m'> for one phase-space
// configuration: cross terms from symbol products, on-site terms from the
// on-site symbol. Sites carry the positions m = 1..M.
std::vector<double> structure_factor_sample(const std::vector<Vec3>& spins, const std::vector<double>& p_grid,
                                        double alpha = kOnsiteAlpha);

// Mean and standard error of a sample.
struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};
Estimate mean_and_error(const std::vector<double>& x);

// Delete-one jackknife for a smooth function of several sample means.
// columns[k][i] is trajectory i of input k.
template <class F>
Estimate jackknife(const std::vector<std::vector<double>>& columns, F&& f);

// Max-abs and RMS differences of two series over matching times.
struct DiffSummary {
    double max_abs = 0.0;
    double rms = 0.0;
};
DiffSummary diff_series(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace pitwa

#include "pitwa/detail/jackknife_impl.hpp"
