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

#include "pitwa/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pitwa {

std::size_t ObservableTable::index_of(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::out_of_range("no observable '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
}

bool ObservableTable::has(const std::string& name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& ObservableTable::series(const std::string& name) const { return values[index_of(name)]; }

const std::vector<double>& ObservableTable::error_series(const std::string& name) const {
    return errors[index_of(name)];
}

std::size_t ObservableTable::ensure(const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
    names.push_back(name);
    values.emplace_back(times.size(), kUndefined);
    errors.emplace_back(times.size(), 0.0);
    return names.size() - 1;
}

double squeezing_xi2(const Moments& m, int n) {
    return (m.j2 - m.jx * m.jx - m.jy * m.jy - m.jz * m.jz) / (0.5 * n);
}

double subradiance_s(const Moments& m, int n) {
    const double den = m.jz + 0.5 * n;
    if (!(std::abs(den) > 1e-12)) return kUndefined;
    return m.jpjm / den;
}

double onsite_second_moment(const Vec3& s, double alpha) {
    const double r2 = s.squaredNorm();
    const double sz = s.z();
    // The correction's expectation vanishes on polarized samples up to O(1/N^2).
    return r2 - 0.25 - sz * sz + sz + alpha * (r2 - sz * sz - std::sqrt(r2) + 0.25) / r2;
}

double coherent_state_jpjm(int n, double theta) {
    const double j = 0.5 * n;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return j * (j + 1.0) - j * j * c * c - 0.5 * j * s * s + j * c;
}

std::vector<double> structure_factor_sample(const std::vector<Vec3>& spins, const std::vector<double>& p_grid,
                                            double alpha) {
    double diag = 0.0;
    for (const auto& s : spins) diag += onsite_second_moment(s, alpha) - (s.x() * s.x() + s.y() * s.y());
    std::vector<double> out(p_grid.size());
    for (std::size_t k = 0; k < p_grid.size(); ++k) {
        cd v{0.0, 0.0};
        for (std::size_t m = 0; m < spins.size(); ++m) {
            const double pos = static_cast<double>(m + 1);
            v += std::exp(-kI * (p_grid[k] * pos)) * cd(spins[m].x(), -spins[m].y());
        }
        out[k] = std::norm(v) + diag;
    }
    return out;
}

Estimate mean_and_error(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("estimate of empty batch");
    double sum = 0.0;
    for (double v : x) sum += v;
    Estimate e;
    e.mean = sum / static_cast<double>(x.size());
    if (x.size() < 2) return e;
    double ss = 0.0;
    for (double v : x) ss += (v - e.mean) * (v - e.mean);
    e.stderr_ = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
    return e;
}

DiffSummary diff_series(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("series length mismatch");
    DiffSummary d;
    std::size_t used = 0;
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isnan(a[i]) || std::isnan(b[i])) continue;
        const double diff = std::abs(a[i] - b[i]);
        d.max_abs = std::max(d.max_abs, diff);
        acc += diff * diff;
        ++used;
    }
    d.rms = used ? std::sqrt(acc / static_cast<double>(used)) : 0.0;
    return d;
}

}  // namespace pitwa
