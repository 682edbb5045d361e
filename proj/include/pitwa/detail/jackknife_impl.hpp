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

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pitwa {

template <class F>
Estimate jackknife(const std::vector<std::vector<double>>& columns, F&& f) {
    if (columns.empty() || columns.front().empty()) throw std::invalid_argument("jackknife of empty batch");
    const std::size_t k = columns.size();
    const std::size_t n = columns.front().size();
    std::vector<double> sums(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
        for (double v : columns[c]) sums[c] += v;
    }
    std::vector<double> means(k);
    for (std::size_t c = 0; c < k; ++c) means[c] = sums[c] / static_cast<double>(n);
    Estimate out;
    out.mean = f(means);
    if (n < 2) return out;
    std::vector<double> loo(k);
    std::vector<double> vals(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < k; ++c) loo[c] = (sums[c] - columns[c][i]) / static_cast<double>(n - 1);
        vals[i] = f(loo);
        acc += vals[i];
    }
    const double mean_loo = acc / static_cast<double>(n);
    double var = 0.0;
    for (double v : vals) var += (v - mean_loo) * (v - mean_loo);
    out.stderr_ = std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * var);
    return out;
}

}  // namespace pitwa
