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

#include <functional>
#include <string>
#include <vector>

namespace pitwa {

// Frozen reference data under fixtures/. Each entry regenerates its file
// from the oracles; the regression tests compare against the frozen copy.
struct ReferenceFixture {
    std::string file;
    std::function<std::string()> generate;
};

std::vector<ReferenceFixture> reference_fixtures();

// Token-wise comparison of two fixture texts: numbers within
// rel_tol * (1 + |x|), everything else verbatim. content_id lines are skipped
// because they hash the exact digits. On mismatch, why names the first difference.
bool fixture_texts_match(const std::string& a, const std::string& b, double rel_tol, std::string* why = nullptr);

}  // namespace pitwa
