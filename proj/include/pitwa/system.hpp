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
#include <string>
#include <vector>

#include <json.hpp>

namespace pitwa {

enum class ChannelKind { Collective, Local, CollectiveDirectional };
enum class Direction { Forward, Backward };
enum class HamiltonianKind { None, ChainSine, TransverseField };

struct ChannelSpec {
    ChannelKind kind = ChannelKind::Collective;
    int q = -1;
    int j = 0;          // Local only
    double rate = 0.0;  // rate prefactor r in (r/2) D[X]
    Direction direction = Direction::Forward;
    int ensemble = 0;   // Collective and Local
};

// Full problem definition. Rates are in units of the reference rate and time
// in its inverse. Index q + 1 addresses the arrays below.
struct SystemSpec {
    int M = 1;
    int n = 1;                              // emitters per ensemble
    std::array<double, 3> Gamma{0, 0, 0};   // collective rates, applied to each ensemble
    std::array<double, 3> gamma{0, 0, 0};   // local rates
    double chain_gamma = 0.0;               // decay into the chain (directional channels)
    double phi_prop = 0.0;                  // propagation phase between sites
    double omega_drive = 0.0;               // drive Omega sum_m (e^{-i phi m} J+_m + h.c.), co-propagating with L_F
    HamiltonianKind hamiltonian = HamiltonianKind::None;
    double omega = 0.0;                     // transverse field Omega J^x

    double collective_rate(int q) const { return Gamma[static_cast<std::size_t>(q + 1)]; }
    double local_rate(int q) const { return gamma[static_cast<std::size_t>(q + 1)]; }
    bool is_chain() const { return M > 1 || chain_gamma > 0.0 || hamiltonian == HamiltonianKind::ChainSine; }
    int total_emitters() const { return M * n; }

    // Throws std::invalid_argument on violated invariants.
    void validate() const;
};

// Channels in their canonical order. Collective first, then directional,
// then local ones ordered by (ensemble, q, j). This order also fixes the RNG
// stream of each channel.
std::vector<ChannelSpec> enumerate_channels(const SystemSpec& spec);

// Largest rate scale per ensemble, used for the default step.
double max_rate_scale(const SystemSpec& spec);

std::string to_string(HamiltonianKind kind);
HamiltonianKind hamiltonian_from_string(const std::string& s);

void to_json(nlohmann::json& j, const SystemSpec& spec);
void from_json(const nlohmann::json& j, SystemSpec& spec);

}  // namespace pitwa
