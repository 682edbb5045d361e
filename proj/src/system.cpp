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

#include "pitwa/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pitwa {

namespace {

std::array<double, 3> rates_from_json(const nlohmann::json& j) {
    std::array<double, 3> out{0, 0, 0};
    if (j.is_array()) {
        if (j.size() != 3) throw std::invalid_argument("rate arrays need three entries (q = -1, 0, +1)");
        for (std::size_t k = 0; k < 3; ++k) out[k] = j[k].get<double>();
        return out;
    }
    static const char* names[3] = {"decay", "dephasing", "pump"};
    for (std::size_t k = 0; k < 3; ++k) {
        if (j.contains(names[k])) out[k] = j[names[k]].get<double>();
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& key = it.key();
        if (key != names[0] && key != names[1] && key != names[2]) {
            throw std::invalid_argument("unknown rate key '" + key + "'");
        }
    }
    return out;
}

nlohmann::json rates_to_json(const std::array<double, 3>& r) {
    return {{"decay", r[0]}, {"dephasing", r[1]}, {"pump", r[2]}};
}

}  // namespace

void SystemSpec::validate() const {
    if (M < 1) throw std::invalid_argument("M must be >= 1");
    if (n < 1) throw std::invalid_argument("N must be >= 1");
    for (double r : Gamma) {
        if (!(r >= 0.0)) throw std::invalid_argument("collective rates must be >= 0");
    }
    for (double r : gamma) {
        if (!(r >= 0.0)) throw std::invalid_argument("local rates must be >= 0");
    }
    if (!(chain_gamma >= 0.0)) throw std::invalid_argument("chain decay must be >= 0");
    if (!(omega_drive >= 0.0)) throw std::invalid_argument("drive amplitude must be >= 0");
    if (!std::isfinite(phi_prop) || !std::isfinite(omega)) throw std::invalid_argument("non-finite parameter");
}

std::vector<ChannelSpec> enumerate_channels(const SystemSpec& spec) {
    std::vector<ChannelSpec> out;
    for (int m = 0; m < spec.M; ++m) {
        for (int q = -1; q <= 1; ++q) {
            if (!(spec.collective_rate(q) > 0.0)) continue;
            ChannelSpec c;
            c.kind = ChannelKind::Collective;
            c.q = q;
            c.rate = spec.collective_rate(q);
            c.ensemble = m;
            out.push_back(c);
        }
    }
    if (spec.chain_gamma > 0.0) {
        for (Direction d : {Direction::Forward, Direction::Backward}) {
            ChannelSpec c;
            c.kind = ChannelKind::CollectiveDirectional;
            c.q = -1;
            c.rate = 0.5 * spec.chain_gamma;
            c.direction = d;
            out.push_back(c);
        }
    }
    for (int m = 0; m < spec.M; ++m) {
        for (int q = -1; q <= 1; ++q) {
            if (!(spec.local_rate(q) > 0.0)) continue;
            for (int j = -1; j <= 1; ++j) {
                ChannelSpec c;
                c.kind = ChannelKind::Local;
                c.q = q;
                c.j = j;
                c.rate = spec.local_rate(q);
                c.ensemble = m;
                out.push_back(c);
            }
        }
    }
    return out;
}

double max_rate_scale(const SystemSpec& spec) {
    const double n = spec.n;
    const double ntot = spec.total_emitters();
    double scale = 0.0;
    for (double r : spec.Gamma) scale = std::max(scale, r * n);
    for (double r : spec.gamma) scale = std::max(scale, r);
    scale = std::max(scale, spec.chain_gamma * ntot);
    scale = std::max(scale, std::abs(spec.omega));
    scale = std::max(scale, 2.0 * spec.omega_drive);
    return scale > 0.0 ? scale : 1.0;
}

std::string to_string(HamiltonianKind kind) {
    switch (kind) {
        case HamiltonianKind::ChainSine: return "chain_sine";
        case HamiltonianKind::TransverseField: return "transverse_field";
        default: return "none";
    }
}

HamiltonianKind hamiltonian_from_string(const std::string& s) {
    if (s == "none") return HamiltonianKind::None;
    if (s == "chain_sine") return HamiltonianKind::ChainSine;
    if (s == "transverse_field") return HamiltonianKind::TransverseField;
    throw std::invalid_argument("unknown hamiltonian '" + s + "'");
}

void to_json(nlohmann::json& j, const SystemSpec& spec) {
    j = nlohmann::json{{"M", spec.M},
                       {"N", spec.n},
                       {"collective", rates_to_json(spec.Gamma)},
                       {"local", rates_to_json(spec.gamma)},
                       {"chain_gamma", spec.chain_gamma},
                       {"phi_prop", spec.phi_prop},
                       {"omega_drive", spec.omega_drive},
                       {"hamiltonian", to_string(spec.hamiltonian)},
                       {"omega", spec.omega}};
}

void from_json(const nlohmann::json& j, SystemSpec& spec) {
    static const char* known[] = {"M", "N", "collective", "local", "chain_gamma", "phi_prop",
                                  "omega_drive", "hamiltonian", "omega"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }) ==
            std::end(known)) {
            throw std::invalid_argument("unknown system key '" + it.key() + "'");
        }
    }
    spec = SystemSpec{};
    spec.M = j.value("M", 1);
    spec.n = j.at("N").get<int>();
    if (j.contains("collective")) spec.Gamma = rates_from_json(j.at("collective"));
    if (j.contains("local")) spec.gamma = rates_from_json(j.at("local"));
    spec.chain_gamma = j.value("chain_gamma", 0.0);
    spec.phi_prop = j.value("phi_prop", 0.0);
    spec.omega_drive = j.value("omega_drive", 0.0);
    spec.hamiltonian = hamiltonian_from_string(j.value("hamiltonian", std::string("none")));
    spec.omega = j.value("omega", 0.0);
    spec.validate();
}

}  // namespace pitwa
