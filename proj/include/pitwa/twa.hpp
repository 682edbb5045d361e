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
#include <stdexcept>
#include <string>
#include <vector>

#include "pitwa/observables.hpp"
#include "pitwa/phasespace.hpp"
#include "pitwa/system.hpp"

namespace pitwa {

enum class Polarization { Up, Down };

// Initial coherent spin state of every ensemble: polarized up or down, then
// rotated to polar angle theta and azimuth phi (theta = 0 keeps the pole).
struct InitialState {
    Polarization polarization = Polarization::Up;
    double theta = 0.0;
    double phi = 0.0;
    // Variance of the transverse components; negative selects N/4 + 1/8.
    double transverse_variance = -1.0;
};

// A run switches to step dt once time reaches `from`.
struct DtSegment {
    double from = 0.0;
    double dt = 0.0;
};

struct IntegratorConfig {
    double dt = 0.0;  // <= 0 selects 1e-3 / max_rate_scale
    double t_max = 0.0;
    std::vector<double> record_times;
    std::vector<DtSegment> dt_schedule;  // optional, overrides dt piecewise
    double flag_threshold_J = 1.0;

    void validate() const;
    double dt_at(double t, const SystemSpec& spec) const;
};

class IntegratorAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// N_traj x M phase points in the frame representation plus stream identity.
struct TrajectoryBatch {
    int M = 1;
    std::uint64_t seed = 0;
    std::vector<std::uint32_t> stream_ids;  // one per trajectory
    std::vector<double> state;              // [traj][ensemble][s(3), e1(3)]
    std::vector<std::uint8_t> failed;
    double time = 0.0;
    std::uint64_t steps = 0;

    std::size_t size() const { return stream_ids.size(); }
    BodyFrame frame(std::size_t traj, int m) const;
    PhasePoint point(std::size_t traj, int m) const;
    void set_frame(std::size_t traj, int m, const BodyFrame& f);
    long alive() const;
};

// Symbols, vector fields and the Heun step for one SystemSpec.
class TwaModel {
public:
    explicit TwaModel(SystemSpec spec);

    const SystemSpec& spec() const { return spec_; }
    const AmplitudeModel& amplitudes() const { return amp_; }
    const std::vector<ChannelSpec>& channels() const { return channels_; }
    std::size_t dimension() const { return static_cast<std::size_t>(6 * spec_.M); }

    // Hamiltonian symbol and its gradient with respect to each spin vector.
    double hamiltonian(const double* z) const;
    void hamiltonian_gradient(const double* z, double* grad) const;
    // Same gradient by the direct double sum over site pairs.
    void hamiltonian_gradient_direct(const double* z, double* grad) const;

    // Channel symbol L_k at z.
    cd channel_symbol(std::size_t k, const double* z) const;

    // Stratonovich drift {Z,H} + sum_k r_k Re[i L_k^* {Z, L_k}] and the
    // complex couplings sqrt(r_k) {Z, L_k}, contracted with complex noise.
    struct Fields {
        Eigen::VectorXd drift;
        std::vector<Eigen::VectorXcd> noise;
    };
    Fields drift_and_diffusion(const double* z) const;

    // inc = drift dt + sum_k Re[noise_k dW_k], without materializing noise_k.
    void increment(const double* z, const cd* dw, double dt, double* inc) const;

    // One Stratonovich-Heun step of a single trajectory; returns false if non-finite.
    // scratch holds 4 * dimension() doubles.
    bool heun_step(double* z, const cd* dw, double dt, double* scratch) const;

    // Complex noise dW = (xi1 + i xi2) sqrt(dt) of every channel at a step.
    void draw_noise(std::uint64_t seed, std::uint32_t stream, std::uint64_t step, double dt, cd* dw) const;

private:
    SystemSpec spec_;
    AmplitudeModel amp_;
    std::vector<ChannelSpec> channels_;
    std::vector<cd> site_phase_fwd_;  // e^{i phi_prop m}, m = 1..M
    bool collective_only_ = false;    // no local channels: spin lengths are restored after each step
};

// Draws the Gaussian approximation of each ensemble's initial Wigner function.
TrajectoryBatch sample_initial(const SystemSpec& spec, const InitialState& init, std::size_t n_traj,
                               std::uint64_t seed);

// Re-orthonormalizes e1 against s after a step.
void project_frame(double* z, int M);

// Advances every trajectory from batch.time to t_end.
void advance(TrajectoryBatch& batch, const TwaModel& model, const IntegratorConfig& cfg, double t_end,
             unsigned workers);

// Per-trajectory observable columns and their estimator.
class Estimator {
public:
    Estimator(const SystemSpec& spec, std::vector<double> p_grid = {}, double onsite_alpha = kOnsiteAlpha);

    // Column names of the per-trajectory sample.
    const std::vector<std::string>& columns() const { return columns_; }
    void sample(const double* z, double* out) const;
    // Reduces columns of surviving trajectories into table row k.
    void reduce(const std::vector<std::vector<double>>& cols, ObservableTable& table, std::size_t k) const;

private:
    SystemSpec spec_;
    std::vector<double> p_grid_;
    double alpha_;
    std::vector<std::string> columns_;
    bool chain_;
};

struct TwaRunOptions {
    std::size_t n_traj = 1000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::vector<double> p_grid;
    double onsite_alpha = kOnsiteAlpha;
    double max_failed_fraction = 0.01;
};

// Samples, integrates and estimates at every record time.
ObservableTable run_twa(const SystemSpec& spec, const InitialState& init, const IntegratorConfig& cfg,
                        const TwaRunOptions& opts);

// Runs fn(i) for i in [0, n) on up to `workers` threads in contiguous chunks.
template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& fn);

unsigned default_workers();

}  // namespace pitwa

#include "pitwa/detail/parallel_impl.hpp"
