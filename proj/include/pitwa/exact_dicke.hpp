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

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pitwa/observables.hpp"
#include "pitwa/system.hpp"

namespace pitwa {

using SparseC = Eigen::SparseMatrix<cd, Eigen::RowMajor>;

// Sparse Liouvillian assembled term by term on a set of square blocks.
// Block b stores a (d_b x d_b) matrix row-major at a fixed offset. In
// diagonal mode only the diagonal of each block is kept, which is exact when
// every term maps diagonal states to diagonal states.
class SuperOperatorBuilder {
public:
    explicit SuperOperatorBuilder(std::vector<int> dims, bool diagonal_only = false);

    // dst += coeff * A * src * B, with A of shape (d_dst x d_src) and B of shape (d_src x d_dst).
    void add(int dst, int src, const SparseC& a, const SparseC& b, cd coeff);
    // Lindblad pieces on a single block.
    void add_hamiltonian(int block, const SparseC& h);
    void add_dissipator(int block, const SparseC& x, double rate);  // (rate/2) D[x]
    // Jump x from block src into block dst at rate r: r x rho x^dag - (r/2){x^dag x, rho}.
    void add_transfer(int dst, int src, const SparseC& x, double rate);

    SparseC build() const;
    long size() const { return size_; }
    long index(int block, int row, int col) const;
    bool diagonal_only() const { return diagonal_; }
    const std::vector<int>& dims() const { return dims_; }

private:
    std::vector<int> dims_;
    std::vector<long> offsets_;
    bool diagonal_;
    long size_ = 0;
    std::vector<Eigen::Triplet<cd>> triplets_;
};

// Total-spin sectors of n emitters, largest J first. Block b has 2J+1 states
// ordered by M = J, J-1, ..., -J.
class DickeSpace {
public:
    explicit DickeSpace(int n);

    int n() const { return n_; }
    int blocks() const { return static_cast<int>(two_j_.size()); }
    int two_j(int block) const { return two_j_[static_cast<std::size_t>(block)]; }
    double j(int block) const { return 0.5 * two_j(block); }
    int dim(int block) const { return two_j(block) + 1; }
    int block_of(int two_j) const;  // -1 if absent
    std::vector<int> dims() const;
    // Multiplicity of the sector, C(n, n/2-J) - C(n, n/2-J-1), as a natural log.
    double log_degeneracy(int block) const;

    // Collective operators within a sector.
    SparseC jz(int block) const;
    SparseC jminus(int block) const;
    SparseC jplus(int block) const;

private:
    int n_;
    std::vector<int> two_j_;
};

// Signed Clebsch-Gordan coefficient <J M; 1 q | J+j M+q>, arguments doubled.
double clebsch_gordan_1(int two_j, int two_m, int q, int j);

// Amplitude matrix of the effective jump l^{jq} from sector J to J + j, shape
// (d_{J+j} x d_J), in the degeneracy-absorbed normalization.
SparseC local_jump_block(const DickeSpace& space, int block, int q, int j);

// Density matrix stored block-diagonally with Tr rho = sum_{J,M} rho_{JMM} = 1.
struct DickeBlockMatrix {
    const DickeSpace* space = nullptr;
    bool diagonal_only = false;
    Eigen::VectorXcd data;

    cd element(int block, int row, int col) const;
    Eigen::MatrixXcd block_matrix(int block) const;
    double trace() const;
};

class LiouvillianOp {
public:
    LiouvillianOp(const SystemSpec& spec, bool diagonal_only);

    const DickeSpace& space() const { return space_; }
    const SparseC& matrix() const { return matrix_; }
    bool diagonal_only() const { return diagonal_; }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return matrix_ * v; }

private:
    DickeSpace space_;
    bool diagonal_;
    SparseC matrix_;
};

struct ExactOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    std::size_t general_cap = 200;
    std::size_t diagonal_cap = 2000;
};

// Single-ensemble Liouvillian. Diagonal mode is chosen automatically when the
// Hamiltonian vanishes. Throws std::invalid_argument above the caps.
LiouvillianOp build_liouvillian(const SystemSpec& spec, const ExactOptions& opts = {});
bool diagonal_friendly(const SystemSpec& spec);

// Coherent spin state pointing at (theta, phi); theta = 0 is fully inverted.
DickeBlockMatrix coherent_state(const LiouvillianOp& op, double theta, double phi = 0.0);

Moments measure_moments(const DickeBlockMatrix& rho);

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) with dense output.
// Returns the single-ensemble observable schema used by the TWA estimator.
ObservableTable evolve(const LiouvillianOp& op, const DickeBlockMatrix& rho0, const std::vector<double>& times,
                       const ExactOptions& opts = {});
// Same integration, returning the states.
std::vector<DickeBlockMatrix> evolve_states(const LiouvillianOp& op, const DickeBlockMatrix& rho0,
                                            const std::vector<double>& times, const ExactOptions& opts = {});

// Fills Jz, Jx, Jy, J2, JpJm, xi2, s and the normalized columns at time index k.
void store_single_ensemble(ObservableTable& table, std::size_t k, const Moments& m, int n);

// Brute-force full Lindblad oracle on the 2^N Hilbert space, N total <= 6,
// M <= 2 ensembles of spec.n emitters each, all ensembles starting in the
// coherent state (theta, phi).
ObservableTable brute_force_reference(const SystemSpec& spec, const std::vector<double>& times, double theta = 0.0,
                                      double phi = 0.0, const ExactOptions& opts = {});

}  // namespace pitwa
