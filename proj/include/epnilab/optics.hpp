// Copyright 2026 The epnilab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EPNILAB_OPTICS_HPP_
#define EPNILAB_OPTICS_HPP_

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "epnilab/fock.hpp"

namespace epnilab {

/// Lossless beam splitter with transmissivity η. The transmitted output is
/// ĉ = √η â + √(1-η) b̂ and the complementary output is
/// d̂ = -√(1-η) â + √η b̂.
class BeamSplitter {
 public:
  explicit BeamSplitter(double eta);
  double eta() const { return eta_; }
  double reflectivity() const { return 1.0 - eta_; }
  // arccos √η
  double angle() const;

 private:
  double eta_;
};

// Matrix of U = exp(θ(â†b̂ - âb̂†)) restricted to the photon-number block N,
// in the basis |k, N-k⟩ for k in [k_lo, k_hi]. When the span is the full
// block (k_lo = 0, k_hi = N) the result is exact; a narrower span gives the
// exponential of the truncated generator, which is still orthogonal.
Eigen::MatrixXd photon_number_block(const BeamSplitter& bs, int total_photons,
                                    int k_lo, int k_hi);

struct TwoModeUnitary {
  Eigen::MatrixXcd matrix;  // index (j_a, j_b) -> j_a * d_b + j_b
  int d_a = 1;
  int d_b = 1;
};

// Dense unitary on the truncated d_a x d_b space, synthesized block by block.
// Blocks with total photon number < min(d_a, d_b) are exact.
TwoModeUnitary beamsplitter_unitary(const BeamSplitter& bs, int d_a, int d_b);

struct ChannelOptions {
  // Per-pair output dimension for the ĉ modes. Empty means exact: each ĉ mode
  // gets s_a + s_b - 1 levels, where s is the occupied Fock support of the
  // paired inputs, so nothing is discarded.
  std::vector<int> output_dims;
  double truncation_warning_threshold = 1e-9;
};

struct ChannelOutput {
  DensityOperator rho_c;
  double discarded_mass = 0.0;  // tr ρ_a tr ρ_b - tr ρ_c
  bool truncation_warning = false;
};

// Single-mode channel: tr_d[U (ρ_a ⊗ ρ_b) U†].
ChannelOutput apply_beamsplitter(const DensityOperator& rho_a,
                                 const DensityOperator& rho_b,
                                 const BeamSplitter& bs,
                                 const ChannelOptions& options = {});

// n pairs, product input ρ_a ⊗ ρ_b. pairing[i] is the b̂ mode coupled with
// â mode i (identity when empty). ρ_a may be entangled across its modes.
ChannelOutput apply_beamsplitter_vector(const DensityOperator& rho_a,
                                        const DensityOperator& rho_b,
                                        const BeamSplitter& bs,
                                        std::span<const int> pairing = {},
                                        const ChannelOptions& options = {});

// General joint input over 2n modes; pairs lists (â mode, b̂ mode) indices
// into rho_ab. Output modes follow the order of pairs.
ChannelOutput apply_beamsplitter_joint(
    const DensityOperator& rho_ab, const BeamSplitter& bs,
    std::span<const std::pair<int, int>> pairs,
    const ChannelOptions& options = {});

// Highest occupied Fock level + 1 for each mode (diagonal support).
std::vector<int> occupied_support(const DensityOperator& rho);

}  // namespace epnilab

#endif  // EPNILAB_OPTICS_HPP_
