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

#ifndef EPNILAB_SAMPLERS_HPP_
#define EPNILAB_SAMPLERS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "epnilab/fock.hpp"

namespace epnilab {

using Rng = std::mt19937_64;

// Fixed default so that runs are reproducible unless a seed is given.
inline constexpr std::uint64_t kDefaultSeed = 20090710;

std::uint64_t splitmix64(std::uint64_t x);
// Independent stream per trial, a pure function of (campaign seed, index), so
// results do not depend on worker scheduling.
std::uint64_t trial_seed(std::uint64_t campaign_seed, std::uint64_t trial);

// Independent standard complex Gaussian amplitudes, normalized.
PureState sample_haar_pure(const ModeDims& dims, Rng& rng);
Eigen::MatrixXcd sample_haar_unitary(int dim, Rng& rng);
// G G† / tr(G G†) with G complex Ginibre.
DensityOperator sample_ginibre_density(const ModeDims& dims, Rng& rng);

// Removes the mean field of every mode by truncated displacements: the first
// step displaces by -⟨â⟩, later steps are Newton corrections on the
// cumulative amplitude. Throws SamplerError if some mode is not below
// `tolerance` within `max_iterations`.
PureState remove_mean_field(const PureState& psi, double tolerance = 1e-8,
                            int max_iterations = 50);

// Minimum-norm Gauss-Newton projection of the amplitudes onto zero mean field
// and unit norm. Continuous in ψ, which suits optimizers.
PureState project_zero_mean(const PureState& psi, double tolerance = 1e-8,
                            int max_iterations = 50);

// Haar-like random state over n modes of dimension d with zero mean field.
PureState sample_pure_zero_mean(int dim, int n_modes, std::uint64_t seed);
PureState sample_pure_zero_mean(int dim, int n_modes, Rng& rng);

// Spectrum q ∝ p^β with β ≥ 0 chosen by bisection so that the Shannon
// entropy of q equals `entropy` within 1e-12. β = 0 is uniform, β → ∞
// concentrates on the largest weight. Throws InfeasibleConstraint if
// entropy > ln(size).
Eigen::VectorXd tempered_spectrum(const Eigen::VectorXd& p, double entropy);

// U diag(q) U† with q a tempered random exponential spectrum of entropy
// S_target and U Haar-random. dims default to a single mode of size dim.
DensityOperator sample_density_fixed_entropy(int dim, double entropy, std::uint64_t seed);
DensityOperator sample_density_fixed_entropy(const ModeDims& dims, double entropy,
                                             Rng& rng);

// (1-w)|0⟩⟨0| + w I/D with w solved by bisection for the requested entropy.
DensityOperator two_point_mixture(const ModeDims& dims, double entropy);

}  // namespace epnilab

#endif  // EPNILAB_SAMPLERS_HPP_
