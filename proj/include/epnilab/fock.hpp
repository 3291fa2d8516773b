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

#ifndef EPNILAB_FOCK_HPP_
#define EPNILAB_FOCK_HPP_

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace epnilab {

using Complex = std::complex<double>;
using ModeDims = std::vector<int>;

// Largest Hilbert-space dimension any state or operator may take.
inline constexpr std::size_t kMaxTotalDimension = 4096;

// Product of the per-mode truncation dimensions. Throws InvalidArgument on an
// empty list or a dimension < 1.
std::size_t total_dimension(const ModeDims& dims);

// Row-major strides: the first mode is the most significant digit, which
// matches the Kronecker-product ordering.
std::vector<std::size_t> mode_strides(const ModeDims& dims);

class DensityOperator;

/// Normalized amplitude vector on a truncated multimode Fock basis.
class PureState {
 public:
  PureState(Eigen::VectorXcd amplitudes, ModeDims dims,
            double discarded_mass = 0.0);

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  const ModeDims& mode_dims() const { return dims_; }
  int num_modes() const { return static_cast<int>(dims_.size()); }
  std::size_t dimension() const {
    return static_cast<std::size_t>(amplitudes_.size());
  }
  // Probability mass that fell outside the truncation before renormalizing.
  double discarded_mass() const { return discarded_mass_; }

  DensityOperator projector() const;

 private:
  Eigen::VectorXcd amplitudes_;
  ModeDims dims_;
  double discarded_mass_;
};

/// Hermitian, positive, unit-trace operator on a truncated multimode Fock
/// basis. Construction only checks shapes; use validate() for diagnostics.
class DensityOperator {
 public:
  DensityOperator(Eigen::MatrixXcd matrix, ModeDims dims,
                  double discarded_mass = 0.0);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const ModeDims& mode_dims() const { return dims_; }
  int num_modes() const { return static_cast<int>(dims_.size()); }
  std::size_t dimension() const {
    return static_cast<std::size_t>(matrix_.rows());
  }
  double discarded_mass() const { return discarded_mass_; }
  double trace() const { return matrix_.trace().real(); }

 private:
  Eigen::MatrixXcd matrix_;
  ModeDims dims_;
  double discarded_mass_;
};

struct StateDiagnostics {
  double trace_deficit = 0.0;         // |1 - tr ρ|
  double hermiticity_residual = 0.0;  // max |ρ - ρ†|
  double min_eigenvalue = 0.0;
  double tail_mass = 0.0;       // weight on the top Fock level, max over modes
  double discarded_mass = 0.0;  // recorded pre-normalization loss
};

PureState vacuum_state(const ModeDims& dims);
PureState number_state(int photons, int dim);

// Truncated |α⟩, renormalized on the kept levels. The lost Poisson tail is
// recorded as discarded_mass.
PureState coherent_state(Complex alpha, int dim);

// e^{-|α|²} Σ_{k≥d} |α|^{2k}/k!
double coherent_tail_mass(Complex alpha, int dim);

// Bose-Einstein diagonal state, renormalized on d levels.
DensityOperator thermal_state(double mean_photons, int dim);

// Smallest d with (N/(N+1))^d < tail_tolerance, clamped to max_dim.
int thermal_dimension_for_tail(double mean_photons, double tail_tolerance,
                               int max_dim = 64);

struct CoherentQuadrature {
  int radial_nodes = 64;
  int angular_nodes = 64;
};

// Thermal state assembled as a Gaussian-weighted mixture of coherent-state
// projectors (Gauss-Laguerre in |α|², uniform in phase). The coherent vectors
// are the exact Fock components, not renormalized, so the trace is the
// truncated mass 1 - (N/(N+1))^d.
DensityOperator coherent_mixture_thermal(double mean_photons, int dim,
                                         CoherentQuadrature grid = {});

DensityOperator tensor(const DensityOperator& x, const DensityOperator& y,
                       std::size_t max_total_dim = kMaxTotalDimension);
PureState tensor(const PureState& x, const PureState& y,
                 std::size_t max_total_dim = kMaxTotalDimension);

// Reduced state on the listed modes (kept in ascending mode order).
DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const int> keep);

// Truncated annihilation operator on d levels: a|k⟩ = √k |k-1⟩.
Eigen::MatrixXcd lowering_operator(int dim);

Complex mean_field(const DensityOperator& rho, int mode);
Complex mean_field(const PureState& psi, int mode);
double mean_photon_number(const DensityOperator& rho, int mode);

// exp(β a† - β* a) on the truncated space of one mode; exactly unitary.
Eigen::MatrixXcd truncated_displacement(Complex beta, int dim);
PureState displace(const PureState& psi, int mode, Complex beta);

StateDiagnostics validate(const DensityOperator& rho);

// Zero-pads every mode up to new_dims (each >= the current dimension).
DensityOperator embed(const DensityOperator& rho, const ModeDims& new_dims);

// ½‖ρ - σ‖₁ on states of identical shape.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

}  // namespace epnilab

#endif  // EPNILAB_FOCK_HPP_
