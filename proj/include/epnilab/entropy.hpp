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

#ifndef EPNILAB_ENTROPY_HPP_
#define EPNILAB_ENTROPY_HPP_

#include <Eigen/Dense>

#include "epnilab/fock.hpp"

namespace epnilab {

// Entropies are in nats throughout.
struct EntropyValue {
  double nats = 0.0;
  int n_modes = 1;
  double per_mode() const { return nats / n_modes; }
};

struct PhotonNumberValue {
  double mean_photons = 0.0;
};

// Eigenvalues in [-1e-8, 0) are treated as numerical dust and clipped to 0;
// anything more negative is an invalid state.
inline constexpr double kEigenvalueFailureThreshold = -1e-8;

// -Σ λ ln λ over the spectrum of ρ. Throws InvalidState for eigenvalues
// below kEigenvalueFailureThreshold.
EntropyValue von_neumann_entropy(const DensityOperator& rho);
double spectrum_entropy(const Eigen::VectorXd& eigenvalues);

/// Entropy of the Bose-Einstein distribution with mean x:
/// g(x) = (x+1) ln(x+1) - x ln x, with g(0) = 0.
double g(double x);
/// g'(x) = ln(1 + 1/x).
double g_derivative(double x);
/// Unique N >= 0 with g(N) = S. Bisection on [e^{S-1} - 1, e^S - 1] followed
/// by a Newton polish.
double g_inv(double entropy);

PhotonNumberValue entropy_photon_number(const DensityOperator& rho, int n_modes);
PhotonNumberValue entropy_photon_number(const EntropyValue& s);

// e^{h/n} / (2πe), taken literally.
double entropy_power(double h, int n);
// Per-real-dimension reading for scalar real variables, e^{2h}/(2πe), so that
// a variance-σ² Gaussian has entropy power σ².
double real_scalar_entropy_power(double h);

}  // namespace epnilab

#endif  // EPNILAB_ENTROPY_HPP_
