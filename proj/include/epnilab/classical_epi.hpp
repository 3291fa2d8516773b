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

#ifndef EPNILAB_CLASSICAL_EPI_HPP_
#define EPNILAB_CLASSICAL_EPI_HPP_

#include <vector>

namespace epnilab {

struct GaussianComponent {
  double weight = 1.0;
  double mean = 0.0;
  double variance = 1.0;
};

/// Scalar real random variable with a finite Gaussian-mixture density.
class GaussianMixture1D {
 public:
  // Throws InvalidArgument unless there is at least one component, every
  // weight and variance is positive and the weights sum to 1 within 1e-12.
  explicit GaussianMixture1D(std::vector<GaussianComponent> components);

  static GaussianMixture1D gaussian(double mean, double variance);

  const std::vector<GaussianComponent>& components() const { return components_; }
  double density(double x) const;
  double variance() const;
  // Law of c·X.
  GaussianMixture1D scaled(double c) const;

 private:
  std::vector<GaussianComponent> components_;
};

// Law of √η X + √(1-η) Y for independent X, Y: one component per pair.
GaussianMixture1D combine(const GaussianMixture1D& x, const GaussianMixture1D& y,
                          double eta);

// -∫ f ln f by adaptive Gauss-Kronrod over [min μ - 12 max σ, max μ + 12 max σ].
// Throws NumericalFailure if the error estimate exceeds 1e-9.
double differential_entropy(const GaussianMixture1D& gm);

struct EpiSlackReport {
  double eta = 0.0;
  double h_x = 0.0, h_y = 0.0, h_z = 0.0;
  double p_x = 0.0, p_y = 0.0, p_z = 0.0;
  double h_z_tilde = 0.0;  // Gaussian with variance ηP(X) + (1-η)P(Y)
  double slack_power = 0.0;  // P(Z) - ηP(X) - (1-η)P(Y)
  double slack_log_power = 0.0;  // h(Z) - h(Z̃)
  double slack_linear = 0.0;  // h(Z) - ηh(X) - (1-η)h(Y)
};

EpiSlackReport epi_check(const GaussianMixture1D& x, const GaussianMixture1D& y,
                         double eta);

}  // namespace epnilab

#endif  // EPNILAB_CLASSICAL_EPI_HPP_
