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

#include "epnilab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "epnilab/errors.hpp"

namespace epnilab {

double spectrum_entropy(const Eigen::VectorXd& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = eigenvalues(i);
    if (lambda < kEigenvalueFailureThreshold) {
      throw InvalidState("negative eigenvalue " + std::to_string(lambda) +
                         " below failure threshold");
    }
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  }
  // Eigenvalues a few ulps above 1 would otherwise give -0.0-ish negatives.
  return std::max(s, 0.0);
}

EntropyValue von_neumann_entropy(const DensityOperator& rho) {
  const Eigen::MatrixXcd& m = rho.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
      0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalFailure("von_neumann_entropy: eigensolver did not converge");
  }
  return {spectrum_entropy(eig.eigenvalues()), rho.num_modes()};
}

double g(double x) {
  if (x < 0.0 || std::isnan(x)) {
    throw InvalidArgument("g: argument must be >= 0");
  }
  if (x == 0.0) return 0.0;
  if (x < 1e-8) return x * (1.0 - std::log(x));
  // ln(1+x) + x ln(1+1/x): both terms positive, no cancellation at large x.
  return std::log1p(x) + x * std::log1p(1.0 / x);
}

double g_derivative(double x) {
  if (!(x > 0.0)) throw InvalidArgument("g_derivative: argument must be > 0");
  return std::log1p(1.0 / x);
}

double g_inv(double entropy) {
  if (entropy < 0.0 || std::isnan(entropy)) {
    throw InvalidArgument("g_inv: entropy must be >= 0");
  }
  if (entropy == 0.0) return 0.0;
  // ln(N+1) <= g(N) <= ln(N+1) + 1
  double lo = std::max(0.0, std::expm1(entropy - 1.0));
  double hi = std::expm1(entropy);
  for (int iter = 0; iter < 400 && hi - lo > 1e-13 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < entropy) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double n = 0.5 * (lo + hi);
  const double step = (g(n) - entropy) / g_derivative(n);
  if (n - step >= lo && n - step <= hi) n -= step;
  return n;
}

PhotonNumberValue entropy_photon_number(const EntropyValue& s) {
  if (s.n_modes < 1) throw InvalidArgument("entropy_photon_number: n must be >= 1");
  return {g_inv(s.per_mode())};
}

PhotonNumberValue entropy_photon_number(const DensityOperator& rho, int n_modes) {
  if (n_modes != rho.num_modes()) {
    throw InvalidArgument("entropy_photon_number: n does not match mode count");
  }
  return entropy_photon_number(von_neumann_entropy(rho));
}

double entropy_power(double h, int n) {
  if (n < 1) throw InvalidArgument("entropy_power: n must be >= 1");
  return std::exp(h / n) / (2.0 * std::numbers::pi * std::numbers::e);
}

double real_scalar_entropy_power(double h) {
  return std::exp(2.0 * h) / (2.0 * std::numbers::pi * std::numbers::e);
}

}  // namespace epnilab
