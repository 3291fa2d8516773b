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

#include "epnilab/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epnilab/entropy.hpp"
#include "epnilab/errors.hpp"

namespace epnilab {

namespace {

Complex complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

Eigen::MatrixXcd ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXcd g(rows, cols);
  // Fill in a fixed order so the stream consumption is well defined.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = complex_gaussian(rng);
  }
  return g;
}

// Shannon entropy of p^β / Σ p^β, computed from log-weights for stability.
double tempered_entropy(const Eigen::VectorXd& log_p, double beta, Eigen::VectorXd* out) {
  const double top = beta * log_p.maxCoeff();
  Eigen::VectorXd q = (beta * log_p.array() - top).exp().matrix();
  q /= q.sum();
  if (out) *out = q;
  return spectrum_entropy(q);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t campaign_seed, std::uint64_t trial) {
  return splitmix64(splitmix64(campaign_seed) ^ splitmix64(trial + 0x5851F42D4C957F2DULL));
}

PureState sample_haar_pure(const ModeDims& dims, Rng& rng) {
  const auto dim = static_cast<Eigen::Index>(total_dimension(dims));
  Eigen::VectorXcd v = ginibre(dim, 1, rng).col(0);
  v.normalize();
  return PureState(std::move(v), dims);
}

Eigen::MatrixXcd sample_haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw InvalidArgument("sample_haar_unitary: dim must be >= 1");
  const Eigen::MatrixXcd g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is Haar.
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

DensityOperator sample_ginibre_density(const ModeDims& dims, Rng& rng) {
  const auto dim = static_cast<Eigen::Index>(total_dimension(dims));
  const Eigen::MatrixXcd g = ginibre(dim, dim, rng);
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityOperator(std::move(rho), dims);
}

namespace {

// Displacement route for one mode. Returns false if the residual is still
// above tolerance after max_iterations.
bool displace_to_zero_mean(PureState& current, int mode, double tolerance, int max_iterations,
                           double* residual) {
  const PureState start = current;
  auto residual_at = [&](Complex beta) {
    PureState moved = displace(start, mode, beta);
    return std::pair{mean_field(moved, mode), std::move(moved)};
  };
  Complex beta = 0.0;
  auto [field, state] = residual_at(beta);
  const double target = std::min(tolerance, 1e-12);
  for (int iter = 0; iter < max_iterations && std::abs(field) > target; ++iter) {
    Complex step = -field;
    if (iter > 0) {
      // Newton step with a finite-difference Jacobian of (Re, Im) ⟨â⟩.
      const double h = 1e-6;
      const Complex fr = residual_at(beta + Complex(h, 0.0)).first;
      const Complex fi = residual_at(beta + Complex(0.0, h)).first;
      Eigen::Matrix2d jac;
      jac << (fr - field).real() / h, (fi - field).real() / h,
             (fr - field).imag() / h, (fi - field).imag() / h;
      if (std::abs(jac.determinant()) > 1e-8) {
        const Eigen::Vector2d delta = jac.inverse() * Eigen::Vector2d(field.real(), field.imag());
        step = Complex(-delta(0), -delta(1));
      }
    }
    // Backtrack until the residual decreases.
    double scale = 1.0;
    for (int k = 0; k < 30; ++k, scale *= 0.5) {
      auto trial = residual_at(beta + scale * step);
      if (std::abs(trial.first) < std::abs(field) || k == 29) {
        beta += scale * step;
        field = trial.first;
        state = std::move(trial.second);
        break;
      }
    }
  }
  *residual = std::abs(field);
  if (!(*residual < tolerance)) return false;
  current = std::move(state);
  return true;
}

// (Â x) for the lowering operator of one mode acting on a flattened state, and
// its adjoint.
void apply_lowering(const Eigen::VectorXcd& x, const ModeDims& dims, int mode,
                    Eigen::VectorXcd& lower, Eigen::VectorXcd& raise) {
  const int d = dims[mode];
  const std::size_t stride = mode_strides(dims)[mode];
  const std::size_t block = stride * static_cast<std::size_t>(d);
  const auto size = static_cast<std::size_t>(x.size());
  lower.setZero(x.size());
  raise.setZero(x.size());
  for (std::size_t outer = 0; outer < size; outer += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t base = outer + inner;
      for (int k = 0; k + 1 < d; ++k) {
        const double s = std::sqrt(static_cast<double>(k + 1));
        const auto lo = static_cast<Eigen::Index>(base + k * stride);
        const auto hi = static_cast<Eigen::Index>(base + (k + 1) * stride);
        lower(lo) = s * x(hi);
        raise(hi) = s * x(lo);
      }
    }
  }
}

// Minimum-norm Gauss-Newton projection of the amplitudes onto
// {⟨â_mode⟩ = 0, ‖ψ‖ = 1}, starting from `current`. With F = x†Âx the
// gradients are ∂F/∂Re x_j = (Âx)_j + conj(Â†x)_j and
// ∂F/∂Im x_j = i(conj(Â†x)_j - (Âx)_j).
bool project_to_zero_mean(PureState& current, int mode, double tolerance, int max_iterations,
                          double* residual) {
  const ModeDims& dims = current.mode_dims();
  const Eigen::Index size = current.amplitudes().size();
  Eigen::VectorXcd x = current.amplitudes();
  Eigen::VectorXcd lower, raise;
  const double target = std::min(tolerance, 1e-12);
  Eigen::MatrixXd jac(3, 2 * size);
  Eigen::Vector3d r;
  for (int iter = 0;; ++iter) {
    apply_lowering(x, dims, mode, lower, raise);
    const Complex f = x.dot(lower);  // conj(x) · Âx
    r << f.real(), f.imag(), x.squaredNorm() - 1.0;
    if (std::abs(f) <= target || iter >= max_iterations) break;
    for (Eigen::Index j = 0; j < size; ++j) {
      const Complex du = lower(j) + std::conj(raise(j));
      const Complex dv = Complex(0.0, 1.0) * (std::conj(raise(j)) - lower(j));
      jac.col(j) << du.real(), du.imag(), 2.0 * x(j).real();
      jac.col(size + j) << dv.real(), dv.imag(), 2.0 * x(j).imag();
    }
    const Eigen::VectorXd delta = jac.transpose() * (jac * jac.transpose()).ldlt().solve(r);
    for (Eigen::Index j = 0; j < size; ++j) x(j) -= Complex(delta(j), delta(size + j));
    x.normalize();
  }
  *residual = std::hypot(r(0), r(1));
  if (!(*residual < tolerance)) return false;
  current = PureState(std::move(x), dims, current.discarded_mass());
  return true;
}

}  // namespace

PureState project_zero_mean(const PureState& psi, double tolerance, int max_iterations) {
  PureState current = psi;
  for (int mode = 0; mode < psi.num_modes(); ++mode) {
    double residual = 0.0;
    if (!project_to_zero_mean(current, mode, tolerance, max_iterations, &residual)) {
      throw SamplerError("project_zero_mean: mode " + std::to_string(mode) +
                         " still has |<a>| = " + std::to_string(residual));
    }
  }
  return current;
}

PureState remove_mean_field(const PureState& psi, double tolerance, int max_iterations) {
  PureState current = psi;
  for (int mode = 0; mode < psi.num_modes(); ++mode) {
    double residual = 0.0;
    if (displace_to_zero_mean(current, mode, tolerance, max_iterations, &residual)) continue;
    // Displacement is nearly ineffective when the top Fock level carries weight
    // ~1/d (the truncated commutator [â, â†] is traceless); project instead.
    const double displaced_residual = residual;
    if (project_to_zero_mean(current, mode, tolerance, max_iterations, &residual)) continue;
    throw SamplerError("remove_mean_field: mode " + std::to_string(mode) +
                       " still has |<a>| = " + std::to_string(displaced_residual) +
                       " (displacement) / " + std::to_string(residual) +
                       " (projection) after " + std::to_string(max_iterations) +
                       " iterations");
  }
  return current;
}

PureState sample_pure_zero_mean(int dim, int n_modes, Rng& rng) {
  if (dim < 2) throw InvalidArgument("sample_pure_zero_mean: dim must be >= 2");
  if (n_modes < 1) throw InvalidArgument("sample_pure_zero_mean: n_modes must be >= 1");
  return remove_mean_field(sample_haar_pure(ModeDims(n_modes, dim), rng));
}

PureState sample_pure_zero_mean(int dim, int n_modes, std::uint64_t seed) {
  Rng rng(seed);
  return sample_pure_zero_mean(dim, n_modes, rng);
}

Eigen::VectorXd tempered_spectrum(const Eigen::VectorXd& p, double entropy) {
  const auto size = p.size();
  if (size < 1) throw InvalidArgument("tempered_spectrum: empty spectrum");
  if (!(entropy >= 0.0)) throw InvalidArgument("tempered_spectrum: entropy must be >= 0");
  const double max_entropy = std::log(static_cast<double>(size));
  if (entropy > max_entropy + 1e-12) {
    throw InfeasibleConstraint("tempered_spectrum: entropy " + std::to_string(entropy) +
                               " exceeds ln d = " + std::to_string(max_entropy));
  }
  if (entropy >= max_entropy) {
    return Eigen::VectorXd::Constant(size, 1.0 / static_cast<double>(size));
  }
  Eigen::Index top = 0;
  p.maxCoeff(&top);
  if (entropy == 0.0) {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(size);
    q(top) = 1.0;
    return q;
  }
  const Eigen::VectorXd log_p = p.array().max(1e-300).log().matrix();
  double lo = 0.0, hi = 1.0;
  while (tempered_entropy(log_p, hi, nullptr) > entropy) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) {
      throw InfeasibleConstraint("tempered_spectrum: degenerate maximum weight");
    }
  }
  Eigen::VectorXd q;
  for (int iter = 0; iter < 300; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double s = tempered_entropy(log_p, mid, &q);
    if (std::abs(s - entropy) < 1e-13) return q;
    (s > entropy ? lo : hi) = mid;
  }
  tempered_entropy(log_p, 0.5 * (lo + hi), &q);
  return q;
}

DensityOperator sample_density_fixed_entropy(const ModeDims& dims, double entropy,
                                             Rng& rng) {
  const auto dim = static_cast<int>(total_dimension(dims));
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd p(dim);
  for (int i = 0; i < dim; ++i) p(i) = expo(rng);
  const Eigen::VectorXd q = tempered_spectrum(p, entropy);
  const Eigen::MatrixXcd u = sample_haar_unitary(dim, rng);
  Eigen::MatrixXcd rho = u * q.cast<Complex>().asDiagonal() * u.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityOperator(std::move(rho), dims);
}

DensityOperator sample_density_fixed_entropy(int dim, double entropy, std::uint64_t seed) {
  if (dim < 2) throw InvalidArgument("sample_density_fixed_entropy: dim must be >= 2");
  Rng rng(seed);
  return sample_density_fixed_entropy(ModeDims{dim}, entropy, rng);
}

DensityOperator two_point_mixture(const ModeDims& dims, double entropy) {
  const auto dim = static_cast<Eigen::Index>(total_dimension(dims));
  const double max_entropy = std::log(static_cast<double>(dim));
  if (!(entropy >= 0.0)) throw InvalidArgument("two_point_mixture: entropy must be >= 0");
  if (entropy > max_entropy + 1e-12) {
    throw InfeasibleConstraint("two_point_mixture: entropy exceeds ln D");
  }
  auto spectrum = [dim](double w) {
    Eigen::VectorXd q = Eigen::VectorXd::Constant(dim, w / static_cast<double>(dim));
    q(0) += 1.0 - w;
    return q;
  };
  // Entropy is concave in w with zero slope at w = 1, hence increasing.
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-16; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (spectrum_entropy(spectrum(mid)) < entropy ? lo : hi) = mid;
  }
  const Eigen::VectorXd q = spectrum(0.5 * (lo + hi));
  return DensityOperator(q.cast<Complex>().asDiagonal(), dims);
}

}  // namespace epnilab
