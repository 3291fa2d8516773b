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

#include "epnilab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "epnilab/errors.hpp"

namespace epnilab {

namespace {

void require_dim(int dim, const char* what) {
  if (dim < 1) {
    throw InvalidArgument(std::string(what) + ": dimension must be >= 1, got " +
                          std::to_string(dim));
  }
}

// Decompose a flat index into per-mode digits.
void unflatten(std::size_t index, const ModeDims& dims,
               std::vector<int>& digits) {
  digits.resize(dims.size());
  for (std::size_t m = dims.size(); m-- > 0;) {
    digits[m] = static_cast<int>(index % static_cast<std::size_t>(dims[m]));
    index /= static_cast<std::size_t>(dims[m]);
  }
}

// Gauss-Laguerre nodes and weights for ∫_0^∞ e^{-t} f(t) dt. Newton-refined
// roots of L_n, weights from the derivative formula so that tiny weights keep
// full relative precision.
void gauss_laguerre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * n);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * n);
    } else {
      const double ai = i - 1;
      z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2]);
    }
    double p1 = 0.0, p2 = 0.0, pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      p1 = 1.0;
      p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1 - z) * p2 - (j - 1) * p3) / j;
      }
      pp = (n * p1 - n * p2) / z;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, z)) break;
    }
    nodes[i] = z;
    weights[i] = -1.0 / (pp * n * p2);
  }
}

}  // namespace

std::size_t total_dimension(const ModeDims& dims) {
  if (dims.empty()) throw InvalidArgument("mode_dims must not be empty");
  std::size_t total = 1;
  for (int d : dims) {
    require_dim(d, "mode_dims");
    total *= static_cast<std::size_t>(d);
  }
  return total;
}

std::vector<std::size_t> mode_strides(const ModeDims& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t m = dims.size(); m-- > 1;) {
    strides[m - 1] = strides[m] * static_cast<std::size_t>(dims[m]);
  }
  return strides;
}

PureState::PureState(Eigen::VectorXcd amplitudes, ModeDims dims,
                     double discarded_mass)
    : amplitudes_(std::move(amplitudes)),
      dims_(std::move(dims)),
      discarded_mass_(discarded_mass) {
  if (total_dimension(dims_) != static_cast<std::size_t>(amplitudes_.size())) {
    throw InvalidArgument("PureState: amplitude length does not match mode_dims");
  }
}

DensityOperator PureState::projector() const {
  return DensityOperator(amplitudes_ * amplitudes_.adjoint(), dims_,
                         discarded_mass_);
}

DensityOperator::DensityOperator(Eigen::MatrixXcd matrix, ModeDims dims,
                                 double discarded_mass)
    : matrix_(std::move(matrix)),
      dims_(std::move(dims)),
      discarded_mass_(discarded_mass) {
  const std::size_t total = total_dimension(dims_);
  if (matrix_.rows() != matrix_.cols() ||
      static_cast<std::size_t>(matrix_.rows()) != total) {
    throw InvalidArgument("DensityOperator: matrix shape does not match mode_dims");
  }
}

PureState vacuum_state(const ModeDims& dims) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(
      static_cast<Eigen::Index>(total_dimension(dims)));
  amps(0) = 1.0;
  return PureState(std::move(amps), dims);
}

PureState number_state(int photons, int dim) {
  require_dim(dim, "number_state");
  if (photons < 0 || photons >= dim) {
    throw InvalidArgument("number_state: photon number " +
                          std::to_string(photons) +
                          " outside truncation d=" + std::to_string(dim));
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
  amps(photons) = 1.0;
  return PureState(std::move(amps), {dim});
}

double coherent_tail_mass(Complex alpha, int dim) {
  require_dim(dim, "coherent_tail_mass");
  const double x = std::norm(alpha);
  if (x == 0.0) return 0.0;
  double tail = 0.0;
  for (int k = dim;; ++k) {
    const double term =
        std::exp(-x + k * std::log(x) - std::lgamma(k + 1.0));
    tail += term;
    if (k > x && term < 1e-18 * std::max(tail, 1e-300)) break;
    if (k > dim + 10000) break;
  }
  return tail;
}

PureState coherent_state(Complex alpha, int dim) {
  require_dim(dim, "coherent_state");
  Eigen::VectorXcd amps(dim);
  amps(0) = std::exp(-0.5 * std::norm(alpha));
  for (int k = 1; k < dim; ++k) {
    amps(k) = amps(k - 1) * alpha / std::sqrt(static_cast<double>(k));
  }
  const double tail = coherent_tail_mass(alpha, dim);
  amps /= amps.norm();
  return PureState(std::move(amps), {dim}, tail);
}

DensityOperator thermal_state(double mean_photons, int dim) {
  if (!(mean_photons >= 0.0)) {
    throw InvalidArgument("thermal_state: mean photon number must be >= 0");
  }
  require_dim(dim, "thermal_state");
  const double ratio = mean_photons / (mean_photons + 1.0);
  const double tail = std::pow(ratio, dim);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  double p = 1.0 / (mean_photons + 1.0);
  for (int i = 0; i < dim; ++i) {
    rho(i, i) = p / (1.0 - tail);
    p *= ratio;
  }
  return DensityOperator(std::move(rho), {dim}, tail);
}

int thermal_dimension_for_tail(double mean_photons, double tail_tolerance,
                               int max_dim) {
  if (!(mean_photons >= 0.0)) {
    throw InvalidArgument("thermal_dimension_for_tail: N must be >= 0");
  }
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
    throw InvalidArgument("thermal_dimension_for_tail: tolerance must lie in (0,1)");
  }
  if (mean_photons == 0.0) return 1;
  const double ratio = mean_photons / (mean_photons + 1.0);
  int d = std::max(
      1, static_cast<int>(std::floor(std::log(tail_tolerance) / std::log(ratio))));
  while (d > 1 && std::pow(ratio, d - 1) < tail_tolerance) --d;
  while (std::pow(ratio, d) >= tail_tolerance) ++d;
  return std::min(d, max_dim);
}

DensityOperator coherent_mixture_thermal(double mean_photons, int dim,
                                         CoherentQuadrature grid) {
  if (!(mean_photons > 0.0)) {
    throw InvalidArgument("coherent_mixture_thermal: N must be > 0");
  }
  require_dim(dim, "coherent_mixture_thermal");
  if (grid.radial_nodes < 1 || grid.angular_nodes < 1) {
    throw InvalidArgument("coherent_mixture_thermal: node counts must be >= 1");
  }
  std::vector<double> nodes, weights;
  gauss_laguerre(grid.radial_nodes, nodes, weights);

  // ∫ d²α e^{-|α|²/N}/(πN) |α⟩⟨α| with u = |α|² = t N/(N+1). The weight
  // e^{-t} absorbs both e^{-u/N} and the e^{-u} of the coherent amplitudes:
  //   ⟨m|ρ|n⟩ = Σ_i w_i/(N+1) · (1/2π)∮ dφ α^m α*^n / √(m! n!).
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::VectorXcd c(dim);
  const double scale = mean_photons / (mean_photons + 1.0);
  for (int i = 0; i < grid.radial_nodes; ++i) {
    const double u = nodes[i] * scale;
    const double w = weights[i] / (mean_photons + 1.0) / grid.angular_nodes;
    const double r = std::sqrt(u);
    for (int j = 0; j < grid.angular_nodes; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / grid.angular_nodes;
      const Complex alpha = std::polar(r, phi);
      c(0) = 1.0;
      for (int k = 1; k < dim; ++k) {
        c(k) = c(k - 1) * alpha / std::sqrt(static_cast<double>(k));
      }
      rho.noalias() += w * c * c.adjoint();
    }
  }
  const double mass = rho.trace().real();
  return DensityOperator(std::move(rho), {dim}, 1.0 - mass);
}

DensityOperator tensor(const DensityOperator& x, const DensityOperator& y,
                       std::size_t max_total_dim) {
  const std::size_t total = x.dimension() * y.dimension();
  if (total > max_total_dim) {
    throw ResourceLimit("tensor: total dimension " + std::to_string(total) +
                        " exceeds limit " + std::to_string(max_total_dim));
  }
  const auto nx = static_cast<Eigen::Index>(x.dimension());
  const auto ny = static_cast<Eigen::Index>(y.dimension());
  Eigen::MatrixXcd out(nx * ny, nx * ny);
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < nx; ++j) {
      out.block(i * ny, j * ny, ny, ny) = x.matrix()(i, j) * y.matrix();
    }
  }
  ModeDims dims = x.mode_dims();
  dims.insert(dims.end(), y.mode_dims().begin(), y.mode_dims().end());
  const double mass = (1.0 - x.discarded_mass()) * (1.0 - y.discarded_mass());
  return DensityOperator(std::move(out), std::move(dims), 1.0 - mass);
}

PureState tensor(const PureState& x, const PureState& y,
                 std::size_t max_total_dim) {
  const std::size_t total = x.dimension() * y.dimension();
  if (total > max_total_dim) {
    throw ResourceLimit("tensor: total dimension " + std::to_string(total) +
                        " exceeds limit " + std::to_string(max_total_dim));
  }
  const auto ny = static_cast<Eigen::Index>(y.dimension());
  Eigen::VectorXcd out(static_cast<Eigen::Index>(total));
  for (Eigen::Index i = 0; i < x.amplitudes().size(); ++i) {
    out.segment(i * ny, ny) = x.amplitudes()(i) * y.amplitudes();
  }
  ModeDims dims = x.mode_dims();
  dims.insert(dims.end(), y.mode_dims().begin(), y.mode_dims().end());
  const double mass = (1.0 - x.discarded_mass()) * (1.0 - y.discarded_mass());
  return PureState(std::move(out), std::move(dims), 1.0 - mass);
}

DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const int> keep) {
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set is empty");
  const ModeDims& dims = rho.mode_dims();
  const int n = rho.num_modes();
  std::vector<bool> kept(n, false);
  for (int m : keep) {
    if (m < 0 || m >= n) {
      throw InvalidArgument("partial_trace: mode index out of range");
    }
    if (kept[m]) throw InvalidArgument("partial_trace: duplicate mode index");
    kept[m] = true;
  }
  ModeDims keep_dims, trace_dims;
  for (int m = 0; m < n; ++m) (kept[m] ? keep_dims : trace_dims).push_back(dims[m]);
  const std::size_t keep_total = total_dimension(keep_dims);
  const std::size_t trace_total =
      trace_dims.empty() ? 1 : total_dimension(trace_dims);

  // Group full indices by their traced-out digits; only same-group pairs
  // contribute.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> groups(
      trace_total);
  std::vector<int> digits;
  for (std::size_t idx = 0; idx < rho.dimension(); ++idx) {
    unflatten(idx, dims, digits);
    std::size_t k = 0, t = 0;
    for (int m = 0; m < n; ++m) {
      if (kept[m]) {
        k = k * dims[m] + digits[m];
      } else {
        t = t * dims[m] + digits[m];
      }
    }
    groups[t].emplace_back(idx, k);
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(keep_total),
      static_cast<Eigen::Index>(keep_total));
  const Eigen::MatrixXcd& m = rho.matrix();
  for (const auto& group : groups) {
    for (const auto& [i, ki] : group) {
      for (const auto& [j, kj] : group) {
        out(static_cast<Eigen::Index>(ki), static_cast<Eigen::Index>(kj)) +=
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return DensityOperator(std::move(out), std::move(keep_dims),
                         rho.discarded_mass());
}

Eigen::MatrixXcd lowering_operator(int dim) {
  require_dim(dim, "lowering_operator");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

Complex mean_field(const DensityOperator& rho, int mode) {
  const ModeDims& dims = rho.mode_dims();
  if (mode < 0 || mode >= rho.num_modes()) {
    throw InvalidArgument("mean_field: mode index out of range");
  }
  const auto stride = mode_strides(dims)[mode];
  Complex sum = 0.0;
  std::vector<int> digits;
  for (std::size_t idx = 0; idx < rho.dimension(); ++idx) {
    unflatten(idx, dims, digits);
    const int k = digits[mode];
    if (k == 0) continue;
    sum += std::sqrt(static_cast<double>(k)) *
           rho.matrix()(static_cast<Eigen::Index>(idx),
                        static_cast<Eigen::Index>(idx - stride));
  }
  return sum;
}

Complex mean_field(const PureState& psi, int mode) {
  const ModeDims& dims = psi.mode_dims();
  if (mode < 0 || mode >= psi.num_modes()) {
    throw InvalidArgument("mean_field: mode index out of range");
  }
  const auto stride = mode_strides(dims)[mode];
  const auto& v = psi.amplitudes();
  Complex sum = 0.0;
  std::vector<int> digits;
  for (std::size_t idx = 0; idx < psi.dimension(); ++idx) {
    unflatten(idx, dims, digits);
    const int k = digits[mode];
    if (k == 0) continue;
    sum += std::sqrt(static_cast<double>(k)) *
           std::conj(v(static_cast<Eigen::Index>(idx - stride))) *
           v(static_cast<Eigen::Index>(idx));
  }
  return sum;
}

double mean_photon_number(const DensityOperator& rho, int mode) {
  if (mode < 0 || mode >= rho.num_modes()) {
    throw InvalidArgument("mean_photon_number: mode index out of range");
  }
  double sum = 0.0;
  std::vector<int> digits;
  for (std::size_t idx = 0; idx < rho.dimension(); ++idx) {
    unflatten(idx, rho.mode_dims(), digits);
    const auto i = static_cast<Eigen::Index>(idx);
    sum += digits[mode] * rho.matrix()(i, i).real();
  }
  return sum;
}

Eigen::MatrixXcd truncated_displacement(Complex beta, int dim) {
  const Eigen::MatrixXcd a = lowering_operator(dim);
  const Eigen::MatrixXcd generator = beta * a.adjoint() - std::conj(beta) * a;
  // generator is anti-Hermitian, so i·generator is Hermitian.
  const Eigen::MatrixXcd hermitian = Complex(0.0, 1.0) * generator;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian);
  Eigen::VectorXcd phases(dim);
  for (int k = 0; k < dim; ++k) {
    phases(k) = std::exp(Complex(0.0, -eig.eigenvalues()(k)));
  }
  return eig.eigenvectors() * phases.asDiagonal() *
         eig.eigenvectors().adjoint();
}

PureState displace(const PureState& psi, int mode, Complex beta) {
  if (mode < 0 || mode >= psi.num_modes()) {
    throw InvalidArgument("displace: mode index out of range");
  }
  const int d = psi.mode_dims()[mode];
  const Eigen::MatrixXcd op = truncated_displacement(beta, d);
  const std::size_t stride = mode_strides(psi.mode_dims())[mode];
  const std::size_t block = stride * static_cast<std::size_t>(d);
  Eigen::VectorXcd out = psi.amplitudes();
  Eigen::VectorXcd fiber(d);
  for (std::size_t outer = 0; outer < psi.dimension(); outer += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t base = outer + inner;
      for (int k = 0; k < d; ++k) {
        fiber(k) = psi.amplitudes()(static_cast<Eigen::Index>(base + k * stride));
      }
      const Eigen::VectorXcd moved = op * fiber;
      for (int k = 0; k < d; ++k) {
        out(static_cast<Eigen::Index>(base + k * stride)) = moved(k);
      }
    }
  }
  return PureState(std::move(out), psi.mode_dims(), psi.discarded_mass());
}

StateDiagnostics validate(const DensityOperator& rho) {
  StateDiagnostics diag;
  const Eigen::MatrixXcd& m = rho.matrix();
  diag.trace_deficit = std::abs(1.0 - rho.trace());
  diag.hermiticity_residual = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd hermitian = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian,
                                                      Eigen::EigenvaluesOnly);
  diag.min_eigenvalue = eig.eigenvalues().minCoeff();
  std::vector<int> digits;
  std::vector<double> top(rho.mode_dims().size(), 0.0);
  for (std::size_t idx = 0; idx < rho.dimension(); ++idx) {
    unflatten(idx, rho.mode_dims(), digits);
    const double p =
        m(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)).real();
    for (std::size_t mode = 0; mode < digits.size(); ++mode) {
      const int d = rho.mode_dims()[mode];
      if (d > 1 && digits[mode] == d - 1) top[mode] += p;
    }
  }
  diag.tail_mass = *std::max_element(top.begin(), top.end());
  diag.discarded_mass = rho.discarded_mass();
  return diag;
}

DensityOperator embed(const DensityOperator& rho, const ModeDims& new_dims) {
  if (new_dims.size() != rho.mode_dims().size()) {
    throw InvalidArgument("embed: mode count mismatch");
  }
  for (std::size_t m = 0; m < new_dims.size(); ++m) {
    if (new_dims[m] < rho.mode_dims()[m]) {
      throw InvalidArgument("embed: new dimension smaller than current");
    }
  }
  const std::size_t total = total_dimension(new_dims);
  if (total > kMaxTotalDimension) {
    throw ResourceLimit("embed: total dimension exceeds limit");
  }
  const auto strides = mode_strides(new_dims);
  std::vector<Eigen::Index> map(rho.dimension());
  std::vector<int> digits;
  for (std::size_t idx = 0; idx < rho.dimension(); ++idx) {
    unflatten(idx, rho.mode_dims(), digits);
    std::size_t target = 0;
    for (std::size_t m = 0; m < digits.size(); ++m) target += digits[m] * strides[m];
    map[idx] = static_cast<Eigen::Index>(target);
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = 0; j < map.size(); ++j) {
      out(map[i], map[j]) = rho.matrix()(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j));
    }
  }
  return DensityOperator(std::move(out), new_dims, rho.discarded_mass());
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.mode_dims() != sigma.mode_dims()) {
    throw InvalidArgument("trace_distance: shape mismatch");
  }
  const Eigen::MatrixXcd diff = rho.matrix() - sigma.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
      0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

}  // namespace epnilab
