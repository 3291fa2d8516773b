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

#include "epnilab/classical_epi.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "epnilab/entropy.hpp"
#include "epnilab/errors.hpp"

namespace epnilab {

namespace {

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidArgument("eta must lie in [0, 1]");
  }
}

constexpr double kAbsTolerance = 1e-9;

}  // namespace

GaussianMixture1D::GaussianMixture1D(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw InvalidArgument("GaussianMixture1D: at least one component required");
  }
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0)) throw InvalidArgument("GaussianMixture1D: weights must be > 0");
    if (!(c.variance > 0.0)) {
      throw InvalidArgument("GaussianMixture1D: variances must be > 0");
    }
    if (!std::isfinite(c.mean)) throw InvalidArgument("GaussianMixture1D: non-finite mean");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument("GaussianMixture1D: weights sum to " + std::to_string(total));
  }
}

GaussianMixture1D GaussianMixture1D::gaussian(double mean, double variance) {
  return GaussianMixture1D({{1.0, mean, variance}});
}

double GaussianMixture1D::density(double x) const {
  double f = 0.0;
  for (const auto& c : components_) {
    const double z = x - c.mean;
    f += c.weight * std::exp(-0.5 * z * z / c.variance) /
         std::sqrt(2.0 * std::numbers::pi * c.variance);
  }
  return f;
}

double GaussianMixture1D::variance() const {
  double mean = 0.0, second = 0.0;
  for (const auto& c : components_) {
    mean += c.weight * c.mean;
    second += c.weight * (c.variance + c.mean * c.mean);
  }
  return second - mean * mean;
}

GaussianMixture1D GaussianMixture1D::scaled(double c) const {
  if (c == 0.0) throw InvalidArgument("GaussianMixture1D::scaled: zero scale");
  std::vector<GaussianComponent> out = components_;
  for (auto& comp : out) {
    comp.mean *= c;
    comp.variance *= c * c;
  }
  return GaussianMixture1D(std::move(out));
}

GaussianMixture1D combine(const GaussianMixture1D& x, const GaussianMixture1D& y,
                          double eta) {
  require_eta(eta);
  // Degenerate transmissivities reproduce the surviving input exactly.
  if (eta == 1.0) return x;
  if (eta == 0.0) return y;
  const double a = std::sqrt(eta), b = std::sqrt(1.0 - eta);
  std::vector<GaussianComponent> out;
  out.reserve(x.components().size() * y.components().size());
  for (const auto& cx : x.components()) {
    for (const auto& cy : y.components()) {
      out.push_back({cx.weight * cy.weight, a * cx.mean + b * cy.mean,
                     eta * cx.variance + (1.0 - eta) * cy.variance});
    }
  }
  // Product weights can drift from unit sum by a few ulps.
  const double total = std::accumulate(out.begin(), out.end(), 0.0,
                                       [](double s, const auto& c) { return s + c.weight; });
  for (auto& c : out) c.weight /= total;
  return GaussianMixture1D(std::move(out));
}

double differential_entropy(const GaussianMixture1D& gm) {
  double lo_mean = gm.components().front().mean, hi_mean = lo_mean, max_sd = 0.0;
  std::vector<double> breaks;
  for (const auto& c : gm.components()) {
    lo_mean = std::min(lo_mean, c.mean);
    hi_mean = std::max(hi_mean, c.mean);
    max_sd = std::max(max_sd, std::sqrt(c.variance));
    breaks.push_back(c.mean);
  }
  const double lo = lo_mean - 12.0 * max_sd;
  const double hi = hi_mean + 12.0 * max_sd;
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto integrand = [&gm](double x) {
    const double f = gm.density(x);
    return f < 1e-300 ? 0.0 : -f * std::log(f);
  };
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  double total = 0.0, total_error = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double error = 0.0;
    total += Quadrature::integrate(integrand, breaks[i], breaks[i + 1], 18, 1e-11,
                                   &error);
    total_error += error;
  }
  if (!(total_error <= kAbsTolerance) || !std::isfinite(total)) {
    throw NumericalFailure("differential_entropy: quadrature error estimate " +
                           std::to_string(total_error) + " over [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return total;
}

EpiSlackReport epi_check(const GaussianMixture1D& x, const GaussianMixture1D& y,
                         double eta) {
  require_eta(eta);
  EpiSlackReport r;
  r.eta = eta;
  r.h_x = differential_entropy(x);
  r.h_y = differential_entropy(y);
  r.h_z = differential_entropy(combine(x, y, eta));
  r.p_x = real_scalar_entropy_power(r.h_x);
  r.p_y = real_scalar_entropy_power(r.h_y);
  r.p_z = real_scalar_entropy_power(r.h_z);
  const double mixed_power = eta * r.p_x + (1.0 - eta) * r.p_y;
  r.h_z_tilde =
      0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * mixed_power);
  r.slack_power = r.p_z - mixed_power;
  r.slack_log_power = r.h_z - r.h_z_tilde;
  r.slack_linear = r.h_z - eta * r.h_x - (1.0 - eta) * r.h_y;
  return r;
}

}  // namespace epnilab
