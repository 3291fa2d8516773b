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

#include "epnilab/capacity.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "epnilab/entropy.hpp"
#include "epnilab/errors.hpp"

namespace epnilab {

void ChannelParams::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw InvalidArgument("ChannelParams: eta must lie in (0, 1)");
  }
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw InvalidArgument("ChannelParams: nbar must be finite and >= 0");
  }
  if (!(noise_n >= 0.0) || !std::isfinite(noise_n)) {
    throw InvalidArgument("ChannelParams: noise_n must be finite and >= 0");
  }
}

double shannon_capacity(const ChannelParams& p) {
  p.validate();
  if (p.noise_n == 0.0) {
    throw Divergence(
        "shannon_capacity: unbounded at noise_n = 0 (additive-noise SNR is infinite)");
  }
  return std::log1p(p.eta * p.nbar / ((1.0 - p.eta) * p.noise_n));
}

double homodyne_capacity(const ChannelParams& p) {
  p.validate();
  return 0.5 * std::log1p(4.0 * p.eta * p.nbar / (2.0 * (1.0 - p.eta) * p.noise_n + 1.0));
}

double heterodyne_capacity(const ChannelParams& p) {
  p.validate();
  return std::log1p(2.0 * p.eta * p.nbar / ((1.0 - p.eta) * p.noise_n + 1.0));
}

double pure_loss_capacity(const ChannelParams& p) {
  p.validate();
  if (p.noise_n != 0.0) {
    throw InvalidArgument("pure_loss_capacity: requires noise_n = 0");
  }
  return g(p.eta * p.nbar);
}

double thermal_lower_bound(const ChannelParams& p) {
  p.validate();
  const double noise = (1.0 - p.eta) * p.noise_n;
  // Evaluate as g(noise + ηN̄) - g(noise) so N = 0 reproduces g(ηN̄) bit-for-bit.
  return g(noise + p.eta * p.nbar) - g(noise);
}

CapacityPoint evaluate_capacities(const ChannelParams& p) {
  p.validate();
  CapacityPoint pt;
  pt.params = p;
  if (p.noise_n > 0.0) pt.c_classical = shannon_capacity(p);
  pt.c_homodyne = homodyne_capacity(p);
  pt.c_heterodyne = heterodyne_capacity(p);
  if (p.noise_n == 0.0) pt.c_pure_loss = pure_loss_capacity(p);
  pt.c_thermal_lb = thermal_lower_bound(p);
  return pt;
}

std::vector<double> default_eta_grid() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

std::vector<double> default_nbar_grid() { return {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0}; }

std::vector<double> default_noise_grid() { return {0.0, 0.5, 1.0, 5.0}; }

std::vector<CapacityPoint> capacity_sweep(const std::vector<double>& etas,
                                          const std::vector<double>& nbars,
                                          const std::vector<double>& noises) {
  std::vector<CapacityPoint> out;
  out.reserve(etas.size() * nbars.size() * noises.size());
  for (double eta : etas) {
    for (double nbar : nbars) {
      for (double noise : noises) out.push_back(evaluate_capacities({eta, nbar, noise}));
    }
  }
  return out;
}

namespace {

std::string format_value(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string format_value(const std::optional<double>& v, const char* missing) {
  return v ? format_value(*v) : std::string(missing);
}

}  // namespace

void write_capacity_table(std::ostream& os, const std::vector<CapacityPoint>& points) {
  os << "eta,nbar,noise_n,c_classical,c_homodyne,c_heterodyne,c_pure_loss,c_thermal_lb\n";
  for (const auto& pt : points) {
    os << format_value(pt.params.eta) << ',' << format_value(pt.params.nbar) << ','
       << format_value(pt.params.noise_n) << ','
       << format_value(pt.c_classical, kInfiniteSentinel) << ','
       << format_value(pt.c_homodyne) << ',' << format_value(pt.c_heterodyne) << ','
       << format_value(pt.c_pure_loss, kUndefinedSentinel) << ','
       << format_value(pt.c_thermal_lb) << '\n';
  }
}

}  // namespace epnilab
