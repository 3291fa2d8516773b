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

#ifndef EPNILAB_CAPACITY_HPP_
#define EPNILAB_CAPACITY_HPP_

#include <iosfwd>
#include <optional>
#include <vector>

namespace epnilab {

// Bosonic thermal-noise channel c = √η a + √(1-η) b with transmitter budget
// E|a|² ≤ nbar and noise E|b|² = noise_n.
struct ChannelParams {
  double eta = 0.5;
  double nbar = 0.0;
  double noise_n = 0.0;

  // Throws InvalidArgument unless 0 < eta < 1 and nbar, noise_n ≥ 0.
  void validate() const;
};

// All capacities are in nats per channel use.

// Classical additive-noise capacity ln[1 + ηN̄/((1-η)N)]. Throws Divergence at N = 0.
double shannon_capacity(const ChannelParams& p);
double homodyne_capacity(const ChannelParams& p);
double heterodyne_capacity(const ChannelParams& p);
// g(ηN̄); throws InvalidArgument for noise_n ≠ 0.
double pure_loss_capacity(const ChannelParams& p);
// g(ηN̄ + (1-η)N) - g((1-η)N).
double thermal_lower_bound(const ChannelParams& p);

struct CapacityPoint {
  ChannelParams params;
  std::optional<double> c_classical;  // empty: divergent (N = 0)
  double c_homodyne = 0.0;
  double c_heterodyne = 0.0;
  std::optional<double> c_pure_loss;  // empty: undefined (N > 0)
  double c_thermal_lb = 0.0;
};

CapacityPoint evaluate_capacities(const ChannelParams& p);

// Default sweep grid: eta in {0.1, ..., 0.9}, nbar in {0.1, 0.2, 0.5, 1, 2, 5,
// 10}, noise_n in {0, 0.5, 1, 5}.
std::vector<double> default_eta_grid();
std::vector<double> default_nbar_grid();
std::vector<double> default_noise_grid();

// Cartesian product in (eta, nbar, noise_n) order, eta slowest.
std::vector<CapacityPoint> capacity_sweep(const std::vector<double>& etas,
                                          const std::vector<double>& nbars,
                                          const std::vector<double>& noises);

// Comma-separated table with one header row. Divergent entries print as "inf",
// undefined entries as "na"; values use 17 significant digits.
void write_capacity_table(std::ostream& os, const std::vector<CapacityPoint>& points);

inline constexpr const char* kInfiniteSentinel = "inf";
inline constexpr const char* kUndefinedSentinel = "na";

}  // namespace epnilab

#endif  // EPNILAB_CAPACITY_HPP_
