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

#ifndef EPNILAB_HARNESS_HPP_
#define EPNILAB_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "epnilab/fock.hpp"
#include "epnilab/optics.hpp"

namespace epnilab {

// Slacks of the entropy photon-number inequality for one product input.
// Nonnegative slack means the inequality holds on this instance.
struct EpniSlackReport {
  double eta = 0.0;
  int n_modes = 1;
  double S_a = 0.0, S_b = 0.0, S_c = 0.0;  // nats
  double N_a = 0.0, N_b = 0.0, N_c = 0.0;  // entropy photon numbers
  double slack_photon = 0.0;   // N_c - ηN_a - (1-η)N_b
  double slack_entropy = 0.0;  // S_c - n g(ηN_a + (1-η)N_b)
  double slack_linear = 0.0;   // S_c - ηS_a - (1-η)S_b
  bool truncation_warning = false;
  double output_discarded_mass = 0.0;
  std::uint64_t trial_id = 0;
  std::uint64_t seed = 0;
  std::string input_descriptors;
};

// ρ_a and ρ_b must have the same number of modes; per-mode truncations may
// differ. ρ_c is computed exactly unless `options` narrows the output.
EpniSlackReport epni_check(const DensityOperator& rho_a, const DensityOperator& rho_b,
                           double eta, const ChannelOptions& options = {});

struct MoeTrialReport {
  int conjecture = 1;
  double K = 0.0;
  double eta = 0.0;
  int n_modes = 1;
  double S_c = 0.0;
  double bound = 0.0;   // n g((1-η)K)
  double margin = 0.0;  // S_c - bound
  bool truncation_warning = false;
  std::uint64_t trial_id = 0;
  std::uint64_t seed = 0;
  std::string input_descriptors;
};

struct MoeOptions {
  // Thermal environment: dimension from the tail tolerance unless fixed.
  double thermal_tail = 1e-12;
  int thermal_dim = 0;
  int max_thermal_dim = 64;
  bool require_zero_mean = true;  // false only for the exploratory ensemble
  double mean_field_tolerance = 1e-8;
  double entropy_tolerance = 1e-8;
};

// n-fold tensor power of thermal(K) at the given per-mode dimension.
DensityOperator thermal_product(double K, int n_modes, int dim);

// Pure zero-mean-field ψ_a against an n-mode thermal(K) environment.
// Throws RejectedInput if some mode has |⟨â⟩| above the tolerance.
MoeTrialReport moe1_trial(const PureState& psi_a, double K, double eta,
                          const MoeOptions& options = {});

// Vacuum ψ_a against ρ_b. K defaults to g⁻¹(S(ρ_b)/n); when given, the
// entropy constraint S(ρ_b) = n g(K) is enforced and violations throw
// RejectedInput.
MoeTrialReport moe2_trial(const DensityOperator& rho_b, double eta,
                          std::optional<double> K = std::nullopt,
                          const MoeOptions& options = {});

}  // namespace epnilab

#endif  // EPNILAB_HARNESS_HPP_
