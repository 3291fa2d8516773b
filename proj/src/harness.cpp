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

#include "epnilab/harness.hpp"

#include <cmath>
#include <string>

#include "epnilab/entropy.hpp"
#include "epnilab/errors.hpp"

namespace epnilab {

namespace {

void require_k(double K) {
  if (!(K >= 0.0) || !std::isfinite(K)) throw InvalidArgument("K must be finite and >= 0");
}

int environment_dim(double K, const MoeOptions& options) {
  if (options.thermal_dim > 0) return options.thermal_dim;
  return thermal_dimension_for_tail(K, options.thermal_tail, options.max_thermal_dim);
}

}  // namespace

EpniSlackReport epni_check(const DensityOperator& rho_a, const DensityOperator& rho_b,
                           double eta, const ChannelOptions& options) {
  if (rho_a.num_modes() != rho_b.num_modes()) {
    throw InvalidArgument("epni_check: inputs must have the same number of modes");
  }
  const BeamSplitter bs(eta);
  const ChannelOutput out = apply_beamsplitter_vector(rho_a, rho_b, bs, {}, options);

  EpniSlackReport r;
  r.eta = eta;
  r.n_modes = rho_a.num_modes();
  const auto s_a = von_neumann_entropy(rho_a);
  const auto s_b = von_neumann_entropy(rho_b);
  const auto s_c = von_neumann_entropy(out.rho_c);
  r.S_a = s_a.nats;
  r.S_b = s_b.nats;
  r.S_c = s_c.nats;
  r.N_a = entropy_photon_number(s_a).mean_photons;
  r.N_b = entropy_photon_number(s_b).mean_photons;
  r.N_c = entropy_photon_number(s_c).mean_photons;
  const double mixed = eta * r.N_a + (1.0 - eta) * r.N_b;
  r.slack_photon = r.N_c - mixed;
  r.slack_entropy = r.S_c - r.n_modes * g(mixed);
  r.slack_linear = r.S_c - eta * r.S_a - (1.0 - eta) * r.S_b;
  r.truncation_warning = out.truncation_warning;
  r.output_discarded_mass = out.discarded_mass;
  return r;
}

DensityOperator thermal_product(double K, int n_modes, int dim) {
  if (n_modes < 1) throw InvalidArgument("thermal_product: n_modes must be >= 1");
  const DensityOperator single = thermal_state(K, dim);
  DensityOperator out = single;
  for (int i = 1; i < n_modes; ++i) out = tensor(out, single);
  return out;
}

MoeTrialReport moe1_trial(const PureState& psi_a, double K, double eta,
                          const MoeOptions& options) {
  require_k(K);
  if (options.require_zero_mean) {
    for (int m = 0; m < psi_a.num_modes(); ++m) {
      const double field = std::abs(mean_field(psi_a, m));
      if (field > options.mean_field_tolerance) {
        throw RejectedInput("moe1_trial: mode " + std::to_string(m) + " has |<a>| = " +
                            std::to_string(field));
      }
    }
  }
  const int n = psi_a.num_modes();
  const DensityOperator rho_b = thermal_product(K, n, environment_dim(K, options));
  const ChannelOutput out =
      apply_beamsplitter_vector(psi_a.projector(), rho_b, BeamSplitter(eta));

  MoeTrialReport r;
  r.conjecture = 1;
  r.K = K;
  r.eta = eta;
  r.n_modes = n;
  r.S_c = von_neumann_entropy(out.rho_c).nats;
  r.bound = n * g((1.0 - eta) * K);
  r.margin = r.S_c - r.bound;
  r.truncation_warning = out.truncation_warning;
  return r;
}

MoeTrialReport moe2_trial(const DensityOperator& rho_b, double eta, std::optional<double> K,
                          const MoeOptions& options) {
  const int n = rho_b.num_modes();
  const double s_b = von_neumann_entropy(rho_b).nats;
  double k_value = 0.0;
  if (K) {
    require_k(*K);
    const double deviation = std::abs(s_b - n * g(*K));
    if (deviation > options.entropy_tolerance) {
      throw RejectedInput("moe2_trial: S(rho_b) deviates from n g(K) by " +
                          std::to_string(deviation));
    }
    k_value = *K;
  } else {
    k_value = g_inv(s_b / n);
  }
  const DensityOperator vacuum = vacuum_state(ModeDims(n, 1)).projector();
  const ChannelOutput out = apply_beamsplitter_vector(vacuum, rho_b, BeamSplitter(eta));

  MoeTrialReport r;
  r.conjecture = 2;
  r.K = k_value;
  r.eta = eta;
  r.n_modes = n;
  r.S_c = von_neumann_entropy(out.rho_c).nats;
  r.bound = n * g((1.0 - eta) * k_value);
  r.margin = r.S_c - r.bound;
  r.truncation_warning = out.truncation_warning;
  return r;
}

}  // namespace epnilab
