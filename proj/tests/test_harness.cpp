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

#include <cmath>

#include "doctest.h"
#include "epnilab/entropy.hpp"
#include "epnilab/errors.hpp"
#include "epnilab/harness.hpp"
#include "epnilab/samplers.hpp"
#include "test_support.hpp"

using namespace epnilab;

namespace {

DensityOperator tail_thermal(double N) {
  return thermal_state(N, thermal_dimension_for_tail(N, 1e-12));
}

}  // namespace

TEST_CASE("thermal inputs are the equality case") {
  for (double eta : {0.2, 0.5, 0.8}) {
    for (auto [na, nb] : {std::pair{0.3, 1.2}, std::pair{1.0, 1.0}, std::pair{0.0, 0.7}}) {
      const auto r = epni_check(tail_thermal(na), tail_thermal(nb), eta);
      CHECK(std::abs(r.slack_photon) < 1e-6);
      CHECK(std::abs(r.slack_entropy) < 1e-6);
      CHECK(!r.truncation_warning);
    }
  }
}

TEST_CASE("vacuum against thermal") {
  const double K = 1.5, eta = 0.3;
  const auto r = epni_check(vacuum_state({1}).projector(), tail_thermal(K), eta);
  CHECK(std::abs(r.slack_photon) < 1e-6);
  CHECK(std::abs(r.S_c - g((1 - eta) * K)) < 1e-6);
}

TEST_CASE("single photon against thermal matches the dense oracle") {
  const DensityOperator one = number_state(1, 25).projector();
  const DensityOperator th = thermal_state(0.5, 25);
  const auto r = epni_check(one, th, 0.6);
  CHECK(r.slack_photon >= 0.0);
  CHECK(r.slack_entropy >= 0.0);
  CHECK(r.slack_linear >= 0.0);
  // Photon support of |1⟩ is two levels; the oracle pads four extra levels.
  const DensityOperator oracle =
      testing::dense_channel_oracle(number_state(1, 2).projector(), th, 0.6, 4);
  CHECK(std::abs(von_neumann_entropy(oracle).nats - r.S_c) < 1e-9);
  CHECK(r.S_a == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.N_b == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("slack forms agree in sign and the implication chain holds") {
  Rng rng(21);
  for (int t = 0; t < 60; ++t) {
    const double eta = 0.1 + 0.8 * (t % 9) / 8.0;
    DensityOperator a = (t % 3 == 0) ? sample_haar_pure({6}, rng).projector()
                                     : sample_ginibre_density({6}, rng);
    DensityOperator b = (t % 2 == 0) ? sample_haar_pure({5}, rng).projector()
                                     : thermal_state(0.8, 5);
    const auto r = epni_check(a, b, eta);
    if (std::abs(r.slack_photon) > 1e-10 && std::abs(r.slack_entropy) > 1e-10) {
      CHECK((r.slack_photon > 0) == (r.slack_entropy > 0));
    }
    if (r.slack_photon >= 0.0) CHECK(r.slack_linear >= -1e-9);
    CHECK(r.slack_photon >= -1e-9);
  }
}

TEST_CASE("moe1 vacuum is the equality case") {
  for (double K : {0.5, 1.0, 2.0}) {
    for (double eta : {0.3, 0.5, 0.9}) {
      const auto r = moe1_trial(vacuum_state({4}), K, eta);
      CHECK(std::abs(r.margin) < 1e-6);
      CHECK(r.bound == doctest::Approx(g((1 - eta) * K)).epsilon(1e-14));
    }
  }
  const auto two = moe1_trial(vacuum_state({2, 2}), 0.5, 0.5);
  CHECK(two.n_modes == 2);
  CHECK(std::abs(two.margin) < 1e-6);
}

TEST_CASE("moe1 single photon exceeds the bound, cross-checked densely") {
  MoeOptions opts;
  opts.thermal_dim = 30;
  const auto r = moe1_trial(number_state(1, 30), 1.0, 0.5, opts);
  CHECK(r.margin > 1e-3);
  const DensityOperator oracle = testing::dense_channel_oracle(
      number_state(1, 2).projector(), thermal_state(1.0, 30), 0.5, 4);
  CHECK(std::abs(von_neumann_entropy(oracle).nats - r.S_c) < 1e-9);
}

TEST_CASE("moe1 even cat state") {
  const int d = 30;
  const Eigen::VectorXcd v =
      coherent_state(1.0, d).amplitudes() + coherent_state(-1.0, d).amplitudes();
  const PureState cat(v.normalized(), {d});
  CHECK(std::abs(mean_field(cat, 0)) < 1e-12);
  const auto r = moe1_trial(cat, 1.0, 0.5);
  CHECK(r.margin >= 0.0);
}

TEST_CASE("moe1 rejects a displaced input") {
  CHECK_THROWS_AS(moe1_trial(coherent_state(0.5, 12), 1.0, 0.5), RejectedInput);
  MoeOptions opts;
  opts.require_zero_mean = false;
  CHECK(moe1_trial(coherent_state(0.5, 12), 1.0, 0.5, opts).margin >= -1e-9);
}

TEST_CASE("moe2 thermal is the equality case") {
  for (double K : {0.5, 1.0, 2.0}) {
    const auto r = moe2_trial(tail_thermal(K), 0.5);
    CHECK(std::abs(r.S_c - g(0.5 * K)) < 1e-6);
    CHECK(std::abs(r.margin) < 1e-6);
  }
  // At 40 levels thermal(2) is renormalized after dropping 9e-8 of mass; with K
  // implied by the entropy the margin stays nonnegative and at truncation level.
  const double m40 = moe2_trial(thermal_state(2.0, 40), 0.5).margin;
  CHECK(m40 >= 0.0);
  CHECK(m40 < 1e-6);
}

TEST_CASE("moe2 non-thermal inputs with the thermal entropy") {
  const double K = 1.0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const DensityOperator rho = sample_density_fixed_entropy(25, g(K), seed);
    const auto r = moe2_trial(rho, 0.5, K);
    CHECK(r.margin > 1e-9);
  }
  const auto tp = moe2_trial(two_point_mixture({25}, g(K)), 0.5, K);
  CHECK(tp.margin >= -1e-9);
  CHECK_THROWS_AS(moe2_trial(thermal_state(0.9, 40), 0.5, 1.0), RejectedInput);
}
