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
#include <random>

#include "doctest.h"
#include "epnilab/entropy.hpp"
#include "epnilab/errors.hpp"
#include "epnilab/optics.hpp"
#include "test_support.hpp"

using namespace epnilab;
using testing::max_abs_diff;
using testing::padded_diff;

namespace {

// Reorders the modes of a state: new mode m is old mode order[m].
DensityOperator permute_modes(const DensityOperator& rho, const std::vector<int>& order) {
  const ModeDims& old_dims = rho.mode_dims();
  ModeDims new_dims(order.size());
  for (std::size_t m = 0; m < order.size(); ++m) new_dims[m] = old_dims[order[m]];
  const auto old_strides = mode_strides(old_dims);
  const auto new_strides = mode_strides(new_dims);
  const auto total = rho.dimension();
  std::vector<Eigen::Index> map(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx, target = 0;
    for (std::size_t m = 0; m < old_dims.size(); ++m) {
      const std::size_t digit = rest / old_strides[m];
      rest %= old_strides[m];
      for (std::size_t p = 0; p < order.size(); ++p)
        if (order[p] == static_cast<int>(m)) target += digit * new_strides[p];
    }
    map[idx] = static_cast<Eigen::Index>(target);
  }
  Eigen::MatrixXcd out(rho.matrix().rows(), rho.matrix().cols());
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j)
      out(map[i], map[j]) = rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return DensityOperator(out, new_dims);
}

DensityOperator two_mode_squeezed_like(double lambda, int d) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(d * d);
  for (int k = 0; k < d; ++k) amps(k * d + k) = std::sqrt(1 - lambda * lambda) * std::pow(lambda, k);
  amps /= amps.norm();
  return PureState(amps, {d, d}).projector();
}

}  // namespace

TEST_CASE("BeamSplitter validates eta") {
  CHECK_THROWS_AS(BeamSplitter(-0.1), InvalidArgument);
  CHECK_THROWS_AS(BeamSplitter(1.5), InvalidArgument);
  CHECK(BeamSplitter(0.3).reflectivity() == doctest::Approx(0.7));
}

TEST_CASE("beamsplitter_unitary") {
  SUBCASE("eta = 1 is the identity") {
    const auto u = beamsplitter_unitary(BeamSplitter(1.0), 6, 5);
    CHECK(max_abs_diff(u.matrix, Eigen::MatrixXcd::Identity(30, 30)) < 1e-14);
  }
  SUBCASE("one-photon block matches the matrix-exponential oracle and sign convention") {
    const double eta = 0.3;
    const auto u = beamsplitter_unitary(BeamSplitter(eta), 2, 2);
    const Eigen::MatrixXd oracle = testing::dense_beamsplitter(eta, 2, 2);
    // |1,0⟩ is index 2, |0,1⟩ is index 1.
    CHECK(std::abs(u.matrix(2, 2).real() - std::sqrt(eta)) < 1e-14);
    CHECK(std::abs(u.matrix(1, 2).real() + std::sqrt(1 - eta)) < 1e-14);
    CHECK(std::abs(oracle(2, 2) - std::sqrt(eta)) < 1e-12);
    CHECK(std::abs(oracle(1, 2) + std::sqrt(1 - eta)) < 1e-12);
  }
  SUBCASE("Hong-Ou-Mandel interference at eta = 1/2") {
    const auto u = beamsplitter_unitary(BeamSplitter(0.5), 3, 3);
    const Eigen::MatrixXd oracle = testing::dense_beamsplitter(0.5, 3, 3);
    const int in = 1 * 3 + 1;  // |1,1⟩
    const int out20 = 2 * 3 + 0, out02 = 0 * 3 + 2;
    CHECK(std::abs(u.matrix(in, in)) < 1e-10);
    CHECK(std::abs(u.matrix(out20, in).real() - 1 / std::sqrt(2.0)) < 1e-10);
    CHECK(std::abs(u.matrix(out02, in).real() + 1 / std::sqrt(2.0)) < 1e-10);
    CHECK(std::abs(u.matrix(out20, in).real() - oracle(out20, in)) < 1e-10);
    CHECK(std::abs(u.matrix(out02, in).real() - oracle(out02, in)) < 1e-10);
    CHECK(std::abs(oracle(in, in)) < 1e-10);
  }
  SUBCASE("exact blocks agree with the dense oracle") {
    for (double eta : {0.1, 0.5, 0.77}) {
      for (int n : {0, 1, 4, 9}) {
        const Eigen::MatrixXd blk = photon_number_block(BeamSplitter(eta), n, 0, n);
        const Eigen::MatrixXd dense = testing::dense_beamsplitter(eta, n + 1, n + 1);
        double diff = 0.0;
        for (int k = 0; k <= n; ++k)
          for (int j = 0; j <= n; ++j)
            diff = std::max(diff, std::abs(blk(k, j) - dense(k * (n + 1) + (n - k), j * (n + 1) + (n - j))));
        CHECK(diff < 1e-10);
      }
    }
  }
  SUBCASE("unitarity and number conservation at d = 32") {
    const int d = 32;
    const auto u = beamsplitter_unitary(BeamSplitter(0.37), d, d);
    const Eigen::MatrixXcd gram = u.matrix.adjoint() * u.matrix;
    double worst = 0.0;
    for (int i = 0; i < d * d; ++i) {
      if (i / d + i % d >= d) continue;
      for (int j = 0; j < d * d; ++j) {
        if (j / d + j % d >= d) continue;
        worst = std::max(worst, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
      }
    }
    CHECK(worst < 1e-10);
    for (int i = 0; i < d * d; ++i)
      for (int j = 0; j < d * d; ++j)
        if (i / d + i % d != j / d + j % d) CHECK(u.matrix(i, j) == Complex(0.0));
  }
}

TEST_CASE("apply_beamsplitter closed-form cases") {
  SUBCASE("vacuum and thermal(K) give thermal((1-eta)K)") {
    for (double eta : {0.3, 0.5, 0.9}) {
      const double k = 2.0;
      const auto out = apply_beamsplitter(vacuum_state({1}).projector(), thermal_state(k, 60), BeamSplitter(eta));
      CHECK(padded_diff(out.rho_c, thermal_state((1 - eta) * k, 60)) < 1e-6);
      CHECK(!out.truncation_warning);
    }
  }
  SUBCASE("coherent states combine amplitudes and stay pure") {
    const Complex alpha(0.8, 0.3), beta(-0.5, 0.6);
    const double eta = 0.35;
    const auto out = apply_beamsplitter(coherent_state(alpha, 25).projector(),
                                        coherent_state(beta, 25).projector(), BeamSplitter(eta));
    const Complex gamma = std::sqrt(eta) * alpha + std::sqrt(1 - eta) * beta;
    const int dim = out.rho_c.mode_dims()[0];
    CHECK(max_abs_diff(out.rho_c.matrix(), coherent_state(gamma, dim).projector().matrix()) < 1e-8);
    CHECK(von_neumann_entropy(out.rho_c).nats < 1e-8);
    const double purity = (out.rho_c.matrix() * out.rho_c.matrix()).trace().real();
    CHECK(purity > 1 - 1e-8);
  }
  SUBCASE("thermal inputs combine linearly; dense oracle agrees") {
    const double na = 0.6, nb = 1.4, eta = 0.45;
    const auto out = apply_beamsplitter(thermal_state(na, 80), thermal_state(nb, 80), BeamSplitter(eta));
    CHECK(padded_diff(out.rho_c, thermal_state(eta * na + (1 - eta) * nb, 159)) < 1e-6);
    const auto ta = thermal_state(na, 12), tb = thermal_state(nb, 12);
    const auto small = apply_beamsplitter(ta, tb, BeamSplitter(eta));
    CHECK(padded_diff(small.rho_c, testing::dense_channel_oracle(ta, tb, eta)) < 1e-10);
  }
}

TEST_CASE("apply_beamsplitter agrees with the dense oracle on random inputs") {
  std::mt19937_64 rng(101);
  for (double eta : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const auto a = testing::random_density({5}, rng);
    const auto b = testing::random_density({4}, rng);
    const auto out = apply_beamsplitter(a, b, BeamSplitter(eta));
    CHECK(padded_diff(out.rho_c, testing::dense_channel_oracle(a, b, eta)) < 1e-10);
    CHECK(std::abs(out.rho_c.trace() - 1.0) < 1e-10);
  }
}

TEST_CASE("apply_beamsplitter invariants") {
  std::mt19937_64 rng(77);
  const auto a = testing::random_density({6}, rng);
  const auto b = testing::random_density({6}, rng);
  SUBCASE("eta = 1 returns rho_a, eta = 0 returns rho_b") {
    CHECK(padded_diff(apply_beamsplitter(a, b, BeamSplitter(1.0)).rho_c, a) < 1e-12);
    CHECK(padded_diff(apply_beamsplitter(a, b, BeamSplitter(0.0)).rho_c, b) < 1e-12);
  }
  SUBCASE("trace preservation with unnormalized inputs") {
    const DensityOperator half(0.5 * a.matrix(), {6});
    const auto out = apply_beamsplitter(half, b, BeamSplitter(0.4));
    CHECK(std::abs(out.rho_c.trace() - 0.5) < 1e-10);
    CHECK(std::abs(out.discarded_mass) < 1e-10);
  }
  SUBCASE("configured output truncation is recorded") {
    ChannelOptions opts;
    opts.output_dims = {6};
    const auto out = apply_beamsplitter(a, b, BeamSplitter(0.5), opts);
    CHECK(out.rho_c.mode_dims() == ModeDims{6});
    CHECK(out.discarded_mass > 1e-9);
    CHECK(out.truncation_warning);
    const auto safe = apply_beamsplitter(vacuum_state({6}).projector(), thermal_state(0.2, 6),
                                         BeamSplitter(0.5), opts);
    CHECK(!safe.truncation_warning);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(apply_beamsplitter(tensor(a, b), b, BeamSplitter(0.5)), InvalidArgument);
    const int bad[] = {0, 0};
    CHECK_THROWS_AS(apply_beamsplitter_vector(tensor(a, b), tensor(a, b), BeamSplitter(0.5), bad),
                    InvalidArgument);
  }
}

TEST_CASE("apply_beamsplitter_vector") {
  std::mt19937_64 rng(55);
  SUBCASE("n = 1 reduces to apply_beamsplitter") {
    const auto a = testing::random_density({4}, rng);
    const auto b = testing::random_density({5}, rng);
    CHECK(max_abs_diff(apply_beamsplitter_vector(a, b, BeamSplitter(0.3)).rho_c.matrix(),
                       apply_beamsplitter(a, b, BeamSplitter(0.3)).rho_c.matrix()) == 0.0);
  }
  SUBCASE("n = 2 product inputs factorize") {
    const auto a1 = testing::random_density({3}, rng), a2 = testing::random_density({4}, rng);
    const auto b1 = testing::random_density({3}, rng), b2 = testing::random_density({2}, rng);
    const BeamSplitter bs(0.6);
    const auto joint = apply_beamsplitter_vector(tensor(a1, a2), tensor(b1, b2), bs);
    const auto c1 = apply_beamsplitter(a1, b1, bs).rho_c;
    const auto c2 = apply_beamsplitter(a2, b2, bs).rho_c;
    CHECK(max_abs_diff(joint.rho_c.matrix(), tensor(c1, c2).matrix()) < 1e-9);

    // Swapped pairing couples a1 with b2 and a2 with b1.
    const int swap[] = {1, 0};
    const auto swapped = apply_beamsplitter_vector(tensor(a1, a2), tensor(b2, b1), bs, swap);
    CHECK(max_abs_diff(swapped.rho_c.matrix(), tensor(apply_beamsplitter(a1, b1, bs).rho_c,
                                                      apply_beamsplitter(a2, b2, bs).rho_c).matrix()) < 1e-9);
  }
  SUBCASE("entangled rho_a with vacuum matches a dense 4-mode computation") {
    const int d = 5;
    const double eta = 0.5;
    const auto rho_a = two_mode_squeezed_like(0.4, d);
    const auto rho_b = vacuum_state({d, d}).projector();
    const auto fast = apply_beamsplitter_vector(rho_a, rho_b, BeamSplitter(eta));

    // Dense oracle: order (a1, a2, b1, b2) -> (a1, b1, a2, b2), apply U ⊗ U, trace b's.
    const auto joint = permute_modes(tensor(rho_a, rho_b), {0, 2, 1, 3});
    const Eigen::MatrixXcd u = testing::dense_beamsplitter(eta, d, d).cast<Complex>();
    const Eigen::MatrixXcd uu = Eigen::kroneckerProduct(u, u).eval();
    const DensityOperator out(uu * joint.matrix() * uu.adjoint(), joint.mode_dims());
    const int keep[] = {0, 2};
    const auto oracle = partial_trace(out, keep);
    CHECK(padded_diff(fast.rho_c, oracle) < 1e-10);
    const double s = von_neumann_entropy(fast.rho_c).nats;
    CHECK(s >= 2 * g(0.0));
    CHECK(std::abs(s - von_neumann_entropy(oracle).nats) < 1e-9);

    // Larger truncation, cross-checked against the joint-input route.
    const auto rho_a10 = two_mode_squeezed_like(0.4, 8);
    const auto rho_b10 = vacuum_state({8, 8}).projector();
    const auto fast10 = apply_beamsplitter_vector(rho_a10, rho_b10, BeamSplitter(eta));
    const std::pair<int, int> pairs[] = {{0, 2}, {1, 3}};
    const auto joint10 = apply_beamsplitter_joint(tensor(rho_a10, rho_b10), BeamSplitter(eta), pairs);
    CHECK(max_abs_diff(fast10.rho_c.matrix(), joint10.rho_c.matrix()) < 1e-12);
  }
  SUBCASE("joint route equals product route on random inputs") {
    const auto a = testing::random_density({3, 2}, rng);
    const auto b = testing::random_density({2, 3}, rng);
    const BeamSplitter bs(0.7);
    const std::pair<int, int> pairs[] = {{0, 2}, {1, 3}};
    CHECK(max_abs_diff(apply_beamsplitter_vector(a, b, bs).rho_c.matrix(),
                       apply_beamsplitter_joint(tensor(a, b), bs, pairs).rho_c.matrix()) < 1e-12);
  }
}
