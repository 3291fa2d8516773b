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

#include "epnilab/optics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "epnilab/errors.hpp"

namespace epnilab {

namespace {

constexpr int kMaxPairs = 4;

using Digits = std::array<int, kMaxPairs>;

struct Entry {
  Digits row{};
  Digits col{};
  Complex value;
};

void unflatten(std::size_t index, const ModeDims& dims, std::vector<int>& digits) {
  digits.resize(dims.size());
  for (std::size_t m = dims.size(); m-- > 0;) {
    digits[m] = static_cast<int>(index % static_cast<std::size_t>(dims[m]));
    index /= static_cast<std::size_t>(dims[m]);
  }
}

// Non-zero entries of rho whose row/column digits lie inside the support,
// with digits picked out of `modes` in pair order.
std::vector<Entry> collect_entries(const DensityOperator& rho,
                                   std::span<const int> modes,
                                   const std::vector<int>& support) {
  const ModeDims& dims = rho.mode_dims();
  std::vector<std::vector<int>> digits(rho.dimension());
  std::vector<bool> inside(rho.dimension(), true);
  for (std::size_t idx = 0; idx < rho.dimension(); ++idx) {
    unflatten(idx, dims, digits[idx]);
    for (std::size_t m = 0; m < dims.size(); ++m) {
      if (digits[idx][m] >= support[m]) inside[idx] = false;
    }
  }
  std::vector<Entry> entries;
  const auto& mat = rho.matrix();
  for (std::size_t i = 0; i < rho.dimension(); ++i) {
    if (!inside[i]) continue;
    for (std::size_t j = 0; j < rho.dimension(); ++j) {
      if (!inside[j]) continue;
      const Complex v =
          mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v == Complex(0.0, 0.0)) continue;
      Entry e;
      e.value = v;
      for (std::size_t p = 0; p < modes.size(); ++p) {
        e.row[p] = digits[i][modes[p]];
        e.col[p] = digits[j][modes[p]];
      }
      entries.push_back(e);
    }
  }
  return entries;
}

// Accumulates tr_d[(⊗U) |J,L⟩⟨J',L'| (⊗U)†] into the ĉ-mode density matrix,
// one input matrix element at a time. Uses exact photon-number blocks.
// Full photon-number blocks depend only on (η, N). Campaigns and searches
// reuse a few transmissivities, so the most recent ones are kept per thread.
const std::vector<Eigen::MatrixXd>& full_blocks(const BeamSplitter& bs, int max_total) {
  constexpr std::size_t kCachedEtas = 8;
  thread_local std::vector<std::pair<double, std::vector<Eigen::MatrixXd>>> cache;
  auto it = std::find_if(cache.begin(), cache.end(),
                         [&](const auto& e) { return e.first == bs.eta(); });
  if (it == cache.end()) {
    if (cache.size() == kCachedEtas) cache.erase(cache.begin());
    cache.emplace_back(bs.eta(), std::vector<Eigen::MatrixXd>{});
    it = cache.end() - 1;
  }
  auto& blocks = it->second;
  for (int total = static_cast<int>(blocks.size()); total <= max_total; ++total) {
    blocks.push_back(photon_number_block(bs, total, 0, total));
  }
  return blocks;
}

class PairwiseAccumulator {
 public:
  PairwiseAccumulator(const BeamSplitter& bs, const std::vector<int>& max_total,
                      std::vector<int> out_dims)
      : n_(static_cast<int>(out_dims.size())), out_dims_(std::move(out_dims)) {
    blocks_.resize(n_);
    for (int p = 0; p < n_; ++p) {
      const auto& cached = full_blocks(bs, max_total[p]);
      blocks_[p].assign(cached.begin(), cached.begin() + max_total[p] + 1);
    }
    strides_ = mode_strides(out_dims_);
    const auto total = static_cast<Eigen::Index>(total_dimension(out_dims_));
    out_ = Eigen::MatrixXcd::Zero(total, total);
    terms_.resize(n_);
  }

  void add(const Digits& ja, const Digits& ja_p, const Digits& lb,
           const Digits& lb_p, Complex w) {
    if (n_ == 1) {
      add_single(ja[0], ja_p[0], lb[0], lb_p[0], w);
      return;
    }
    for (int p = 0; p < n_; ++p) {
      auto& terms = terms_[p];
      terms.clear();
      const int total = ja[p] + lb[p];
      const int total_p = ja_p[p] + lb_p[p];
      const int dim = out_dims_[p];
      const auto& blk = blocks_[p][total];
      const auto& blk_p = blocks_[p][total_p];
      const int m_lo = std::max({0, total - dim + 1, total_p - dim + 1});
      const int m_hi = std::min(total, total_p);
      for (int m = m_lo; m <= m_hi; ++m) {
        const int k = total - m;
        const int k_p = total_p - m;
        terms.push_back({k, k_p, blk(k, ja[p]) * blk_p(k_p, ja_p[p])});
      }
      if (terms.empty()) return;
    }
    // Cartesian product over pairs.
    std::array<std::size_t, kMaxPairs> pos{};
    while (true) {
      std::size_t row = 0, col = 0;
      double coef = 1.0;
      for (int p = 0; p < n_; ++p) {
        const Term& t = terms_[p][pos[p]];
        row += static_cast<std::size_t>(t.k) * strides_[p];
        col += static_cast<std::size_t>(t.k_p) * strides_[p];
        coef *= t.coef;
      }
      out_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
          w * coef;
      int p = n_ - 1;
      while (p >= 0 && ++pos[p] == terms_[p].size()) {
        pos[p] = 0;
        --p;
      }
      if (p < 0) break;
    }
  }

  Eigen::MatrixXcd take() { return std::move(out_); }

 private:
  struct Term {
    int k;
    int k_p;
    double coef;
  };

  void add_single(int j, int j_p, int l, int l_p, Complex w) {
    const int total = j + l;
    const int total_p = j_p + l_p;
    const int dim = out_dims_[0];
    const auto& blk = blocks_[0][total];
    const auto& blk_p = blocks_[0][total_p];
    const int m_lo = std::max({0, total - dim + 1, total_p - dim + 1});
    const int m_hi = std::min(total, total_p);
    for (int m = m_lo; m <= m_hi; ++m) {
      const int k = total - m;
      const int k_p = total_p - m;
      out_(k, k_p) += w * (blk(k, j) * blk_p(k_p, j_p));
    }
  }

  int n_;
  std::vector<int> out_dims_;
  std::vector<std::size_t> strides_;
  std::vector<std::vector<Eigen::MatrixXd>> blocks_;
  std::vector<std::vector<Term>> terms_;
  Eigen::MatrixXcd out_;
};

std::vector<int> resolve_output_dims(const std::vector<int>& full,
                                     const ChannelOptions& options) {
  std::vector<int> out = full;
  if (!options.output_dims.empty()) {
    if (options.output_dims.size() != full.size()) {
      throw InvalidArgument("ChannelOptions: output_dims size mismatch");
    }
    for (std::size_t p = 0; p < full.size(); ++p) {
      if (options.output_dims[p] < 1) {
        throw InvalidArgument("ChannelOptions: output dimension must be >= 1");
      }
      out[p] = options.output_dims[p];
    }
  }
  std::size_t total = 1;
  for (int d : out) total *= static_cast<std::size_t>(d);
  if (total > kMaxTotalDimension) {
    throw ResourceLimit("beam splitter output dimension " + std::to_string(total) +
                        " exceeds limit " + std::to_string(kMaxTotalDimension));
  }
  return out;
}

ChannelOutput finish(Eigen::MatrixXcd out, std::vector<int> dims,
                     double input_mass, const ChannelOptions& options) {
  const double discarded = input_mass - out.trace().real();
  ChannelOutput result{DensityOperator(std::move(out), std::move(dims)),
                       discarded, false};
  result.truncation_warning =
      std::abs(discarded) > options.truncation_warning_threshold;
  return result;
}

}  // namespace

BeamSplitter::BeamSplitter(double eta) : eta_(eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidArgument("BeamSplitter: transmissivity must lie in [0, 1]");
  }
}

double BeamSplitter::angle() const { return std::acos(std::sqrt(eta_)); }

Eigen::MatrixXd photon_number_block(const BeamSplitter& bs, int total_photons,
                                    int k_lo, int k_hi) {
  if (total_photons < 0 || k_lo < 0 || k_hi > total_photons || k_lo > k_hi) {
    throw InvalidArgument("photon_number_block: bad span");
  }
  const int size = k_hi - k_lo + 1;
  const double theta = bs.angle();
  // Generator θ(â†b̂ - âb̂†): â†b̂|k, N-k⟩ = √((k+1)(N-k)) |k+1, N-k-1⟩.
  Eigen::MatrixXcd hermitian = Eigen::MatrixXcd::Zero(size, size);
  for (int r = 0; r + 1 < size; ++r) {
    const int k = k_lo + r;
    const double c = theta * std::sqrt(static_cast<double>(k + 1) *
                                       static_cast<double>(total_photons - k));
    // i·G for the real antisymmetric G with G(r+1, r) = c.
    hermitian(r + 1, r) = Complex(0.0, c);
    hermitian(r, r + 1) = Complex(0.0, -c);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian);
  Eigen::VectorXcd phases(size);
  for (int i = 0; i < size; ++i) {
    phases(i) = std::exp(Complex(0.0, -eig.eigenvalues()(i)));
  }
  const Eigen::MatrixXcd u =
      eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  return u.real();
}

TwoModeUnitary beamsplitter_unitary(const BeamSplitter& bs, int d_a, int d_b) {
  if (d_a < 1 || d_b < 1) {
    throw InvalidArgument("beamsplitter_unitary: dimensions must be >= 1");
  }
  const std::size_t total = static_cast<std::size_t>(d_a) * d_b;
  if (total > kMaxTotalDimension) {
    throw ResourceLimit("beamsplitter_unitary: dimension exceeds limit");
  }
  TwoModeUnitary u{Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(total),
                                          static_cast<Eigen::Index>(total)),
                   d_a, d_b};
  for (int n = 0; n <= d_a + d_b - 2; ++n) {
    const int k_lo = std::max(0, n - d_b + 1);
    const int k_hi = std::min(n, d_a - 1);
    const Eigen::MatrixXd blk = photon_number_block(bs, n, k_lo, k_hi);
    for (int k = k_lo; k <= k_hi; ++k) {
      for (int j = k_lo; j <= k_hi; ++j) {
        u.matrix(k * d_b + (n - k), j * d_b + (n - j)) = blk(k - k_lo, j - k_lo);
      }
    }
  }
  return u;
}

std::vector<int> occupied_support(const DensityOperator& rho) {
  const ModeDims& dims = rho.mode_dims();
  std::vector<int> support(dims.size(), 1);
  std::vector<int> digits;
  for (std::size_t idx = 0; idx < rho.dimension(); ++idx) {
    const auto i = static_cast<Eigen::Index>(idx);
    if (rho.matrix()(i, i) == Complex(0.0, 0.0)) continue;
    unflatten(idx, dims, digits);
    for (std::size_t m = 0; m < dims.size(); ++m) {
      support[m] = std::max(support[m], digits[m] + 1);
    }
  }
  return support;
}

ChannelOutput apply_beamsplitter(const DensityOperator& rho_a,
                                 const DensityOperator& rho_b,
                                 const BeamSplitter& bs,
                                 const ChannelOptions& options) {
  if (rho_a.num_modes() != 1 || rho_b.num_modes() != 1) {
    throw InvalidArgument("apply_beamsplitter: inputs must be single-mode");
  }
  return apply_beamsplitter_vector(rho_a, rho_b, bs, {}, options);
}

ChannelOutput apply_beamsplitter_vector(const DensityOperator& rho_a,
                                        const DensityOperator& rho_b,
                                        const BeamSplitter& bs,
                                        std::span<const int> pairing,
                                        const ChannelOptions& options) {
  const int n = rho_a.num_modes();
  if (rho_b.num_modes() != n) {
    throw InvalidArgument("apply_beamsplitter_vector: mode count mismatch");
  }
  if (n > kMaxPairs) {
    throw ResourceLimit("apply_beamsplitter_vector: too many mode pairs");
  }
  std::vector<int> b_of(n);
  std::iota(b_of.begin(), b_of.end(), 0);
  if (!pairing.empty()) {
    if (static_cast<int>(pairing.size()) != n) {
      throw InvalidArgument("apply_beamsplitter_vector: pairing size mismatch");
    }
    std::vector<bool> seen(n, false);
    for (int i = 0; i < n; ++i) {
      const int b = pairing[i];
      if (b < 0 || b >= n || seen[b]) {
        throw InvalidArgument("apply_beamsplitter_vector: pairing is not a permutation");
      }
      seen[b] = true;
      b_of[i] = b;
    }
  }
  const auto support_a = occupied_support(rho_a);
  const auto support_b = occupied_support(rho_b);
  std::vector<int> max_total(n), full(n);
  for (int i = 0; i < n; ++i) {
    max_total[i] = support_a[i] - 1 + support_b[b_of[i]] - 1;
    full[i] = max_total[i] + 1;
  }
  const auto out_dims = resolve_output_dims(full, options);

  std::vector<int> a_modes(n);
  std::iota(a_modes.begin(), a_modes.end(), 0);
  const auto entries_a = collect_entries(rho_a, a_modes, support_a);
  const auto entries_b = collect_entries(rho_b, b_of, support_b);

  PairwiseAccumulator acc(bs, max_total, out_dims);
  for (const Entry& ea : entries_a) {
    for (const Entry& eb : entries_b) {
      acc.add(ea.row, ea.col, eb.row, eb.col, ea.value * eb.value);
    }
  }
  return finish(acc.take(), out_dims, rho_a.trace() * rho_b.trace(), options);
}

ChannelOutput apply_beamsplitter_joint(
    const DensityOperator& rho_ab, const BeamSplitter& bs,
    std::span<const std::pair<int, int>> pairs, const ChannelOptions& options) {
  const int modes = rho_ab.num_modes();
  const int n = static_cast<int>(pairs.size());
  if (n == 0 || 2 * n != modes) {
    throw InvalidArgument("apply_beamsplitter_joint: pairs must cover all modes");
  }
  if (n > kMaxPairs) {
    throw ResourceLimit("apply_beamsplitter_joint: too many mode pairs");
  }
  std::vector<bool> seen(modes, false);
  for (const auto& [a, b] : pairs) {
    for (int m : {a, b}) {
      if (m < 0 || m >= modes || seen[m]) {
        throw InvalidArgument("apply_beamsplitter_joint: invalid pairing");
      }
      seen[m] = true;
    }
  }
  const auto support = occupied_support(rho_ab);
  std::vector<int> max_total(n), full(n), a_modes(n), b_modes(n);
  for (int i = 0; i < n; ++i) {
    a_modes[i] = pairs[i].first;
    b_modes[i] = pairs[i].second;
    max_total[i] = support[a_modes[i]] - 1 + support[b_modes[i]] - 1;
    full[i] = max_total[i] + 1;
  }
  const auto out_dims = resolve_output_dims(full, options);

  const ModeDims& dims = rho_ab.mode_dims();
  PairwiseAccumulator acc(bs, max_total, out_dims);
  std::vector<int> di, dj;
  std::vector<std::size_t> inside;
  for (std::size_t idx = 0; idx < rho_ab.dimension(); ++idx) {
    unflatten(idx, dims, di);
    bool ok = true;
    for (int m = 0; m < modes; ++m) ok = ok && di[m] < support[m];
    if (ok) inside.push_back(idx);
  }
  Digits ja{}, ja_p{}, lb{}, lb_p{};
  for (std::size_t i : inside) {
    unflatten(i, dims, di);
    for (int p = 0; p < n; ++p) {
      ja[p] = di[a_modes[p]];
      lb[p] = di[b_modes[p]];
    }
    for (std::size_t j : inside) {
      const Complex v = rho_ab.matrix()(static_cast<Eigen::Index>(i),
                                        static_cast<Eigen::Index>(j));
      if (v == Complex(0.0, 0.0)) continue;
      unflatten(j, dims, dj);
      for (int p = 0; p < n; ++p) {
        ja_p[p] = dj[a_modes[p]];
        lb_p[p] = dj[b_modes[p]];
      }
      acc.add(ja, ja_p, lb, lb_p, v);
    }
  }
  return finish(acc.take(), out_dims, rho_ab.trace(), options);
}

}  // namespace epnilab
