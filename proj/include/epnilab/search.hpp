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

#ifndef EPNILAB_SEARCH_HPP_
#define EPNILAB_SEARCH_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "epnilab/fock.hpp"
#include "epnilab/harness.hpp"
#include "epnilab/samplers.hpp"

namespace epnilab {

struct NelderMeadOptions {
  int max_evaluations = 20000;  // hard cap, except that the first simplex (n + 1) is always built
  double f_tolerance = 1e-12;  // spread of simplex values
  double x_tolerance = 1e-9;   // simplex diameter (max-norm)
  double initial_step = 0.5;
  // Re-initialize the simplex around the incumbent until a cycle improves by
  // less than f_tolerance (or the evaluation budget is spent).
  bool reinitialize = true;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
// Called once per iteration with (iteration, evaluations so far, best value).
using IterationCallback = std::function<void(int, int, double)>;

// Nelder-Mead with dimension-adaptive coefficients (reflection 1, expansion
// 1 + 2/n, contraction 3/4 - 1/(2n), shrink 1 - 1/n). Simplices collapse
// prematurely in high dimension, hence the optional re-initialization cycles.
NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options = {},
                             const IterationCallback& on_iteration = {});

enum class SearchObjective { kMoe1, kMoe2, kEpniSlack };

const char* objective_name(SearchObjective o);
// Accepts "moe1", "moe2", "epni-slack". Throws InvalidArgument otherwise.
SearchObjective parse_objective(const std::string& name);

struct SearchConfig {
  SearchObjective objective = SearchObjective::kMoe1;
  std::uint64_t seed = kDefaultSeed;
  int dim = 10;
  double K = 1.0;
  double eta = 0.5;
  int restarts = 20;
  // Evaluations per restart; 0 selects default_evaluations(objective).
  int evaluations_per_restart = 0;
  NelderMeadOptions nelder_mead;

  void validate() const;
  NelderMeadOptions resolved_nelder_mead() const;
};

// Per-restart budget sized to the parameter count: 6000 (moe1), 100000
// (moe2), 2000 (epni-slack).
int default_evaluations(SearchObjective objective);

struct SearchTraceEntry {
  int restart = 0;
  int iteration = 0;
  int evaluations = 0;
  double best = 0.0;  // best value within this restart
};

struct SearchResult {
  double best_objective = 0.0;  // margin (moe) or slack_photon (epni-slack)
  int best_restart = 0;
  Eigen::VectorXd best_parameters;
  std::optional<MoeTrialReport> moe;
  std::optional<EpniSlackReport> epni;
  std::optional<PureState> best_psi;          // moe1
  std::optional<DensityOperator> best_rho_b;  // moe2
  double vacuum_fidelity = 0.0;               // moe1: |⟨0|ψ⟩|²
  double thermal_trace_distance = 0.0;        // moe2: D(ρ_b, thermal(K))
  double best_N_a = 0.0, best_N_b = 0.0;      // epni-slack
  int evaluations = 0;
  std::vector<SearchTraceEntry> trace;
};

// Derivative-free search for inputs that lower the output entropy below the
// conjectured minimum. moe1 optimizes a pure state (paired real amplitudes,
// normalized and projected to zero mean field after every step); moe2
// optimizes ρ_b ∝ exp(-βA) over Hermitian A (spectrum and eigenbasis of A),
// β set so that S(ρ_b) = g(K); epni-slack searches the thermal family (N_a, N_b).
SearchResult minimize_output_entropy(const SearchConfig& config);

}  // namespace epnilab

#endif  // EPNILAB_SEARCH_HPP_
