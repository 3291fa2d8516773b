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

#include "epnilab/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "epnilab/entropy.hpp"
#include "epnilab/errors.hpp"

namespace epnilab {

namespace {

NelderMeadResult nelder_mead_cycle(const Objective& f, const Eigen::VectorXd& x0,
                                   const NelderMeadOptions& options, int budget,
                                   int iteration_offset, int evaluation_offset,
                                   const IterationCallback& on_iteration) {
  const auto n = x0.size();
  if (n < 1) throw InvalidArgument("nelder_mead: empty parameter vector");
  const double dn = static_cast<double>(n);
  const double alpha = 1.0, beta = 1.0 + 2.0 / dn;
  const double gamma = 0.75 - 0.5 / dn, delta = 1.0 - 1.0 / dn;

  NelderMeadResult res;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Eigen::VectorXd> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) simplex[i + 1](i) += options.initial_step;
  for (Eigen::Index i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  // Worst-case cost of one iteration: reflection, contraction, n-point shrink.
  const int iteration_cost = static_cast<int>(n) + 2;
  std::vector<Eigen::Index> order(n + 1);
  while (res.evaluations + iteration_cost <= budget) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });
    {
      std::vector<Eigen::VectorXd> s(n + 1);
      std::vector<double> v(n + 1);
      for (Eigen::Index i = 0; i <= n; ++i) {
        s[i] = std::move(simplex[order[i]]);
        v[i] = values[order[i]];
      }
      simplex = std::move(s);
      values = std::move(v);
    }
    ++res.iterations;
    if (on_iteration) {
      on_iteration(iteration_offset + res.iterations, evaluation_offset + res.evaluations,
                   values[0]);
    }

    double diameter = 0.0;
    for (Eigen::Index i = 1; i <= n; ++i) {
      diameter = std::max(diameter, (simplex[i] - simplex[0]).cwiseAbs().maxCoeff());
    }
    if (values[n] - values[0] <= options.f_tolerance && diameter <= options.x_tolerance) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) centroid += simplex[i];
    centroid /= dn;

    const Eigen::VectorXd xr = centroid + alpha * (centroid - simplex[n]);
    const double fr = eval(xr);
    if (fr < values[0]) {
      const Eigen::VectorXd xe = centroid + beta * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
      continue;
    }
    const bool outside = fr < values[n];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + gamma * (xr - centroid))
                                       : Eigen::VectorXd(centroid - gamma * (centroid - simplex[n]));
    const double fc = eval(xc);
    if (fc < (outside ? fr : values[n])) {
      simplex[n] = xc;
      values[n] = fc;
      continue;
    }
    for (Eigen::Index i = 1; i <= n; ++i) {
      simplex[i] = simplex[0] + delta * (simplex[i] - simplex[0]);
      values[i] = eval(simplex[i]);
    }
  }
  const auto best = std::min_element(values.begin(), values.end()) - values.begin();
  res.x = simplex[best];
  res.f = values[best];
  return res;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options,
                             const IterationCallback& on_iteration) {
  NelderMeadResult total;
  total.x = x0;
  total.f = std::numeric_limits<double>::infinity();
  Eigen::VectorXd start = x0;
  // A re-initialized simplex needs n + 1 evaluations plus room for an iteration.
  const int cycle_cost = 2 * static_cast<int>(x0.size()) + 3;
  while (total.evaluations < options.max_evaluations) {
    if (total.evaluations > 0 && options.max_evaluations - total.evaluations < cycle_cost) break;
    const NelderMeadResult cycle =
        nelder_mead_cycle(f, start, options, options.max_evaluations - total.evaluations,
                          total.iterations, total.evaluations, on_iteration);
    total.evaluations += cycle.evaluations;
    total.iterations += cycle.iterations;
    const bool improved = cycle.f < total.f - options.f_tolerance;
    if (cycle.f < total.f) {
      total.f = cycle.f;
      total.x = cycle.x;
    }
    total.converged = cycle.converged;
    if (!options.reinitialize || !improved) break;
    start = total.x;
  }
  return total;
}

const char* objective_name(SearchObjective o) {
  switch (o) {
    case SearchObjective::kMoe1: return "moe1";
    case SearchObjective::kMoe2: return "moe2";
    case SearchObjective::kEpniSlack: return "epni-slack";
  }
  return "unknown";
}

SearchObjective parse_objective(const std::string& name) {
  if (name == "moe1") return SearchObjective::kMoe1;
  if (name == "moe2") return SearchObjective::kMoe2;
  if (name == "epni-slack") return SearchObjective::kEpniSlack;
  throw InvalidArgument("unknown objective '" + name + "' (expected moe1, moe2, epni-slack)");
}

void SearchConfig::validate() const {
  if (dim < 2 || dim > 32) throw InvalidArgument("dim must lie in [2, 32]");
  if (!(K >= 0.0) || !std::isfinite(K)) throw InvalidArgument("K must be finite and >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("eta must lie in [0, 1]");
  if (restarts < 1) throw InvalidArgument("restarts must be >= 1");
  if (evaluations_per_restart < 0) throw InvalidArgument("evaluations_per_restart must be >= 0");
  if (!(nelder_mead.initial_step > 0.0)) throw InvalidArgument("initial_step must be > 0");
  if (objective == SearchObjective::kMoe2 &&
      g(K) > std::log(static_cast<double>(dim)) + 1e-12) {
    throw InvalidArgument("entropy g(K) exceeds ln(dim)");
  }
}

int default_evaluations(SearchObjective objective) {
  switch (objective) {
    case SearchObjective::kMoe1: return 6000;
    case SearchObjective::kMoe2: return 100000;
    case SearchObjective::kEpniSlack: return 2000;
  }
  return 2000;
}

NelderMeadOptions SearchConfig::resolved_nelder_mead() const {
  NelderMeadOptions opts = nelder_mead;
  opts.max_evaluations =
      evaluations_per_restart > 0 ? evaluations_per_restart : default_evaluations(objective);
  return opts;
}

namespace {

// Penalty for parameters whose decoded state is rejected.
constexpr double kPenalty = 1e3;

PureState decode_pure(const Eigen::VectorXd& x, int dim) {
  Eigen::VectorXcd amp(dim);
  for (int i = 0; i < dim; ++i) amp(i) = Complex(x(i), x(dim + i));
  const double norm = amp.norm();
  if (!(norm > 1e-12)) throw RejectedInput("decode_pure: zero amplitude vector");
  return project_zero_mean(PureState(amp / norm, {dim}));
}

Eigen::MatrixXcd hermitian_from(const Eigen::VectorXd& x, Eigen::Index offset, int dim) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::Index k = offset;
  for (int i = 0; i < dim; ++i) h(i, i) = x(k++);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      h(i, j) = Complex(x(k), x(k + 1));
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  }
  return h;
}

// Gibbs-form parametrization: rho proportional to exp(-beta A) for Hermitian A,
// with beta fixed by the entropy constraint. Analytic in A, no redundant
// spectrum/unitary split.
DensityOperator decode_fixed_entropy(const Eigen::VectorXd& x, int dim, double entropy) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian_from(x, 0, dim));
  Eigen::VectorXd logits = -eig.eigenvalues();
  logits.array() -= logits.maxCoeff();
  Eigen::VectorXd p = logits.array().exp().matrix();
  p /= p.sum();
  const Eigen::VectorXd q = tempered_spectrum(p, entropy);
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  Eigen::MatrixXcd rho = v * q.cast<Complex>().asDiagonal() * v.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityOperator(std::move(rho), {dim});
}

double decode_mean(double u) { return 2.0 / (1.0 + std::exp(-u)); }

DensityOperator tail_thermal(double N) {
  return thermal_state(N, thermal_dimension_for_tail(N, 1e-12));
}

}  // namespace

SearchResult minimize_output_entropy(const SearchConfig& config) {
  config.validate();
  const int d = config.dim;
  Eigen::Index n_params = 0;
  Objective objective;
  switch (config.objective) {
    case SearchObjective::kMoe1:
      n_params = 2 * d;
      objective = [&](const Eigen::VectorXd& x) {
        try {
          return moe1_trial(decode_pure(x, d), config.K, config.eta).margin;
        } catch (const SamplerError&) {
          return kPenalty;
        } catch (const RejectedInput&) {
          return kPenalty;
        }
      };
      break;
    case SearchObjective::kMoe2:
      n_params = d * d;
      objective = [&](const Eigen::VectorXd& x) {
        return moe2_trial(decode_fixed_entropy(x, d, g(config.K)), config.eta).margin;
      };
      break;
    case SearchObjective::kEpniSlack:
      n_params = 2;
      objective = [&](const Eigen::VectorXd& x) {
        return epni_check(tail_thermal(decode_mean(x(0))), tail_thermal(decode_mean(x(1))),
                          config.eta)
            .slack_photon;
      };
      break;
  }

  const NelderMeadOptions nm_options = config.resolved_nelder_mead();
  SearchResult out;
  out.best_objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < config.restarts; ++r) {
    Rng rng(trial_seed(config.seed, static_cast<std::uint64_t>(r)));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd x0(n_params);
    for (Eigen::Index i = 0; i < n_params; ++i) x0(i) = normal(rng);
    // Trace holds improvements only, plus the final iterate of each restart.
    double last_best = std::numeric_limits<double>::infinity();
    auto record = [&](int iter, int evals, double best) {
      if (best < last_best) {
        out.trace.push_back({r, iter, evals, best});
        last_best = best;
      }
    };
    const NelderMeadResult nm = nelder_mead(objective, x0, nm_options, record);
    if (out.trace.empty() || out.trace.back().restart != r ||
        out.trace.back().evaluations != nm.evaluations) {
      out.trace.push_back({r, nm.iterations, nm.evaluations, nm.f});
    }
    out.evaluations += nm.evaluations;
    if (nm.f < out.best_objective) {
      out.best_objective = nm.f;
      out.best_restart = r;
      out.best_parameters = nm.x;
    }
  }

  const Eigen::VectorXd& x = out.best_parameters;
  switch (config.objective) {
    case SearchObjective::kMoe1: {
      out.best_psi = decode_pure(x, d);
      out.moe = moe1_trial(*out.best_psi, config.K, config.eta);
      out.vacuum_fidelity = std::norm(out.best_psi->amplitudes()(0));
      break;
    }
    case SearchObjective::kMoe2: {
      out.best_rho_b = decode_fixed_entropy(x, d, g(config.K));
      out.moe = moe2_trial(*out.best_rho_b, config.eta);
      out.thermal_trace_distance = trace_distance(*out.best_rho_b, thermal_state(config.K, d));
      break;
    }
    case SearchObjective::kEpniSlack: {
      out.best_N_a = decode_mean(x(0));
      out.best_N_b = decode_mean(x(1));
      out.epni = epni_check(tail_thermal(out.best_N_a), tail_thermal(out.best_N_b), config.eta);
      break;
    }
  }
  return out;
}

}  // namespace epnilab
