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

#include "epnilab/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>

#include <sstream>
#include <thread>

#include "epnilab/entropy.hpp"
#include "epnilab/errors.hpp"
#include "epnilab/optics.hpp"
#include "epnilab/state_io.hpp"
#include "json.hpp"

namespace epnilab {

using Json = nlohmann::ordered_json;

namespace {

// Largest per-mode thermal truncation used for tail-sized environments.
int thermal_cap(int n_modes) { return n_modes == 1 ? 64 : 24; }

int tail_dim(double N, int n_modes, int floor_dim) {
  return std::max(floor_dim, thermal_dimension_for_tail(N, 1e-12, thermal_cap(n_modes)));
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

bool clean_diagnostics(const DensityOperator& rho) {
  const auto d = validate(rho);
  return d.trace_deficit < 1e-9 && d.hermiticity_residual < 1e-9 && d.min_eigenvalue > -1e-9;
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::kEpni: return "epni";
    case Experiment::kMoe1: return "moe1";
    case Experiment::kMoe2: return "moe2";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  if (name == "epni") return Experiment::kEpni;
  if (name == "moe1" || name == "1") return Experiment::kMoe1;
  if (name == "moe2" || name == "2") return Experiment::kMoe2;
  throw InvalidArgument("unknown experiment '" + name + "' (expected epni, moe1, moe2)");
}

std::vector<std::string> ensembles_for(Experiment e) {
  switch (e) {
    case Experiment::kEpni:
      return {"haar-pure", "haar-pure-thermal", "mixed-mixed", "thermal-pairs",
              "vacuum-thermal"};
    case Experiment::kMoe1:
      return {"zero-mean-pure", "vacuum", "unconstrained-pure"};
    case Experiment::kMoe2:
      return {"fixed-entropy", "thermal", "two-point"};
  }
  return {};
}

std::string CampaignConfig::resolved_ensemble() const {
  return ensemble.empty() ? ensembles_for(experiment).front() : ensemble;
}

void CampaignConfig::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (dim < 2 || dim > 32) throw InvalidArgument("dim must lie in [2, 32]");
  if (n_modes < 1 || n_modes > 2) throw InvalidArgument("n_modes must be 1 or 2");
  if (etas.empty()) throw InvalidArgument("at least one eta is required");
  for (double eta : etas) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("eta must lie in [0, 1]");
  }
  if (!(K >= 0.0) || !std::isfinite(K)) throw InvalidArgument("K must be finite and >= 0");
  if (threads < 1) throw InvalidArgument("threads must be >= 1");
  if (!(tolerances.violation >= 0.0) || !(tolerances.equality >= 0.0) ||
      !(tolerances.consistency >= 0.0)) {
    throw InvalidArgument("tolerances must be >= 0");
  }
  const auto names = ensembles_for(experiment);
  const std::string ens = resolved_ensemble();
  if (std::find(names.begin(), names.end(), ens) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw InvalidArgument("ensemble '" + ens + "' is not valid for " +
                          experiment_name(experiment) + " (expected one of: " + list + ")");
  }
  if (experiment == Experiment::kMoe2 && (ens == "fixed-entropy" || ens == "two-point") &&
      g(K) > std::log(static_cast<double>(dim)) + 1e-12) {
    throw InvalidArgument("entropy g(K) = " + fmt(g(K)) + " exceeds ln(dim) = " +
                          fmt(std::log(static_cast<double>(dim))));
  }
}

MoeOptions moe_options_for(const CampaignConfig& config) {
  MoeOptions opts;
  opts.max_thermal_dim = thermal_cap(config.n_modes);
  opts.require_zero_mean = config.resolved_ensemble() != "unconstrained-pure";
  return opts;
}

TrialInputs make_trial_inputs(const CampaignConfig& config, std::uint64_t trial) {
  TrialInputs in;
  in.trial = trial;
  in.seed = trial_seed(config.seed, trial);
  in.eta = config.etas[trial % config.etas.size()];
  Rng rng(in.seed);
  const int n = config.n_modes, d = config.dim;
  const ModeDims dims(n, d);
  const std::string ens = config.resolved_ensemble();
  const std::string tag = "(d=" + std::to_string(d) + ",n=" + std::to_string(n) + ")";
  const std::string thermal_tag = "thermal(K=" + fmt(config.K);

  switch (config.experiment) {
    case Experiment::kEpni:
      if (ens == "haar-pure") {
        in.rho_a = sample_haar_pure(dims, rng).projector();
        in.rho_b = sample_haar_pure(dims, rng).projector();
        in.descriptor = "a=haar-pure" + tag + " b=haar-pure" + tag;
      } else if (ens == "haar-pure-thermal") {
        in.rho_a = sample_haar_pure(dims, rng).projector();
        in.rho_b = thermal_product(config.K, n, d);
        in.descriptor = "a=haar-pure" + tag + " b=" + thermal_tag + "," + tag.substr(1);
      } else if (ens == "mixed-mixed") {
        in.rho_a = sample_ginibre_density(dims, rng);
        in.rho_b = sample_ginibre_density(dims, rng);
        in.descriptor = "a=ginibre" + tag + " b=ginibre" + tag;
      } else if (ens == "thermal-pairs") {
        std::uniform_real_distribution<double> mean(0.0, config.K);
        const double na = mean(rng), nb = mean(rng);
        const int da = tail_dim(na, n, d), db = tail_dim(nb, n, d);
        in.rho_a = thermal_product(na, n, da);
        in.rho_b = thermal_product(nb, n, db);
        in.descriptor = "a=thermal(N=" + fmt(na) + ",d=" + std::to_string(da) +
                        ") b=thermal(N=" + fmt(nb) + ",d=" + std::to_string(db) + ")";
      } else {  // vacuum-thermal
        const int db = tail_dim(config.K, n, d);
        in.rho_a = vacuum_state(ModeDims(n, 1)).projector();
        in.rho_b = thermal_product(config.K, n, db);
        in.descriptor = "a=vacuum b=" + thermal_tag + ",d=" + std::to_string(db) + ")";
      }
      break;
    case Experiment::kMoe1:
      if (ens == "zero-mean-pure") {
        in.psi_a = sample_pure_zero_mean(d, n, rng);
        in.descriptor = "psi=zero-mean-pure" + tag;
      } else if (ens == "vacuum") {
        in.psi_a = vacuum_state(dims);
        in.descriptor = "psi=vacuum" + tag;
      } else {  // unconstrained-pure
        in.psi_a = sample_haar_pure(dims, rng);
        in.descriptor = "psi=unconstrained-pure" + tag + " [non-paper: mean field free]";
      }
      in.descriptor += " b=" + thermal_tag + ")";
      break;
    case Experiment::kMoe2: {
      const double entropy = n * g(config.K);
      if (ens == "fixed-entropy") {
        in.rho_b = sample_density_fixed_entropy(dims, entropy, rng);
        in.descriptor = "b=fixed-entropy" + tag;
      } else if (ens == "thermal") {
        const int db = tail_dim(config.K, n, d);
        in.rho_b = thermal_product(config.K, n, db);
        in.descriptor = "b=" + thermal_tag + ",d=" + std::to_string(db) + ")";
      } else {  // two-point
        in.rho_b = two_point_mixture(dims, entropy);
        in.descriptor = "b=two-point" + tag;
      }
      in.descriptor += " S_b=n*g(" + fmt(config.K) + ") psi=vacuum";
      break;
    }
  }
  return in;
}

double TrialResult::primary() const {
  if (epni) return epni->slack_photon;
  if (moe) return moe->margin;
  return std::nan("");
}

TrialResult run_trial(const CampaignConfig& config, const TrialInputs& in) {
  TrialResult r;
  r.trial = in.trial;
  r.seed = in.seed;
  r.eta = in.eta;
  r.descriptor = in.descriptor;
  const double tol = config.tolerances.violation;
  try {
    switch (config.experiment) {
      case Experiment::kEpni: {
        auto rep = epni_check(*in.rho_a, *in.rho_b, in.eta);
        rep.trial_id = in.trial;
        rep.seed = in.seed;
        rep.input_descriptors = in.descriptor;
        r.violation = rep.slack_photon < -tol;
        r.dossier_candidate = r.violation && !rep.truncation_warning &&
                              clean_diagnostics(*in.rho_a) && clean_diagnostics(*in.rho_b);
        r.epni = std::move(rep);
        break;
      }
      case Experiment::kMoe1:
      case Experiment::kMoe2: {
        auto rep = config.experiment == Experiment::kMoe1
                       ? moe1_trial(*in.psi_a, config.K, in.eta, moe_options_for(config))
                       : moe2_trial(*in.rho_b, in.eta, config.K, moe_options_for(config));
        rep.trial_id = in.trial;
        rep.seed = in.seed;
        rep.input_descriptors = in.descriptor;
        r.violation = rep.margin < -tol;
        r.dossier_candidate =
            r.violation && !rep.truncation_warning &&
            (config.experiment == Experiment::kMoe1 || clean_diagnostics(*in.rho_b));
        r.moe = std::move(rep);
        break;
      }
    }
  } catch (const std::exception& e) {
    r.error = e.what();
    r.violation = false;
    r.dossier_candidate = false;
  }
  return r;
}

CampaignSummary summarize(const CampaignConfig& config, const std::vector<TrialResult>& trials) {
  CampaignSummary s;
  s.experiment = experiment_name(config.experiment);
  s.ensemble = config.resolved_ensemble();
  s.trials = trials.size();
  const double consistency = config.tolerances.consistency;
  for (const auto& t : trials) {
    if (!t.ok()) {
      ++s.errors;
      continue;
    }
    ++s.completed;
    s.violations += t.violation;
    s.dossier_candidates += t.dossier_candidate;
    const double p = t.primary();
    if (!s.min_primary || p < *s.min_primary) {
      s.min_primary = p;
      s.argmin_trial = t.trial;
      s.argmin_descriptor = t.descriptor;
    }
    s.max_abs_primary = std::max(s.max_abs_primary.value_or(0.0), std::abs(p));
    if (t.epni) {
      const auto& e = *t.epni;
      s.truncation_warnings += e.truncation_warning;
      s.min_slack_entropy = std::min(s.min_slack_entropy.value_or(e.slack_entropy), e.slack_entropy);
      s.min_slack_linear = std::min(s.min_slack_linear.value_or(e.slack_linear), e.slack_linear);
      if (std::abs(e.slack_photon) > consistency && std::abs(e.slack_entropy) > consistency &&
          (e.slack_photon > 0) != (e.slack_entropy > 0)) {
        ++s.form_inconsistencies;
      }
      if (e.slack_photon >= 0.0 && e.slack_linear < -config.tolerances.violation) {
        ++s.implication_failures;
      }
    } else if (t.moe) {
      s.truncation_warnings += t.moe->truncation_warning;
    }
  }
  return s;
}

CampaignResult run_campaign(const CampaignConfig& config) {
  config.validate();
  CampaignResult result;
  result.trials.resize(config.trials);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i = next++; i < config.trials; i = next++) {
      try {
        result.trials[i] = run_trial(config, make_trial_inputs(config, i));
      } catch (const std::exception& e) {
        // Input generation failed (e.g. sampler error).
        TrialResult r;
        r.trial = i;
        r.seed = trial_seed(config.seed, i);
        r.eta = config.etas[i % config.etas.size()];
        r.error = e.what();
        result.trials[i] = std::move(r);
      }
    }
  };
  const int workers =
      static_cast<int>(std::min<std::uint64_t>(config.threads, config.trials));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  result.summary = summarize(config, result.trials);
  return result;
}

std::string config_json(const CampaignConfig& c) {
  Json j;
  j["experiment"] = experiment_name(c.experiment);
  j["ensemble"] = c.resolved_ensemble();
  j["seed"] = c.seed;
  j["dim"] = c.dim;
  j["n_modes"] = c.n_modes;
  j["trials"] = c.trials;
  j["etas"] = c.etas;
  j["K"] = c.K;
  j["tolerances"] = {{"violation", c.tolerances.violation},
                     {"equality", c.tolerances.equality},
                     {"consistency", c.tolerances.consistency}};
  return j.dump();
}

namespace {

Json trial_json(const TrialResult& r) {
  Json j;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["eta"] = r.eta;
  j["inputs"] = r.descriptor;
  if (r.epni) {
    const auto& e = *r.epni;
    j["n_modes"] = e.n_modes;
    j["S_a"] = e.S_a;
    j["S_b"] = e.S_b;
    j["S_c"] = e.S_c;
    j["N_a"] = e.N_a;
    j["N_b"] = e.N_b;
    j["N_c"] = e.N_c;
    j["slack_photon"] = e.slack_photon;
    j["slack_entropy"] = e.slack_entropy;
    j["slack_linear"] = e.slack_linear;
    j["truncation_warning"] = e.truncation_warning;
    j["output_discarded_mass"] = e.output_discarded_mass;
  }
  if (r.moe) {
    const auto& m = *r.moe;
    j["conjecture"] = m.conjecture;
    j["K"] = m.K;
    j["n_modes"] = m.n_modes;
    j["S_c"] = m.S_c;
    j["bound"] = m.bound;
    j["margin"] = m.margin;
    j["truncation_warning"] = m.truncation_warning;
  }
  j["violation"] = r.violation;
  j["error"] = r.ok() ? Json(nullptr) : Json(r.error);
  return j;
}

}  // namespace

std::string trial_record_json(const TrialResult& r) { return trial_json(r).dump(); }

std::string summary_json(const CampaignSummary& s) {
  Json j;
  j["record"] = "summary";
  j["experiment"] = s.experiment;
  j["ensemble"] = s.ensemble;
  j["trials"] = s.trials;
  j["completed"] = s.completed;
  j["errors"] = s.errors;
  j["violations"] = s.violations;
  j["dossiers"] = s.dossier_candidates;
  j["truncation_warnings"] = s.truncation_warnings;
  j["min_primary"] = optional_number(s.min_primary);
  j["max_abs_primary"] = optional_number(s.max_abs_primary);
  j["argmin_trial"] = s.argmin_trial;
  j["argmin_inputs"] = s.argmin_descriptor;
  if (s.experiment == "epni") {
    j["min_slack_entropy"] = optional_number(s.min_slack_entropy);
    j["min_slack_linear"] = optional_number(s.min_slack_linear);
    j["form_inconsistencies"] = s.form_inconsistencies;
    j["implication_failures"] = s.implication_failures;
  }
  return j.dump();
}

namespace {

// Entropy of the transmitted arm for the same inputs via the dense unitary on
// a single-mode space padded by 15 levels.
Json dense_recompute(const DensityOperator& a, const DensityOperator& b, double eta) {
  if (a.num_modes() != 1) return {{"skipped", "dense route is single-mode only"}};
  const auto sa = occupied_support(a).front(), sb = occupied_support(b).front();
  const int levels =
      std::max({a.mode_dims().front() + 15, b.mode_dims().front() + 15, sa + sb});
  if (static_cast<std::size_t>(levels) * levels > kMaxTotalDimension) {
    return {{"skipped", "joint dimension exceeds the resource limit"}};
  }
  const TwoModeUnitary u = beamsplitter_unitary(BeamSplitter(eta), levels, levels);
  const DensityOperator joint = tensor(embed(a, {levels}), embed(b, {levels}));
  const DensityOperator out(u.matrix * joint.matrix() * u.matrix.adjoint(),
                            {levels, levels});
  const int keep[] = {0};
  return {{"levels", levels}, {"S_c", von_neumann_entropy(partial_trace(out, keep)).nats}};
}

Json joint_recompute(const DensityOperator& a, const DensityOperator& b, double eta) {
  const int n = a.num_modes();
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) pairs.emplace_back(i, n + i);
  try {
    const ChannelOutput out = apply_beamsplitter_joint(tensor(a, b), BeamSplitter(eta), pairs);
    return {{"S_c", von_neumann_entropy(out.rho_c).nats},
            {"truncation_warning", out.truncation_warning}};
  } catch (const ResourceLimit& e) {
    return {{"skipped", e.what()}};
  }
}

}  // namespace

std::filesystem::path write_dossier(const CampaignConfig& config, const TrialResult& result,
                                    const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path out = dir / ("trial_" + std::to_string(result.trial));
  fs::create_directories(out);
  const TrialInputs in = make_trial_inputs(config, result.trial);

  DensityOperator a = vacuum_state({1}).projector(), b = a;
  Json j;
  j["config"] = Json::parse(config_json(config));
  j["record"] = trial_json(result);
  Json files = Json::array();
  switch (config.experiment) {
    case Experiment::kEpni:
      a = *in.rho_a;
      b = *in.rho_b;
      write_state(out / "rho_a.state", a);
      write_state(out / "rho_b.state", b);
      files = {"rho_a.state", "rho_b.state"};
      break;
    case Experiment::kMoe1: {
      const MoeOptions opts = moe_options_for(config);
      a = in.psi_a->projector();
      b = thermal_product(config.K, config.n_modes,
                          thermal_dimension_for_tail(config.K, opts.thermal_tail,
                                                     opts.max_thermal_dim));
      write_state(out / "psi_a.state", *in.psi_a);
      write_state(out / "rho_b.state", b);
      files = {"psi_a.state", "rho_b.state"};
      break;
    }
    case Experiment::kMoe2:
      a = vacuum_state(ModeDims(config.n_modes, 1)).projector();
      b = *in.rho_b;
      write_state(out / "rho_b.state", b);
      files = {"rho_b.state"};
      break;
  }
  j["files"] = files;
  Json recompute;
  try {
    recompute["joint"] = joint_recompute(a, b, in.eta);
    recompute["dense"] = dense_recompute(a, b, in.eta);
  } catch (const std::exception& e) {
    recompute["error"] = e.what();
  }
  j["recomputations"] = recompute;
  std::ofstream os(out / "dossier.json");
  os << j.dump(2) << '\n';
  if (!os) throw std::runtime_error("write_dossier: failed to write " + out.string());
  return out;
}

}  // namespace epnilab
