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

#ifndef EPNILAB_CAMPAIGN_HPP_
#define EPNILAB_CAMPAIGN_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "epnilab/fock.hpp"
#include "epnilab/harness.hpp"
#include "epnilab/samplers.hpp"

namespace epnilab {

enum class Experiment { kEpni, kMoe1, kMoe2 };

const char* experiment_name(Experiment e);
// Accepts "epni", "moe1", "moe2". Throws InvalidArgument otherwise.
Experiment parse_experiment(const std::string& name);
// Ensemble names understood by each experiment; the first is the default.
std::vector<std::string> ensembles_for(Experiment e);

struct Tolerances {
  double violation = 1e-9;     // slack/margin below -violation is a violation
  double equality = 1e-6;      // equality-family certificates
  double consistency = 1e-10;  // sign agreement of the photon/entropy forms
};

struct CampaignConfig {
  Experiment experiment = Experiment::kEpni;
  std::string ensemble;  // empty: first entry of ensembles_for(experiment)
  std::uint64_t seed = kDefaultSeed;
  int dim = 8;
  int n_modes = 1;
  std::uint64_t trials = 100;
  std::vector<double> etas = {0.5};  // trial t uses etas[t % size]
  double K = 1.0;
  Tolerances tolerances;
  int threads = 1;

  // Throws InvalidArgument describing the first problem found.
  void validate() const;
  std::string resolved_ensemble() const;
};

// Options used for the moe trials of a campaign (environment truncation,
// zero-mean enforcement).
MoeOptions moe_options_for(const CampaignConfig& config);

// Inputs of one trial, regenerated deterministically from (config, index).
struct TrialInputs {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  double eta = 0.5;
  std::string descriptor;
  std::optional<PureState> psi_a;         // moe1 input
  std::optional<DensityOperator> rho_a;   // epni input
  std::optional<DensityOperator> rho_b;   // epni / moe2 input
};

TrialInputs make_trial_inputs(const CampaignConfig& config, std::uint64_t trial);

struct TrialResult {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  double eta = 0.5;
  std::string descriptor;
  std::optional<EpniSlackReport> epni;
  std::optional<MoeTrialReport> moe;
  std::string error;  // empty on success
  bool violation = false;
  // Violation with clean diagnostics: these get a dossier.
  bool dossier_candidate = false;

  bool ok() const { return error.empty(); }
  // slack_photon for epni trials, margin for moe trials.
  double primary() const;
};

TrialResult run_trial(const CampaignConfig& config, const TrialInputs& inputs);

struct CampaignSummary {
  std::string experiment;
  std::string ensemble;
  std::uint64_t trials = 0;
  std::uint64_t completed = 0;
  std::uint64_t errors = 0;
  std::uint64_t violations = 0;
  std::uint64_t dossier_candidates = 0;
  std::uint64_t truncation_warnings = 0;
  std::optional<double> min_primary;
  std::optional<double> max_abs_primary;
  std::uint64_t argmin_trial = 0;
  std::string argmin_descriptor;
  // epni only
  std::optional<double> min_slack_entropy;
  std::optional<double> min_slack_linear;
  std::uint64_t form_inconsistencies = 0;
  std::uint64_t implication_failures = 0;
};

struct CampaignResult {
  std::vector<TrialResult> trials;  // in trial-index order
  CampaignSummary summary;
};

// Runs every trial on `config.threads` workers. Trial errors are recorded and
// the campaign continues.
CampaignResult run_campaign(const CampaignConfig& config);

CampaignSummary summarize(const CampaignConfig& config,
                          const std::vector<TrialResult>& trials);

// Single-line JSON renderings.
std::string config_json(const CampaignConfig& config);
std::string trial_record_json(const TrialResult& r);
std::string summary_json(const CampaignSummary& s);

// Writes the inputs of a violating trial plus independent recomputations
// (joint-input route and a dense unitary with 15 extra levels) under
// dir/trial_<index>/. Returns that directory.
std::filesystem::path write_dossier(const CampaignConfig& config, const TrialResult& result,
                                    const std::filesystem::path& dir);

}  // namespace epnilab

#endif  // EPNILAB_CAMPAIGN_HPP_
