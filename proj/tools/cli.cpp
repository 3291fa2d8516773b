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

#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "epnilab/campaign.hpp"
#include "epnilab/capacity.hpp"
#include "epnilab/classical_epi.hpp"
#include "epnilab/entropy.hpp"
#include "epnilab/errors.hpp"
#include "epnilab/fock.hpp"
#include "epnilab/samplers.hpp"
#include "epnilab/search.hpp"
#include "epnilab/state_io.hpp"
#include "epnilab/version.hpp"
#include "json.hpp"

namespace epnilab::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Usage-level failure detected after parsing (bad values, missing --out, ...).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Validity thresholds applied by `state`.
constexpr double kStateTraceTolerance = 1e-8;
constexpr double kStateHermiticityTolerance = 1e-10;
constexpr double kStateEigenvalueTolerance = 1e-8;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Shortest decimal text that parses back to the same double.
std::string number_text(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string list_text(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += number_text(xs[i]);
  }
  return s;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

// Resolved configuration in the same INI dialect that --config reads: global
// keys first, then one section for the subcommand.
class IniWriter {
 public:
  IniWriter(std::uint64_t seed, int threads) {
    os_ << "# epnilab " << kVersion << " resolved configuration\n";
    os_ << "seed=" << seed << "\nthreads=" << threads << "\n";
  }
  void section(const std::string& name) { os_ << "\n[" << name << "]\n"; }
  void put(const std::string& key, const std::string& raw) { os_ << key << '=' << raw << '\n'; }
  void put(const std::string& key, double x) { put(key, number_text(x)); }
  void put_int(const std::string& key, long long x) { put(key, std::to_string(x)); }
  void put_list(const std::string& key, const std::vector<double>& xs) { put(key, list_text(xs)); }
  void put_string(const std::string& key, const std::string& s) { put(key, quoted(s)); }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

// Run bookkeeping: output directory, emitted files and the manifest.
class Run {
 public:
  Run(std::string subcommand, const fs::path& out_dir, std::uint64_t seed, int threads)
      : subcommand_(std::move(subcommand)),
        out_dir_(out_dir),
        seed_(seed),
        threads_(threads),
        started_(utc_now()),
        t0_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec || !fs::is_directory(out_dir_)) {
      throw UsageError("cannot create output directory '" + out_dir_.string() + "'");
    }
  }

  const fs::path& dir() const { return out_dir_; }
  fs::path path(const std::string& rel) const { return out_dir_ / rel; }
  void add_output(const std::string& rel) { outputs_.push_back(rel); }

  void set_config(Json config, const std::string& ini) {
    config_ = std::move(config);
    std::ofstream(path("config.ini"), std::ios::binary) << ini;
  }

  void write_text(const std::string& rel, const std::string& text) {
    std::ofstream os(path(rel), std::ios::binary);
    os << text;
    if (!os) throw std::runtime_error("failed to write " + path(rel).string());
    add_output(rel);
  }

  void finish(int exit_code, const std::string& error = {}) {
    const double runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    Json m;
    m["tool"] = "epnilab";
    m["version"] = kVersion;
    m["subcommand"] = subcommand_;
    m["seed"] = seed_;
    m["threads"] = threads_;
    m["config"] = config_;
    m["config_file"] = "config.ini";
    m["started_utc"] = started_;
    m["finished_utc"] = utc_now();
    m["runtime_seconds"] = runtime;
    m["outputs"] = outputs_;
    m["exit_code"] = exit_code;
    if (!error.empty()) m["error"] = error;
    std::ofstream(path("manifest.json"), std::ios::binary) << m.dump(2) << '\n';
  }

 private:
  std::string subcommand_;
  fs::path out_dir_;
  std::uint64_t seed_;
  int threads_;
  std::string started_;
  std::chrono::steady_clock::time_point t0_;
  Json config_ = Json::object();
  std::vector<std::string> outputs_;
};

struct GlobalOptions {
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  int threads = 1;
};

struct CapacityOptions {
  std::vector<double> etas = default_eta_grid();
  std::vector<double> nbars = default_nbar_grid();
  std::vector<double> noises = default_noise_grid();
};

struct EpiOptions {
  std::string spec;
  double eta = 0.5;
};

struct StateOptions {
  std::string path;
};

struct ReplayOptions {
  std::string manifest;
};

// ---------------------------------------------------------------- capacity

int cmd_capacity(const GlobalOptions& g, const CapacityOptions& o, std::ostream& out) {
  if (o.etas.empty() || o.nbars.empty() || o.noises.empty()) {
    throw UsageError("capacity grids must be non-empty");
  }
  const auto points = capacity_sweep(o.etas, o.nbars, o.noises);
  Run run("capacity", g.out, g.seed, g.threads);
  IniWriter ini(g.seed, g.threads);
  ini.section("capacity");
  ini.put_list("eta", o.etas);
  ini.put_list("nbar", o.nbars);
  ini.put_list("noise", o.noises);
  run.set_config({{"eta", o.etas}, {"nbar", o.nbars}, {"noise", o.noises}}, ini.str());
  std::ostringstream table;
  write_capacity_table(table, points);
  run.write_text("capacity.csv", table.str());
  out << table.str();
  run.finish(kExitOk);
  return kExitOk;
}

// ---------------------------------------------------------------- campaigns

void put_campaign_section(IniWriter& ini, const std::string& name, const CampaignConfig& c) {
  ini.section(name);
  if (name == "moe") ini.put_int("conjecture", c.experiment == Experiment::kMoe1 ? 1 : 2);
  ini.put_string("ensemble", c.resolved_ensemble());
  ini.put_int("dim", c.dim);
  ini.put_int("modes", c.n_modes);
  ini.put_int("trials", static_cast<long long>(c.trials));
  ini.put_list("eta", c.etas);
  ini.put("K", c.K);
  ini.put("violation-tol", c.tolerances.violation);
  ini.put("equality-tol", c.tolerances.equality);
  ini.put("consistency-tol", c.tolerances.consistency);
}

int cmd_campaign(const std::string& name, const GlobalOptions& g, CampaignConfig c,
                 std::ostream& out, std::ostream& err) {
  c.seed = g.seed;
  c.threads = g.threads;
  c.validate();
  Run run(name, g.out, g.seed, g.threads);
  IniWriter ini(g.seed, g.threads);
  put_campaign_section(ini, name, c);
  run.set_config(Json::parse(config_json(c)), ini.str());

  const CampaignResult result = run_campaign(c);
  std::string records;
  for (const auto& r : result.trials) records += trial_record_json(r) + '\n';
  run.write_text("trials.jsonl", records);
  const std::string summary = summary_json(result.summary);
  run.write_text("summary.json", summary + '\n');

  int code = kExitOk;
  for (const auto& r : result.trials) {
    if (!r.dossier_candidate) continue;
    const fs::path p = write_dossier(c, r, run.path("dossiers"));
    run.add_output(fs::relative(p, run.dir()).generic_string());
    code = kExitDossier;
  }
  if (code == kExitOk && result.summary.errors > 0) {
    err << "epnilab: " << result.summary.errors << " trial(s) failed; see trials.jsonl\n";
    code = kExitInternal;
  }
  if (code == kExitDossier) {
    err << "epnilab: " << result.summary.dossier_candidates
        << " counterexample candidate(s) written under " << run.path("dossiers").string()
        << '\n';
  }
  out << summary << '\n';
  run.finish(code);
  return code;
}

// ---------------------------------------------------------------- epi

GaussianMixture1D parse_mixture(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw InvalidArgument(std::string("mixture spec: '") + key + "' must be an array");
  }
  std::vector<GaussianComponent> comps;
  for (const auto& c : j[key]) {
    if (!c.is_object()) throw InvalidArgument("mixture spec: components must be objects");
    for (const auto& [k, v] : c.items()) {
      if (k != "weight" && k != "mean" && k != "variance") {
        throw InvalidArgument("mixture spec: unknown component key '" + k + "'");
      }
      if (!v.is_number()) throw InvalidArgument("mixture spec: '" + k + "' must be a number");
    }
    if (!c.contains("weight") || !c.contains("mean") || !c.contains("variance")) {
      throw InvalidArgument("mixture spec: components need weight, mean and variance");
    }
    comps.push_back({c["weight"].get<double>(), c["mean"].get<double>(),
                     c["variance"].get<double>()});
  }
  return GaussianMixture1D(std::move(comps));
}

Json mixture_json(const GaussianMixture1D& m) {
  Json a = Json::array();
  for (const auto& c : m.components()) {
    a.push_back({{"weight", c.weight}, {"mean", c.mean}, {"variance", c.variance}});
  }
  return a;
}

int cmd_epi(const GlobalOptions& g, const EpiOptions& o, std::ostream& out) {
  if (!(o.eta >= 0.0 && o.eta <= 1.0)) throw UsageError("--eta must lie in [0, 1]");
  std::ifstream in(o.spec, std::ios::binary);
  if (!in) throw UsageError("cannot open mixture spec '" + o.spec + "'");
  Json spec;
  try {
    spec = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("mixture spec: ") + e.what());
  }
  if (!spec.is_object()) throw InvalidArgument("mixture spec: top level must be an object");
  for (const auto& [k, v] : spec.items()) {
    if (k != "x" && k != "y") throw InvalidArgument("mixture spec: unknown key '" + k + "'");
  }
  const GaussianMixture1D x = parse_mixture(spec, "x");
  const GaussianMixture1D y = parse_mixture(spec, "y");

  Run run("epi", g.out, g.seed, g.threads);
  // The spec is copied next to the results so the run replays on its own.
  const Json normalized = {{"x", mixture_json(x)}, {"y", mixture_json(y)}};
  run.write_text("mixtures.json", normalized.dump(2) + '\n');
  IniWriter ini(g.seed, g.threads);
  ini.section("epi");
  ini.put_string("spec", fs::absolute(run.path("mixtures.json")).generic_string());
  ini.put("eta", o.eta);
  run.set_config({{"spec", "mixtures.json"}, {"eta", o.eta}}, ini.str());

  const EpiSlackReport r = epi_check(x, y, o.eta);
  Json j;
  j["record"] = "epi";
  j["eta"] = r.eta;
  j["h_x"] = r.h_x;
  j["h_y"] = r.h_y;
  j["h_z"] = r.h_z;
  j["p_x"] = r.p_x;
  j["p_y"] = r.p_y;
  j["p_z"] = r.p_z;
  j["h_z_tilde"] = r.h_z_tilde;
  j["slack_power"] = r.slack_power;
  j["slack_log_power"] = r.slack_log_power;
  j["slack_linear"] = r.slack_linear;
  run.write_text("epi.json", j.dump() + '\n');
  out << j.dump() << '\n';
  run.finish(kExitOk);
  return kExitOk;
}

// ---------------------------------------------------------------- search

struct SearchCliOptions {
  std::string objective;
  SearchConfig config;
  double violation = 1e-9;
};

int cmd_search(const GlobalOptions& g, SearchCliOptions o, std::ostream& out,
               std::ostream& err) {
  SearchConfig& c = o.config;
  c.objective = parse_objective(o.objective);
  c.seed = g.seed;
  c.validate();
  if (!(o.violation >= 0.0)) throw UsageError("--violation-tol must be >= 0");
  const NelderMeadOptions nm = c.resolved_nelder_mead();

  Run run("search", g.out, g.seed, g.threads);
  IniWriter ini(g.seed, g.threads);
  ini.section("search");
  ini.put_string("objective", objective_name(c.objective));
  ini.put_int("dim", c.dim);
  ini.put("K", c.K);
  ini.put("eta", c.eta);
  ini.put_int("restarts", c.restarts);
  ini.put_int("evaluations", nm.max_evaluations);
  ini.put("initial-step", nm.initial_step);
  ini.put("f-tol", nm.f_tolerance);
  ini.put("x-tol", nm.x_tolerance);
  ini.put("violation-tol", o.violation);
  Json cfg = {{"objective", objective_name(c.objective)},
              {"seed", c.seed},
              {"dim", c.dim},
              {"K", c.K},
              {"eta", c.eta},
              {"restarts", c.restarts},
              {"evaluations_per_restart", nm.max_evaluations},
              {"initial_step", nm.initial_step},
              {"f_tolerance", nm.f_tolerance},
              {"x_tolerance", nm.x_tolerance},
              {"violation_tolerance", o.violation}};
  run.set_config(cfg, ini.str());

  c.evaluations_per_restart = nm.max_evaluations;
  const SearchResult r = minimize_output_entropy(c);

  std::ostringstream trace;
  trace << "restart,iteration,evaluations,best\n" << std::setprecision(17);
  for (const auto& t : r.trace) {
    trace << t.restart << ',' << t.iteration << ',' << t.evaluations << ',' << t.best << '\n';
  }
  run.write_text("trace.csv", trace.str());

  Json j;
  j["record"] = "search";
  j["objective"] = objective_name(c.objective);
  j["best_objective"] = r.best_objective;
  j["best_restart"] = r.best_restart;
  j["evaluations"] = r.evaluations;
  j["best_parameters"] = std::vector<double>(r.best_parameters.data(),
                                             r.best_parameters.data() + r.best_parameters.size());
  if (r.moe) {
    j["conjecture"] = r.moe->conjecture;
    j["S_c"] = r.moe->S_c;
    j["bound"] = r.moe->bound;
    j["margin"] = r.moe->margin;
    j["truncation_warning"] = r.moe->truncation_warning;
  }
  if (c.objective == SearchObjective::kMoe1) j["vacuum_fidelity"] = r.vacuum_fidelity;
  if (c.objective == SearchObjective::kMoe2) {
    j["thermal_trace_distance"] = r.thermal_trace_distance;
  }
  if (r.epni) {
    j["N_a"] = r.best_N_a;
    j["N_b"] = r.best_N_b;
    j["slack_photon"] = r.epni->slack_photon;
    j["slack_entropy"] = r.epni->slack_entropy;
    j["slack_linear"] = r.epni->slack_linear;
  }
  const bool candidate = r.best_objective < -o.violation;
  j["counterexample_candidate"] = candidate;
  if (r.best_psi) {
    write_state(run.path("best_input.state"), StateVariant(*r.best_psi));
    run.add_output("best_input.state");
  } else if (r.best_rho_b) {
    write_state(run.path("best_input.state"), StateVariant(*r.best_rho_b));
    run.add_output("best_input.state");
  }
  run.write_text("search.json", j.dump() + '\n');
  out << j.dump() << '\n';
  const int code = candidate ? kExitDossier : kExitOk;
  if (candidate) {
    err << "epnilab: search objective " << r.best_objective
        << " is below the violation tolerance; best input kept as best_input.state\n";
  }
  run.finish(code);
  return code;
}

// ---------------------------------------------------------------- state

Json state_report(const StateVariant& sv) {
  const bool pure = std::holds_alternative<PureState>(sv);
  const DensityOperator rho =
      pure ? std::get<PureState>(sv).projector() : std::get<DensityOperator>(sv);
  const StateDiagnostics d = validate(rho);
  Json j;
  j["kind"] = pure ? "pure" : "density";
  j["mode_dims"] = rho.mode_dims();
  j["dimension"] = rho.dimension();
  j["trace_deficit"] = d.trace_deficit;
  j["hermiticity_residual"] = d.hermiticity_residual;
  j["min_eigenvalue"] = d.min_eigenvalue;
  j["tail_mass"] = d.tail_mass;
  j["discarded_mass"] = d.discarded_mass;
  const bool valid = d.trace_deficit <= kStateTraceTolerance &&
                     d.hermiticity_residual <= kStateHermiticityTolerance &&
                     d.min_eigenvalue >= -kStateEigenvalueTolerance;
  j["valid"] = valid;
  if (valid) {
    j["entropy"] = von_neumann_entropy(rho).nats;
    Json modes = Json::array();
    for (int m = 0; m < rho.num_modes(); ++m) {
      const Complex a = mean_field(rho, m);
      modes.push_back({{"mean_photons", mean_photon_number(rho, m)},
                       {"mean_field_re", a.real()},
                       {"mean_field_im", a.imag()}});
    }
    j["modes"] = modes;
  }
  return j;
}

int cmd_state(const GlobalOptions& g, const StateOptions& o, std::ostream& out,
              std::ostream& err) {
  if (!fs::is_regular_file(o.path)) throw UsageError("no such state file '" + o.path + "'");
  const Json j = state_report(read_state(fs::path(o.path)));
  const int code = j["valid"].get<bool>() ? kExitOk : kExitUsage;
  if (code != kExitOk) err << "epnilab: state fails the validity thresholds\n";
  out << j.dump(2) << '\n';
  if (!g.out.empty()) {
    Run run("state", g.out, g.seed, g.threads);
    IniWriter ini(g.seed, g.threads);
    ini.section("state");
    ini.put_string("path", fs::absolute(o.path).generic_string());
    run.set_config({{"path", fs::absolute(o.path).generic_string()}}, ini.str());
    run.write_text("state.json", j.dump(2) + '\n');
    run.finish(code);
  }
  return code;
}

// ---------------------------------------------------------------- replay

std::vector<std::string> replay_args(const GlobalOptions& g, const ReplayOptions& o,
                                     const CLI::App& app) {
  std::ifstream in(o.manifest, std::ios::binary);
  if (!in) throw UsageError("cannot open manifest '" + o.manifest + "'");
  Json m;
  try {
    m = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed manifest: ") + e.what());
  }
  if (!m.is_object() || !m.contains("subcommand") || !m.contains("config_file") ||
      !m["subcommand"].is_string() || !m["config_file"].is_string()) {
    throw UsageError("manifest lacks subcommand/config_file");
  }
  const std::string sub = m["subcommand"].get<std::string>();
  if (sub == "replay") throw UsageError("cannot replay a replay manifest");
  const fs::path ini = fs::path(o.manifest).parent_path() / m["config_file"].get<std::string>();
  if (!fs::is_regular_file(ini)) throw UsageError("missing " + ini.string());
  std::vector<std::string> args = {"--config", ini.string(), "--out", g.out};
  if (app.count("--threads") > 0) {
    args.push_back("--threads");
    args.push_back(std::to_string(g.threads));
  }
  args.push_back(sub);
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"epnilab: entropy photon-number inequality verification lab"};
  app.name("epnilab");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "INI file: global keys, then one [section] per subcommand");
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_version_flag("--version", kVersion);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master seed (default 20090710)");
  app.add_option("--out", g.out, "Output directory (required except for state)");
  app.add_option("--threads", g.threads, "Worker threads for campaigns")
      ->check(CLI::Range(1, 256));

  CapacityOptions cap;
  auto* sub_cap = app.add_subcommand("capacity", "Capacity sweep table");
  sub_cap->add_option("--eta", cap.etas, "Transmissivity grid")->delimiter(',');
  sub_cap->add_option("--nbar", cap.nbars, "Mean input photon-number grid")->delimiter(',');
  sub_cap->add_option("--noise", cap.noises, "Thermal noise grid")->delimiter(',');

  auto add_campaign_options = [](CLI::App* sub, CampaignConfig& c) {
    sub->add_option("--ensemble", c.ensemble, "Input ensemble (default: first listed)");
    sub->add_option("--dim", c.dim, "Per-mode truncation");
    sub->add_option("--modes", c.n_modes, "Modes per input (1 or 2)");
    sub->add_option("--trials", c.trials, "Number of trials");
    sub->add_option("--eta", c.etas, "Transmissivity grid, cycled over trials")->delimiter(',');
    sub->add_option("--K", c.K, "Mean photon number K of thermal references");
    sub->add_option("--violation-tol", c.tolerances.violation, "Violation tolerance");
    sub->add_option("--equality-tol", c.tolerances.equality, "Equality-family tolerance");
    sub->add_option("--consistency-tol", c.tolerances.consistency,
                    "Photon/entropy form agreement tolerance");
  };

  CampaignConfig epni_cfg;
  epni_cfg.experiment = Experiment::kEpni;
  auto* sub_epni = app.add_subcommand("epni", "EPnI slack campaign");
  add_campaign_options(sub_epni, epni_cfg);

  CampaignConfig moe_cfg;
  int conjecture = 1;
  auto* sub_moe = app.add_subcommand("moe", "Minimum-output-entropy campaign");
  sub_moe->add_option("--conjecture", conjecture, "1 (pure zero-mean) or 2 (fixed entropy)")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  add_campaign_options(sub_moe, moe_cfg);

  EpiOptions epi;
  auto* sub_epi = app.add_subcommand("epi", "Classical entropy power inequality check");
  sub_epi->add_option("--spec", epi.spec, "Mixture spec JSON {\"x\": [...], \"y\": [...]}")
      ->required();
  sub_epi->add_option("--eta", epi.eta, "Mixing weight");

  SearchCliOptions search;
  auto* sub_search = app.add_subcommand("search", "Derivative-free output entropy search");
  sub_search->add_option("--objective", search.objective, "moe1, moe2 or epni-slack")
      ->required();
  sub_search->add_option("--dim", search.config.dim, "Truncation");
  sub_search->add_option("--K", search.config.K, "Mean photon number K");
  sub_search->add_option("--eta", search.config.eta, "Transmissivity");
  sub_search->add_option("--restarts", search.config.restarts, "Random restarts");
  sub_search->add_option("--evaluations", search.config.evaluations_per_restart,
                         "Evaluations per restart (0: objective default)");
  sub_search->add_option("--initial-step", search.config.nelder_mead.initial_step,
                         "Initial simplex step");
  sub_search->add_option("--f-tol", search.config.nelder_mead.f_tolerance,
                         "Simplex value spread tolerance");
  sub_search->add_option("--x-tol", search.config.nelder_mead.x_tolerance,
                         "Simplex diameter tolerance");
  sub_search->add_option("--violation-tol", search.violation,
                         "Objective below -tol flags a counterexample candidate");

  StateOptions st;
  auto* sub_state = app.add_subcommand("state", "Inspect and validate a serialized state");
  sub_state->add_option("path", st.path, "State file")->required();

  ReplayOptions rp;
  auto* sub_replay = app.add_subcommand("replay", "Re-run a recorded run from its manifest");
  sub_replay->add_option("manifest", rp.manifest, "manifest.json of the recorded run")
      ->required();

  std::vector<std::string> argv_store = {"epnilab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!sub_state->parsed() && g.out.empty()) {
      throw UsageError("--out is required");
    }
    if (sub_cap->parsed()) return cmd_capacity(g, cap, out);
    if (sub_epni->parsed()) return cmd_campaign("epni", g, epni_cfg, out, err);
    if (sub_moe->parsed()) {
      moe_cfg.experiment = conjecture == 1 ? Experiment::kMoe1 : Experiment::kMoe2;
      return cmd_campaign("moe", g, moe_cfg, out, err);
    }
    if (sub_epi->parsed()) return cmd_epi(g, epi, out);
    if (sub_search->parsed()) return cmd_search(g, search, out, err);
    if (sub_state->parsed()) return cmd_state(g, st, out, err);
    if (sub_replay->parsed()) return run(replay_args(g, rp, app), out, err);
  } catch (const UsageError& e) {
    err << "epnilab: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "epnilab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InfeasibleConstraint& e) {
    err << "epnilab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "epnilab: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace epnilab::cli
