#include "madm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "madm/text_io.hpp"

namespace madm {

using nlohmann::json;

Method parse_method(std::string_view name) {
  if (name == "madm") return Method::kMadm;
  if (name == "dpsm") return Method::kDpsm;
  if (name == "both") return Method::kBoth;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected madm, dpsm or both)");
}

double ExperimentConfig::resolved_edge_prob() const {
  return edge_prob.value_or(default_edge_probability(num_agents));
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (num_agents < 2) fail("num_agents must be at least 2");
  if (dimension < 1) fail("dimension must be positive");
  if (dimensions.empty()) fail("dimensions must be non-empty");
  for (int n : dimensions) {
    if (n < 1) fail("dimensions entries must be positive");
  }
  if (edge_prob && !(*edge_prob > 0.0 && *edge_prob <= 1.0)) fail("edge_prob must lie in (0, 1]");
  if (num_trials < 1) fail("num_trials must be at least 1");
  if (threads < 0) fail("threads must be nonnegative");
  if (gamma_grid.empty()) fail("gamma_grid must be non-empty");
  if (sweep_max_iters < 1) fail("sweep_max_iters must be positive");
  if (!(quadratic_curvature > 0.0)) fail("quadratic_curvature must be positive");
  if (madm_rho_f && !(*madm_rho_f >= 0.0)) fail("madm.rho_f must be nonnegative");
  try {
    madm.validate();
  } catch (const InvalidArgument& e) {
    fail(std::string("madm.") + e.what());
  }
  try {
    dpsm.validate();
    for (double g : gamma_grid) {
      DpsmParams p = dpsm;
      p.gamma_decay = g;
      p.validate();
    }
  } catch (const InvalidArgument& e) {
    fail(std::string("dpsm.") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw ConfigError("unknown key '" + where + it.key() + "'");
    }
  }
}

[[noreturn]] void type_fail(const std::string& key, const char* expected) {
  throw ConfigError("key '" + key + "' must be " + expected);
}

void read_double(const json& obj, const char* key, const std::string& where, double& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) type_fail(where + key, "a number");
  out = v.get<double>();
}

void read_opt_double(const json& obj, const char* key, const std::string& where,
                     std::optional<double>& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (v.is_null()) {
    out.reset();
    return;
  }
  if (!v.is_number()) type_fail(where + key, "a number or null");
  out = v.get<double>();
}

void read_int(const json& obj, const char* key, const std::string& where, int& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) type_fail(where + key, "an integer");
  out = v.get<int>();
}

void read_bool(const json& obj, const char* key, const std::string& where, bool& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_boolean()) type_fail(where + key, "a boolean");
  out = v.get<bool>();
}

void read_string(const json& obj, const char* key, const std::string& where, std::string& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_string()) type_fail(where + key, "a string");
  out = v.get<std::string>();
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"problem", "num_agents", "dimension", "dimensions", "edge_prob", "num_trials",
                  "seed", "threads", "madm", "dpsm", "gamma_grid", "sweep_max_iters",
                  "quadratic_curvature", "record_wall_time", "output_dir"},
                 "");

  ExperimentConfig c;
  if (doc.contains("problem")) {
    std::string p;
    read_string(doc, "problem", "", p);
    if (p == "phase_retrieval") {
      c.problem = ProblemKind::kPhaseRetrieval;
    } else if (p == "quadratic") {
      c.problem = ProblemKind::kQuadratic;
    } else {
      throw ConfigError("key 'problem' must be \"phase_retrieval\" or \"quadratic\"");
    }
  }
  read_int(doc, "num_agents", "", c.num_agents);
  read_int(doc, "dimension", "", c.dimension);
  if (doc.contains("dimensions")) {
    const json& v = doc.at("dimensions");
    if (!v.is_array()) type_fail("dimensions", "an array of integers");
    c.dimensions.clear();
    for (const json& n : v) {
      if (!n.is_number_integer()) type_fail("dimensions", "an array of integers");
      c.dimensions.push_back(n.get<int>());
    }
  }
  read_opt_double(doc, "edge_prob", "", c.edge_prob);
  read_int(doc, "num_trials", "", c.num_trials);
  if (doc.contains("seed")) {
    const json& v = doc.at("seed");
    if (!v.is_number_unsigned()) type_fail("seed", "a nonnegative integer");
    c.seed = v.get<std::uint64_t>();
  }
  read_int(doc, "threads", "", c.threads);

  if (doc.contains("madm")) {
    const json& m = doc.at("madm");
    if (!m.is_object()) type_fail("madm", "an object");
    reject_unknown(m, {"rho_lambda", "rho_beta", "eta", "rho_f", "gate_convention", "max_iters",
                       "tol", "override_gate"},
                   "madm.");
    read_double(m, "rho_lambda", "madm.", c.madm.rho_lambda);
    read_double(m, "rho_beta", "madm.", c.madm.rho_beta);
    read_double(m, "eta", "madm.", c.madm.eta);
    read_opt_double(m, "rho_f", "madm.", c.madm_rho_f);
    if (m.contains("gate_convention")) {
      std::string conv;
      read_string(m, "gate_convention", "madm.", conv);
      if (conv == "full") {
        c.madm.gate_convention = WeakConvexityConvention::kFullRho;
      } else if (conv == "half") {
        c.madm.gate_convention = WeakConvexityConvention::kHalfRho;
      } else {
        throw ConfigError("key 'madm.gate_convention' must be \"full\" or \"half\"");
      }
    }
    read_int(m, "max_iters", "madm.", c.madm.max_iters);
    read_double(m, "tol", "madm.", c.madm.tol);
    read_bool(m, "override_gate", "madm.", c.override_gate);
  }
  if (doc.contains("dpsm")) {
    const json& d = doc.at("dpsm");
    if (!d.is_object()) type_fail("dpsm", "an object");
    reject_unknown(d, {"mu0", "gamma_decay", "max_iters", "projection_radius", "tol"}, "dpsm.");
    read_double(d, "mu0", "dpsm.", c.dpsm.mu0);
    read_double(d, "gamma_decay", "dpsm.", c.dpsm.gamma_decay);
    read_int(d, "max_iters", "dpsm.", c.dpsm.max_iters);
    read_opt_double(d, "projection_radius", "dpsm.", c.dpsm.projection_radius);
    read_double(d, "tol", "dpsm.", c.dpsm.tol);
  }
  if (doc.contains("gamma_grid")) {
    const json& v = doc.at("gamma_grid");
    if (!v.is_array()) type_fail("gamma_grid", "an array of numbers");
    c.gamma_grid.clear();
    for (const json& g : v) {
      if (!g.is_number()) type_fail("gamma_grid", "an array of numbers");
      c.gamma_grid.push_back(g.get<double>());
    }
  }
  read_int(doc, "sweep_max_iters", "", c.sweep_max_iters);
  read_double(doc, "quadratic_curvature", "", c.quadratic_curvature);
  read_bool(doc, "record_wall_time", "", c.record_wall_time);
  read_string(doc, "output_dir", "", c.output_dir);

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string config_to_json(const ExperimentConfig& c) {
  auto opt = [](const std::optional<double>& v) -> json { return v ? json(*v) : json(nullptr); };
  json doc = {
      {"problem", c.problem == ProblemKind::kPhaseRetrieval ? "phase_retrieval" : "quadratic"},
      {"num_agents", c.num_agents},
      {"dimension", c.dimension},
      {"dimensions", c.dimensions},
      {"edge_prob", opt(c.edge_prob)},
      {"num_trials", c.num_trials},
      {"seed", c.seed},
      {"threads", c.threads},
      {"madm",
       {{"rho_lambda", c.madm.rho_lambda},
        {"rho_beta", c.madm.rho_beta},
        {"eta", c.madm.eta},
        {"rho_f", opt(c.madm_rho_f)},
        {"gate_convention",
         c.madm.gate_convention == WeakConvexityConvention::kFullRho ? "full" : "half"},
        {"max_iters", c.madm.max_iters},
        {"tol", c.madm.tol},
        {"override_gate", c.override_gate}}},
      {"dpsm",
       {{"mu0", c.dpsm.mu0},
        {"gamma_decay", c.dpsm.gamma_decay},
        {"max_iters", c.dpsm.max_iters},
        {"projection_radius", opt(c.dpsm.projection_radius)},
        {"tol", c.dpsm.tol}}},
      {"gamma_grid", c.gamma_grid},
      {"sweep_max_iters", c.sweep_max_iters},
      {"quadratic_curvature", c.quadratic_curvature},
      {"record_wall_time", c.record_wall_time},
      {"output_dir", c.output_dir},
  };
  return doc.dump(2);
}

// ---------------------------------------------------------------------------

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector spectral_init(const PhaseRetrievalInstance& inst, std::uint64_t seed, int iterations) {
  const Matrix& a = inst.measurements();
  const Vector& b = inst.observations();
  const double mean_b2 = b.squaredNorm() / static_cast<double>(b.size());
  if (mean_b2 == 0.0) throw InvalidArgument("spectral_init: all observations are zero");

  const int n = inst.dimension();
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < inst.num_agents(); ++i) {
    const Vector ai = a.row(i).transpose();
    y.noalias() += (b[i] * b[i]) * ai * ai.transpose();
  }
  y /= static_cast<double>(inst.num_agents());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (int k = 0; k < n; ++k) v[k] = normal(rng);
  v.normalize();
  for (int it = 0; it < iterations; ++it) {
    Vector next = y * v;
    const double norm = next.norm();
    if (norm == 0.0) throw NumericalError("spectral_init: power iteration collapsed to zero");
    v = next / norm;
  }
  return std::sqrt(mean_b2) * v;
}

// ---------------------------------------------------------------------------
// Trials

namespace {

struct TrialSetup {
  CommGraph graph;
  std::unique_ptr<Problem> problem;
  Vector start;
  Vector truth;
};

TrialSetup make_setup(const ExperimentConfig& config, std::uint64_t trial_seed) {
  CommGraph g = erdos_renyi(config.num_agents, config.resolved_edge_prob(), mix_seed(trial_seed, 0));
  if (config.problem == ProblemKind::kPhaseRetrieval) {
    auto inst = std::make_unique<PhaseRetrievalInstance>(PhaseRetrievalInstance::generate(
        config.num_agents, config.dimension, mix_seed(trial_seed, 1)));
    Vector start = spectral_init(*inst, mix_seed(trial_seed, 2));
    Vector truth = inst->ground_truth();
    return {std::move(g), std::move(inst), std::move(start), std::move(truth)};
  }
  auto inst = std::make_unique<QuadraticConsensusInstance>(QuadraticConsensusInstance::generate(
      config.num_agents, config.dimension, config.quadratic_curvature, mix_seed(trial_seed, 1)));
  Vector truth = inst->optimum();
  return {std::move(g), std::move(inst), Vector::Zero(config.dimension), std::move(truth)};
}

double final_mse(const std::vector<IterationTrace>& trace) {
  return trace.empty() ? std::numeric_limits<double>::quiet_NaN() : trace.back().mse;
}

template <class Fn>
void parallel_for(int count, int threads, Fn fn) {
  if (threads == 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  }
}

// NaN marks an excluded trial; an infinite MSE (diverged run) is kept.
double mean_of_included(const std::vector<double>& values, int& used) {
  double sum = 0.0;
  used = 0;
  for (double v : values) {
    if (!std::isnan(v)) {
      sum += v;
      ++used;
    }
  }
  return used ? sum / used : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double TrialResult::madm_final_mse() const { return final_mse(madm); }
double TrialResult::dpsm_final_mse() const { return final_mse(dpsm); }

TrialResult run_trial(const ExperimentConfig& config, std::uint64_t trial_seed, Method method) {
  TrialResult r;
  r.seed = trial_seed;
  r.dimension = config.dimension;
  try {
    TrialSetup setup = make_setup(config, trial_seed);
    if (method != Method::kDpsm) {
      MadmParams params = config.madm;
      params.rho_f = config.madm_rho_f.value_or(setup.problem->max_weak_convexity_bound());
      RunOptions opts;
      opts.x_true = setup.truth;
      opts.override_gate = config.override_gate;
      opts.record_wall_time = config.record_wall_time;
      RunResult res = run(setup.graph, *setup.problem, params,
                          MadmState::from_common_init(setup.graph, setup.start), opts);
      r.madm = std::move(res.trace);
      r.gate = res.gate;
      r.madm_failure = std::move(res.failure);
    }
    if (method != Method::kMadm) {
      DpsmOptions opts;
      opts.x_true = setup.truth;
      opts.record_wall_time = config.record_wall_time;
      const Matrix init = setup.start.transpose().replicate(config.num_agents, 1);
      DpsmResult res = dpsm_run(setup.graph, *setup.problem, config.dpsm, init, opts);
      r.dpsm = std::move(res.trace);
      r.dpsm_failure = std::move(res.failure);
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

std::vector<TrialResult> run_trials(const ExperimentConfig& config, Method method) {
  std::vector<TrialResult> results(config.num_trials);
  parallel_for(config.num_trials, config.threads, [&](int t) {
    results[t] = run_trial(config, mix_seed(config.seed, static_cast<std::uint64_t>(t)), method);
    results[t].trial = t;
  });
  return results;
}

std::vector<GridRow> gamma_grid_search(const ExperimentConfig& config) {
  const int grid = static_cast<int>(config.gamma_grid.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  // finals[t][g]: final MSE of trial t at grid point g.
  std::vector<std::vector<double>> finals(config.num_trials, std::vector<double>(grid, nan));
  parallel_for(config.num_trials, config.threads, [&](int t) {
    try {
      TrialSetup setup = make_setup(config, mix_seed(config.seed, static_cast<std::uint64_t>(t)));
      const Matrix init = setup.start.transpose().replicate(config.num_agents, 1);
      DpsmOptions opts;
      opts.x_true = setup.truth;
      for (int g = 0; g < grid; ++g) {
        DpsmParams params = config.dpsm;
        params.gamma_decay = config.gamma_grid[g];
        finals[t][g] = final_mse(dpsm_run(setup.graph, *setup.problem, params, init, opts).trace);
      }
    } catch (const std::exception&) {
      // Trial excluded from every grid point; reported through GridRow::trials.
    }
  });
  std::vector<GridRow> rows;
  for (int g = 0; g < grid; ++g) {
    std::vector<double> column;
    for (int t = 0; t < config.num_trials; ++t) column.push_back(finals[t][g]);
    GridRow row;
    row.gamma_decay = config.gamma_grid[g];
    row.mse = mean_of_included(column, row.trials);
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> dimension_sweep(const ExperimentConfig& config) {
  std::vector<SweepRow> rows;
  for (int n : config.dimensions) {
    ExperimentConfig c = config;
    c.dimension = n;
    c.madm.max_iters = config.sweep_max_iters;
    c.dpsm.max_iters = config.sweep_max_iters;
    std::vector<TrialResult> trials = run_trials(c, Method::kBoth);
    std::vector<double> madm_final;
    std::vector<double> dpsm_final;
    for (const TrialResult& t : trials) {
      if (!t.ok()) continue;
      madm_final.push_back(t.madm_final_mse());
      dpsm_final.push_back(t.dpsm_final_mse());
    }
    SweepRow m{n, "madm", 0.0, 0};
    m.mse = mean_of_included(madm_final, m.trials);
    SweepRow d{n, "dpsm", 0.0, 0};
    d.mse = mean_of_included(dpsm_final, d.trials);
    rows.push_back(m);
    rows.push_back(d);
  }
  return rows;
}

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows) {
  out << "gamma,mse\n";
  for (const GridRow& r : rows) out << format_double(r.gamma_decay) << ',' << format_double(r.mse) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "N,method,mse\n";
  for (const SweepRow& r : rows) out << r.dimension << ',' << r.method << ',' << format_double(r.mse) << '\n';
}

}  // namespace madm
