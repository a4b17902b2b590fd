#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "madm/experiments.hpp"
#include "madm/text_io.hpp"

namespace madm {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

const char* method_name(Method m) { return m == Method::kMadm ? "madm" : "dpsm"; }

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

// Gate evaluated on the trial-0 graph and instance of the configuration.
std::string gate_text(const ExperimentConfig& config) {
  const std::uint64_t seed = mix_seed(config.seed, 0);
  CommGraph g = erdos_renyi(config.num_agents, config.resolved_edge_prob(), mix_seed(seed, 0));
  MadmParams params = config.madm;
  if (config.madm_rho_f) {
    params.rho_f = *config.madm_rho_f;
  } else if (config.problem == ProblemKind::kPhaseRetrieval) {
    params.rho_f = PhaseRetrievalInstance::generate(config.num_agents, config.dimension,
                                                    mix_seed(seed, 1))
                       .max_weak_convexity_bound();
  } else {
    params.rho_f = 0.0;
  }
  std::string text = "rho_lambda " + format_double(params.rho_lambda) + "\nrho_beta " +
                     format_double(params.rho_beta) + "\neta " + format_double(params.eta) +
                     "\nrho_f " + format_double(params.rho_f) + "\nmin_degree " +
                     std::to_string(g.min_degree()) + "\ngate_convention " +
                     (params.gate_convention == WeakConvexityConvention::kFullRho ? "full" : "half") +
                     "\n";
  return text + format_gate(theorem1_gate(params, g));
}

int cmd_check(const ExperimentConfig& config) {
  const std::string text = gate_text(config);
  std::cout << text;
  return kExitOk;
}

int cmd_run(const ExperimentConfig& config, Method method) {
  fs::create_directories(config.output_dir);
  const fs::path dir(config.output_dir);
  open_output(dir / "gate.txt") << gate_text(config);

  std::vector<TrialResult> trials = run_trials(config, method);
  int good = 0;
  for (const TrialResult& t : trials) {
    if (!t.ok()) {
      std::cerr << "warning: trial " << t.trial << " failed: " << t.error << '\n';
      continue;
    }
    ++good;
    for (Method m : {Method::kMadm, Method::kDpsm}) {
      if (method != Method::kBoth && method != m) continue;
      const auto& trace = m == Method::kMadm ? t.madm : t.dpsm;
      const auto& failure = m == Method::kMadm ? t.madm_failure : t.dpsm_failure;
      if (!failure.empty()) {
        std::cerr << "warning: trial " << t.trial << " " << method_name(m) << ": " << failure
                  << '\n';
      }
      auto out = open_output(dir / ("trace_" + std::string(method_name(m)) + "_" +
                                    std::to_string(t.trial) + ".csv"));
      write_trace_csv(out, trace);
    }
  }
  if (good == 0) {
    std::cerr << "error: every trial failed\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_grid(const ExperimentConfig& config) {
  fs::create_directories(config.output_dir);
  std::vector<GridRow> rows = gamma_grid_search(config);
  for (const GridRow& r : rows) {
    if (r.trials < config.num_trials) {
      std::cerr << "warning: gamma " << r.gamma_decay << ": " << config.num_trials - r.trials
                << " trial(s) failed and were excluded\n";
    }
  }
  auto out = open_output(fs::path(config.output_dir) / "summary_grid.csv");
  write_grid_csv(out, rows);
  write_grid_csv(std::cout, rows);
  return kExitOk;
}

int cmd_sweep(const ExperimentConfig& config) {
  fs::create_directories(config.output_dir);
  std::vector<SweepRow> rows = dimension_sweep(config);
  for (const SweepRow& r : rows) {
    if (r.trials < config.num_trials) {
      std::cerr << "warning: N=" << r.dimension << " " << r.method << ": "
                << config.num_trials - r.trials << " trial(s) failed and were excluded\n";
    }
  }
  auto out = open_output(fs::path(config.output_dir) / "summary_sweep.csv");
  write_sweep_csv(out, rows);
  write_sweep_csv(std::cout, rows);
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Moreau-envelope ADMM experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::string method_str = "both";
  app.add_option("--config", config_path, "JSON experiment config (defaults when omitted)");
  app.add_option("--seed", seed, "master seed, overrides the config");
  app.add_option("--out", out_dir, "output directory, overrides the config");
  app.add_option("--method", method_str, "madm, dpsm or both")
      ->check(CLI::IsMember({"madm", "dpsm", "both"}));

  auto* run_cmd = app.add_subcommand("run", "run trials and write per-iteration traces");
  auto* grid_cmd = app.add_subcommand("grid", "DPSM decay-rate grid search");
  auto* sweep_cmd = app.add_subcommand("sweep", "dimension sweep, both methods");
  auto* check_cmd = app.add_subcommand("check", "evaluate the convergence parameter gate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  ExperimentConfig config;
  try {
    if (config_path) config = load_config(*config_path);
    if (seed) config.seed = *seed;
    if (out_dir) config.output_dir = *out_dir;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const Method method = parse_method(method_str);

  try {
    if (check_cmd->parsed()) return cmd_check(config);
    if (run_cmd->parsed()) return cmd_run(config, method);
    if (grid_cmd->parsed()) return cmd_grid(config);
    if (sweep_cmd->parsed()) return cmd_sweep(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace madm
