#ifndef MADM_EXPERIMENTS_HPP_
#define MADM_EXPERIMENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "madm/diagnostics.hpp"
#include "madm/dpsm.hpp"
#include "madm/problems.hpp"
#include "madm/solver.hpp"

namespace madm {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class ProblemKind { kPhaseRetrieval, kQuadratic };
enum class Method { kMadm, kDpsm, kBoth };

Method parse_method(std::string_view name);

// Mirrors the JSON config document key for key; see README for the schema.
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::kPhaseRetrieval;
  int num_agents = 50;
  int dimension = 10;
  std::vector<int> dimensions = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10,
                                 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  std::optional<double> edge_prob;  // default_edge_probability(num_agents) when unset
  int num_trials = 50;
  std::uint64_t seed = 0;
  int threads = 1;  // 0 = hardware concurrency

  MadmParams madm{.rho_lambda = 20.0, .rho_beta = 1.0, .eta = 1.1, .rho_f = 0.0,
                  .max_iters = 500, .tol = 1e-10};
  // Gate modulus; 2 max_i ||a_i||^2 of each instance when unset.
  std::optional<double> madm_rho_f;
  bool override_gate = false;

  DpsmParams dpsm;
  std::vector<double> gamma_grid = {0.90, 0.925, 0.95, 0.96, 0.97, 0.98, 0.99, 0.995, 0.999};
  // Iteration budget for both methods in dimension_sweep.
  int sweep_max_iters = 1000;
  double quadratic_curvature = 1.0;
  bool record_wall_time = false;
  std::string output_dir = "out";

  double resolved_edge_prob() const;
  // Throws ConfigError naming the offending key.
  void validate() const;
};

// Parses a JSON document; unknown keys are rejected. Syntax errors carry the
// line and column.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

// splitmix64 finalizer applied to master + golden_ratio * (index + 1).
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

// Leading eigenvector of (1/L) sum_i b_i^2 a_i a_i^T by power iteration
// from a seeded random start, scaled to sqrt(mean_i b_i^2).
Vector spectral_init(const PhaseRetrievalInstance& inst, std::uint64_t seed,
                     int iterations = 200);

struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  int dimension = 0;
  std::vector<IterationTrace> madm;
  std::vector<IterationTrace> dpsm;
  GateReport gate;
  std::string madm_failure;
  std::string dpsm_failure;
  // Set when the trial could not be set up at all (e.g. no connected graph).
  std::string error;

  bool ok() const { return error.empty(); }
  double madm_final_mse() const;
  double dpsm_final_mse() const;
};

// Everything is derived from trial_seed: graph, instance, spectral start.
TrialResult run_trial(const ExperimentConfig& config, std::uint64_t trial_seed,
                      Method method = Method::kBoth);

// num_trials trials with seeds mix_seed(config.seed, t), run on
// config.threads workers; results are in trial order.
std::vector<TrialResult> run_trials(const ExperimentConfig& config, Method method);

struct GridRow {
  double gamma_decay = 0.0;
  double mse = 0.0;  // mean final DPSM MSE over successful trials
  int trials = 0;
};
std::vector<GridRow> gamma_grid_search(const ExperimentConfig& config);

struct SweepRow {
  int dimension = 0;
  std::string method;
  double mse = 0.0;
  int trials = 0;
};
std::vector<SweepRow> dimension_sweep(const ExperimentConfig& config);

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Command line entry point: run | grid | sweep | check. Returns 0 on
// success, 1 on configuration errors, 2 on runtime failures.
int cli_main(int argc, const char* const* argv);

}  // namespace madm

#endif  // MADM_EXPERIMENTS_HPP_
