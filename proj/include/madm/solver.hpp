#ifndef MADM_SOLVER_HPP_
#define MADM_SOLVER_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "madm/diagnostics.hpp"
#include "madm/graph.hpp"
#include "madm/problems.hpp"
#include "madm/state.hpp"

namespace madm {

// Moreau-envelope ADMM over the edge-consensus splitting
//
//   min sum_i f_i(x_i)  s.t.  x_i = z_e, x_j = z_e  for every edge e = (i, j),
//
// with the proximal term rho_beta/2 ||Z - beta||^2 added to the augmented
// Lagrangian. One iteration is the bulk-synchronous sequence
// x_update -> z_update -> beta_update -> lambda_update; each phase reads only
// values finished by earlier phases.

// x_i <- Prox_{f_i}(mean_{e ∋ i}(z_e - l^i_e / rho_lambda); 1 / (rho_lambda |N_i|)),
// where l^i_e is the dual of edge e anchored at agent i.
void x_update(MadmState& state, const CommGraph& g, const Problem& problem,
              const MadmParams& params);

// z_e <- (rho_lambda (x_i + x_j) + rho_beta beta_e + l^i_e + l^j_e) / (2 rho_lambda + rho_beta)
void z_update(MadmState& state, const CommGraph& g, const MadmParams& params);

// beta_e <- beta_e - eta (beta_e - z_e)
void beta_update(MadmState& state, const MadmParams& params);

// l^i_e += rho_lambda (x_i - z_e), l^j_e += rho_lambda (x_j - z_e)
void lambda_update(MadmState& state, const CommGraph& g, const MadmParams& params);

struct StepRecord {
  double dx = 0.0;  // ||X^(k+1) - X^(k)||_F, likewise below
  double dz = 0.0;
  double dbeta = 0.0;
  double dlambda = 0.0;  // both dual arrays together
  double psi = 0.0;      // Psi at the new iterate
};

// One full iteration; increments state.k. Throws NumericalError naming the
// iteration if any iterate becomes non-finite (state is left at the failed
// values).
StepRecord step(MadmState& state, const CommGraph& g, const Problem& problem,
                const MadmParams& params);

struct RunOptions {
  // Ground truth for the MSE columns; NaN is recorded when absent.
  std::optional<Vector> x_true;
  // Suppresses the warning when the parameter gate fails.
  bool override_gate = false;
  // When false, wall_time is recorded as 0 so traces are byte-reproducible.
  bool record_wall_time = false;
  // Called once per iteration, in order, from the solver thread.
  std::function<void(const IterationTrace&)> on_iteration;
};

struct RunResult {
  MadmState state;  // last finite state
  std::vector<IterationTrace> trace;
  GateReport gate;
  bool converged = false;
  std::vector<std::string> warnings;
  // Non-empty when the run stopped on a numerical failure.
  std::string failure;
};

// Iterates until max(consensus residual, ||dX||_F) <= tol or max_iters
// iterations. Requires a connected graph and a state shaped for it.
RunResult run(const CommGraph& g, const Problem& problem, const MadmParams& params,
              MadmState init, const RunOptions& options = {});

}  // namespace madm

#endif  // MADM_SOLVER_HPP_
