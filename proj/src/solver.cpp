#include "madm/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace madm {

void x_update(MadmState& s, const CommGraph& g, const Problem& problem, const MadmParams& params) {
  const Eigen::Index n = s.x.cols();
  Vector w(n);
  for (int i = 0; i < g.num_agents(); ++i) {
    auto inc = g.incident_edges(i);
    const int deg = static_cast<int>(inc.size());
    if (deg == 0) {
      throw InvalidArgument("x_update: agent " + std::to_string(i) + " has no neighbors");
    }
    w.setZero();
    for (int e : inc) {
      const Matrix& dual = g.edge(e).i == i ? s.lambda_i : s.lambda_j;
      w += (s.z.row(e) - dual.row(e) / params.rho_lambda).transpose();
    }
    w /= static_cast<double>(deg);
    try {
      s.x.row(i) = problem.prox(i, w, 1.0 / (params.rho_lambda * deg)).transpose();
    } catch (const Error& err) {
      throw NumericalError("x_update: agent " + std::to_string(i) + ": " + err.what());
    }
  }
}

void z_update(MadmState& s, const CommGraph& g, const MadmParams& params) {
  const double denom = 2.0 * params.rho_lambda + params.rho_beta;
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    s.z.row(e) = (params.rho_lambda * (s.x.row(edge.i) + s.x.row(edge.j)) +
                  params.rho_beta * s.beta.row(e) + s.lambda_i.row(e) + s.lambda_j.row(e)) /
                 denom;
  }
}

void beta_update(MadmState& s, const MadmParams& params) {
  s.beta -= params.eta * (s.beta - s.z);
}

void lambda_update(MadmState& s, const CommGraph& g, const MadmParams& params) {
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    s.lambda_i.row(e) += params.rho_lambda * (s.x.row(edge.i) - s.z.row(e));
    s.lambda_j.row(e) += params.rho_lambda * (s.x.row(edge.j) - s.z.row(e));
  }
}

StepRecord step(MadmState& s, const CommGraph& g, const Problem& problem,
                const MadmParams& params) {
  const MadmState prev = s;
  x_update(s, g, problem, params);
  z_update(s, g, params);
  beta_update(s, params);
  lambda_update(s, g, params);
  ++s.k;

  if (!s.all_finite()) {
    throw NumericalError("non-finite iterate at iteration " + std::to_string(s.k));
  }

  StepRecord r;
  r.dx = (s.x - prev.x).norm();
  r.dz = (s.z - prev.z).norm();
  r.dbeta = (s.beta - prev.beta).norm();
  r.dlambda = std::sqrt((s.lambda_i - prev.lambda_i).squaredNorm() +
                        (s.lambda_j - prev.lambda_j).squaredNorm());
  r.psi = eval_psi(s, g, problem, params);
  return r;
}

RunResult run(const CommGraph& g, const Problem& problem, const MadmParams& params,
              MadmState init, const RunOptions& options) {
  params.validate();
  init.check_shape(g);
  if (g.num_agents() < 2 || !is_connected(g)) {
    throw InvalidArgument("MADM requires a connected graph with at least two agents");
  }
  if (init.dimension() != problem.dimension() || g.num_agents() != problem.num_agents()) {
    throw InvalidArgument("state does not match problem dimensions");
  }

  RunResult result;
  result.gate = theorem1_gate(params, g);
  if (!result.gate.overall && !options.override_gate) {
    result.warnings.push_back("parameter gate failed; convergence is not guaranteed\n" +
                              format_gate(result.gate));
  }

  const auto start = std::chrono::steady_clock::now();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  MadmState state = std::move(init);
  for (int it = 0; it < params.max_iters; ++it) {
    MadmState candidate = state;
    StepRecord rec;
    try {
      rec = step(candidate, g, problem, params);
    } catch (const Error& err) {
      result.failure = err.what();
      break;
    }
    const double prev_dbeta = state.prev_beta_change;
    state = std::move(candidate);
    state.prev_beta_change = rec.dbeta;

    IterationTrace t;
    t.k = state.k;
    if (options.x_true) {
      t.mse = mse(state.x, *options.x_true);
      t.mse_raw = mse_raw(state.x, *options.x_true);
    } else {
      t.mse = t.mse_raw = nan;
    }
    t.psi = rec.psi;
    t.aug_lagrangian = eval_aug_lagrangian(state, g, problem, params.rho_lambda);
    t.consensus_residual = consensus_residual(state, g);
    t.dx = rec.dx;
    t.dz = rec.dz;
    t.dbeta = rec.dbeta;
    t.dlambda = rec.dlambda;
    t.lemma2_lhs = rec.dlambda * rec.dlambda;
    t.lemma2_rhs =
        params.rho_beta * params.rho_beta * (rec.dz * rec.dz + prev_dbeta * prev_dbeta);
    t.wall_time =
        options.record_wall_time
            ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
            : 0.0;
    result.trace.push_back(t);
    if (options.on_iteration) options.on_iteration(t);

    if (std::max(t.consensus_residual, t.dx) <= params.tol) {
      result.converged = true;
      break;
    }
  }
  result.state = std::move(state);
  return result;
}

}  // namespace madm
