#include "madm/dpsm.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace madm {

void DpsmParams::validate() const {
  if (!(mu0 > 0.0)) throw InvalidArgument("mu0 must be positive");
  if (!(gamma_decay > 0.0 && gamma_decay < 1.0)) {
    throw InvalidArgument("gamma_decay must lie in (0, 1)");
  }
  if (max_iters < 1) throw InvalidArgument("max_iters must be positive");
  if (projection_radius && !(*projection_radius > 0.0)) {
    throw InvalidArgument("projection_radius must be positive");
  }
  if (!(tol >= 0.0)) throw InvalidArgument("tol must be nonnegative");
}

double dpsm_step_size(const DpsmParams& params, long k) {
  return params.mu0 * std::pow(params.gamma_decay, static_cast<double>(k));
}

Matrix dpsm_step(const Matrix& x, const Matrix& mixing, const Problem& problem,
                 const DpsmParams& params, long k) {
  const Eigen::Index agents = x.rows();
  if (mixing.rows() != agents || mixing.cols() != agents) {
    throw InvalidArgument("dpsm_step: mixing matrix does not match agent count");
  }
  const double mu = dpsm_step_size(params, k);
  Matrix next(agents, x.cols());
  for (Eigen::Index i = 0; i < agents; ++i) {
    Vector v = Vector::Zero(x.cols());
    for (Eigen::Index j = 0; j < agents; ++j) {
      if (mixing(i, j) != 0.0) v += mixing(i, j) * x.row(j).transpose();
    }
    if (mu != 0.0) v -= mu * problem.subgradient(static_cast<int>(i), x.row(i).transpose());
    if (params.projection_radius) {
      const double norm = v.norm();
      if (norm > *params.projection_radius) v *= *params.projection_radius / norm;
    }
    next.row(i) = v.transpose();
  }
  if (!next.allFinite()) {
    throw NumericalError("dpsm: non-finite iterate at iteration " + std::to_string(k + 1));
  }
  return next;
}

DpsmResult dpsm_run(const CommGraph& g, const Problem& problem, const DpsmParams& params,
                    const Matrix& init, const DpsmOptions& options) {
  params.validate();
  if (init.rows() != g.num_agents() || init.cols() != problem.dimension() ||
      problem.num_agents() != g.num_agents()) {
    throw InvalidArgument("dpsm_run: initial iterate does not match graph/problem");
  }
  const Matrix mixing = metropolis_weights(g);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto start = std::chrono::steady_clock::now();

  DpsmResult result;
  result.x = init;
  for (long k = 0; k < params.max_iters; ++k) {
    Matrix next;
    try {
      next = dpsm_step(result.x, mixing, problem, params, k);
    } catch (const Error& err) {
      result.failure = err.what();
      break;
    }
    IterationTrace t;
    t.k = k + 1;
    t.dx = (next - result.x).norm();
    result.x = std::move(next);
    if (options.x_true) {
      t.mse = mse(result.x, *options.x_true);
      t.mse_raw = mse_raw(result.x, *options.x_true);
    } else {
      t.mse = t.mse_raw = nan;
    }
    t.psi = t.aug_lagrangian = nan;
    t.consensus_residual = disagreement(result.x, g);
    t.dz = t.dbeta = t.dlambda = nan;
    t.lemma2_lhs = t.lemma2_rhs = nan;
    t.wall_time =
        options.record_wall_time
            ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
            : 0.0;
    result.trace.push_back(t);
    if (t.dx <= params.tol) break;
  }
  return result;
}

}  // namespace madm
