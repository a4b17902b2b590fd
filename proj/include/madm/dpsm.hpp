#ifndef MADM_DPSM_HPP_
#define MADM_DPSM_HPP_

#include <optional>
#include <string>
#include <vector>

#include "madm/diagnostics.hpp"
#include "madm/graph.hpp"
#include "madm/problems.hpp"

namespace madm {

// Distributed projected subgradient baseline: combine with neighbors, then
// take a subgradient step with geometrically decaying size,
//
//   x_i <- Proj( sum_j W_ij x_j - mu0 gamma^k g_i(x_i) ),
//
// with g_i evaluated at the agent's own pre-mixing iterate.
struct DpsmParams {
  double mu0 = 0.04;
  double gamma_decay = 0.99;
  int max_iters = 500;
  // Radius of the Euclidean ball iterates are projected onto; none = no projection.
  std::optional<double> projection_radius;
  double tol = 0.0;  // stop when ||X^(k+1) - X^(k)||_F <= tol

  void validate() const;
};

// mu0 * gamma_decay^k.
double dpsm_step_size(const DpsmParams& params, long k);

// One iteration from x (L x N). Throws NumericalError on a non-finite result.
Matrix dpsm_step(const Matrix& x, const Matrix& mixing, const Problem& problem,
                 const DpsmParams& params, long k);

struct DpsmOptions {
  std::optional<Vector> x_true;
  bool record_wall_time = false;
};

struct DpsmResult {
  Matrix x;  // last finite iterate
  std::vector<IterationTrace> trace;
  std::string failure;
};

// Trace rows fill k, mse, mse_raw, dx, wall_time; consensus_residual holds
// the largest disagreement across an edge. The remaining columns are NaN.
DpsmResult dpsm_run(const CommGraph& g, const Problem& problem, const DpsmParams& params,
                    const Matrix& init, const DpsmOptions& options = {});

}  // namespace madm

#endif  // MADM_DPSM_HPP_
