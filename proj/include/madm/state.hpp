#ifndef MADM_STATE_HPP_
#define MADM_STATE_HPP_

#include <filesystem>
#include <iosfwd>
#include <limits>

#include "madm/graph.hpp"
#include "madm/types.hpp"

namespace madm {

// Which definition of rho-weak convexity the convergence gate evaluates its
// prox condition in. rho_f itself is always a (rho/2) modulus.
enum class WeakConvexityConvention {
  kHalfRho,  // f + (rho/2)||x||^2 convex; compares rho_f as given
  kFullRho,  // f + rho||x||^2 convex; the same function's modulus is rho_f / 2
};

struct MadmParams {
  double rho_lambda = 20.0;  // penalty on x_i = z_e
  double rho_beta = 1.0;     // proximal weight on ||Z - beta||^2
  double eta = 1.1;          // beta relaxation, in (0, 2)
  double rho_f = 0.0;        // weak-convexity modulus, only read by the parameter gate
  WeakConvexityConvention gate_convention = WeakConvexityConvention::kFullRho;
  int max_iters = 5000;
  double tol = 1e-10;

  // Throws InvalidArgument naming the offending field.
  void validate() const;
};

// All MADM iterates. Edge arrays follow CommGraph::edges() order; lambda_i is
// the dual anchored at the lower-indexed endpoint of each edge, lambda_j at
// the higher one.
struct MadmState {
  Matrix x;         // L x N
  Matrix z;         // E x N
  Matrix beta;      // E x N
  Matrix lambda_i;  // E x N
  Matrix lambda_j;  // E x N
  long k = 0;
  // ||beta^(k) - beta^(k-1)||_F, carried so a resumed run reproduces the
  // dual-change bound. NaN before the first step.
  double prev_beta_change = std::numeric_limits<double>::quiet_NaN();

  // z_e = z0 on every edge, x_i = mean of incident z_e, beta = z, lambda = 0.
  static MadmState from_edge_init(const CommGraph& g, const Matrix& z0);
  // Same, with one vector replicated on every edge.
  static MadmState from_common_init(const CommGraph& g, const VectorRef& v);

  int dimension() const { return static_cast<int>(x.cols()); }
  bool all_finite() const;
  // Throws InvalidArgument if array shapes do not match g.
  void check_shape(const CommGraph& g) const;
};

// Decimal text, every value in shortest round-trip form; restoring a
// checkpoint and continuing is bit-identical to an uninterrupted run.
void write_checkpoint(std::ostream& out, const MadmState& state);
MadmState read_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const MadmState& state);
MadmState load_checkpoint(const std::filesystem::path& path);

}  // namespace madm

#endif  // MADM_STATE_HPP_
