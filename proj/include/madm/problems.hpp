#ifndef MADM_PROBLEMS_HPP_
#define MADM_PROBLEMS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "madm/types.hpp"

namespace madm {

// The set of local objectives f_1, ..., f_L, one per agent.
//
// Weak convexity uses the (rho/2) convention throughout: f is rho-weakly
// convex when f(x) + (rho/2)||x||^2 is convex. For gamma * rho < 1 the prox
// subproblem below is strongly convex and its minimizer is unique.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual int num_agents() const = 0;
  virtual int dimension() const = 0;

  virtual double value(int agent, const VectorRef& x) const = 0;
  // One element of the (Clarke) subdifferential of f_agent at x.
  virtual Vector subgradient(int agent, const VectorRef& x) const = 0;
  // A global minimizer of f_agent(x) + ||x - w||^2 / (2 gamma).
  virtual Vector prox(int agent, const VectorRef& w, double gamma) const = 0;
  virtual double weak_convexity_bound(int agent) const = 0;

  double max_weak_convexity_bound() const;
  // Sum of f_i(x_i) over agents, rows of xs.
  double total_value(const Matrix& xs) const;
};

// f_i(x) = | <a_i, x>^2 - b_i^2 |, one noiseless measurement per agent.
class PhaseRetrievalInstance final : public Problem {
 public:
  // Rows of measurements are the a_i. Throws InvalidArgument on shape mismatch.
  PhaseRetrievalInstance(Matrix measurements, Vector observations, Vector ground_truth);

  // a_i and x_true i.i.d. N(0, 1), b_i = <a_i, x_true>.
  static PhaseRetrievalInstance generate(int num_agents, int dimension, std::uint64_t seed);

  int num_agents() const override { return static_cast<int>(b_.size()); }
  int dimension() const override { return static_cast<int>(x_true_.size()); }

  double value(int agent, const VectorRef& x) const override;
  Vector subgradient(int agent, const VectorRef& x) const override;
  Vector prox(int agent, const VectorRef& w, double gamma) const override;
  // 2 ||a_i||^2.
  double weak_convexity_bound(int agent) const override;

  const Matrix& measurements() const { return a_; }
  const Vector& observations() const { return b_; }
  const Vector& ground_truth() const { return x_true_; }

 private:
  void check_dimension(const VectorRef& x) const;

  Matrix a_;
  Vector b_;
  Vector x_true_;
};

// Closed-form minimizer over t of
//   phi(t) = |t^2 - b^2| + (t - c)^2 / (2 gamma s),
// the one-dimensional reduction of the phase-retrieval prox along a
// (s = ||a||^2, c = <a, w>). Ties go to the boundary point with the sign of c,
// then to +|b|.
double phase_retrieval_prox_scalar(double c, double b, double gamma, double s);
double phase_retrieval_prox_objective(double t, double c, double b, double gamma, double s);

// f_i(x) = (curvature / 2) ||x - c_i||^2. The global minimizer of the sum is
// the mean of the centers.
class QuadraticConsensusInstance final : public Problem {
 public:
  QuadraticConsensusInstance(Matrix centers, double curvature);

  // Centers i.i.d. N(0, 1).
  static QuadraticConsensusInstance generate(int num_agents, int dimension, double curvature,
                                             std::uint64_t seed);

  int num_agents() const override { return static_cast<int>(c_.rows()); }
  int dimension() const override { return static_cast<int>(c_.cols()); }

  double value(int agent, const VectorRef& x) const override;
  Vector subgradient(int agent, const VectorRef& x) const override;
  // (w + gamma * curvature * c_i) / (1 + gamma * curvature).
  Vector prox(int agent, const VectorRef& w, double gamma) const override;
  double weak_convexity_bound(int) const override { return 0.0; }

  const Matrix& centers() const { return c_; }
  double curvature() const { return curvature_; }
  Vector optimum() const;

 private:
  Matrix c_;
  double curvature_;
};

// f_i == 0 for every agent.
class ZeroProblem final : public Problem {
 public:
  ZeroProblem(int num_agents, int dimension) : num_agents_(num_agents), dimension_(dimension) {}

  int num_agents() const override { return num_agents_; }
  int dimension() const override { return dimension_; }
  double value(int, const VectorRef&) const override { return 0.0; }
  Vector subgradient(int, const VectorRef& x) const override { return Vector::Zero(x.size()); }
  Vector prox(int, const VectorRef& w, double) const override { return w; }
  double weak_convexity_bound(int) const override { return 0.0; }

 private:
  int num_agents_;
  int dimension_;
};

// M(w; gamma) = f(p) + ||p - w||^2 / (2 gamma) with p = prox(w, gamma).
// Requires gamma * weak_convexity_bound < 1.
double moreau_envelope(const Problem& problem, int agent, const VectorRef& w, double gamma);
// (w - prox(w, gamma)) / gamma.
Vector moreau_gradient(const Problem& problem, int agent, const VectorRef& w, double gamma);

// Text format: "N L", the ground truth on one line, then one line per agent
// holding a_i followed by b_i. Values are written in shortest round-trip form.
void write_phase_retrieval(std::ostream& out, const PhaseRetrievalInstance& inst);
PhaseRetrievalInstance read_phase_retrieval(std::istream& in);
void save_phase_retrieval(const std::filesystem::path& path, const PhaseRetrievalInstance& inst);
PhaseRetrievalInstance load_phase_retrieval(const std::filesystem::path& path);

}  // namespace madm

#endif  // MADM_PROBLEMS_HPP_
