#include "madm/problems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <utility>

#include "madm/text_io.hpp"

namespace madm {

double Problem::max_weak_convexity_bound() const {
  double rho = 0.0;
  for (int i = 0; i < num_agents(); ++i) rho = std::max(rho, weak_convexity_bound(i));
  return rho;
}

double Problem::total_value(const Matrix& xs) const {
  double total = 0.0;
  for (int i = 0; i < num_agents(); ++i) total += value(i, xs.row(i).transpose());
  return total;
}

// ---------------------------------------------------------------------------
// Phase retrieval

PhaseRetrievalInstance::PhaseRetrievalInstance(Matrix measurements, Vector observations,
                                               Vector ground_truth)
    : a_(std::move(measurements)), b_(std::move(observations)), x_true_(std::move(ground_truth)) {
  if (a_.rows() != b_.size()) {
    throw InvalidArgument("phase retrieval: " + std::to_string(a_.rows()) +
                          " measurement rows but " + std::to_string(b_.size()) + " observations");
  }
  if (a_.cols() != x_true_.size()) {
    throw InvalidArgument("phase retrieval: measurement dimension " + std::to_string(a_.cols()) +
                          " != ground truth dimension " + std::to_string(x_true_.size()));
  }
  if (a_.rows() < 1 || a_.cols() < 1) {
    throw InvalidArgument("phase retrieval: empty instance");
  }
}

PhaseRetrievalInstance PhaseRetrievalInstance::generate(int num_agents, int dimension,
                                                        std::uint64_t seed) {
  if (num_agents < 1 || dimension < 1) {
    throw InvalidArgument("phase retrieval: need at least one agent and one dimension");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x_true(dimension);
  for (int k = 0; k < dimension; ++k) x_true[k] = normal(rng);
  Matrix a(num_agents, dimension);
  for (int i = 0; i < num_agents; ++i) {
    for (int k = 0; k < dimension; ++k) a(i, k) = normal(rng);
  }
  Vector b = a * x_true;
  return PhaseRetrievalInstance(std::move(a), std::move(b), std::move(x_true));
}

void PhaseRetrievalInstance::check_dimension(const VectorRef& x) const {
  if (x.size() != x_true_.size()) {
    throw InvalidArgument("phase retrieval: vector of size " + std::to_string(x.size()) +
                          ", expected " + std::to_string(x_true_.size()));
  }
}

double PhaseRetrievalInstance::value(int agent, const VectorRef& x) const {
  check_dimension(x);
  const double t = a_.row(agent).dot(x.transpose());
  return std::abs(t * t - b_[agent] * b_[agent]);
}

Vector PhaseRetrievalInstance::subgradient(int agent, const VectorRef& x) const {
  check_dimension(x);
  const double t = a_.row(agent).dot(x.transpose());
  const double r = t * t - b_[agent] * b_[agent];
  const double sgn = (r > 0) - (r < 0);
  return (2.0 * t * sgn) * a_.row(agent).transpose();
}

double phase_retrieval_prox_objective(double t, double c, double b, double gamma, double s) {
  const double d = t - c;
  return std::abs(t * t - b * b) + d * d / (2.0 * gamma * s);
}

double phase_retrieval_prox_scalar(double c, double b, double gamma, double s) {
  const double bb = std::abs(b);
  const double kappa = 2.0 * gamma * s;

  // Order encodes the tie-break: the first candidate wins among equals.
  std::array<double, 4> candidates{};
  int n = 0;
  candidates[n++] = c < 0 ? -bb : bb;
  candidates[n++] = c < 0 ? bb : -bb;
  // Stationary point of the outer piece t^2 >= b^2.
  const double t1 = c / (1.0 + kappa);
  if (t1 * t1 >= bb * bb) candidates[n++] = t1;
  // Inner piece b^2 - t^2 + ...; convex only when kappa < 1.
  if (1.0 - kappa > 0.0) {
    const double t2 = c / (1.0 - kappa);
    if (t2 * t2 <= bb * bb) candidates[n++] = t2;
  }

  double best_t = candidates[0];
  double best_phi = phase_retrieval_prox_objective(best_t, c, b, gamma, s);
  for (int k = 1; k < n; ++k) {
    const double phi = phase_retrieval_prox_objective(candidates[k], c, b, gamma, s);
    if (phi < best_phi) {
      best_phi = phi;
      best_t = candidates[k];
    }
  }
  return best_t;
}

Vector PhaseRetrievalInstance::prox(int agent, const VectorRef& w, double gamma) const {
  check_dimension(w);
  if (!(gamma > 0.0)) throw InvalidArgument("prox: gamma must be positive");
  const auto a = a_.row(agent).transpose();
  const double s = a.squaredNorm();
  if (s == 0.0) {
    throw InvalidArgument("prox: degenerate measurement a_" + std::to_string(agent) + " = 0");
  }
  const double c = a.dot(w);
  const double t = phase_retrieval_prox_scalar(c, b_[agent], gamma, s);
  return w + ((t - c) / s) * a;
}

double PhaseRetrievalInstance::weak_convexity_bound(int agent) const {
  return 2.0 * a_.row(agent).squaredNorm();
}

void write_phase_retrieval(std::ostream& out, const PhaseRetrievalInstance& inst) {
  out << inst.dimension() << ' ' << inst.num_agents() << '\n';
  write_row(out, inst.ground_truth());
  Vector rec(inst.dimension() + 1);
  for (int i = 0; i < inst.num_agents(); ++i) {
    rec.head(inst.dimension()) = inst.measurements().row(i).transpose();
    rec[inst.dimension()] = inst.observations()[i];
    write_row(out, rec);
  }
}

PhaseRetrievalInstance read_phase_retrieval(std::istream& in) {
  TokenReader reader(in, "phase retrieval instance");
  const long long n = reader.next_integer();
  const long long l = reader.next_integer();
  if (n < 1 || l < 1) reader.fail("dimension and agent count must be positive");
  Vector x_true(n);
  for (long long k = 0; k < n; ++k) x_true[k] = reader.next_double();
  Matrix a(l, n);
  Vector b(l);
  for (long long i = 0; i < l; ++i) {
    for (long long k = 0; k < n; ++k) a(i, k) = reader.next_double();
    b[i] = reader.next_double();
  }
  if (!reader.at_end()) reader.fail("trailing data");
  return PhaseRetrievalInstance(std::move(a), std::move(b), std::move(x_true));
}

void save_phase_retrieval(const std::filesystem::path& path, const PhaseRetrievalInstance& inst) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_phase_retrieval(out, inst);
}

PhaseRetrievalInstance load_phase_retrieval(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return read_phase_retrieval(in);
}

// ---------------------------------------------------------------------------
// Quadratic consensus

QuadraticConsensusInstance::QuadraticConsensusInstance(Matrix centers, double curvature)
    : c_(std::move(centers)), curvature_(curvature) {
  if (c_.rows() < 1 || c_.cols() < 1) throw InvalidArgument("quadratic: empty instance");
  if (!(curvature_ > 0.0)) throw InvalidArgument("quadratic: curvature must be positive");
}

QuadraticConsensusInstance QuadraticConsensusInstance::generate(int num_agents, int dimension,
                                                                double curvature,
                                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix c(num_agents, dimension);
  for (int i = 0; i < num_agents; ++i) {
    for (int k = 0; k < dimension; ++k) c(i, k) = normal(rng);
  }
  return QuadraticConsensusInstance(std::move(c), curvature);
}

double QuadraticConsensusInstance::value(int agent, const VectorRef& x) const {
  return 0.5 * curvature_ * (x - c_.row(agent).transpose()).squaredNorm();
}

Vector QuadraticConsensusInstance::subgradient(int agent, const VectorRef& x) const {
  return curvature_ * (x - c_.row(agent).transpose());
}

Vector QuadraticConsensusInstance::prox(int agent, const VectorRef& w, double gamma) const {
  const double gc = gamma * curvature_;
  return (w + gc * c_.row(agent).transpose()) / (1.0 + gc);
}

Vector QuadraticConsensusInstance::optimum() const { return c_.colwise().mean().transpose(); }

// ---------------------------------------------------------------------------

double moreau_envelope(const Problem& problem, int agent, const VectorRef& w, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("moreau_envelope: gamma must be positive");
  if (gamma * problem.weak_convexity_bound(agent) >= 1.0) {
    throw InvalidArgument("moreau_envelope: gamma * rho_f >= 1, prox not unique");
  }
  const Vector p = problem.prox(agent, w, gamma);
  return problem.value(agent, p) + (p - w).squaredNorm() / (2.0 * gamma);
}

Vector moreau_gradient(const Problem& problem, int agent, const VectorRef& w, double gamma) {
  return (w - problem.prox(agent, w, gamma)) / gamma;
}

}  // namespace madm
