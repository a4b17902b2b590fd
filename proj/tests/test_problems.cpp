#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "madm/problems.hpp"
#include "oracles.hpp"

using namespace madm;

namespace {

PhaseRetrievalInstance single(Vector a, double b) {
  Matrix m(1, a.size());
  m.row(0) = a.transpose();
  Vector obs(1);
  obs[0] = b;
  return PhaseRetrievalInstance(m, obs, Vector::Zero(a.size()));
}

Vector vec(std::initializer_list<double> v) {
  Vector out(v.size());
  int k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

Vector random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (int k = 0; k < n; ++k) v[k] = normal(rng);
  return v;
}

}  // namespace

TEST_CASE("phase retrieval objective") {
  PhaseRetrievalInstance inst = PhaseRetrievalInstance::generate(8, 4, 11);
  for (int i = 0; i < inst.num_agents(); ++i) {
    CHECK(inst.value(i, inst.ground_truth()) <= 1e-12);
    CHECK(inst.value(i, -inst.ground_truth()) <= 1e-12);
    CHECK(inst.observations()[i] ==
          doctest::Approx(inst.measurements().row(i).dot(inst.ground_truth().transpose())));
  }
  PhaseRetrievalInstance one = single(vec({1, 0}), 1.0);
  CHECK(one.value(0, vec({2, 0})) == 3.0);
  CHECK_THROWS_AS(one.value(0, vec({1, 2, 3})), InvalidArgument);
}

TEST_CASE("phase retrieval subgradient") {
  PhaseRetrievalInstance one = single(vec({1, 0}), 1.0);
  Vector g = one.subgradient(0, vec({2, 0}));
  CHECK(g[0] == 4.0);
  CHECK(g[1] == 0.0);
  // On the zero set the sign(0) = 0 convention gives the zero vector.
  CHECK(one.subgradient(0, vec({1, 5})).norm() == 0.0);
  CHECK(one.subgradient(0, vec({-1, 5})).norm() == 0.0);

  std::mt19937_64 rng(3);
  PhaseRetrievalInstance inst = PhaseRetrievalInstance::generate(5, 6, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const int i = trial % 5;
    Vector s = inst.subgradient(i, random_vector(rng, 6));
    const Vector a = inst.measurements().row(i).transpose();
    // In span{a_i}: the component orthogonal to a_i vanishes.
    CHECK((s - (s.dot(a) / a.squaredNorm()) * a).norm() <= 1e-12 * (1.0 + s.norm()));
  }
}

TEST_CASE("weak-convexity subgradient inequality") {
  std::mt19937_64 rng(8);
  PhaseRetrievalInstance inst = PhaseRetrievalInstance::generate(6, 5, 9);
  for (int trial = 0; trial < 2000; ++trial) {
    const int i = trial % 6;
    const Vector x = random_vector(rng, 5, 2.0);
    const Vector y = random_vector(rng, 5, 2.0);
    const double rho = inst.weak_convexity_bound(i);
    const double lower = inst.value(i, x) + inst.subgradient(i, x).dot(y - x) -
                         0.5 * rho * (y - x).squaredNorm();
    CHECK(inst.value(i, y) >= lower - 1e-9 * (1.0 + std::abs(lower)));
  }
}

TEST_CASE("weak-convexity bound") {
  CHECK(single(vec({1, 0}), 1.0).weak_convexity_bound(0) == 2.0);
  CHECK(single(vec({2, 0}), 1.0).weak_convexity_bound(0) == 8.0);
}

TEST_CASE("f + (rho/2)||x||^2 passes a random midpoint convexity test") {
  std::mt19937_64 rng(21);
  PhaseRetrievalInstance inst = PhaseRetrievalInstance::generate(4, 3, 5);
  for (int i = 0; i < inst.num_agents(); ++i) {
    const double rho = inst.weak_convexity_bound(i);
    auto h = [&](const Vector& x) { return inst.value(i, x) + 0.5 * rho * x.squaredNorm(); };
    for (int trial = 0; trial < 2500; ++trial) {
      const Vector x = random_vector(rng, 3, 3.0);
      const Vector y = random_vector(rng, 3, 3.0);
      const double mid = h(0.5 * (x + y));
      const double avg = 0.5 * (h(x) + h(y));
      CHECK(mid <= avg + 1e-10 * (1.0 + avg));
    }
  }
  // A smaller modulus is not enough.
  PhaseRetrievalInstance one = single(vec({1, 0}), 1.0);
  auto h_small = [&](const Vector& x) { return one.value(0, x) + 0.5 * 1.0 * x.squaredNorm(); };
  CHECK(h_small(vec({0, 0})) > 0.5 * (h_small(vec({-0.5, 0})) + h_small(vec({0.5, 0}))));
}

TEST_CASE("phase retrieval prox: closed-form examples") {
  PhaseRetrievalInstance one = single(vec({1, 0}), 1.0);
  // Tie between the two boundary points breaks toward +b.
  Vector p = one.prox(0, vec({0, 0}), 1.0);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.0);
  // Zero loss at w: the prox returns w.
  Vector w = vec({-1, 3});
  CHECK((one.prox(0, w, 0.7) - w).norm() == 0.0);
  // The tie follows sign(c).
  CHECK(phase_retrieval_prox_scalar(-0.0, 1.0, 1.0, 1.0) == 1.0);
  CHECK(phase_retrieval_prox_objective(1.0, 0.0, 1.0, 1.0, 1.0) == 0.5);
  CHECK_THROWS_AS(single(vec({0, 0}), 1.0).prox(0, w, 1.0), InvalidArgument);
  CHECK_THROWS_AS(one.prox(0, w, 0.0), InvalidArgument);
}

TEST_CASE("phase retrieval prox matches a 1-D brute force oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + trial % 6;
    const Vector a = random_vector(rng, n);
    const double b = random_vector(rng, 1, 2.0)[0];
    const Vector w = random_vector(rng, n, 2.0);
    const double gamma = std::pow(10.0, -3.0 + 4.0 * unif(rng));
    PhaseRetrievalInstance inst = single(a, b);
    const Vector x = inst.prox(0, w, gamma);
    const double s = a.squaredNorm();
    const double c = a.dot(w);
    const double phi = phase_retrieval_prox_objective(a.dot(x), c, b, gamma, s);
    const double best = oracle::phase_prox_phi_oracle(c, b, gamma, s);
    CHECK(phi <= best + 1e-8);
    CHECK(phi >= best - 1e-8);
    // Output lies in w + span{a}.
    const Vector d = x - w;
    CHECK((d - (d.dot(a) / s) * a).norm() <= 1e-12 * (1.0 + d.norm()));
  }
}

TEST_CASE("prox outputs are locally optimal and no worse than w") {
  std::mt19937_64 rng(29);
  PhaseRetrievalInstance inst = PhaseRetrievalInstance::generate(10, 4, 31);
  for (int trial = 0; trial < 500; ++trial) {
    const int i = trial % 10;
    const Vector w = random_vector(rng, 4, 2.0);
    const double gamma = 0.05 + 0.5 * (trial % 7) / 7.0;
    const Vector x = inst.prox(i, w, gamma);
    auto phi = [&](const Vector& y) { return inst.value(i, y) + (y - w).squaredNorm() / (2 * gamma); };
    CHECK(phi(x) <= phi(w) + 1e-12);
    for (int dir = 0; dir < 5; ++dir) {
      Vector d = random_vector(rng, 4);
      d.normalize();
      for (double eps : {1e-3, 1e-5}) {
        CHECK(phi(x) <= phi(x + eps * d) + 1e-12);
        CHECK(phi(x) <= phi(x - eps * d) + 1e-12);
      }
    }
  }
}

TEST_CASE("quadratic prox") {
  Matrix centers(2, 3);
  centers << 1, 2, 3, -1, 0, 4;
  QuadraticConsensusInstance q(centers, 2.0);
  Vector c0 = centers.row(0).transpose();
  CHECK((q.prox(0, c0, 0.3) - c0).norm() <= 1e-15);
  QuadraticConsensusInstance flat(centers, 1e-14);
  Vector w = vec({5, -2, 0.5});
  CHECK((flat.prox(1, w, 1.0) - w).norm() <= 1e-12);

  // Finite-difference stationarity of the prox subproblem.
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector w2 = random_vector(rng, 3);
    const double gamma = 0.1 + 0.1 * trial;
    const Vector x = q.prox(1, w2, gamma);
    auto phi = [&](const Vector& y) { return q.value(1, y) + (y - w2).squaredNorm() / (2 * gamma); };
    CHECK(oracle::fd_gradient(phi, x, 1e-4).norm() <= 1e-8);
  }
  CHECK((q.optimum() - vec({0, 1, 3.5})).norm() <= 1e-15);
}

TEST_CASE("Moreau envelope values") {
  ZeroProblem zero(1, 3);
  CHECK(moreau_envelope(zero, 0, vec({1, -2, 3}), 0.5) == 0.0);

  QuadraticConsensusInstance half_sq(Matrix::Zero(1, 2), 1.0);  // f = ||x||^2 / 2
  const Vector w = vec({3, -4});
  CHECK(moreau_envelope(half_sq, 0, w, 1.0) == doctest::Approx(w.squaredNorm() / 4.0));

  std::mt19937_64 rng(13);
  PhaseRetrievalInstance inst = PhaseRetrievalInstance::generate(5, 3, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int i = trial % 5;
    const Vector w2 = random_vector(rng, 3, 2.0);
    const double gamma = 0.9 / inst.weak_convexity_bound(i);
    CHECK(moreau_envelope(inst, i, w2, gamma) <= inst.value(i, w2) + 1e-12);
  }
  CHECK_THROWS_AS(moreau_envelope(inst, 0, w.head(3).eval() * 0 + Vector::Ones(3),
                                  2.0 / inst.weak_convexity_bound(0)),
                  InvalidArgument);
}

TEST_CASE("Moreau gradient identity against finite differences") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  PhaseRetrievalInstance inst = PhaseRetrievalInstance::generate(6, 4, 12);
  QuadraticConsensusInstance quad = QuadraticConsensusInstance::generate(6, 4, 1.5, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const int i = trial % 6;
    const Vector w = random_vector(rng, 4, 2.0);
    {
      const double gamma = unif(rng) / inst.weak_convexity_bound(i);
      auto env = [&](const Vector& v) { return moreau_envelope(inst, i, v, gamma); };
      const Vector g = moreau_gradient(inst, i, w, gamma);
      const Vector fd = oracle::fd_gradient(env, w, 1e-6);
      CHECK((fd - g).norm() <= 1e-5 * g.norm());
    }
    {
      const double gamma = 4.0 * unif(rng);
      auto env = [&](const Vector& v) { return moreau_envelope(quad, i, v, gamma); };
      const Vector g = moreau_gradient(quad, i, w, gamma);
      CHECK((oracle::fd_gradient(env, w, 1e-6) - g).norm() <= 1e-5 * g.norm());
    }
  }
}

TEST_CASE("zero function: Moreau gradients are identically zero") {
  ZeroProblem zero(1, 4);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector u = random_vector(rng, 4);
    const Vector v = random_vector(rng, 4);
    CHECK((moreau_gradient(zero, 0, u, 0.3) - moreau_gradient(zero, 0, v, 0.3)).norm() == 0.0);
  }
}

TEST_CASE("phase retrieval instance file round trip") {
  PhaseRetrievalInstance inst = PhaseRetrievalInstance::generate(7, 3, 77);
  std::stringstream buf;
  write_phase_retrieval(buf, inst);
  PhaseRetrievalInstance back = read_phase_retrieval(buf);
  CHECK(back.measurements() == inst.measurements());
  CHECK(back.observations() == inst.observations());
  CHECK(back.ground_truth() == inst.ground_truth());

  std::stringstream truncated("3 2\n1 2 3\n1 2 3 4\n");
  CHECK_THROWS_AS(read_phase_retrieval(truncated), InvalidArgument);
  CHECK_THROWS_AS(PhaseRetrievalInstance(Matrix::Ones(2, 3), Vector::Ones(3), Vector::Ones(3)),
                  InvalidArgument);
}
