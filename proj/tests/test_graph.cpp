#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "madm/graph.hpp"
#include "oracles.hpp"

using namespace madm;

TEST_CASE("erdos_renyi with p = 1 on two agents is a single edge") {
  for (std::uint64_t seed : {0ULL, 1ULL, 12345ULL}) {
    CommGraph g = erdos_renyi(2, 1.0, seed);
    REQUIRE(g.num_edges() == 1);
    CHECK(g.edge(0) == Edge{0, 1});
  }
}

TEST_CASE("erdos_renyi with 50 agents is connected") {
  CommGraph g = erdos_renyi(50, default_edge_probability(50), 7);
  CHECK(g.num_agents() == 50);
  CHECK(is_connected(g));
  CHECK(oracle::union_find_connected(g));
}

TEST_CASE("erdos_renyi(4, 0.5) passes an edge-list BFS check") {
  CommGraph g = erdos_renyi(4, 0.5, 2024);
  CHECK(oracle::edge_list_bfs_connected(g));
}

TEST_CASE("erdos_renyi is deterministic for a fixed seed") {
  CommGraph a = erdos_renyi(30, 0.2, 99);
  CommGraph b = erdos_renyi(30, 0.2, 99);
  REQUIRE(a.num_edges() == b.num_edges());
  for (int e = 0; e < a.num_edges(); ++e) CHECK(a.edge(e) == b.edge(e));
}

TEST_CASE("erdos_renyi gives up when connectivity is hopeless") {
  CHECK_THROWS_WITH_AS(erdos_renyi(200, 1e-6, 1), doctest::Contains("could not generate connected graph"),
                       Error);
  CHECK_THROWS_AS(erdos_renyi(1, 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS(erdos_renyi(5, 0.0, 1), InvalidArgument);
}

TEST_CASE("generated graphs are canonical, symmetric and connected over many seeds") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 3 + static_cast<int>(seed % 25);
    CommGraph g = erdos_renyi(n, default_edge_probability(n), seed);
    CHECK(is_connected(g));
    int degree_sum = 0;
    for (int e = 0; e < g.num_edges(); ++e) {
      CHECK(g.edge(e).i < g.edge(e).j);
      if (e > 0) CHECK(g.edge(e - 1) < g.edge(e));
    }
    for (int i = 0; i < n; ++i) {
      degree_sum += g.degree(i);
      auto nb = g.neighbors(i);
      auto inc = g.incident_edges(i);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        const int j = nb[k];
        const auto other = g.neighbors(j);
        CHECK(std::find(other.begin(), other.end(), i) != other.end());
        CHECK(g.edge_index(i, j) == inc[k]);
        CHECK(g.edge(inc[k]) == Edge{std::min(i, j), std::max(i, j)});
      }
    }
    CHECK(degree_sum == 2 * g.num_edges());
  }
}

TEST_CASE("is_connected on small graphs") {
  CHECK(is_connected(CommGraph(3, {{0, 1}, {0, 2}, {1, 2}})));
  CHECK_FALSE(is_connected(CommGraph(3, {{0, 1}})));
  CHECK(is_connected(CommGraph(1, {})));
}

TEST_CASE("is_connected agrees with union-find on random sparse graphs") {
  int disconnected = 0;
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Edge> edges;
    for (int i = 0; i < 20; ++i) {
      for (int j = i + 1; j < 20; ++j) {
        if (coin(rng)) edges.push_back({i, j});
      }
    }
    CommGraph g(20, edges);
    CHECK(is_connected(g) == oracle::union_find_connected(g));
    disconnected += !is_connected(g);
  }
  // Both outcomes were exercised.
  CHECK(disconnected > 0);
  CHECK(disconnected < 200);
}

TEST_CASE("CommGraph normalizes orientation and rejects bad edges") {
  CommGraph g(3, {{2, 0}, {1, 0}});
  CHECK(g.edge(0) == Edge{0, 1});
  CHECK(g.edge(1) == Edge{0, 2});
  CHECK(g.edge_index(2, 1) == -1);
  CHECK_THROWS_AS(CommGraph(3, {{0, 1}, {1, 0}}), InvalidArgument);
  CHECK_THROWS_AS(CommGraph(3, {{1, 1}}), InvalidArgument);
  CHECK_THROWS_AS(CommGraph(3, {{0, 3}}), InvalidArgument);
}

TEST_CASE("metropolis weights") {
  SUBCASE("two-node path") {
    Matrix w = metropolis_weights(CommGraph(2, {{0, 1}}));
    CHECK(w(0, 0) == doctest::Approx(0.5));
    CHECK(w(0, 1) == doctest::Approx(0.5));
    CHECK(w(1, 0) == doctest::Approx(0.5));
    CHECK(w(1, 1) == doctest::Approx(0.5));
  }
  SUBCASE("three-node path") {
    Matrix w = metropolis_weights(CommGraph(3, {{0, 1}, {1, 2}}));
    CHECK(w(0, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(w(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(w(1, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(w(0, 2) == 0.0);
  }
  SUBCASE("random graphs: symmetric, stochastic, nonnegative") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      CommGraph g = erdos_renyi(25, 0.2, seed);
      Matrix w = metropolis_weights(g);
      CHECK((w - w.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK((w.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
      CHECK(w.minCoeff() >= 0.0);
      CHECK(w.maxCoeff() <= 1.0);
    }
  }
}

TEST_CASE("graph text format round trip") {
  CommGraph g = erdos_renyi(12, 0.4, 3);
  std::stringstream buf;
  write_graph(buf, g);
  CommGraph back = read_graph(buf);
  REQUIRE(back.num_edges() == g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) CHECK(back.edge(e) == g.edge(e));

  std::stringstream bad("3 2\n0 1\n2 1\n");
  CHECK_THROWS_WITH_AS(read_graph(bad), doctest::Contains("line 3"), InvalidArgument);
  std::stringstream short_file("3 2\n0 1\n");
  CHECK_THROWS_AS(read_graph(short_file), InvalidArgument);
}
