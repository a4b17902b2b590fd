#ifndef MADM_GRAPH_HPP_
#define MADM_GRAPH_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "madm/types.hpp"

namespace madm {

// Undirected edge in canonical orientation (i < j).
struct Edge {
  int i;
  int j;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Static undirected communication topology.
//
// Edges are stored once, as (min, max), sorted lexicographically. The edge
// index of (i, j) is its position in that list; every per-edge array in the
// solver uses the same order. Connectivity is not enforced here so that
// disconnected graphs can be represented and tested; solvers check it.
class CommGraph {
 public:
  // Accepts edges in either orientation. Throws InvalidArgument on self
  // loops, out-of-range endpoints or duplicates.
  CommGraph(int num_agents, std::vector<Edge> edges);

  int num_agents() const { return num_agents_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }

  // Neighbors of agent i in ascending order.
  std::span<const int> neighbors(int i) const { return neighbors_[i]; }
  // Edge index for each entry of neighbors(i), same order.
  std::span<const int> incident_edges(int i) const { return incident_[i]; }
  int degree(int i) const { return static_cast<int>(neighbors_[i].size()); }
  int min_degree() const;
  int max_degree() const;

  // Index of edge {i, j}, or -1 if absent.
  int edge_index(int i, int j) const;

 private:
  int num_agents_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<int>> incident_;
};

// True iff every agent is reachable from agent 0.
bool is_connected(const CommGraph& g);

// min(1, 2 ln(L) / L), comfortably above the connectivity threshold.
double default_edge_probability(int num_agents);

inline constexpr int kMaxErdosRenyiAttempts = 1000;

// G(n, p) conditioned on connectivity by rejection: whole graphs are
// resampled until connected. Throws Error after kMaxErdosRenyiAttempts.
CommGraph erdos_renyi(int num_agents, double edge_prob, std::uint64_t seed);

// W_ij = 1 / (1 + max(deg i, deg j)) on edges, W_ii = 1 - sum_j W_ij.
Matrix metropolis_weights(const CommGraph& g);

// Text format: "L E" then E lines "i j" (0-based, i < j).
CommGraph read_graph(std::istream& in);
void write_graph(std::ostream& out, const CommGraph& g);
CommGraph load_graph(const std::filesystem::path& path);
void save_graph(const std::filesystem::path& path, const CommGraph& g);

}  // namespace madm

#endif  // MADM_GRAPH_HPP_
