#include "madm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <utility>

namespace madm {

CommGraph::CommGraph(int num_agents, std::vector<Edge> edges)
    : num_agents_(num_agents), edges_(std::move(edges)) {
  if (num_agents_ < 1) {
    throw InvalidArgument("graph must have at least one agent");
  }
  for (Edge& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= num_agents_) {
      throw InvalidArgument("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                            ") out of range for " + std::to_string(num_agents_) + " agents");
    }
    if (e.i == e.j) {
      throw InvalidArgument("self loop at agent " + std::to_string(e.i));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw InvalidArgument("duplicate edge (" + std::to_string(dup->i) + "," +
                          std::to_string(dup->j) + ")");
  }

  std::vector<std::vector<std::pair<int, int>>> adj(num_agents_);
  for (int e = 0; e < num_edges(); ++e) {
    adj[edges_[e].i].emplace_back(edges_[e].j, e);
    adj[edges_[e].j].emplace_back(edges_[e].i, e);
  }
  neighbors_.resize(num_agents_);
  incident_.resize(num_agents_);
  for (int i = 0; i < num_agents_; ++i) {
    std::sort(adj[i].begin(), adj[i].end());
    for (auto [nbr, e] : adj[i]) {
      neighbors_[i].push_back(nbr);
      incident_[i].push_back(e);
    }
  }
}

int CommGraph::min_degree() const {
  int d = degree(0);
  for (int i = 1; i < num_agents_; ++i) d = std::min(d, degree(i));
  return d;
}

int CommGraph::max_degree() const {
  int d = degree(0);
  for (int i = 1; i < num_agents_; ++i) d = std::max(d, degree(i));
  return d;
}

int CommGraph::edge_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{i, j});
  if (it == edges_.end() || *it != Edge{i, j}) return -1;
  return static_cast<int>(it - edges_.begin());
}

bool is_connected(const CommGraph& g) {
  std::vector<char> seen(g.num_agents(), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    for (int v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == g.num_agents();
}

double default_edge_probability(int num_agents) {
  if (num_agents < 2) return 1.0;
  return std::min(1.0, 2.0 * std::log(static_cast<double>(num_agents)) / num_agents);
}

CommGraph erdos_renyi(int num_agents, double edge_prob, std::uint64_t seed) {
  if (num_agents < 2) {
    throw InvalidArgument("erdos_renyi needs at least 2 agents");
  }
  if (!(edge_prob > 0.0 && edge_prob <= 1.0)) {
    throw InvalidArgument("edge probability must lie in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(edge_prob);
  for (int attempt = 0; attempt < kMaxErdosRenyiAttempts; ++attempt) {
    std::vector<Edge> edges;
    for (int i = 0; i < num_agents; ++i) {
      for (int j = i + 1; j < num_agents; ++j) {
        if (coin(rng)) edges.push_back({i, j});
      }
    }
    CommGraph g(num_agents, std::move(edges));
    if (is_connected(g)) return g;
  }
  std::ostringstream msg;
  msg << "could not generate connected graph: " << kMaxErdosRenyiAttempts
      << " samples of G(" << num_agents << ", " << edge_prob << ") were all disconnected";
  throw Error(msg.str());
}

Matrix metropolis_weights(const CommGraph& g) {
  const int n = g.num_agents();
  Matrix w = Matrix::Zero(n, n);
  for (const Edge& e : g.edges()) {
    double v = 1.0 / (1.0 + std::max(g.degree(e.i), g.degree(e.j)));
    w(e.i, e.j) = v;
    w(e.j, e.i) = v;
  }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j : g.neighbors(i)) off += w(i, j);
    w(i, i) = 1.0 - off;
  }
  return w;
}

CommGraph read_graph(std::istream& in) {
  int num_agents = 0;
  int num_edges = 0;
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw InvalidArgument("graph file: missing header line");
  {
    std::istringstream hdr(line);
    if (!(hdr >> num_agents >> num_edges) || num_agents < 1 || num_edges < 0) {
      throw InvalidArgument("graph file line " + std::to_string(line_no) +
                            ": expected \"L E\"");
    }
  }
  std::vector<Edge> edges;
  edges.reserve(num_edges);
  for (int k = 0; k < num_edges; ++k) {
    if (!next_line()) {
      throw InvalidArgument("graph file: expected " + std::to_string(num_edges) +
                            " edges, found " + std::to_string(k));
    }
    std::istringstream row(line);
    Edge e{};
    if (!(row >> e.i >> e.j) || e.i >= e.j) {
      throw InvalidArgument("graph file line " + std::to_string(line_no) +
                            ": expected \"i j\" with i < j");
    }
    edges.push_back(e);
  }
  return CommGraph(num_agents, std::move(edges));
}

void write_graph(std::ostream& out, const CommGraph& g) {
  out << g.num_agents() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.i << ' ' << e.j << '\n';
}

CommGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open graph file " + path.string());
  return read_graph(in);
}

void save_graph(const std::filesystem::path& path, const CommGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write graph file " + path.string());
  write_graph(out, g);
}

}  // namespace madm
