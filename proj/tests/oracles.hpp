#pragma once

#include <limits>
#include <vector>

#include "leosim/rng.hpp"
#include "leosim/routers_baseline.hpp"

namespace oracle {

struct DenseGraph {
  int n = 0;
  std::vector<std::vector<double>> w;  // infinity = no edge
};

inline DenseGraph random_graph(leosim::Rng& rng, int n, double density) {
  DenseGraph g{n, std::vector<std::vector<double>>(n, std::vector<double>(n, std::numeric_limits<double>::infinity()))};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && rng.uniform() < density) g.w[a][b] = 0.01 + rng.uniform() * 10.0;
  return g;
}

inline leosim::WeightedGraph to_weighted(const DenseGraph& g) {
  leosim::WeightedGraph out(g.n);
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      if (g.w[a][b] < std::numeric_limits<double>::infinity()) out.add_edge(a, b, g.w[a][b]);
  return out;
}

namespace detail {
inline void dfs(const DenseGraph& g, int u, int dst, double cost, std::vector<char>& seen, double& best) {
  if (u == dst) {
    if (cost < best) best = cost;
    return;
  }
  for (int v = 0; v < g.n; ++v) {
    if (seen[v] || !(g.w[u][v] < std::numeric_limits<double>::infinity())) continue;
    seen[v] = 1;
    dfs(g, v, dst, cost + g.w[u][v], seen, best);
    seen[v] = 0;
  }
}
}  // namespace detail

/// Cheapest simple path by exhaustive enumeration; infinity if none.
inline double brute_force_cost(const DenseGraph& g, int src, int dst) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> seen(g.n, 0);
  seen[src] = 1;
  detail::dfs(g, src, dst, 0.0, seen, best);
  return best;
}

/// Sum of edge weights along `nodes`, infinity on a missing edge.
inline double path_cost(const DenseGraph& g, const std::vector<int>& nodes) {
  double c = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) c += g.w[nodes[i]][nodes[i + 1]];
  return c;
}

}  // namespace oracle
