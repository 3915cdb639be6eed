#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <unordered_map>
#include <vector>

#include "leosim/errors.hpp"
#include "leosim/network.hpp"
#include "leosim/router.hpp"

namespace leosim {

/// Directed graph in compressed adjacency form.
class WeightedGraph {
 public:
  struct Edge {
    int to;
    double weight;
  };

  explicit WeightedGraph(int num_nodes = 0) : num_nodes_(num_nodes) {}

  int num_nodes() const { return num_nodes_; }
  /// Throws std::invalid_argument on negative or non-finite weights.
  void add_edge(int from, int to, double weight);
  std::span<const Edge> out_edges(int node) const;
  std::size_t num_edges() const { return pending_.size() + edges_.size(); }

  /// Freezes the adjacency; called lazily by the queries.
  void finalize() const;

 private:
  struct Triple {
    int from;
    int to;
    double weight;
  };
  int num_nodes_;
  mutable std::vector<Triple> pending_;
  mutable std::vector<std::size_t> offsets_;
  mutable std::vector<Edge> edges_;
};

struct Route {
  std::vector<int> nodes;
  double cost = 0.0;
  double computed_at_s = 0.0;
};

/// Shortest-path tree from `src`. Among equal-cost paths the predecessor
/// with the smaller node index wins, so results are deterministic.
struct ShortestPaths {
  std::vector<double> dist;
  std::vector<int> pred;

  bool reachable(int node) const { return dist[static_cast<std::size_t>(node)] < std::numeric_limits<double>::infinity(); }
  /// Throws NoRoute when `dst` is unreachable.
  Route route_to(int src, int dst) const;
};

namespace detail {

template <typename WeightFn>
ShortestPaths dijkstra_impl(const WeightedGraph& g, int src, int stop_at, WeightFn&& weight) {
  g.finalize();
  const auto n = static_cast<std::size_t>(g.num_nodes());
  ShortestPaths sp;
  sp.dist.assign(n, std::numeric_limits<double>::infinity());
  sp.pred.assign(n, -1);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  sp.dist[static_cast<std::size_t>(src)] = 0.0;
  heap.emplace(0.0, src);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    const auto ui = static_cast<std::size_t>(u);
    if (done[ui]) continue;
    done[ui] = 1;
    if (u == stop_at) break;
    for (const auto& e : g.out_edges(u)) {
      const auto vi = static_cast<std::size_t>(e.to);
      if (done[vi]) continue;
      const double nd = d + weight(u, e);
      if (nd < sp.dist[vi]) {
        sp.dist[vi] = nd;
        sp.pred[vi] = u;
        heap.emplace(nd, e.to);
      } else if (nd == sp.dist[vi] && u < sp.pred[vi]) {
        sp.pred[vi] = u;
      }
    }
  }
  return sp;
}

}  // namespace detail

ShortestPaths shortest_paths(const WeightedGraph& graph, int src);

/// Minimum total-weight path. src == dst yields a single-node route of cost 0.
/// Throws NoRoute when `dst` is unreachable.
Route dijkstra(const WeightedGraph& graph, int src, int dst);

/// Routing graph over satellites and gateways of `net`: every ISL in both
/// directions, plus uplink and downlink GSLs. Edge weight = weight(from, to).
template <typename WeightFn>
WeightedGraph routing_graph(const NetworkSnapshot& net, WeightFn&& weight) {
  WeightedGraph g(net.num_nodes());
  for (int a = 0; a < net.num_satellites(); ++a) {
    for (int b : net.edges.neighbors[static_cast<std::size_t>(a)]) {
      if (b != kNone && net.rate_bps(a, b) > 0.0) g.add_edge(a, b, weight(a, b));
    }
  }
  for (int gw = 0; gw < net.num_gateways(); ++gw) {
    const int s = net.edges.serving_satellite[static_cast<std::size_t>(gw)];
    if (s == kNone) continue;
    const int node = net.gateway_node(gw);
    if (net.rate_bps(node, s) > 0.0) g.add_edge(node, s, weight(node, s));
    if (net.rate_bps(s, node) > 0.0) g.add_edge(s, node, weight(s, node));
  }
  return g;
}

/// Source route under w = 1/R(i, j).
Route route_data_rate(const NetworkSnapshot& net, int src_gateway, int dst_gateway);

/// Source route under w = t_q(i) + B/R(i, j) + ||ij||/c, queue delays frozen
/// at the call. `queue_delay_s` is indexed by node id.
Route route_latency_genie(const NetworkSnapshot& net, std::span<const double> queue_delay_s,
                          int src_gateway, int dst_gateway, double bits,
                          double speed_of_light = kSpeedOfLight);

/// Data-rate benchmark; routes are cached per topology epoch.
class DataRateRouter : public Router {
 public:
  std::string_view name() const override { return "datarate"; }
  bool source_routed() const override { return true; }
  void on_topology(const NetworkSnapshot& net) override;
  bool plan(const RoutingContext& ctx, Packet& packet) override;

 private:
  std::uint64_t epoch_ = std::numeric_limits<std::uint64_t>::max();
  WeightedGraph graph_;
  std::unordered_map<int, ShortestPaths> trees_;  // by source gateway node
};

/// Latency-genie benchmark: instantaneous queue knowledge at the source only.
class LatencyGenieRouter : public Router {
 public:
  explicit LatencyGenieRouter(double speed_of_light = kSpeedOfLight) : c_(speed_of_light) {}
  std::string_view name() const override { return "genie"; }
  bool source_routed() const override { return true; }
  void on_topology(const NetworkSnapshot& net) override;
  bool plan(const RoutingContext& ctx, Packet& packet) override;

 private:
  double c_;
  std::uint64_t epoch_ = std::numeric_limits<std::uint64_t>::max();
  WeightedGraph graph_;  // static part: B/R + ||ij||/c per bit-size seen
  double graph_bits_ = -1.0;
  std::vector<double> queue_delay_;
};

}  // namespace leosim
