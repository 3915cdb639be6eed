#include "leosim/routers_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace leosim {

void WeightedGraph::add_edge(int from, int to, double weight) {
  if (from < 0 || to < 0 || from >= num_nodes_ || to >= num_nodes_) {
    throw std::out_of_range("edge endpoint out of range");
  }
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("edge weights must be finite and non-negative");
  }
  if (!offsets_.empty()) {
    // Re-open a finalized graph.
    for (int u = 0; u < num_nodes_; ++u) {
      for (auto i = offsets_[static_cast<std::size_t>(u)]; i < offsets_[static_cast<std::size_t>(u) + 1]; ++i) {
        pending_.push_back({u, edges_[i].to, edges_[i].weight});
      }
    }
    offsets_.clear();
    edges_.clear();
  }
  pending_.push_back({from, to, weight});
}

void WeightedGraph::finalize() const {
  if (!offsets_.empty()) return;
  const auto n = static_cast<std::size_t>(num_nodes_);
  offsets_.assign(n + 1, 0);
  for (const auto& t : pending_) ++offsets_[static_cast<std::size_t>(t.from) + 1];
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  edges_.resize(pending_.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& t : pending_) edges_[cursor[static_cast<std::size_t>(t.from)]++] = {t.to, t.weight};
  pending_.clear();
}

std::span<const WeightedGraph::Edge> WeightedGraph::out_edges(int node) const {
  finalize();
  const auto u = static_cast<std::size_t>(node);
  return {edges_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
}

Route ShortestPaths::route_to(int src, int dst) const {
  if (!reachable(dst)) {
    throw NoRoute("no route from node " + std::to_string(src) + " to node " + std::to_string(dst));
  }
  Route r;
  r.cost = dist[static_cast<std::size_t>(dst)];
  for (int v = dst; v != -1; v = pred[static_cast<std::size_t>(v)]) {
    r.nodes.push_back(v);
    if (v == src) break;
  }
  std::reverse(r.nodes.begin(), r.nodes.end());
  return r;
}

ShortestPaths shortest_paths(const WeightedGraph& graph, int src) {
  return detail::dijkstra_impl(graph, src, -1,
                               [](int, const WeightedGraph::Edge& e) { return e.weight; });
}

Route dijkstra(const WeightedGraph& graph, int src, int dst) {
  if (src < 0 || dst < 0 || src >= graph.num_nodes() || dst >= graph.num_nodes()) {
    throw std::out_of_range("dijkstra: node out of range");
  }
  const auto sp = detail::dijkstra_impl(graph, src, dst,
                                        [](int, const WeightedGraph::Edge& e) { return e.weight; });
  return sp.route_to(src, dst);
}

namespace {

WeightedGraph data_rate_graph(const NetworkSnapshot& net) {
  return routing_graph(net, [&](int a, int b) { return 1.0 / net.rate_bps(a, b); });
}

WeightedGraph tx_prop_graph(const NetworkSnapshot& net, double bits, double c) {
  return routing_graph(net, [&](int a, int b) {
    return bits / net.rate_bps(a, b) + net.range_km(a, b) * 1e3 / c;
  });
}

}  // namespace

Route route_data_rate(const NetworkSnapshot& net, int src_gateway, int dst_gateway) {
  auto r = dijkstra(data_rate_graph(net), net.gateway_node(src_gateway), net.gateway_node(dst_gateway));
  r.computed_at_s = net.time_s;
  return r;
}

Route route_latency_genie(const NetworkSnapshot& net, std::span<const double> queue_delay_s,
                          int src_gateway, int dst_gateway, double bits, double speed_of_light) {
  const WeightedGraph g = tx_prop_graph(net, bits, speed_of_light);
  const int src = net.gateway_node(src_gateway), dst = net.gateway_node(dst_gateway);
  const auto sp = detail::dijkstra_impl(g, src, dst, [&](int u, const WeightedGraph::Edge& e) {
    return queue_delay_s[static_cast<std::size_t>(u)] + e.weight;
  });
  auto r = sp.route_to(src, dst);
  r.computed_at_s = net.time_s;
  return r;
}

void DataRateRouter::on_topology(const NetworkSnapshot& net) {
  if (net.epoch == epoch_) return;
  epoch_ = net.epoch;
  graph_ = data_rate_graph(net);
  trees_.clear();
}

bool DataRateRouter::plan(const RoutingContext& ctx, Packet& packet) {
  on_topology(ctx.net);
  const int src = ctx.net.gateway_node(packet.source);
  const int dst = ctx.net.gateway_node(packet.destination);
  auto it = trees_.find(src);
  if (it == trees_.end()) it = trees_.emplace(src, shortest_paths(graph_, src)).first;
  if (!it->second.reachable(dst)) return false;
  packet.route = it->second.route_to(src, dst).nodes;
  packet.route_pos = 0;
  return true;
}

void LatencyGenieRouter::on_topology(const NetworkSnapshot& net) {
  if (net.epoch == epoch_) return;
  epoch_ = net.epoch;
  graph_bits_ = -1.0;
}

bool LatencyGenieRouter::plan(const RoutingContext& ctx, Packet& packet) {
  on_topology(ctx.net);
  if (packet.bits != graph_bits_) {
    graph_ = tx_prop_graph(ctx.net, packet.bits, c_);
    graph_bits_ = packet.bits;
  }
  const int n = ctx.net.num_nodes();
  queue_delay_.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) queue_delay_[static_cast<std::size_t>(v)] = ctx.queue_delay(v);
  const int src = ctx.net.gateway_node(packet.source);
  const int dst = ctx.net.gateway_node(packet.destination);
  const auto sp = detail::dijkstra_impl(graph_, src, dst, [&](int u, const WeightedGraph::Edge& e) {
    return queue_delay_[static_cast<std::size_t>(u)] + e.weight;
  });
  if (!sp.reachable(dst)) return false;
  packet.route = sp.route_to(src, dst).nodes;
  packet.route_pos = 0;
  return true;
}

}  // namespace leosim
