#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "leosim/constellation.hpp"
#include "leosim/linkbudget.hpp"
#include "leosim/topology.hpp"

namespace leosim {

struct Gateway {
  std::string name;
  GeoPosition position;
};

/// Positions, links and link rates frozen at one topology refresh.
///
/// Nodes are numbered satellites first (flat index), then gateways:
/// gateway g is node `num_satellites + g`.
struct NetworkSnapshot {
  double time_s = 0.0;
  std::uint64_t epoch = 0;
  std::vector<EcefVector> satellite_pos;
  std::vector<EcefVector> gateway_pos;
  EdgeSet edges;
  std::vector<std::array<double, kIslSlots>> isl_rate_bps;
  std::vector<std::array<double, kIslSlots>> isl_range_km;
  std::vector<double> uplink_bps;    // per gateway, to its serving satellite
  std::vector<double> downlink_bps;  // per gateway, from its serving satellite
  std::vector<double> gsl_range_km;

  int num_satellites() const { return static_cast<int>(satellite_pos.size()); }
  int num_gateways() const { return static_cast<int>(gateway_pos.size()); }
  int num_nodes() const { return num_satellites() + num_gateways(); }
  int gateway_node(int g) const { return num_satellites() + g; }
  bool is_gateway_node(int node) const { return node >= num_satellites(); }
  int gateway_of_node(int node) const { return node - num_satellites(); }
  EcefVector position(int node) const;

  /// Directed link rate; 0 when `from -> to` is not a current edge.
  double rate_bps(int from, int to) const;
  double range_km(int from, int to) const;
  bool has_edge(int from, int to) const { return rate_bps(from, to) > 0.0; }
};

/// Builds the snapshot at time `t`. ISLs without a usable MODCOD are removed.
NetworkSnapshot build_snapshot(const ConstellationConfig& cfg, std::span<const Gateway> gateways,
                               const LinkBudgetParams& link, const McsTable& mcs,
                               const TopologyOptions& topology, double t, std::uint64_t epoch = 0);

}  // namespace leosim
