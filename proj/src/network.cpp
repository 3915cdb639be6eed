#include "leosim/network.hpp"

#include <algorithm>

namespace leosim {

EcefVector NetworkSnapshot::position(int node) const {
  if (is_gateway_node(node)) return gateway_pos.at(static_cast<std::size_t>(gateway_of_node(node)));
  return satellite_pos.at(static_cast<std::size_t>(node));
}

double NetworkSnapshot::rate_bps(int from, int to) const {
  const int n = num_satellites();
  if (from < 0 || to < 0 || from >= num_nodes() || to >= num_nodes()) return 0.0;
  if (from < n && to < n) {
    const int slot = edges.slot_of(from, to);
    return slot == kNone ? 0.0 : isl_rate_bps[static_cast<std::size_t>(from)][static_cast<std::size_t>(slot)];
  }
  if (from >= n && to < n) {
    const auto g = static_cast<std::size_t>(from - n);
    return edges.serving_satellite[g] == to ? uplink_bps[g] : 0.0;
  }
  if (from < n && to >= n) {
    const auto g = static_cast<std::size_t>(to - n);
    return edges.serving_satellite[g] == from ? downlink_bps[g] : 0.0;
  }
  return 0.0;
}

double NetworkSnapshot::range_km(int from, int to) const {
  return slant_range(position(from), position(to));
}

NetworkSnapshot build_snapshot(const ConstellationConfig& cfg, std::span<const Gateway> gateways,
                               const LinkBudgetParams& link, const McsTable& mcs,
                               const TopologyOptions& topology, double t, std::uint64_t epoch) {
  NetworkSnapshot snap;
  snap.time_s = t;
  snap.epoch = epoch;
  snap.satellite_pos = satellite_positions(cfg, t);
  snap.gateway_pos.reserve(gateways.size());
  for (const auto& gw : gateways) {
    snap.gateway_pos.push_back(gateway_position(gw.position, t, cfg.earth_radius_km));
  }
  snap.edges = build_edge_set(cfg, snap.satellite_pos, snap.gateway_pos, topology);

  const auto n = snap.satellite_pos.size();
  snap.isl_rate_bps.assign(n, {0.0, 0.0, 0.0, 0.0});
  snap.isl_range_km.assign(n, {0.0, 0.0, 0.0, 0.0});
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t s = 0; s < kIslSlots; ++s) {
      const int b = snap.edges.neighbors[a][s];
      if (b == kNone) continue;
      const double d = slant_range(snap.satellite_pos[a], snap.satellite_pos[static_cast<std::size_t>(b)]);
      snap.isl_range_km[a][s] = d;
      snap.isl_rate_bps[a][s] = link_rate(LinkClass::Isl, link, mcs, d);
    }
  }
  // Drop ISLs with no usable MODCOD, from both endpoints.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t s = 0; s < kIslSlots; ++s) {
      const int b = snap.edges.neighbors[a][s];
      if (b != kNone && !(snap.isl_rate_bps[a][s] > 0.0)) {
        const int back = snap.edges.slot_of(b, static_cast<int>(a));
        snap.edges.neighbors[a][s] = kNone;
        if (back != kNone) {
          snap.edges.neighbors[static_cast<std::size_t>(b)][static_cast<std::size_t>(back)] = kNone;
          snap.isl_rate_bps[static_cast<std::size_t>(b)][static_cast<std::size_t>(back)] = 0.0;
        }
      }
    }
  }

  const auto g_count = gateways.size();
  snap.uplink_bps.assign(g_count, 0.0);
  snap.downlink_bps.assign(g_count, 0.0);
  snap.gsl_range_km.assign(g_count, 0.0);
  for (std::size_t g = 0; g < g_count; ++g) {
    const int s = snap.edges.serving_satellite[g];
    if (s == kNone) continue;
    const double d = slant_range(snap.gateway_pos[g], snap.satellite_pos[static_cast<std::size_t>(s)]);
    snap.gsl_range_km[g] = d;
    snap.uplink_bps[g] = link_rate(LinkClass::Uplink, link, mcs, d);
    snap.downlink_bps[g] = link_rate(LinkClass::Downlink, link, mcs, d);
  }
  return snap;
}

}  // namespace leosim
