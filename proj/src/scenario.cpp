#include "leosim/scenario.hpp"

#include <algorithm>
#include <stdexcept>

namespace leosim {

void Scenario::validate() const {
  constellation.validate();
  link.validate();
  traffic.validate();
  if (mcs.empty()) throw std::invalid_argument("MODCOD table is empty");
  if (gateways.size() < 2) throw std::invalid_argument("at least two active gateways are required");
  for (const auto& g : gateways) {
    if (!(std::abs(g.position.lat_deg) <= 90.0) ||
        !(g.position.lon_deg > -180.0 && g.position.lon_deg <= 180.0)) {
      throw std::invalid_argument("gateway " + g.name + " has an invalid position");
    }
  }
  if (!(sim.horizon_s > 0.0)) throw std::invalid_argument("horizon must be > 0");
  if (!(sim.topology_refresh_s > 0.0)) throw std::invalid_argument("topology refresh must be > 0");
  if (!(sim.snapshot_interval_s > 0.0)) throw std::invalid_argument("snapshot interval must be > 0");
  if (sim.queue_capacity < 1) throw std::invalid_argument("queue capacity must be >= 1");
  if (sim.max_hops < 1) throw std::invalid_argument("max hops must be >= 1");
}

TopologyOptions Scenario::effective_topology() const {
  TopologyOptions opts = topology;
  opts.max_isl_range_km = std::min(opts.max_isl_range_km, max_link_range_km(LinkClass::Isl, link, mcs));
  return opts;
}

NetworkSnapshot Scenario::snapshot(double t, std::uint64_t epoch) const {
  return build_snapshot(constellation, gateways, link, mcs, effective_topology(), t, epoch);
}

std::vector<GslRates> gsl_rates(const NetworkSnapshot& net) {
  std::vector<GslRates> out(static_cast<std::size_t>(net.num_gateways()));
  for (std::size_t g = 0; g < out.size(); ++g) out[g] = {net.uplink_bps[g], net.downlink_bps[g]};
  return out;
}

FlowRates offered_flows(const Scenario& scenario, const NetworkSnapshot& initial) {
  auto rates = gsl_rates(initial);
  // Feasibility is checked even when λ* is overridden.
  double derived = max_supported_load(rates);
  if (const auto cap = scenario.traffic.gateway_cap_bps) {
    derived = std::min(derived, *cap * static_cast<double>(rates.size()));
  }
  const double max_load = scenario.traffic.max_load_override_bps.value_or(derived);
  return balance_flows(max_load, scenario.traffic.load, rates.size());
}

}  // namespace leosim
