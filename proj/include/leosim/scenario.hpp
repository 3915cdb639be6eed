#pragma once

#include <vector>

#include "leosim/constellation.hpp"
#include "leosim/linkbudget.hpp"
#include "leosim/network.hpp"
#include "leosim/topology.hpp"
#include "leosim/traffic.hpp"

namespace leosim {

struct SimSettings {
  double horizon_s = 30.0;
  double topology_refresh_s = 1.0;
  double snapshot_interval_s = 0.1;
  int queue_capacity = 100;  // Q_max, packets
  int max_hops = 64;         // ISL hop cap for hop-by-hop routing
};

/// Everything the simulator needs for one run; `gateways` is the active set.
struct Scenario {
  ConstellationConfig constellation = ConstellationConfig::uniform(7, 20, 600.0, 98.6);
  std::vector<Gateway> gateways;
  LinkBudgetParams link;
  McsTable mcs;
  TrafficConfig traffic;
  TopologyOptions topology;
  SimSettings sim;

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  /// Topology options with the ISL range limit implied by the link budget.
  TopologyOptions effective_topology() const;

  NetworkSnapshot snapshot(double t, std::uint64_t epoch = 0) const;
};

/// GSL rates of the active gateways in `net`.
std::vector<GslRates> gsl_rates(const NetworkSnapshot& net);

/// Per-gateway flow rates at t = 0 (λ* from GSL rates unless overridden).
FlowRates offered_flows(const Scenario& scenario, const NetworkSnapshot& initial);

}  // namespace leosim
