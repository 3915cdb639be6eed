#pragma once

#include <cstdint>
#include <vector>

#include "leosim/linkbudget.hpp"

namespace leosim {

/// Decision context a hop-by-hop learner attaches to the packet at the
/// deciding satellite; echoed back in the next hop's feedback.
struct DecisionTag {
  int agent = -1;           // deciding satellite, -1 when none is pending
  std::uint32_t state = 0;  // encoded state index
  int action = 0;
  bool loop = false;        // next hop already in the visited set
  double dist_agent_dst_km = 0.0;
  double dist_next_dst_km = 0.0;
  double dist_src_dst_km = 0.0;
};

struct Packet {
  std::uint64_t id = 0;
  int source = 0;       // gateway index
  int destination = 0;  // gateway index
  double bits = 0.0;
  double created_s = 0.0;
  /// Satellites visited, in order.
  std::vector<int> visited;
  HopLatency ledger;
  int hops = 0;      // links traversed
  int isl_hops = 0;  // satellite-to-satellite links traversed
  /// Pinned node route for source routing (gateway node ... gateway node).
  std::vector<int> route;
  std::size_t route_pos = 0;
  DecisionTag tag;

  bool visited_contains(int sat) const {
    for (int v : visited) {
      if (v == sat) return true;
    }
    return false;
  }
};

}  // namespace leosim
