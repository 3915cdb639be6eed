#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "leosim/network.hpp"
#include "leosim/packet.hpp"
#include "leosim/txqueue.hpp"

namespace leosim {

/// What the simulator exposes to a router at a decision instant.
struct RoutingContext {
  const NetworkSnapshot& net;
  std::span<const TxQueue> queues;  // indexed by node id
  double now = 0.0;

  double queue_delay(int node) const { return queues[static_cast<std::size_t>(node)].queue_delay(now); }
  int occupancy(int node) const { return queues[static_cast<std::size_t>(node)].occupancy(); }
};

/// Sent by the receiving satellite back to the sender after an ISL reception.
struct FeedbackMessage {
  double next_value = 0.0;       // max_a Q_j(s_{t+1}, a)
  double queue_delay_s = 0.0;    // t_q(j) at reception
  bool next_serves_destination = false;
};

class Router {
 public:
  virtual ~Router() = default;

  virtual std::string_view name() const = 0;

  /// Source routers pin the whole route at the source gateway.
  virtual bool source_routed() const { return false; }

  virtual void on_topology(const NetworkSnapshot& /*net*/) {}

  /// Source routers fill `packet.route`; false means no route exists.
  virtual bool plan(const RoutingContext& /*ctx*/, Packet& /*packet*/) { return true; }

  /// Hop-by-hop routers: next node for `packet` at satellite `sat`, which does
  /// not serve the destination. kNone means no feasible action right now.
  virtual int next_hop(const RoutingContext& /*ctx*/, int /*sat*/, Packet& /*packet*/) { return kNone; }

  /// Called at satellite `to` when a packet from satellite `from` is received,
  /// before it is buffered; returning a message triggers a feedback transfer.
  virtual std::optional<FeedbackMessage> on_reception(const RoutingContext& /*ctx*/, int /*from*/,
                                                      int /*to*/, const Packet& /*packet*/) {
    return std::nullopt;
  }

  /// Feedback delivered back at the deciding satellite.
  virtual void on_feedback(const DecisionTag& /*tag*/, const FeedbackMessage& /*msg*/) {}
};

}  // namespace leosim
