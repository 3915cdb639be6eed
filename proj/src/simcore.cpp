#include "leosim/simcore.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "leosim/errors.hpp"

namespace leosim {

namespace {

constexpr int kPark = -2;

}  // namespace

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::None: return "none";
    case DropReason::BufferFull: return "buffer_full";
    case DropReason::StaleRoute: return "stale_route";
    case DropReason::HopLimit: return "hop_limit";
    case DropReason::NoRoute: return "no_route";
  }
  return "unknown";
}

Simulator::Simulator(const Scenario& scenario, Router& router, RunOptions options)
    : scenario_(scenario), router_(router), options_(options) {
  scenario_.validate();
  net_ = scenario_.snapshot(0.0, 0);
  report_.flows = offered_flows(scenario_, net_);
  report_.router = std::string(router_.name());
  queues_.assign(static_cast<std::size_t>(net_.num_nodes()), TxQueue(scenario_.sim.queue_capacity));
  parked_.resize(static_cast<std::size_t>(net_.num_satellites()));
}

void Simulator::push(double t, EventKind kind, int node, int from, std::uint32_t payload) {
  events_.push(Event{t, seq_++, kind, node, from, payload});
}

std::uint32_t Simulator::allocate_packet() {
  std::uint32_t slot;
  if (!free_slots_.empty()) {
    slot = free_slots_.back();
    free_slots_.pop_back();
  } else {
    slot = static_cast<std::uint32_t>(packets_.size());
    packets_.emplace_back();
    live_.push_back(0);
  }
  live_[slot] = 1;
  ++live_count_;
  return slot;
}

void Simulator::finish_packet(std::uint32_t slot, bool delivered, DropReason reason) {
  Packet& p = packets_[slot];
  PacketRecord r;
  r.id = p.id;
  r.source = p.source;
  r.destination = p.destination;
  r.created_s = p.created_s;
  if (delivered) r.delivered_s = now_;
  r.queue_s = p.ledger.queue_s;
  r.tx_s = p.ledger.tx_s;
  r.prop_s = p.ledger.prop_s;
  r.hops = p.hops;
  r.dropped = !delivered;
  r.reason = reason;

  auto& c = report_.counters;
  if (delivered) {
    ++c.delivered;
  } else {
    ++c.dropped;
    ++c.drops_by_reason[static_cast<std::size_t>(reason)];
  }
  live_[slot] = 0;
  --live_count_;
  free_slots_.push_back(slot);
  if (options_.observer != nullptr) options_.observer->on_packet_done(r);
  if (options_.keep_records) report_.records.push_back(r);
}

SimReport Simulator::run() {
  const double horizon = scenario_.sim.horizon_s;
  arrivals_.emplace(report_.flows, scenario_.traffic.packet_bits, horizon, scenario_.traffic.seed);
  next_arrival_ = arrivals_->next();
  if (next_arrival_) push(next_arrival_->time_s, EventKind::GatewayArrival);
  push(scenario_.sim.topology_refresh_s, EventKind::TopologyRefresh, 0, 0, 1);
  push(scenario_.sim.snapshot_interval_s, EventKind::MetricsSnapshot, 0, 0, 1);

  while (!events_.empty()) {
    const Event ev = events_.top();
    if (ev.time >= horizon) break;
    events_.pop();
    now_ = ev.time;
    switch (ev.kind) {
      case EventKind::GatewayArrival: on_gateway_arrival(); break;
      case EventKind::TxComplete: on_tx_complete(ev.node); break;
      case EventKind::PropagationArrival: on_propagation_arrival(ev.node, ev.from, ev.payload); break;
      case EventKind::FeedbackArrival: on_feedback_arrival(ev.payload); break;
      case EventKind::TopologyRefresh:
        on_topology_refresh();
        if (const double next = (ev.payload + 1) * scenario_.sim.topology_refresh_s; next < horizon) {
          push(next, EventKind::TopologyRefresh, 0, 0, ev.payload + 1);
        }
        break;
      case EventKind::MetricsSnapshot:
        on_snapshot();
        if (const double next = (ev.payload + 1) * scenario_.sim.snapshot_interval_s; next < horizon) {
          push(next, EventKind::MetricsSnapshot, 0, 0, ev.payload + 1);
        }
        break;
    }
  }
  now_ = horizon;
  on_snapshot();
  return std::move(report_);
}

void Simulator::on_snapshot() {
  report_.counters.in_flight = live_count_;
  report_.snapshots.push_back({now_, report_.counters});
  if (options_.observer != nullptr) options_.observer->on_snapshot(now_, report_.counters);
}

void Simulator::on_gateway_arrival() {
  const Arrival a = *next_arrival_;
  next_arrival_ = arrivals_->next();
  if (next_arrival_) push(next_arrival_->time_s, EventKind::GatewayArrival);

  const std::uint32_t slot = allocate_packet();
  Packet& p = packets_[slot];
  p.id = next_packet_id_++;
  p.source = a.source;
  p.destination = a.destination;
  p.bits = scenario_.traffic.packet_bits;
  p.created_s = now_;
  p.visited.clear();
  p.ledger = {};
  p.hops = 0;
  p.isl_hops = 0;
  p.route.clear();
  p.route_pos = 0;
  p.tag = {};
  ++report_.counters.generated;

  const int gw_node = net_.gateway_node(a.source);
  int next = net_.edges.serving_satellite[static_cast<std::size_t>(a.source)];
  if (router_.source_routed()) {
    if (!router_.plan(context(), p) || p.route.size() < 3) {
      finish_packet(slot, false, DropReason::NoRoute);
      return;
    }
    next = p.route[1];
  }
  if (next == kNone || !net_.has_edge(gw_node, next)) {
    finish_packet(slot, false, DropReason::NoRoute);
    return;
  }
  admit(gw_node, slot, next);
}

void Simulator::admit(int node, std::uint32_t slot, int next_hop) {
  const double rate = net_.rate_bps(node, next_hop);
  if (!(rate > 0.0)) {
    throw RoutingContractViolation("next hop " + std::to_string(next_hop) + " is not an edge of node " +
                                   std::to_string(node));
  }
  TxQueue& q = queues_[static_cast<std::size_t>(node)];
  QueuedPacket qp;
  qp.slot = slot;
  qp.next_hop = next_hop;
  qp.tx_s = packets_[slot].bits / rate;
  qp.ready_s = now_;
  qp.predicted_queue_s = q.queue_delay(now_);
  qp.epoch = net_.epoch;
  if (q.enqueue(qp) == EnqueueResult::Dropped) {
    finish_packet(slot, false, DropReason::BufferFull);
    return;
  }
  if (!q.transmitting()) start_transmission(node);
}

void Simulator::start_transmission(int node) {
  TxQueue& q = queues_[static_cast<std::size_t>(node)];
  if (q.empty()) return;
  const QueuedPacket qp = q.pop_front();
  Packet& p = packets_[qp.slot];
  const double rate = net_.rate_bps(node, qp.next_hop);
  const double distance = net_.range_km(node, qp.next_hop);
  const HopLatency hop =
      hop_latency(now_ - qp.ready_s, p.bits, rate, distance, scenario_.link.speed_of_light);
  p.ledger.queue_s += hop.queue_s;
  p.ledger.tx_s += hop.tx_s;
  p.ledger.prop_s += hop.prop_s;
  ++p.hops;
  if (!net_.is_gateway_node(node) && !net_.is_gateway_node(qp.next_hop)) ++p.isl_hops;

  if (options_.observer != nullptr) {
    HopRecord h;
    h.packet_id = p.id;
    h.from = node;
    h.to = qp.next_hop;
    h.bits = p.bits;
    h.ready_s = qp.ready_s;
    h.start_s = now_;
    h.predicted_queue_s = qp.predicted_queue_s;
    h.rate_bps = rate;
    h.distance_km = distance;
    h.latency = hop;
    h.refreshed_while_queued = qp.epoch != net_.epoch;
    options_.observer->on_hop(h);
  }

  const double done = now_ + hop.tx_s;
  q.start_transmission(done);
  push(done, EventKind::TxComplete, node);
  push(done + hop.prop_s, EventKind::PropagationArrival, qp.next_hop, node, qp.slot);
}

void Simulator::on_tx_complete(int node) {
  TxQueue& q = queues_[static_cast<std::size_t>(node)];
  q.finish_transmission();
  if (!q.empty()) start_transmission(node);
}

void Simulator::on_propagation_arrival(int node, int from, std::uint32_t slot) {
  Packet& p = packets_[slot];
  if (net_.is_gateway_node(node)) {
    // Downlinks are only ever scheduled towards the destination gateway.
    finish_packet(slot, true, DropReason::None);
    return;
  }
  if (!net_.is_gateway_node(from)) {
    ++report_.counters.isl_receptions;
    if (auto msg = router_.on_reception(context(), from, node, p)) {
      std::uint32_t idx;
      if (!free_feedback_.empty()) {
        idx = free_feedback_.back();
        free_feedback_.pop_back();
      } else {
        idx = static_cast<std::uint32_t>(feedback_.size());
        feedback_.emplace_back();
      }
      feedback_[idx] = {p.tag, *msg};
      ++report_.counters.feedback_messages;
      const double back = net_.range_km(from, node) * 1e3 / scenario_.link.speed_of_light;
      push(now_ + back, EventKind::FeedbackArrival, from, node, idx);
    }
  }
  p.visited.push_back(node);
  if (router_.source_routed()) ++p.route_pos;
  forward_from_satellite(node, slot);
}

void Simulator::on_feedback_arrival(std::uint32_t idx) {
  router_.on_feedback(feedback_[idx].tag, feedback_[idx].msg);
  free_feedback_.push_back(idx);
}

int Simulator::decide_next_hop(int node, std::uint32_t slot, DropReason& reason) {
  Packet& p = packets_[slot];
  if (net_.is_gateway_node(node)) {
    const int serving = net_.edges.serving_satellite[static_cast<std::size_t>(net_.gateway_of_node(node))];
    int next = serving;
    if (router_.source_routed()) {
      next = p.route[1];
      if (next != serving) {
        reason = DropReason::StaleRoute;
        return kNone;
      }
    }
    if (next == kNone || !net_.has_edge(node, next)) {
      reason = DropReason::NoRoute;
      return kNone;
    }
    return next;
  }

  if (router_.source_routed()) {
    const int next = p.route_pos + 1 < p.route.size() ? p.route[p.route_pos + 1] : kNone;
    if (next == kNone || !net_.has_edge(node, next)) {
      reason = DropReason::StaleRoute;
      return kNone;
    }
    return next;
  }

  const int dst_node = net_.gateway_node(p.destination);
  if (net_.edges.serving_satellite[static_cast<std::size_t>(p.destination)] == node) {
    if (net_.has_edge(node, dst_node)) return dst_node;
    reason = DropReason::NoRoute;
    return kNone;
  }
  if (p.isl_hops >= scenario_.sim.max_hops) {
    reason = DropReason::HopLimit;
    return kNone;
  }
  const int next = router_.next_hop(context(), node, p);
  if (next == kNone) return kPark;
  if (!net_.has_edge(node, next)) {
    throw RoutingContractViolation("router chose a non-edge " + std::to_string(node) + " -> " +
                                   std::to_string(next));
  }
  return next;
}

void Simulator::forward_from_satellite(int sat, std::uint32_t slot) {
  DropReason reason = DropReason::None;
  const int next = decide_next_hop(sat, slot, reason);
  if (next == kPark) {
    parked_[static_cast<std::size_t>(sat)].push_back(slot);
  } else if (next == kNone) {
    finish_packet(slot, false, reason);
  } else {
    admit(sat, slot, next);
  }
}

void Simulator::on_topology_refresh() {
  net_ = scenario_.snapshot(now_, net_.epoch + 1);
  ++report_.counters.topology_refreshes;
  router_.on_topology(net_);

  std::deque<QueuedPacket> kept;
  for (int node = 0; node < net_.num_nodes(); ++node) {
    TxQueue& q = queues_[static_cast<std::size_t>(node)];
    if (q.empty()) continue;
    kept.clear();
    std::deque<QueuedPacket> old;
    old.swap(q.buffer());
    q.resum();
    for (QueuedPacket qp : old) {
      int next = qp.next_hop;
      const bool still_valid = net_.has_edge(node, next) &&
                               !(router_.source_routed() || net_.is_gateway_node(node));
      if (!still_valid) {
        DropReason reason = DropReason::None;
        next = decide_next_hop(node, qp.slot, reason);
        if (next == kNone) {
          finish_packet(qp.slot, false, reason);
          continue;
        }
        if (next == kPark) {
          parked_[static_cast<std::size_t>(node)].push_back(qp.slot);
          continue;
        }
      }
      qp.next_hop = next;
      qp.tx_s = packets_[qp.slot].bits / net_.rate_bps(node, next);
      kept.push_back(qp);
    }
    q.buffer().swap(kept);
    q.resum();
  }

  for (int sat = 0; sat < net_.num_satellites(); ++sat) {
    auto waiting = std::move(parked_[static_cast<std::size_t>(sat)]);
    parked_[static_cast<std::size_t>(sat)].clear();
    for (std::uint32_t slot : waiting) forward_from_satellite(sat, slot);
  }
}

SimReport run(const Scenario& scenario, Router& router, RunOptions options) {
  Simulator sim(scenario, router, options);
  return sim.run();
}

namespace {

void put_double(std::ostream& out, double v) {
  if (std::isnan(v)) return;  // empty field
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_packet_csv_header(std::ostream& out) { out << kPacketCsvHeader << '\n'; }

void write_packet_csv_row(std::ostream& out, const PacketRecord& r) {
  out << r.id << ',' << r.source << ',' << r.destination << ',';
  put_double(out, r.created_s);
  out << ',';
  put_double(out, r.delivered_s);
  out << ',';
  put_double(out, r.queue_s);
  out << ',';
  put_double(out, r.tx_s);
  out << ',';
  put_double(out, r.prop_s);
  out << ',' << r.hops << ',' << (r.dropped ? 1 : 0) << '\n';
}

void write_packet_csv(std::ostream& out, std::span<const PacketRecord> records) {
  write_packet_csv_header(out);
  for (const auto& r : records) write_packet_csv_row(out, r);
}

}  // namespace leosim
