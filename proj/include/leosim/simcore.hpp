#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <queue>
#include <string_view>
#include <vector>

#include "leosim/network.hpp"
#include "leosim/packet.hpp"
#include "leosim/router.hpp"
#include "leosim/scenario.hpp"
#include "leosim/traffic.hpp"
#include "leosim/txqueue.hpp"

namespace leosim {

enum class DropReason : std::uint8_t { None = 0, BufferFull, StaleRoute, HopLimit, NoRoute };
inline constexpr std::size_t kDropReasons = 5;
std::string_view to_string(DropReason r);

/// One transmission, logged at its start.
struct HopRecord {
  std::uint64_t packet_id = 0;
  int from = 0;  // node ids
  int to = 0;
  double bits = 0.0;
  double ready_s = 0.0;            // admission to the buffer
  double start_s = 0.0;            // transmission start
  double predicted_queue_s = 0.0;  // t_q(from) evaluated at admission
  double rate_bps = 0.0;
  double distance_km = 0.0;
  HopLatency latency;
  /// A topology refresh happened while the packet was buffered, so the
  /// admission-time prediction used different rates.
  bool refreshed_while_queued = false;
};

struct PacketRecord {
  std::uint64_t id = 0;
  int source = 0;
  int destination = 0;
  double created_s = 0.0;
  double delivered_s = std::numeric_limits<double>::quiet_NaN();  // NaN unless delivered
  double queue_s = 0.0;
  double tx_s = 0.0;
  double prop_s = 0.0;
  int hops = 0;
  bool dropped = false;
  DropReason reason = DropReason::None;

  double latency_s() const { return delivered_s - created_s; }
};

struct SimCounters {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_flight = 0;  // counted from live packets, not derived
  std::array<std::uint64_t, kDropReasons> drops_by_reason{};
  std::uint64_t isl_receptions = 0;
  std::uint64_t feedback_messages = 0;
  std::uint64_t topology_refreshes = 0;

  bool conserved() const { return generated == delivered + dropped + in_flight; }
};

struct SnapshotRecord {
  double time_s = 0.0;
  SimCounters counters;
};

struct SimReport {
  SimCounters counters;
  std::vector<SnapshotRecord> snapshots;
  /// Completed (delivered or dropped) packets, in completion order.
  std::vector<PacketRecord> records;
  FlowRates flows;
  std::string router;
};

class SimObserver {
 public:
  virtual ~SimObserver() = default;
  virtual void on_hop(const HopRecord& /*hop*/) {}
  virtual void on_packet_done(const PacketRecord& /*record*/) {}
  virtual void on_snapshot(double /*t*/, const SimCounters& /*counters*/) {}
};

struct RunOptions {
  bool keep_records = true;
  SimObserver* observer = nullptr;
};

/// Single-threaded discrete-event engine for one scenario and one router.
class Simulator {
 public:
  Simulator(const Scenario& scenario, Router& router, RunOptions options = {});

  SimReport run();

  /// Buffer state, indexed by node id (satellites, then gateways).
  std::span<const TxQueue> queues() const { return queues_; }
  const NetworkSnapshot& network() const { return net_; }

 private:
  enum class EventKind : std::uint8_t {
    GatewayArrival,
    TxComplete,
    PropagationArrival,
    FeedbackArrival,
    TopologyRefresh,
    MetricsSnapshot,
  };

  struct Event {
    double time;
    std::uint64_t seq;
    EventKind kind;
    int node;
    int from;
    std::uint32_t payload;

    bool operator>(const Event& o) const { return time != o.time ? time > o.time : seq > o.seq; }
  };

  struct PendingFeedback {
    DecisionTag tag;
    FeedbackMessage msg;
  };

  void push(double t, EventKind kind, int node = 0, int from = 0, std::uint32_t payload = 0);
  RoutingContext context() const { return {net_, queues_, now_}; }

  std::uint32_t allocate_packet();
  void finish_packet(std::uint32_t slot, bool delivered, DropReason reason);

  void on_gateway_arrival();
  void on_tx_complete(int node);
  void on_propagation_arrival(int node, int from, std::uint32_t slot);
  void on_feedback_arrival(std::uint32_t idx);
  void on_topology_refresh();
  void on_snapshot();

  /// Chooses the next hop at satellite `sat` and buffers; handles drops.
  void forward_from_satellite(int sat, std::uint32_t slot);
  /// Next hop under the current topology, or kNone (with `reason` set) if the
  /// packet must be dropped, or -2 if it has to wait for a topology refresh.
  int decide_next_hop(int node, std::uint32_t slot, DropReason& reason);
  void admit(int node, std::uint32_t slot, int next_hop);
  void start_transmission(int node);

  const Scenario& scenario_;
  Router& router_;
  RunOptions options_;

  NetworkSnapshot net_;
  std::vector<TxQueue> queues_;
  std::vector<Packet> packets_;
  std::vector<char> live_;
  std::vector<std::uint32_t> free_slots_;
  std::vector<std::vector<std::uint32_t>> parked_;  // per satellite, awaiting refresh
  std::vector<PendingFeedback> feedback_;
  std::vector<std::uint32_t> free_feedback_;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  std::uint64_t next_packet_id_ = 0;
  std::uint64_t live_count_ = 0;

  std::optional<ArrivalStream> arrivals_;
  std::optional<Arrival> next_arrival_;
  SimReport report_;
};

/// Convenience wrapper: constructs a Simulator and runs it.
SimReport run(const Scenario& scenario, Router& router, RunOptions options = {});

/// Header line of the per-packet CSV.
inline constexpr std::string_view kPacketCsvHeader =
    "packet_id,src,dst,created_s,delivered_s,queue_s,tx_s,prop_s,hops,dropped";

void write_packet_csv_header(std::ostream& out);
void write_packet_csv_row(std::ostream& out, const PacketRecord& r);
void write_packet_csv(std::ostream& out, std::span<const PacketRecord> records);

/// Streams completed packets to a CSV as the simulation runs.
class PacketCsvSink : public SimObserver {
 public:
  explicit PacketCsvSink(std::ostream& out) : out_(out) { write_packet_csv_header(out_); }
  void on_packet_done(const PacketRecord& r) override { write_packet_csv_row(out_, r); }

 private:
  std::ostream& out_;
};

/// Forwards each callback to several observers.
class ObserverFanout : public SimObserver {
 public:
  void add(SimObserver* o) {
    if (o != nullptr) observers_.push_back(o);
  }
  void on_hop(const HopRecord& h) override {
    for (auto* o : observers_) o->on_hop(h);
  }
  void on_packet_done(const PacketRecord& r) override {
    for (auto* o : observers_) o->on_packet_done(r);
  }
  void on_snapshot(double t, const SimCounters& c) override {
    for (auto* o : observers_) o->on_snapshot(t, c);
  }

 private:
  std::vector<SimObserver*> observers_;
};

}  // namespace leosim
