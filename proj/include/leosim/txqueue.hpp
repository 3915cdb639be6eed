#pragma once

#include <cstdint>
#include <deque>

namespace leosim {

/// One buffered packet with the next hop chosen at admission.
struct QueuedPacket {
  std::uint32_t slot = 0;     // simulator packet slot
  int next_hop = -1;          // node id
  double tx_s = 0.0;          // B / R(owner, next_hop) at the current topology
  double ready_s = 0.0;       // admission time
  double predicted_queue_s = 0.0;
  std::uint64_t epoch = 0;    // topology epoch at admission
};

enum class EnqueueResult { Accepted, Dropped };

/// FIFO transmit buffer of one node with a single transmitter. The packet
/// being transmitted is not counted in the occupancy.
class TxQueue {
 public:
  explicit TxQueue(int capacity = 100) : capacity_(capacity) {}

  int capacity() const { return capacity_; }
  int occupancy() const { return static_cast<int>(buffer_.size()); }
  bool empty() const { return buffer_.empty(); }
  bool transmitting() const { return busy_; }
  double busy_until() const { return busy_until_; }

  /// Time a packet admitted now waits before its transmission starts:
  /// residual of the packet on the air plus B/R of every buffered packet,
  /// each at the rate of its own next hop.
  double queue_delay(double now) const {
    const double residual = busy_ && busy_until_ > now ? busy_until_ - now : 0.0;
    return residual + queued_tx_s_;
  }

  EnqueueResult enqueue(const QueuedPacket& p) {
    if (occupancy() >= capacity_) return EnqueueResult::Dropped;
    buffer_.push_back(p);
    queued_tx_s_ += p.tx_s;
    return EnqueueResult::Accepted;
  }

  const QueuedPacket& front() const { return buffer_.front(); }

  QueuedPacket pop_front() {
    QueuedPacket p = buffer_.front();
    buffer_.pop_front();
    if (buffer_.empty()) {
      queued_tx_s_ = 0.0;
    } else {
      queued_tx_s_ -= p.tx_s;
    }
    return p;
  }

  void start_transmission(double until) {
    busy_ = true;
    busy_until_ = until;
  }
  void finish_transmission() { busy_ = false; }

  /// Mutable access for topology refresh; call `resum()` afterwards.
  std::deque<QueuedPacket>& buffer() { return buffer_; }
  const std::deque<QueuedPacket>& buffer() const { return buffer_; }
  void resum() {
    queued_tx_s_ = 0.0;
    for (const auto& p : buffer_) queued_tx_s_ += p.tx_s;
  }

 private:
  int capacity_;
  std::deque<QueuedPacket> buffer_;
  double queued_tx_s_ = 0.0;
  bool busy_ = false;
  double busy_until_ = 0.0;
};

}  // namespace leosim
