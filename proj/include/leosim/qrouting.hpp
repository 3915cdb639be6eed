#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "leosim/network.hpp"
#include "leosim/rng.hpp"
#include "leosim/router.hpp"
#include "leosim/topology.hpp"

namespace leosim {

struct QLearningParams {
  double alpha = 0.1;
  double gamma = 0.9;
  double epsilon_start = 1.0;
  double epsilon_min = 0.01;
  double epsilon_decay = 500.0;  // decisions per e-fold, per agent
  double w_queue = 1.0;          // w1
  double w_dist = 1.0;           // w2
  double reward_delivery = 10.0;
  double reward_loop = -10.0;
  /// Neighbour occupancy at or above this many packets is a "long queue".
  /// Non-positive means a quarter of the buffer capacity.
  double queue_threshold_packets = 0.0;
  /// Links at or above this rate count as high capacity. Non-positive means
  /// the median MODCOD rate at the configured bandwidth.
  double capacity_threshold_bps = 0.0;
  double initial_q = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Per-slot neighbour code: 0 uncongested/high rate, 1 uncongested/low rate,
/// 2 long queue or no link.
using NeighborCodes = std::array<std::uint8_t, kIslSlots>;

struct AgentState {
  int destination = 0;
  NeighborCodes codes{2, 2, 2, 2};

  /// Dense index: destination * 81 + base-3 code number.
  std::uint32_t index() const;
  static AgentState from_index(std::uint32_t index);
  friend bool operator==(const AgentState&, const AgentState&) = default;
};

inline constexpr std::uint32_t kCodeCombinations = 81;

/// Actions: the four ISL slots, then delivery over the GSL.
enum class Action : int { IntraFront = 0, IntraBack, InterLeft, InterRight, Deliver };
inline constexpr int kActions = 5;
using ActionMask = std::array<bool, kActions>;

/// What satellite i observes about one neighbour slot.
struct NeighborObservation {
  bool link_available = false;
  int occupancy = 0;
  double rate_bps = 0.0;
};

AgentState encode_state(int destination, std::span<const NeighborObservation, kIslSlots> neighbors,
                        double queue_threshold_packets, double capacity_threshold_bps);

/// Tabular action values of one satellite.
class QTable {
 public:
  QTable() = default;
  QTable(int owner, int num_destinations, double initial = 0.0);

  int owner() const { return owner_; }
  int num_destinations() const { return num_destinations_; }
  double value(const AgentState& s, Action a) const { return value(s.index(), static_cast<int>(a)); }
  double value(std::uint32_t state, int action) const;
  void set(std::uint32_t state, int action, double v);
  std::span<const double, kActions> row(std::uint32_t state) const;
  /// Highest value over masked actions; `fallback` when the mask is empty.
  double max_value(std::uint32_t state, const ActionMask& mask, double fallback = 0.0) const;
  /// Number of cells ever written.
  std::size_t touched() const { return touched_; }
  bool visited(std::uint32_t state) const;

 private:
  int owner_ = -1;
  int num_destinations_ = 0;
  std::vector<std::array<double, kActions>> values_;
  std::vector<char> written_;
  std::size_t touched_ = 0;
};

/// Greedy choice over feasible actions: with probability epsilon uniform,
/// else argmax with ties to the lowest action index. Throws IsolatedNode if
/// no action is feasible.
Action select_action(const QTable& table, const AgentState& state, const ActionMask& feasible,
                     double epsilon, Rng& rng);

/// Inputs of the immediate reward for forwarding from i to j.
struct RewardInputs {
  bool next_serves_destination = false;  // jd in E_G
  bool next_visited = false;             // j in P_p
  double next_queue_delay_s = 0.0;       // t_q(j)
  double dist_agent_dst_km = 0.0;        // ||id||
  double dist_next_dst_km = 0.0;         // ||jd||
  double dist_src_dst_km = 0.0;          // ||sd||
};

enum class RewardCase { Delivery, Loop, Shaped };

RewardCase reward_case(const RewardInputs& in);
double compute_reward(const RewardInputs& in, const QLearningParams& params);

/// (1 - alpha) Q + alpha (r + gamma * feedback) written to (state, action); returns it.
double update_q(QTable& table, std::uint32_t state, int action, double reward, double feedback,
                double alpha, double gamma);

/// max(epsilon_min, epsilon_start * exp(-step / decay)).
double decay_epsilon(std::uint64_t step, const QLearningParams& params);

/// Distributed Q-routing: one agent per satellite, fed by next-hop feedback.
class QRouter : public Router {
 public:
  QRouter(QLearningParams params, int num_satellites, int num_gateways,
          double queue_capacity_packets, double capacity_threshold_bps);

  std::string_view name() const override { return "qlearn"; }
  int next_hop(const RoutingContext& ctx, int sat, Packet& packet) override;
  std::optional<FeedbackMessage> on_reception(const RoutingContext& ctx, int from, int to,
                                              const Packet& packet) override;
  void on_feedback(const DecisionTag& tag, const FeedbackMessage& msg) override;

  const QTable& table(int sat) const { return tables_.at(static_cast<std::size_t>(sat)); }
  std::uint64_t decisions(int sat) const { return decisions_.at(static_cast<std::size_t>(sat)); }
  std::uint64_t updates() const { return updates_; }
  const QLearningParams& params() const { return params_; }
  double queue_threshold() const { return queue_threshold_; }
  double capacity_threshold() const { return capacity_threshold_; }

  /// Local observation of satellite `sat` (its own links and neighbour queues).
  std::array<NeighborObservation, kIslSlots> observe(const RoutingContext& ctx, int sat) const;
  ActionMask feasible_actions(const RoutingContext& ctx, int sat, int destination) const;

  /// JSON dump of every visited state per satellite.
  void dump_tables(std::ostream& out) const;

 private:
  QLearningParams params_;
  double queue_threshold_;
  double capacity_threshold_;
  std::vector<QTable> tables_;
  std::vector<std::uint64_t> decisions_;
  std::vector<Rng> rngs_;
  std::uint64_t updates_ = 0;
};

}  // namespace leosim
