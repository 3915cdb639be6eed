#include "leosim/qrouting.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "leosim/errors.hpp"

namespace leosim {

namespace {

// Keeps agent streams disjoint from the per-gateway traffic streams.
constexpr std::uint64_t kAgentStreamBase = 1ULL << 32;

}  // namespace

void QLearningParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0, 1)");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0) || !(epsilon_min >= 0.0) ||
      !(epsilon_min <= epsilon_start)) {
    throw std::invalid_argument("need 0 <= epsilon_min <= epsilon_start <= 1");
  }
  if (!(epsilon_decay > 0.0)) throw std::invalid_argument("epsilon decay must be > 0");
  if (!std::isfinite(w_queue) || !std::isfinite(w_dist) || !std::isfinite(reward_delivery) ||
      !std::isfinite(reward_loop) || !std::isfinite(initial_q)) {
    throw std::invalid_argument("reward parameters must be finite");
  }
}

std::uint32_t AgentState::index() const {
  std::uint32_t code = 0;
  for (auto c : codes) code = code * 3 + c;
  return static_cast<std::uint32_t>(destination) * kCodeCombinations + code;
}

AgentState AgentState::from_index(std::uint32_t index) {
  AgentState s;
  s.destination = static_cast<int>(index / kCodeCombinations);
  std::uint32_t code = index % kCodeCombinations;
  for (int i = kIslSlots - 1; i >= 0; --i) {
    s.codes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(code % 3);
    code /= 3;
  }
  return s;
}

AgentState encode_state(int destination, std::span<const NeighborObservation, kIslSlots> neighbors,
                        double queue_threshold_packets, double capacity_threshold_bps) {
  AgentState s;
  s.destination = destination;
  for (std::size_t i = 0; i < kIslSlots; ++i) {
    const auto& n = neighbors[i];
    if (!n.link_available || !(n.rate_bps > 0.0) || n.occupancy >= queue_threshold_packets) {
      s.codes[i] = 2;
    } else {
      s.codes[i] = n.rate_bps >= capacity_threshold_bps ? 0 : 1;
    }
  }
  return s;
}

QTable::QTable(int owner, int num_destinations, double initial)
    : owner_(owner), num_destinations_(num_destinations) {
  const auto n = static_cast<std::size_t>(num_destinations) * kCodeCombinations;
  std::array<double, kActions> init;
  init.fill(initial);
  values_.assign(n, init);
  written_.assign(n, 0);
}

double QTable::value(std::uint32_t state, int action) const {
  return values_.at(state).at(static_cast<std::size_t>(action));
}

void QTable::set(std::uint32_t state, int action, double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite Q value");
  values_.at(state).at(static_cast<std::size_t>(action)) = v;
  if (!written_[state]) {
    written_[state] = 1;
  }
  ++touched_;
}

std::span<const double, kActions> QTable::row(std::uint32_t state) const {
  return std::span<const double, kActions>(values_.at(state));
}

bool QTable::visited(std::uint32_t state) const { return written_.at(state) != 0; }

double QTable::max_value(std::uint32_t state, const ActionMask& mask, double fallback) const {
  const auto& r = values_.at(state);
  bool any = false;
  double best = fallback;
  for (int a = 0; a < kActions; ++a) {
    if (!mask[static_cast<std::size_t>(a)]) continue;
    if (!any || r[static_cast<std::size_t>(a)] > best) best = r[static_cast<std::size_t>(a)];
    any = true;
  }
  return any ? best : fallback;
}

Action select_action(const QTable& table, const AgentState& state, const ActionMask& feasible,
                     double epsilon, Rng& rng) {
  int count = 0;
  for (bool f : feasible) count += f ? 1 : 0;
  if (count == 0) throw IsolatedNode("no feasible action");
  if (epsilon > 0.0 && rng.uniform() < epsilon) {
    auto pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(count)));
    for (int a = 0; a < kActions; ++a) {
      if (feasible[static_cast<std::size_t>(a)] && pick-- == 0) return static_cast<Action>(a);
    }
  }
  const auto row = table.row(state.index());
  int best = -1;
  for (int a = 0; a < kActions; ++a) {
    if (!feasible[static_cast<std::size_t>(a)]) continue;
    if (best < 0 || row[static_cast<std::size_t>(a)] > row[static_cast<std::size_t>(best)]) best = a;
  }
  return static_cast<Action>(best);
}

RewardCase reward_case(const RewardInputs& in) {
  if (in.next_serves_destination) return RewardCase::Delivery;
  if (in.next_visited) return RewardCase::Loop;
  return RewardCase::Shaped;
}

double compute_reward(const RewardInputs& in, const QLearningParams& p) {
  switch (reward_case(in)) {
    case RewardCase::Delivery: return p.reward_delivery;
    case RewardCase::Loop: return p.reward_loop;
    case RewardCase::Shaped: break;
  }
  const double r_queue = p.w_queue * (1.0 - std::pow(10.0, in.next_queue_delay_s));
  const double r_dist = p.w_dist * (in.dist_agent_dst_km - in.dist_next_dst_km + in.dist_src_dst_km) /
                        in.dist_src_dst_km;
  return r_queue + r_dist;
}

double update_q(QTable& table, std::uint32_t state, int action, double reward, double feedback,
                double alpha, double gamma) {
  const double v = (1.0 - alpha) * table.value(state, action) + alpha * (reward + gamma * feedback);
  table.set(state, action, v);
  return v;
}

double decay_epsilon(std::uint64_t step, const QLearningParams& p) {
  return std::max(p.epsilon_min, p.epsilon_start * std::exp(-static_cast<double>(step) / p.epsilon_decay));
}

QRouter::QRouter(QLearningParams params, int num_satellites, int num_gateways,
                 double queue_capacity_packets, double capacity_threshold_bps)
    : params_(params) {
  params_.validate();
  queue_threshold_ = params_.queue_threshold_packets > 0.0 ? params_.queue_threshold_packets
                                                            : queue_capacity_packets / 4.0;
  capacity_threshold_ = params_.capacity_threshold_bps > 0.0 ? params_.capacity_threshold_bps
                                                              : capacity_threshold_bps;
  tables_.reserve(static_cast<std::size_t>(num_satellites));
  rngs_.reserve(static_cast<std::size_t>(num_satellites));
  for (int s = 0; s < num_satellites; ++s) {
    tables_.emplace_back(s, num_gateways, params_.initial_q);
    rngs_.push_back(Rng::derive(params_.seed, kAgentStreamBase + static_cast<std::uint64_t>(s)));
  }
  decisions_.assign(static_cast<std::size_t>(num_satellites), 0);
}

std::array<NeighborObservation, kIslSlots> QRouter::observe(const RoutingContext& ctx, int sat) const {
  std::array<NeighborObservation, kIslSlots> obs{};
  const auto& slots = ctx.net.edges.neighbors[static_cast<std::size_t>(sat)];
  for (std::size_t s = 0; s < kIslSlots; ++s) {
    const int nb = slots[s];
    if (nb == kNone) continue;
    obs[s].rate_bps = ctx.net.isl_rate_bps[static_cast<std::size_t>(sat)][s];
    obs[s].link_available = obs[s].rate_bps > 0.0;
    obs[s].occupancy = ctx.occupancy(nb);
  }
  return obs;
}

ActionMask QRouter::feasible_actions(const RoutingContext& ctx, int sat, int destination) const {
  ActionMask mask{};
  const auto& slots = ctx.net.edges.neighbors[static_cast<std::size_t>(sat)];
  for (std::size_t s = 0; s < kIslSlots; ++s) {
    mask[s] = slots[s] != kNone && ctx.net.isl_rate_bps[static_cast<std::size_t>(sat)][s] > 0.0;
  }
  mask[static_cast<std::size_t>(Action::Deliver)] = ctx.net.edges.serves(sat, destination);
  return mask;
}

int QRouter::next_hop(const RoutingContext& ctx, int sat, Packet& packet) {
  const auto obs = observe(ctx, sat);
  const AgentState state = encode_state(packet.destination, obs, queue_threshold_, capacity_threshold_);
  const ActionMask mask = feasible_actions(ctx, sat, packet.destination);
  if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) return kNone;

  auto& steps = decisions_[static_cast<std::size_t>(sat)];
  const double eps = decay_epsilon(steps, params_);
  ++steps;
  const Action a = select_action(tables_[static_cast<std::size_t>(sat)], state, mask, eps,
                                 rngs_[static_cast<std::size_t>(sat)]);
  const int dst_node = ctx.net.gateway_node(packet.destination);
  if (a == Action::Deliver) return dst_node;

  const int next = ctx.net.edges.neighbors[static_cast<std::size_t>(sat)][static_cast<std::size_t>(a)];
  const EcefVector dst_pos = ctx.net.position(dst_node);
  DecisionTag& tag = packet.tag;
  tag.agent = sat;
  tag.state = state.index();
  tag.action = static_cast<int>(a);
  tag.loop = packet.visited_contains(next);
  tag.dist_agent_dst_km = slant_range(ctx.net.position(sat), dst_pos);
  tag.dist_next_dst_km = slant_range(ctx.net.position(next), dst_pos);
  tag.dist_src_dst_km = slant_range(ctx.net.position(ctx.net.gateway_node(packet.source)), dst_pos);
  return next;
}

std::optional<FeedbackMessage> QRouter::on_reception(const RoutingContext& ctx, int from, int to,
                                                     const Packet& packet) {
  if (packet.tag.agent != from) return std::nullopt;
  FeedbackMessage msg;
  msg.queue_delay_s = ctx.queue_delay(to);
  msg.next_serves_destination = ctx.net.edges.serves(to, packet.destination);
  if (!msg.next_serves_destination) {
    const auto obs = observe(ctx, to);
    const AgentState next_state = encode_state(packet.destination, obs, queue_threshold_, capacity_threshold_);
    msg.next_value = tables_[static_cast<std::size_t>(to)].max_value(
        next_state.index(), feasible_actions(ctx, to, packet.destination), 0.0);
  }
  return msg;
}

void QRouter::on_feedback(const DecisionTag& tag, const FeedbackMessage& msg) {
  if (tag.agent < 0) return;
  RewardInputs in;
  in.next_serves_destination = msg.next_serves_destination;
  in.next_visited = tag.loop;
  in.next_queue_delay_s = msg.queue_delay_s;
  in.dist_agent_dst_km = tag.dist_agent_dst_km;
  in.dist_next_dst_km = tag.dist_next_dst_km;
  in.dist_src_dst_km = tag.dist_src_dst_km;
  const double r = compute_reward(in, params_);
  update_q(tables_[static_cast<std::size_t>(tag.agent)], tag.state, tag.action, r, msg.next_value,
           params_.alpha, params_.gamma);
  ++updates_;
}

void QRouter::dump_tables(std::ostream& out) const {
  out << "{\"satellites\":[";
  for (std::size_t s = 0; s < tables_.size(); ++s) {
    const auto& t = tables_[s];
    out << (s ? "," : "") << "{\"id\":" << s << ",\"decisions\":" << decisions_[s] << ",\"states\":[";
    bool first = true;
    for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(t.num_destinations()) * kCodeCombinations; ++i) {
      if (!t.visited(i)) continue;
      const AgentState st = AgentState::from_index(i);
      out << (first ? "" : ",") << "{\"destination\":" << st.destination << ",\"codes\":[";
      for (int c = 0; c < kIslSlots; ++c) out << (c ? "," : "") << int(st.codes[static_cast<std::size_t>(c)]);
      out << "],\"q\":[";
      const auto row = t.row(i);
      for (int a = 0; a < kActions; ++a) out << (a ? "," : "") << row[static_cast<std::size_t>(a)];
      out << "]}";
      first = false;
    }
    out << "]}";
  }
  out << "]}\n";
}

}  // namespace leosim
