#include <array>
#include <cmath>

#include "doctest.h"

#include "leosim/config.hpp"
#include "leosim/errors.hpp"
#include "leosim/qrouting.hpp"

using namespace leosim;

namespace {

const McsTable kMcs = default_mcs_table();
const double kTop = 500e6 * kMcs.entries().back().spectral_efficiency;
const double kLow = 500e6 * kMcs.entries().front().spectral_efficiency;
const double kThreshold = 500e6 * kMcs.median_efficiency();

NeighborObservation link(int occ, double rate) { return {true, occ, rate}; }

}  // namespace

TEST_CASE("state encoding") {
  std::array<NeighborObservation, kIslSlots> obs{link(0, kTop), link(0, kLow), NeighborObservation{}, link(30, kTop)};
  const AgentState s = encode_state(3, obs, 25.0, kThreshold);
  CHECK(s.destination == 3);
  CHECK(s.codes[0] == 0);  // empty queue, high rate
  CHECK(s.codes[1] == 1);  // empty queue, low rate
  CHECK(s.codes[2] == 2);  // missing link
  CHECK(s.codes[3] == 2);  // long queue
  obs[3].occupancy = 24;
  CHECK(encode_state(3, obs, 25.0, kThreshold).codes[3] == 0);
}

TEST_CASE("state index round trip") {
  for (int d = 0; d < 4; ++d) {
    for (std::uint32_t code = 0; code < kCodeCombinations; ++code) {
      const std::uint32_t idx = static_cast<std::uint32_t>(d) * kCodeCombinations + code;
      const AgentState s = AgentState::from_index(idx);
      CHECK(s.destination == d);
      CHECK(s.index() == idx);
      for (auto c : s.codes) CHECK(c <= 2);
    }
  }
}

TEST_CASE("epsilon-greedy selection") {
  QTable t(0, 2);
  const AgentState s{1, {0, 0, 0, 0}};
  ActionMask all{true, true, true, true, false};
  Rng rng(5);

  // epsilon = 1: uniform over the four feasible actions (chi-square, 3 dof).
  std::array<int, kActions> counts{};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[static_cast<int>(select_action(t, s, all, 1.0, rng))];
  CHECK(counts[4] == 0);
  double chi2 = 0;
  for (int a = 0; a < 4; ++a) chi2 += std::pow(counts[a] - draws / 4.0, 2) / (draws / 4.0);
  CHECK(chi2 < 16.27);  // p = 0.001

  t.set(s.index(), 2, 5.0);
  for (int i = 0; i < 100; ++i) CHECK(select_action(t, s, all, 0.0, rng) == Action::InterLeft);

  // Masked action is never chosen even with the top value.
  ActionMask no_left = all;
  no_left[2] = false;
  for (int i = 0; i < 1000; ++i) CHECK(select_action(t, s, no_left, i % 2 ? 0.0 : 1.0, rng) != Action::InterLeft);

  // Ties go to the lowest index.
  QTable flat(0, 2);
  CHECK(select_action(flat, s, all, 0.0, rng) == Action::IntraFront);

  ActionMask none{};
  CHECK_THROWS_AS(select_action(t, s, none, 0.0, rng), IsolatedNode);
  CHECK(t.max_value(s.index(), no_left) == 0.0);
  CHECK(t.max_value(s.index(), all) == 5.0);
  CHECK(t.max_value(s.index(), none, -7.0) == -7.0);
}

TEST_CASE("reward cases") {
  QLearningParams p;
  p.w_queue = 2.0;
  p.w_dist = 3.0;
  RewardInputs in;
  in.dist_agent_dst_km = 1000;
  in.dist_next_dst_km = 1000;
  in.dist_src_dst_km = 4000;
  CHECK(reward_case(in) == RewardCase::Shaped);
  CHECK(compute_reward(in, p) == doctest::Approx(p.w_dist));

  in.next_queue_delay_s = 1.0;
  CHECK(compute_reward(in, p) == doctest::Approx(-9 * p.w_queue + p.w_dist));

  in.next_queue_delay_s = 0.0;
  in.dist_next_dst_km = 500;
  CHECK(compute_reward(in, p) == doctest::Approx(p.w_dist * (1000 - 500 + 4000) / 4000.0));

  in.next_visited = true;
  CHECK(reward_case(in) == RewardCase::Loop);
  CHECK(compute_reward(in, p) == p.reward_loop);
  in.next_serves_destination = true;
  CHECK(reward_case(in) == RewardCase::Delivery);
  CHECK(compute_reward(in, p) == p.reward_delivery);
}

TEST_CASE("Q update") {
  QTable t(0, 1);
  CHECK(update_q(t, 0, 1, 4.0, 100.0, 1.0, 0.0) == 4.0);
  CHECK(t.value(0, 1) == 4.0);
  CHECK(update_q(t, 0, 1, 99.0, 99.0, 0.0, 0.9) == 4.0);
  CHECK(update_q(t, 0, 1, 2.0, 3.0, 0.5, 0.5) == doctest::Approx(0.5 * 4.0 + 0.5 * (2.0 + 1.5)));
  CHECK_THROWS(t.set(0, 1, std::nan("")));
}

TEST_CASE("Q update fixed point with self feedback") {
  QTable t(0, 1);
  const double r = 1.7, alpha = 0.1, gamma = 0.9, target = r / (1 - gamma);
  // The error contracts by exactly 1 - alpha (1 - gamma) per step.
  const double rate = 1 - alpha * (1 - gamma);
  int it = 0;
  for (; it < 5000 && std::abs(t.value(0, 0) - target) >= 1e-6; ++it) {
    const double before = t.value(0, 0);
    update_q(t, 0, 0, r, before, alpha, gamma);
    CHECK(target - t.value(0, 0) == doctest::Approx(rate * (target - before)).epsilon(1e-9));
  }
  CHECK(std::abs(t.value(0, 0) - target) < 1e-6);
  CHECK(it == static_cast<int>(std::ceil(std::log(1e-6 / target) / std::log(rate))));
}

TEST_CASE("epsilon decay") {
  QLearningParams p;
  p.epsilon_start = 0.8;
  p.epsilon_min = 0.02;
  p.epsilon_decay = 300;
  CHECK(decay_epsilon(0, p) == 0.8);
  CHECK(decay_epsilon(300, p) == doctest::Approx(0.8 / std::exp(1.0)));
  CHECK(decay_epsilon(1000000, p) == 0.02);
  p.epsilon_min = 0.5;
  CHECK(decay_epsilon(300, p) == 0.5);
}

TEST_CASE("parameter validation") {
  QLearningParams p;
  CHECK_NOTHROW(p.validate());
  p.alpha = 1.5;
  CHECK_THROWS(p.validate());
  p = {};
  p.gamma = 1.0;
  CHECK_THROWS(p.validate());
  p = {};
  p.epsilon_decay = 0.0;
  CHECK_THROWS(p.validate());
}
