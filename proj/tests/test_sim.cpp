#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "leosim/config.hpp"
#include "leosim/qrouting.hpp"
#include "leosim/routers_baseline.hpp"
#include "leosim/simcore.hpp"

using namespace leosim;

TEST_CASE("TxQueue capacity, FIFO and queue delay") {
  TxQueue q(2);
  CHECK(q.queue_delay(0.0) == 0.0);
  CHECK(q.enqueue({1, 10, 64.8e-6}) == EnqueueResult::Accepted);
  CHECK(q.enqueue({2, 11, 1e-3}) == EnqueueResult::Accepted);
  CHECK(q.enqueue({3, 10, 1e-6}) == EnqueueResult::Dropped);
  CHECK(q.occupancy() == 2);
  CHECK(q.queue_delay(0.0) == doctest::Approx(64.8e-6 + 1e-3));
  CHECK(q.pop_front().slot == 1);
  CHECK(q.pop_front().slot == 2);
  CHECK(q.empty());

  TxQueue three(100);
  const double tx = 64800.0 / 1e9;
  for (std::uint32_t i = 0; i < 3; ++i) three.enqueue({i, 5, tx});
  CHECK(three.queue_delay(0.0) == doctest::Approx(194.4e-6));
  three.start_transmission(1.0);
  CHECK(three.queue_delay(0.25) == doctest::Approx(0.75 + 194.4e-6));
  CHECK(three.queue_delay(2.0) == doctest::Approx(194.4e-6));
}

namespace {

Scenario base(int gateways, double horizon) {
  Scenario s = default_config().cell(gateways, 1);
  s.sim.horizon_s = horizon;
  return s;
}

}  // namespace

TEST_CASE("zero offered load") {
  Scenario s = base(3, 2.0);
  s.traffic.load = 0.0;
  DataRateRouter r;
  const SimReport rep = run(s, r);
  CHECK(rep.counters.generated == 0);
  CHECK(rep.counters.delivered == 0);
  CHECK(rep.counters.dropped == 0);
  CHECK(rep.counters.in_flight == 0);
  CHECK(rep.records.empty());
}

TEST_CASE("single packet between gateways under one satellite") {
  Scenario s = base(2, 0.9);
  s.gateways = {{"A", {36.72, -4.42}}, {"B", {37.39, -5.98}}};
  s.traffic.max_load_override_bps = 1e5;  // a handful of blocks at most
  const NetworkSnapshot net = s.snapshot(0.0);
  REQUIRE(net.edges.serving_satellite[0] == net.edges.serving_satellite[1]);
  const int sat = net.edges.serving_satellite[0];

  SimReport rep;
  std::uint64_t seed = 1;
  for (; seed < 200; ++seed) {
    s.traffic.seed = seed;
    DataRateRouter r;
    rep = run(s, r);
    if (rep.counters.generated == 1) break;
  }
  REQUIRE(rep.counters.generated == 1);
  REQUIRE(rep.records.size() == 1);
  const PacketRecord& p = rep.records[0];
  CHECK(p.hops == 2);
  CHECK_FALSE(p.dropped);

  const int src = p.source, dst = p.destination;
  const Vec3 gs = net.gateway_pos[src], gd = net.gateway_pos[dst], sp = net.satellite_pos[sat];
  const double c = kSpeedOfLight;
  const double ul = link_rate(LinkClass::Uplink, s.link, s.mcs, slant_range(gs, sp));
  const double dl = link_rate(LinkClass::Downlink, s.link, s.mcs, slant_range(sp, gd));
  const double expected = 64800.0 / ul + slant_range(gs, sp) * 1e3 / c + 64800.0 / dl + slant_range(sp, gd) * 1e3 / c;
  CHECK(p.queue_s == 0.0);
  CHECK(p.latency_s() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(p.tx_s + p.prop_s == doctest::Approx(expected).epsilon(1e-12));
}

namespace {

struct Audit : SimObserver {
  std::vector<SimCounters> snaps;
  std::size_t hops = 0;
  void on_snapshot(double, const SimCounters& c) override { snaps.push_back(c); }
  void on_hop(const HopRecord&) override { ++hops; }
};

}  // namespace

TEST_CASE("conservation at every snapshot for every router") {
  Scenario s = base(4, 3.0);
  s.traffic.gateway_cap_bps = 0.3e9;
  DataRateRouter dr;
  LatencyGenieRouter genie;
  QRouter q({}, s.constellation.total(), 4, s.sim.queue_capacity, s.link.bandwidth_hz * s.mcs.median_efficiency());
  for (Router* r : std::initializer_list<Router*>{&dr, &genie, &q}) {
    Audit audit;
    RunOptions o;
    o.keep_records = false;
    o.observer = &audit;
    const SimReport rep = run(s, *r, o);
    CHECK(rep.counters.conserved());
    CHECK(audit.snaps.size() >= 30);
    for (const auto& c : audit.snaps) CHECK(c.conserved());
    CHECK(rep.counters.generated > 0);
    CHECK(audit.hops > rep.counters.delivered);
  }
}

TEST_CASE("packet CSV is deterministic") {
  Scenario s = base(3, 1.5);
  s.traffic.gateway_cap_bps = 0.2e9;
  auto once = [&](Router& r) {
    std::ostringstream out;
    PacketCsvSink sink(out);
    RunOptions o;
    o.keep_records = false;
    o.observer = &sink;
    run(s, r, o);
    return out.str();
  };
  DataRateRouter a, b;
  const std::string first = once(a);
  CHECK(first.rfind(std::string(kPacketCsvHeader), 0) == 0);
  CHECK(first == once(b));
  QRouter qa({}, s.constellation.total(), 3, 100, 1e9), qb({}, s.constellation.total(), 3, 100, 1e9);
  CHECK(once(qa) == once(qb));
}

TEST_CASE("overload fills buffers and drops") {
  Scenario s = base(3, 1.0);
  s.traffic.gateway_cap_bps.reset();
  s.traffic.load = 1.0;
  s.sim.queue_capacity = 5;
  DataRateRouter r;
  const SimReport rep = run(s, r);
  CHECK(rep.counters.drops_by_reason[static_cast<std::size_t>(DropReason::BufferFull)] > 0);
  CHECK(rep.counters.conserved());
}
