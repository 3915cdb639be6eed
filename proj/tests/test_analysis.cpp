#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "leosim/analysis.hpp"
#include "leosim/rng.hpp"

using namespace leosim;

namespace {

struct TextbookOls {
  double b0, b1, se;
};

TextbookOls textbook(const std::vector<double>& x, const std::vector<double>& y) {
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const long double n = static_cast<long double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double b1 = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const long double b0 = (sy - b1 * sx) / n;
  long double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double e = y[i] - (b0 + b1 * x[i]);
    sse += e * e;
  }
  const long double var_x = sxx - sx * sx / n;
  return {static_cast<double>(b0), static_cast<double>(b1), static_cast<double>(std::sqrt(sse / (n - 2) / var_x))};
}

std::vector<double> iota(std::size_t n, double from = 1.0) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = from + static_cast<double>(i);
  return v;
}

}  // namespace

TEST_CASE("regression edge cases") {
  const auto x = iota(50);
  const std::vector<double> flat(50, 47.123456789);
  const auto r = regress(x, flat);
  CHECK(r.defined);
  CHECK(r.beta1 == 0.0);
  CHECK(r.se == 0.0);
  CHECK(stability_test(r) == Decision::Stable);

  std::vector<double> line(50);
  for (std::size_t i = 0; i < 50; ++i) line[i] = 2.0 * x[i];
  const auto l = regress(x, line);
  CHECK(l.beta1 == doctest::Approx(2.0));
  CHECK(l.se == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(stability_test(l) == Decision::Unstable);

  CHECK_FALSE(regress(iota(2), std::vector<double>{1, 2}).defined);
  CHECK(stability_test(regress(iota(2), std::vector<double>{1, 2})) == Decision::Untested);
  CHECK_THROWS(regress(iota(3), std::vector<double>{1, 2}));
}

TEST_CASE("regression matches textbook formulas and uses the last window") {
  Rng rng(9);
  std::vector<double> x = iota(500), y(500);
  for (std::size_t i = 0; i < 500; ++i) y[i] = 40.0 + 0.5 * x[i] + 3.0 * rng.normal();
  const auto r = regress(x, y, 200);
  CHECK(r.n == 200);
  const std::vector<double> xt(x.end() - 200, x.end()), yt(y.end() - 200, y.end());
  const auto t = textbook(xt, yt);
  CHECK(r.beta1 == doctest::Approx(t.b1).epsilon(1e-9));
  CHECK(r.beta0 == doctest::Approx(t.b0).epsilon(1e-9));
  CHECK(r.se == doctest::Approx(t.se).epsilon(1e-9));
  CHECK(r.t == doctest::Approx(t.b1 / t.se).epsilon(1e-9));
  CHECK(std::abs(r.beta1 - 0.5) < 3 * r.se);
}

TEST_CASE("critical values") {
  CHECK(t_critical(198, 0.05) == doctest::Approx(1.652586).epsilon(1e-5));
  CHECK(t_critical(1, 0.05) == doctest::Approx(6.313752).epsilon(1e-5));
  CHECK(t_critical(10, 0.01) == doctest::Approx(2.763769).epsilon(1e-5));
  CHECK_THROWS(t_critical(0, 0.05));
  CHECK_THROWS(t_critical(10, 1.5));
}

TEST_CASE("negative slope is stable regardless of SE") {
  RegressionResult r;
  r.defined = true;
  r.n = 200;
  r.beta1 = -1.0;
  r.se = 1e-12;
  r.t = -1e12;
  CHECK(stability_test(r) == Decision::Stable);
  r.se = 0.0;
  CHECK(stability_test(r) == Decision::Stable);
}

TEST_CASE("Monte Carlo calibration of the test size and power") {
  Rng rng(123);
  const auto x = iota(200);
  std::vector<double> y(200);
  int false_pos = 0, detected = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    for (auto& v : y) v = rng.normal();
    false_pos += stability_test(regress(x, y)) == Decision::Unstable;
    // Total rise over the window three sigma above the noise.
    for (std::size_t i = 0; i < 200; ++i) y[i] = rng.normal() + 3.0 * x[i] / 200.0;
    detected += stability_test(regress(x, y)) == Decision::Unstable;
  }
  CHECK(false_pos / 1000.0 == doctest::Approx(0.05).epsilon(0.4));
  CHECK(detected / 1000.0 >= 0.99);
}

TEST_CASE("summary ratio") {
  std::vector<StabilityRow> rows(72);
  for (auto& r : rows) r.decision = Decision::Stable;
  CHECK(summarize(rows).ratio() == 0.0);
  rows[5].decision = Decision::Unstable;
  const auto s = summarize(rows);
  CHECK(s.tested == 72);
  CHECK(s.ratio() == doctest::Approx(1.0 / 72));
  rows[6].decision = Decision::Untested;
  CHECK(summarize(rows).tested == 71);
  CHECK(summarize(rows).untested == 1);
  CHECK(StabilitySummary{}.ratio() == 0.0);
}

namespace {

PacketRecord delivered(int s, int d, double created, double q, double tx, double prop) {
  PacketRecord r;
  r.source = s;
  r.destination = d;
  r.created_s = created;
  r.queue_s = q;
  r.tx_s = tx;
  r.prop_s = prop;
  r.delivered_s = created + q + tx + prop;
  return r;
}

}  // namespace

TEST_CASE("route collector") {
  RouteCollector c(3, 4, false, 0.1, 0.5);
  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    c.on_packet_done(delivered(i % 3, (i + 1) % 3, 0.05 * i, 1e-4 * rng.uniform(), 2e-4, 0.02 + 1e-3 * rng.uniform()));
  }
  PacketRecord drop;
  drop.dropped = true;
  c.on_packet_done(drop);
  CHECK(c.dropped() == 1);

  const auto lat = c.latency();
  CHECK(lat.delivered == 40);
  CHECK(lat.mean_queue_ms + lat.mean_tx_ms + lat.mean_prop_ms == doctest::Approx(lat.mean_total_ms).epsilon(1e-12));

  // Packets before 0.5 s are excluded from the route series only.
  const auto& r = c.route(0, 1);
  CHECK(r.size() <= 7);
  for (double t : r.created_s) CHECK(t >= 0.5);
  CHECK(r.index.back() == static_cast<double>(c.delivered_on(0, 1)));

  const auto ts = c.timeseries();
  std::uint64_t n = 0;
  for (const auto& p : ts) n += p.count;
  CHECK(n == 40);
  CHECK(ts.front().sim_time_s == 0.0);

  const auto rows = c.stability();
  CHECK(rows.size() == 6);
  CHECK_THROWS(c.route(3, 0));
}

TEST_CASE("CSV schemas") {
  RouteCollector c(2, 200);
  for (int i = 0; i < 10; ++i) c.on_packet_done(delivered(0, 1, 0.0, 0.0, 1e-4, 0.03));
  std::ostringstream st;
  write_stability_csv(st, c.stability());
  std::istringstream in(st.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "src,dst,n,beta1,se,t,decision");
  std::getline(in, line);
  CHECK(line.rfind("0,1,10,", 0) == 0);
  CHECK(line.substr(line.rfind(',') + 1) == "stable");
  std::getline(in, line);
  CHECK(line == "1,0,0,,,,untested");

  std::ostringstream lat;
  write_latency_csv_header(lat);
  write_latency_csv_row(lat, 2, "datarate", c.latency());
  CHECK(lat.str().rfind("num_gateways,router,mean_queue_ms,mean_tx_ms,mean_prop_ms\n2,datarate,0,", 0) == 0);

  std::ostringstream ts;
  write_timeseries_csv_header(ts);
  write_timeseries_csv_rows(ts, "qlearn", 2, c.timeseries());
  CHECK(ts.str().rfind("router,num_gateways,sim_time_s,e2e_ms\nqlearn,2,0,", 0) == 0);
}
