#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"

#include "leosim/config.hpp"
#include "leosim/errors.hpp"
#include "leosim/linkbudget.hpp"

using namespace leosim;

TEST_CASE("dish gain from eta (pi D / lambda)^2") {
  const double lambda = kSpeedOfLight / 26e9;
  const double oracle = 0.6 * std::pow(std::numbers::pi * 0.26 / lambda, 2);
  CHECK(antenna_gain(0.26, 26e9, 0.6) == doctest::Approx(oracle));
  CHECK(to_db(antenna_gain(0.26, 26e9, 0.6)) == doctest::Approx(34.8).epsilon(2e-3));
}

TEST_CASE("free-space path loss") {
  const double oracle_db = 20 * std::log10(4 * std::numbers::pi * 2181e3 * 26e9 / kSpeedOfLight);
  CHECK(to_db(free_space_path_loss(2181.0, 26e9)) == doctest::Approx(oracle_db));
  CHECK(oracle_db == doctest::Approx(187.5).epsilon(1e-3));
}

TEST_CASE("doubling distance costs 6.02 dB") {
  const LinkBudgetParams p;
  for (auto cls : {LinkClass::Uplink, LinkClass::Downlink, LinkClass::Isl}) {
    const double r1 = received_power(cls, p, 1000.0), r2 = received_power(cls, p, 2000.0);
    CHECK(to_db(r1) - to_db(r2) == doctest::Approx(20 * std::log10(2.0)));
    CHECK(snr_db(cls, p, 1000.0) - snr_db(cls, p, 2000.0) == doctest::Approx(6.0206).epsilon(1e-4));
  }
  CHECK_THROWS_AS(received_power(LinkClass::Isl, p, 0.0), std::domain_error);
}

TEST_CASE("received power and SNR match a direct evaluation") {
  const LinkBudgetParams p;
  const double d = 1234.5;
  const double gt = antenna_gain(p.satellite.dish_diameter_m, p.isl_freq_hz, 0.6);
  const double lam = kSpeedOfLight / p.isl_freq_hz;
  const double pr = p.satellite.tx_power_w * gt * gt * std::pow(lam / (4 * std::numbers::pi * d * 1e3), 2);
  CHECK(received_power(LinkClass::Isl, p, d) == doctest::Approx(pr));
  const double noise = kBoltzmann * 290.0 * 500e6;
  CHECK(snr_db(LinkClass::Isl, p, d) == doctest::Approx(10 * std::log10(pr / noise)));
}

namespace {

std::optional<std::size_t> scan(const McsTable& t, double snr) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.entries()[i].snr_min_db <= snr) best = i;
  }
  return best;
}

}  // namespace

TEST_CASE("MODCOD selection") {
  const McsTable t = default_mcs_table();
  REQUIRE(t.size() == 22);
  const auto e = t.entries();
  CHECK(t.select(e.back().snr_min_db) == t.size() - 1);
  CHECK_FALSE(t.select(e.front().snr_min_db - 0.01).has_value());
  CHECK(t.select(e.front().snr_min_db) == 0);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double mid = 0.5 * (e[k].snr_min_db + e[k + 1].snr_min_db);
    CHECK(t.select(mid) == k);
  }
  for (double snr = -5.0; snr < 20.0; snr += 0.037) CHECK(t.select(snr) == scan(t, snr));
}

TEST_CASE("MODCOD table validation and parsing") {
  CHECK_THROWS_AS(McsTable(std::vector<McsEntry>{}), std::invalid_argument);
  CHECK_THROWS_AS(McsTable({{1.0, 2.0}, {0.5, 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(McsTable({{1.0, 2.0}, {1.5, 1.0}}), std::invalid_argument);
  std::istringstream in("# rho, snr\n0.5, -1.0\n1.0, 2.5\n\n1.5, 4\n");
  const McsTable t = McsTable::parse(in);
  REQUIRE(t.size() == 3);
  CHECK(t.entries()[1].spectral_efficiency == 1.0);
  CHECK(t.median_efficiency() == 1.0);
}

TEST_CASE("link rate is W rho or zero") {
  const LinkBudgetParams p;
  const McsTable t = default_mcs_table();
  const double d = 2181.0;
  const auto k = t.select(snr_db(LinkClass::Isl, p, d));
  REQUIRE(k.has_value());
  CHECK(link_rate(LinkClass::Isl, p, t, d) == doctest::Approx(500e6 * t.entries()[*k].spectral_efficiency));
  const double range = max_link_range_km(LinkClass::Isl, p, t);
  CHECK(link_rate(LinkClass::Isl, p, t, range * 0.999) > 0.0);
  CHECK(link_rate(LinkClass::Isl, p, t, range * 1.001) == 0.0);
}

TEST_CASE("hop latency terms") {
  const HopLatency h = hop_latency(0.0, 64800.0, 1e9, 2181.0);
  CHECK(h.tx_s == doctest::Approx(64.8e-6));
  CHECK(h.prop_s == doctest::Approx(2181e3 / kSpeedOfLight));
  CHECK(h.prop_s == doctest::Approx(7.27e-3).epsilon(1e-3));
  CHECK(h.queue_s == 0.0);
  CHECK(h.total() == doctest::Approx(h.tx_s + h.prop_s));
  CHECK_THROWS_AS(hop_latency(0.0, 64800.0, 0.0, 10.0), InfeasibleLink);
}

TEST_CASE("transmission time bound of the shipped table") {
  const McsTable t = default_mcs_table();
  const double slowest = 500e6 * t.entries().front().spectral_efficiency;
  CHECK(64800.0 / slowest <= 0.72e-3);
}
