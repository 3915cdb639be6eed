#include "leosim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "leosim/errors.hpp"

namespace leosim {

void TrafficConfig::validate() const {
  if (!(load >= 0.0) || !std::isfinite(load)) throw std::invalid_argument("traffic load must be >= 0");
  if (!(packet_bits > 0.0)) throw std::invalid_argument("packet size must be > 0");
  if (max_load_override_bps && !(*max_load_override_bps > 0.0)) {
    throw std::invalid_argument("max load override must be > 0");
  }
  if (gateway_cap_bps && !(*gateway_cap_bps > 0.0)) throw std::invalid_argument("gateway cap must be > 0");
}

double max_supported_load(std::span<const GslRates> gsl_rates) {
  if (gsl_rates.size() < 2) throw InfeasibleScenario("at least two gateways are required");
  double tightest = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < gsl_rates.size(); ++g) {
    const auto& r = gsl_rates[g];
    if (!(r.uplink_bps > 0.0) || !(r.downlink_bps > 0.0)) {
      throw InfeasibleScenario("gateway " + std::to_string(g) + " has a zero-rate GSL");
    }
    tightest = std::min({tightest, r.uplink_bps, r.downlink_bps});
  }
  return static_cast<double>(gsl_rates.size()) * tightest;
}

FlowRates balance_flows(double max_load_bps, double load, std::size_t num_gateways) {
  if (num_gateways < 2) throw InfeasibleScenario("at least two gateways are required");
  FlowRates rates;
  rates.max_load_bps = max_load_bps;
  const double total = load * max_load_bps;
  const double uplink = total / static_cast<double>(num_gateways);
  rates.uplink_bps.assign(num_gateways, uplink);
  rates.downlink_bps.assign(num_gateways,
                            (total - uplink) / static_cast<double>(num_gateways - 1));
  return rates;
}

ArrivalStream::ArrivalStream(const FlowRates& rates, double packet_bits, double horizon_s,
                             std::uint64_t seed)
    : horizon_s_(horizon_s) {
  if (!(packet_bits > 0.0)) throw std::invalid_argument("packet size must be > 0");
  const std::size_t n = rates.num_gateways();
  block_rate_.resize(n);
  source_rng_.reserve(n);
  for (std::size_t g = 0; g < n; ++g) {
    block_rate_[g] = rates.uplink_bps[g] / packet_bits;
    source_rng_.push_back(Rng::derive(seed, g));
  }
  if (n < 2) return;
  for (std::size_t g = 0; g < n; ++g) schedule(static_cast<int>(g), 0.0);
}

void ArrivalStream::schedule(int source, double from_s) {
  const auto g = static_cast<std::size_t>(source);
  if (!(block_rate_[g] > 0.0)) return;
  const double t = from_s + source_rng_[g].exponential(block_rate_[g]);
  if (t < horizon_s_) pending_.push({t, source});
}

std::optional<Arrival> ArrivalStream::next() {
  if (pending_.empty()) return std::nullopt;
  const Pending p = pending_.top();
  pending_.pop();
  auto& rng = source_rng_[static_cast<std::size_t>(p.source)];
  const auto others = static_cast<std::uint64_t>(block_rate_.size() - 1);
  int dst = static_cast<int>(rng.below(others));
  if (dst >= p.source) ++dst;
  schedule(p.source, p.time_s);
  return Arrival{p.time_s, p.source, dst};
}

std::vector<Arrival> generate_arrivals(const FlowRates& rates, double packet_bits,
                                       double horizon_s, std::uint64_t seed) {
  std::vector<Arrival> out;
  ArrivalStream stream(rates, packet_bits, horizon_s, seed);
  while (auto a = stream.next()) out.push_back(*a);
  return out;
}

}  // namespace leosim
