#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "leosim/rng.hpp"

namespace leosim {

struct TrafficConfig {
  double load = 0.85;            // fraction of the maximum supported load
  double packet_bits = 64800.0;  // block size B
  std::uint64_t seed = 1;
  /// Replaces the GSL-derived maximum load when set.
  std::optional<double> max_load_override_bps;
  /// Caps every GSL rate before the maximum load is derived, so λ* becomes
  /// |G| * min(cap, tightest GSL) and the per-gateway share stays fixed in |G|.
  std::optional<double> gateway_cap_bps;

  void validate() const;
};

struct GslRates {
  double uplink_bps = 0.0;
  double downlink_bps = 0.0;
};

struct FlowRates {
  std::vector<double> uplink_bps;
  std::vector<double> downlink_bps;
  double max_load_bps = 0.0;

  std::size_t num_gateways() const { return uplink_bps.size(); }
};

/// |G| * min over gateways of min(UL, DL): the largest aggregate rate for which
/// an equal split at full load oversubscribes no GSL. Throws InfeasibleScenario
/// on any zero-rate GSL or fewer than two gateways.
double max_supported_load(std::span<const GslRates> gsl_rates);

/// Equal uplink share per gateway; downlink follows from the even destination split.
FlowRates balance_flows(double max_load_bps, double load, std::size_t num_gateways);

struct Arrival {
  double time_s = 0.0;
  int source = 0;
  int destination = 0;

  friend bool operator==(const Arrival&, const Arrival&) = default;
};

/// Lazily merges one Poisson block process per source gateway. Destinations
/// are uniform over the other gateways.
class ArrivalStream {
 public:
  ArrivalStream(const FlowRates& rates, double packet_bits, double horizon_s, std::uint64_t seed);

  std::optional<Arrival> next();

 private:
  struct Pending {
    double time_s;
    int source;
    bool operator>(const Pending& o) const {
      return time_s != o.time_s ? time_s > o.time_s : source > o.source;
    }
  };

  void schedule(int source, double from_s);

  std::vector<double> block_rate_;
  std::vector<Rng> source_rng_;
  double horizon_s_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> pending_;
};

std::vector<Arrival> generate_arrivals(const FlowRates& rates, double packet_bits,
                                       double horizon_s, std::uint64_t seed);

}  // namespace leosim
