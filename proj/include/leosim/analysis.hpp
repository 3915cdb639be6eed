#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "leosim/simcore.hpp"

namespace leosim {

struct RegressionResult {
  std::size_t n = 0;
  double beta0 = 0.0;
  double beta1 = 0.0;
  double se = 0.0;  // standard error of beta1
  double t = 0.0;   // beta1 / se; +-inf or NaN when se == 0
  bool defined = false;
};

/// OLS of y on x over the last min(window, n) points. Undefined with fewer
/// than 3 points or constant x.
RegressionResult regress(std::span<const double> x, std::span<const double> y,
                         std::size_t window = 200);

/// One-sided upper critical value t_{1-alpha, df}.
double t_critical(double df, double alpha);

enum class Decision { Stable, Unstable, Untested };
std::string_view to_string(Decision d);

/// H0: beta1 <= 0 against beta1 > 0 at level `alpha`.
Decision stability_test(const RegressionResult& r, double alpha = 0.05);

/// Delivered-packet latency series of one directed gateway pair.
struct RouteSeries {
  int src = 0;
  int dst = 0;
  std::vector<double> index;       // X: delivery order within the route, from 1
  std::vector<double> latency_ms;  // Y
  std::vector<double> created_s;

  std::size_t size() const { return index.size(); }
};

struct StabilityRow {
  int src = 0;
  int dst = 0;
  RegressionResult regression;
  Decision decision = Decision::Untested;
};

struct LatencyDecomposition {
  std::uint64_t delivered = 0;
  double mean_queue_ms = 0.0;
  double mean_tx_ms = 0.0;
  double mean_prop_ms = 0.0;
  double mean_total_ms = 0.0;
};

struct TimeseriesPoint {
  double sim_time_s = 0.0;  // bin start, by creation time
  double e2e_ms = 0.0;
  std::uint64_t count = 0;
};

/// Streams per-packet outcomes into per-route series, latency sums and a
/// binned time series. Keeps only the last `window` points per route unless
/// `keep_full` is set. Packets created before `series_start_s` count towards
/// the means and the time series but not the route series.
class RouteCollector : public SimObserver {
 public:
  RouteCollector(int num_gateways, std::size_t window = 200, bool keep_full = false,
                 double bin_s = 0.05, double series_start_s = 0.0);

  void on_packet_done(const PacketRecord& r) override;

  int num_gateways() const { return num_gateways_; }
  const RouteSeries& route(int src, int dst) const;
  std::uint64_t delivered_on(int src, int dst) const;
  LatencyDecomposition latency() const;
  std::vector<TimeseriesPoint> timeseries() const;
  std::vector<StabilityRow> stability(double alpha = 0.05) const;
  std::uint64_t dropped() const { return dropped_; }

 private:
  std::size_t key(int src, int dst) const {
    return static_cast<std::size_t>(src) * static_cast<std::size_t>(num_gateways_) +
           static_cast<std::size_t>(dst);
  }

  int num_gateways_;
  std::size_t window_;
  bool keep_full_;
  double bin_s_;
  double series_start_s_;
  std::vector<RouteSeries> routes_;
  std::vector<std::uint64_t> counts_;
  double sum_queue_ = 0.0, sum_tx_ = 0.0, sum_prop_ = 0.0, sum_total_ = 0.0;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
  std::vector<double> bin_sum_;
  std::vector<std::uint64_t> bin_count_;
};

struct StabilitySummary {
  std::size_t tested = 0;
  std::size_t unstable = 0;
  std::size_t untested = 0;
  /// unstable / tested; 0 when nothing was tested.
  double ratio() const { return tested == 0 ? 0.0 : static_cast<double>(unstable) / static_cast<double>(tested); }
};

StabilitySummary summarize(std::span<const StabilityRow> rows);

inline constexpr std::string_view kStabilityCsvHeader = "src,dst,n,beta1,se,t,decision";
inline constexpr std::string_view kLatencyCsvHeader =
    "num_gateways,router,mean_queue_ms,mean_tx_ms,mean_prop_ms";
inline constexpr std::string_view kTimeseriesCsvHeader = "router,num_gateways,sim_time_s,e2e_ms";

void write_stability_csv(std::ostream& out, std::span<const StabilityRow> rows);
void write_latency_csv_header(std::ostream& out);
void write_latency_csv_row(std::ostream& out, int num_gateways, std::string_view router,
                           const LatencyDecomposition& d);
void write_timeseries_csv_header(std::ostream& out);
void write_timeseries_csv_rows(std::ostream& out, std::string_view router, int num_gateways,
                               std::span<const TimeseriesPoint> points);

/// Shortest round-trip decimal form; NaN becomes an empty field.
void write_double(std::ostream& out, double v);

}  // namespace leosim
