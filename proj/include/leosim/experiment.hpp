#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "leosim/analysis.hpp"
#include "leosim/config.hpp"
#include "leosim/router.hpp"
#include "leosim/simcore.hpp"

namespace leosim {

inline constexpr std::string_view kRouterNames[] = {"datarate", "genie", "qlearn"};

/// Builds the named router for `scenario`; throws ConfigError on unknown names.
std::unique_ptr<Router> make_router(std::string_view name, const ExperimentConfig& cfg,
                                    const Scenario& scenario);

/// Inclusive gateway-count range parsed from "n" or "a-b" / "a..b".
struct GatewayRange {
  int first = 2;
  int last = 2;
};
GatewayRange parse_gateway_range(std::string_view text);

struct CellOptions {
  /// Root of the output tree; empty runs in memory only.
  std::string out_root;
  bool write_packets = true;
  bool dump_qtable = false;
  /// Extra observer (hop audits, conservation checks).
  SimObserver* observer = nullptr;
};

struct CellResult {
  std::string router;
  int num_gateways = 0;
  std::uint64_t seed = 0;
  std::string dir;  // empty when nothing was written
  SimCounters counters;
  std::vector<SnapshotRecord> snapshots;
  FlowRates flows;
  std::vector<StabilityRow> stability;
  StabilitySummary summary;
  LatencyDecomposition latency;
  std::vector<TimeseriesPoint> timeseries;
  std::shared_ptr<const RouteCollector> routes;
  double wall_s = 0.0;
};

/// Output directory of one cell: <root>/<router>/g<NN>/seed<S>.
std::string cell_dir(const std::string& root, std::string_view router, int num_gateways,
                     std::uint64_t seed);

/// Runs one (router, |G|, seed) cell and, with an output root, writes
/// packets.csv, stability.csv, latency_by_gateways.csv, timeseries.csv,
/// summary.json, config.json and manifest.json under cell_dir().
CellResult run_cell(const ExperimentConfig& cfg, std::string_view router, int num_gateways,
                    std::uint64_t seed, const CellOptions& options = {});

/// Version string compiled into the library.
std::string_view code_version();

}  // namespace leosim
