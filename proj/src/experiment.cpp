#include "leosim/experiment.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "leosim/errors.hpp"
#include "leosim/qrouting.hpp"
#include "leosim/routers_baseline.hpp"

#ifndef LEOSIM_VERSION
#define LEOSIM_VERSION "unknown"
#endif

namespace leosim {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view code_version() { return LEOSIM_VERSION; }

std::unique_ptr<Router> make_router(std::string_view name, const ExperimentConfig& cfg,
                                    const Scenario& scenario) {
  if (name == "datarate") return std::make_unique<DataRateRouter>();
  if (name == "genie") return std::make_unique<LatencyGenieRouter>(scenario.link.speed_of_light);
  if (name == "qlearn") {
    QLearningParams params = cfg.qlearning;
    params.seed = scenario.traffic.seed;
    return std::make_unique<QRouter>(params, scenario.constellation.total(),
                                     static_cast<int>(scenario.gateways.size()),
                                     scenario.sim.queue_capacity,
                                     scenario.link.bandwidth_hz * scenario.mcs.median_efficiency());
  }
  throw ConfigError("--router", "unknown router '" + std::string(name) + "' (datarate, genie, qlearn)");
}

namespace {

int parse_int(std::string_view s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("--gateways", "expected an integer or a range, got '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

GatewayRange parse_gateway_range(std::string_view text) {
  GatewayRange r;
  std::size_t sep = text.find("..");
  std::size_t len = 2;
  if (sep == std::string_view::npos) {
    sep = text.find('-');
    len = 1;
  }
  if (sep == std::string_view::npos) {
    r.first = r.last = parse_int(text);
  } else {
    r.first = parse_int(text.substr(0, sep));
    r.last = parse_int(text.substr(sep + len));
  }
  if (r.first < 2 || r.last < r.first) {
    throw ConfigError("--gateways", "need 2 <= first <= last, got '" + std::string(text) + "'");
  }
  return r;
}

std::string cell_dir(const std::string& root, std::string_view router, int num_gateways,
                     std::uint64_t seed) {
  char g[8];
  std::snprintf(g, sizeof(g), "g%02d", num_gateways);
  return (fs::path(root) / std::string(router) / g / ("seed" + std::to_string(seed))).string();
}

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json counters_json(const SimCounters& c) {
  json drops;
  for (std::size_t i = 1; i < kDropReasons; ++i) {
    drops[std::string(to_string(static_cast<DropReason>(i)))] = c.drops_by_reason[i];
  }
  return {{"generated", c.generated},
          {"delivered", c.delivered},
          {"dropped", c.dropped},
          {"in_flight", c.in_flight},
          {"drops", drops},
          {"isl_receptions", c.isl_receptions},
          {"feedback_messages", c.feedback_messages},
          {"topology_refreshes", c.topology_refreshes}};
}

}  // namespace

CellResult run_cell(const ExperimentConfig& cfg, std::string_view router, int num_gateways,
                    std::uint64_t seed, const CellOptions& options) {
  const Scenario scenario = cfg.cell(num_gateways, seed);
  auto r = make_router(router, cfg, scenario);

  CellResult result;
  result.router = std::string(router);
  result.num_gateways = num_gateways;
  result.seed = seed;

  fs::path dir;
  std::ofstream packets;
  std::unique_ptr<PacketCsvSink> sink;
  if (!options.out_root.empty()) {
    dir = cell_dir(options.out_root, router, num_gateways, seed);
    fs::create_directories(dir);
    result.dir = dir.string();
    if (options.write_packets) {
      packets = open_out(dir / "packets.csv");
      sink = std::make_unique<PacketCsvSink>(packets);
    }
  }

  const double series_start = router == "qlearn" ? cfg.warmup_s : 0.0;
  auto routes = std::make_shared<RouteCollector>(num_gateways, static_cast<std::size_t>(cfg.stability_window),
                                                 false, cfg.timeseries_bin_s, series_start);
  ObserverFanout fan;
  fan.add(routes.get());
  fan.add(sink.get());
  fan.add(options.observer);

  RunOptions run_opts;
  run_opts.keep_records = false;
  run_opts.observer = &fan;
  const auto t0 = std::chrono::steady_clock::now();
  SimReport report = run(scenario, *r, run_opts);
  result.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  result.counters = report.counters;
  result.snapshots = std::move(report.snapshots);
  result.flows = report.flows;
  result.stability = routes->stability(cfg.significance);
  result.summary = summarize(result.stability);
  result.latency = routes->latency();
  result.timeseries = routes->timeseries();
  result.routes = routes;

  if (dir.empty()) return result;
  if (packets.is_open()) packets.close();

  {
    auto out = open_out(dir / "stability.csv");
    write_stability_csv(out, result.stability);
  }
  {
    auto out = open_out(dir / "latency_by_gateways.csv");
    write_latency_csv_header(out);
    write_latency_csv_row(out, num_gateways, router, result.latency);
  }
  {
    auto out = open_out(dir / "timeseries.csv");
    write_timeseries_csv_header(out);
    write_timeseries_csv_rows(out, router, num_gateways, result.timeseries);
  }
  if (options.dump_qtable) {
    if (const auto* q = dynamic_cast<const QRouter*>(r.get())) {
      auto out = open_out(dir / "qtable.json");
      q->dump_tables(out);
    }
  }

  const std::string config_json = to_json(cfg);
  {
    auto out = open_out(dir / "config.json");
    out << config_json << '\n';
  }
  {
    json names = json::array();
    for (const auto& g : scenario.gateways) names.push_back(g.name);
    json summary = {
        {"router", result.router},
        {"num_gateways", num_gateways},
        {"seed", seed},
        {"gateways", names},
        {"counters", counters_json(result.counters)},
        {"uplink_bps", result.flows.uplink_bps.empty() ? 0.0 : result.flows.uplink_bps.front()},
        {"max_load_bps", result.flows.max_load_bps},
        {"routes_tested", result.summary.tested},
        {"routes_unstable", result.summary.unstable},
        {"routes_untested", result.summary.untested},
        {"unstable_ratio", result.summary.ratio()},
        {"mean_queue_ms", result.latency.mean_queue_ms},
        {"mean_tx_ms", result.latency.mean_tx_ms},
        {"mean_prop_ms", result.latency.mean_prop_ms},
        {"mean_e2e_ms", result.latency.mean_total_ms},
    };
    auto out = open_out(dir / "summary.json");
    out << summary.dump(2) << '\n';
  }
  {
    json manifest = {
        {"code_version", std::string(code_version())},
        {"config_hash", hex64(fnv1a64(config_json))},
        {"config_file", "config.json"},
        {"router", result.router},
        {"num_gateways", num_gateways},
        {"seed", seed},
        {"rerun", "leosim --config config.json --router " + result.router + " --gateways " +
                      std::to_string(num_gateways) + " --seed " + std::to_string(seed) + " --out <dir>"},
    };
    auto out = open_out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
  }
  return result;
}

}  // namespace leosim
