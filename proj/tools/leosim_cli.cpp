#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "leosim/config.hpp"
#include "leosim/errors.hpp"
#include "leosim/experiment.hpp"

namespace {

int fail(const std::string& kind, const std::string& field, const std::string& message) {
  nlohmann::json err = {{"error", kind}, {"field", field}, {"message", message}};
  std::cerr << err.dump() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LEO constellation routing simulator"};
  std::string config_path;
  std::string router;
  std::string gateways = "3";
  std::uint64_t seed = 1;
  std::string out;
  bool no_packets = false;
  bool dump_qtable = false;
  bool quiet = false;
  app.add_option("--config", config_path, "Scenario config (JSON); built-in defaults when omitted");
  app.add_option("--router", router, "datarate | genie | qlearn")->required();
  app.add_option("--gateways", gateways, "Active gateway count n or range a-b");
  app.add_option("--seed", seed, "Replication seed");
  app.add_option("--out", out, "Output root directory")->required();
  app.add_flag("--no-packet-csv", no_packets, "Skip the per-packet CSV");
  app.add_flag("--dump-qtable", dump_qtable, "Write qtable.json for qlearn cells");
  app.add_flag("--quiet", quiet, "No progress lines on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", "", e.what());
  }

  try {
    const leosim::ExperimentConfig cfg =
        config_path.empty() ? leosim::default_config() : leosim::load_config(config_path);
    leosim::make_router(router, cfg, cfg.cell(2, seed));
    const auto range = leosim::parse_gateway_range(gateways);
    if (range.last > static_cast<int>(cfg.scenario.gateways.size())) {
      throw leosim::ConfigError("--gateways", "only " + std::to_string(cfg.scenario.gateways.size()) +
                                                  " gateways are configured");
    }
    leosim::CellOptions opts;
    opts.out_root = out;
    opts.write_packets = !no_packets;
    opts.dump_qtable = dump_qtable;
    for (int g = range.first; g <= range.last; ++g) {
      const auto cell = leosim::run_cell(cfg, router, g, seed, opts);
      if (!quiet) {
        std::printf("%s g=%d seed=%llu generated=%llu delivered=%llu dropped=%llu unstable=%zu/%zu wall=%.1fs -> %s\n",
                    cell.router.c_str(), g, static_cast<unsigned long long>(seed),
                    static_cast<unsigned long long>(cell.counters.generated),
                    static_cast<unsigned long long>(cell.counters.delivered),
                    static_cast<unsigned long long>(cell.counters.dropped), cell.summary.unstable,
                    cell.summary.tested, cell.wall_s, cell.dir.c_str());
        std::fflush(stdout);
      }
    }
  } catch (const leosim::ConfigError& e) {
    return fail("config", e.field(), e.what());
  } catch (const leosim::InfeasibleScenario& e) {
    return fail("infeasible", "", e.what());
  } catch (const std::exception& e) {
    return fail("runtime", "", e.what());
  }
  return 0;
}
