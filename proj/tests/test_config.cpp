#include <filesystem>
#include <fstream>
#include <algorithm>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "leosim/config.hpp"
#include "leosim/errors.hpp"
#include "leosim/experiment.hpp"

using namespace leosim;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("built-in defaults") {
  const auto cfg = default_config();
  CHECK(cfg.scenario.gateways.size() == 17);
  CHECK(cfg.scenario.gateways.front().name == "Malaga");
  CHECK(cfg.scenario.constellation.total() == 140);
  CHECK(cfg.scenario.traffic.load == 0.85);
  CHECK(cfg.scenario.traffic.packet_bits == 64800.0);
  CHECK(cfg.scenario.link.bandwidth_hz == 500e6);
  CHECK(cfg.scenario.sim.horizon_s == 30.0);
  CHECK(cfg.warmup_s == 5.0);
  const Scenario s = cfg.cell(9, 4);
  CHECK(s.gateways.size() == 9);
  CHECK(s.traffic.seed == 4);
  CHECK_THROWS_AS(cfg.cell(1, 1), ConfigError);
  CHECK_THROWS_AS(cfg.cell(18, 1), ConfigError);
}

TEST_CASE("JSON round trip is a fixed point") {
  auto cfg = default_config();
  cfg.qlearning.alpha = 0.25;
  cfg.scenario.traffic.max_load_override_bps = 3.5e9;
  cfg.scenario.sim.horizon_s = 12.5;
  const std::string a = to_json(cfg);
  const auto back = parse_config(a);
  CHECK(to_json(back) == a);
  CHECK(back.qlearning.alpha == 0.25);
  CHECK(back.scenario.traffic.max_load_override_bps == 3.5e9);
  CHECK(back.scenario.mcs.size() == 22);
  CHECK(fnv1a64(a) == fnv1a64(to_json(back)));
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("partial configs overlay the defaults") {
  const auto cfg = parse_config(R"({"traffic": {"load": 0.5}, "qlearning": {"gamma": 0.7}})");
  CHECK(cfg.scenario.traffic.load == 0.5);
  CHECK(cfg.qlearning.gamma == 0.7);
  CHECK(cfg.scenario.gateways.size() == 17);
}

TEST_CASE("validation errors name the field") {
  CHECK(field_of(R"({"bogus": 1})") == "bogus");
  CHECK(field_of(R"({"traffic": {"lod": 0.5}})") == "traffic.lod");
  CHECK(field_of(R"({"traffic": {"load": -1}})") == "traffic.load");
  CHECK(field_of(R"({"traffic": {"packet_bits": "x"}})") == "traffic.packet_bits");
  CHECK(field_of(R"({"gateways": [{"name": "X", "lat_deg": 95, "lon_deg": 0}, {"name": "Y", "lat_deg": 0, "lon_deg": 0}]})") == "gateways[0].lat_deg");
  CHECK(field_of(R"({"gateways": [{"name": "X", "lat_deg": 5, "lon_deg": 0}]})") == "gateways");
  CHECK(field_of(R"({"gateways": [{"name": "X", "lat_deg": 5, "lon_deg": 0}, {"name": "X", "lat_deg": 0, "lon_deg": 0}]})") == "gateways[1].name");
  CHECK(field_of("{not json") == "<root>");
  CHECK(field_of("[]") == "<root>");
  CHECK(field_of(R"({"link": {"mcs": [[1, 2], [0.5, 3]]}})") == "link.mcs");
}

TEST_CASE("config files on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "leosim_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "mcs.csv") << "0.5, -1\n1.0, 3\n2.0, 8\n";
    std::ofstream(dir / "cfg.json") << R"({"link": {"mcs_table": "mcs.csv"}})";
  }
  const auto cfg = load_config((dir / "cfg.json").string());
  CHECK(cfg.scenario.mcs.size() == 3);
  CHECK_THROWS_AS(load_config((dir / "missing.json").string()), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("gateway ranges and router names") {
  CHECK(parse_gateway_range("5").first == 5);
  CHECK(parse_gateway_range("5").last == 5);
  CHECK(parse_gateway_range("2-10").last == 10);
  CHECK(parse_gateway_range("3..4").first == 3);
  CHECK_THROWS_AS(parse_gateway_range("1"), ConfigError);
  CHECK_THROWS_AS(parse_gateway_range("5-3"), ConfigError);
  CHECK_THROWS_AS(parse_gateway_range("x"), ConfigError);
  const auto cfg = default_config();
  for (auto name : kRouterNames) CHECK(make_router(name, cfg, cfg.cell(3, 1))->name() == name);
  CHECK_THROWS_AS(make_router("ospf", cfg, cfg.cell(3, 1)), ConfigError);
}

TEST_CASE("one cell writes its artifacts") {
  auto cfg = default_config();
  cfg.scenario.sim.horizon_s = 0.5;
  const auto root = (std::filesystem::temp_directory_path() / "leosim_cell_test").string();
  std::filesystem::remove_all(root);
  const auto cell = run_cell(cfg, "datarate", 3, 1, {root});
  CHECK(cell.dir == cell_dir(root, "datarate", 3, 1));
  for (const char* f : {"packets.csv", "stability.csv", "latency_by_gateways.csv", "timeseries.csv",
                        "summary.json", "config.json", "manifest.json"}) {
    CHECK(std::filesystem::exists(std::filesystem::path(cell.dir) / f));
  }
  std::ifstream m(std::filesystem::path(cell.dir) / "manifest.json");
  const auto manifest = nlohmann::json::parse(m);
  CHECK(manifest["seed"] == 1);
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  // The stored config reproduces the same hash.
  const auto again = load_config((std::filesystem::path(cell.dir) / "config.json").string());
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(fnv1a64(to_json(again))));
  CHECK(manifest["config_hash"] == std::string(hex));
  std::filesystem::remove_all(root);
}

TEST_CASE("notes may be a string or a list of strings") {
  CHECK_NOTHROW(parse_config(R"({"notes": "x"})"));
  CHECK_NOTHROW(parse_config(R"({"notes": ["x", "y"]})"));
  CHECK(field_of(R"({"notes": [1]})") == "notes");
}

TEST_CASE("gateway cap fixes the per-gateway share") {
  auto cfg = default_config();
  for (int g : {2, 5, 9}) {
    const Scenario s = cfg.cell(g, 1);
    const auto flows = offered_flows(s, s.snapshot(0.0));
    for (double up : flows.uplink_bps) CHECK(up == doctest::Approx(0.85 * kDefaultGatewayCapBps));
  }
  cfg.scenario.traffic.gateway_cap_bps.reset();
  const Scenario s = cfg.cell(4, 1);
  const auto net = s.snapshot(0.0);
  double tightest = 1e300;
  for (const auto& r : gsl_rates(net)) tightest = std::min({tightest, r.uplink_bps, r.downlink_bps});
  const auto flows = offered_flows(s, net);
  CHECK(flows.max_load_bps == doctest::Approx(4 * tightest));
  CHECK(flows.uplink_bps[0] == doctest::Approx(0.85 * tightest));
  CHECK(field_of(R"({"traffic": {"gateway_cap_bps": -1}})") == "traffic.gateway_cap_bps");
  CHECK(parse_config(R"({"traffic": {"gateway_cap_bps": null}})").scenario.traffic.gateway_cap_bps == std::nullopt);
}
