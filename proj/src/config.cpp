#include "leosim/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

#include "leosim/errors.hpp"

namespace leosim {

using nlohmann::json;

std::vector<Gateway> default_gateways() {
  return {
      {"Malaga", {36.7213, -4.4214, 0.0}},
      {"Los Angeles", {34.0522, -118.2437, 0.0}},
      {"Aalborg", {57.0488, 9.9217, 0.0}},
      {"Cordoba", {-31.4201, -64.1888, 0.0}},
      {"Tolhuin", {-54.5103, -67.1955, 0.0}},
      {"Inuvik", {68.3607, -133.7230, 0.0}},
      {"Nemea", {37.8206, 22.6597, 0.0}},
      {"Nuuk", {64.1814, -51.6941, 0.0}},
      {"Bangalore", {12.9716, 77.5946, 0.0}},
      {"Tokyo", {35.6762, 139.6503, 0.0}},
      {"Port Louis", {-20.1609, 57.5012, 0.0}},
      {"Awarua", {-46.5289, 168.3811, 0.0}},
      {"Svalbard", {78.2298, 15.4078, 0.0}},
      {"Vardo", {70.3706, 31.1107, 0.0}},
      {"Panama", {8.9824, -79.5199, 0.0}},
      {"Azores", {37.7412, -25.6756, 0.0}},
      {"Singapore", {1.3521, 103.8198, 0.0}},
  };
}

McsTable default_mcs_table() {
  return McsTable({
      {0.490243, -2.35}, {0.656448, -1.24}, {0.789412, -0.30}, {0.988858, 1.00},
      {1.188304, 2.23},  {1.322253, 3.10},  {1.487473, 4.03},  {1.587196, 4.68},
      {1.654663, 5.18},  {1.779991, 5.50},  {1.788612, 6.42},  {1.980636, 6.62},
      {2.228124, 7.91},  {2.637201, 8.97},  {2.966728, 10.21}, {3.165623, 11.03},
      {3.300184, 11.61}, {3.703295, 12.73}, {3.951571, 13.64}, {4.119540, 14.28},
      {4.397854, 15.69}, {4.453027, 16.05},
  });
}

Scenario ExperimentConfig::cell(int num_gateways, std::uint64_t seed) const {
  const int available = static_cast<int>(scenario.gateways.size());
  if (num_gateways < 2 || num_gateways > available) {
    throw ConfigError("gateways", "active gateway count " + std::to_string(num_gateways) +
                                      " outside [2, " + std::to_string(available) + "]");
  }
  Scenario s = scenario;
  s.gateways.resize(static_cast<std::size_t>(num_gateways));
  s.traffic.seed = seed;
  return s;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.scenario.gateways = default_gateways();
  cfg.scenario.mcs = default_mcs_table();
  cfg.scenario.traffic.gateway_cap_bps = kDefaultGatewayCapBps;
  return cfg;
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// Visits one JSON object, rejecting keys that no handler claims.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(join(path_, key), "unknown key");
    }
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(path(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) throw ConfigError(path(key), "must be finite");
    }
  }

  void positive(const std::string& key, double& out) {
    number(key, out);
    if (!(out > 0.0)) throw ConfigError(path(key), "must be > 0");
  }
  /// Positive number, or null to clear.
  void optional_positive(const std::string& key, std::optional<double>& out) {
    const json* v = find(key);
    if (v == nullptr) return;
    if (v->is_null()) {
      out.reset();
      return;
    }
    if (!v->is_number() || !(v->get<double>() > 0.0)) throw ConfigError(path(key), "expected a positive number or null");
    out = v->get<double>();
  }


  void integer(const std::string& key, int& out, int min_value) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(path(key), "expected an integer");
      const auto x = v->get<long long>();
      if (x < min_value || x > 1'000'000'000) {
        throw ConfigError(path(key), "must be >= " + std::to_string(min_value));
      }
      out = static_cast<int>(x);
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(path(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(path(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  template <typename Fn>
  void object(const std::string& key, Fn&& fn) {
    if (const json* v = find(key)) {
      ObjectReader sub(*v, path(key));
      fn(sub);
      sub.finish();
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_radio(ObjectReader& r, RadioParams& p) {
  r.positive("tx_power_w", p.tx_power_w);
  r.positive("dish_diameter_m", p.dish_diameter_m);
}

/// Reads an angle given as `<name>_deg` or `<name>_rad` (not both).
void angle(ObjectReader& r, const std::string& name, double& rad) {
  const bool has_deg = r.find(name + "_deg") != nullptr;
  const bool has_rad = r.find(name + "_rad") != nullptr;
  if (has_deg && has_rad) throw ConfigError(r.path(name + "_deg"), "give degrees or radians, not both");
  if (has_deg) {
    double deg = 0.0;
    r.number(name + "_deg", deg);
    rad = deg2rad(deg);
  } else {
    r.number(name + "_rad", rad);
  }
}

std::vector<double> per_plane(ObjectReader& r, const std::string& key, int planes,
                              std::vector<double> fallback) {
  const json* v = r.find(key);
  if (v == nullptr) return fallback;
  if (v->is_number()) return std::vector<double>(static_cast<std::size_t>(planes), v->get<double>());
  if (!v->is_array() || v->size() != static_cast<std::size_t>(planes)) {
    throw ConfigError(r.path(key), "expected a number or an array with one entry per plane");
  }
  std::vector<double> out;
  for (const auto& x : *v) {
    if (!x.is_number()) throw ConfigError(r.path(key), "expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void read_constellation(ObjectReader& r, ConstellationConfig& c) {
  int planes = c.num_planes, per_plane_count = c.sats_per_plane;
  r.integer("planes", planes, 1);
  r.integer("sats_per_plane", per_plane_count, 1);
  double incl = c.inclination_rad, phasing = c.phasing_rad, spread = std::numbers::pi;
  angle(r, "inclination", incl);
  angle(r, "phasing", phasing);
  angle(r, "raan_spread", spread);
  ConstellationConfig out = ConstellationConfig::uniform(planes, per_plane_count, 600.0, 0.0, 0.0, spread);
  out.inclination_rad = incl;
  out.phasing_rad = phasing;
  const double alt = c.altitude_km.empty() ? 600.0 : c.altitude_km.front();
  out.altitude_km = per_plane(r, "altitude_km", planes, std::vector<double>(static_cast<std::size_t>(planes), alt));
  for (double a : out.altitude_km) {
    if (!(a > 0.0)) throw ConfigError(r.path("altitude_km"), "must be > 0");
  }
  if (r.find("plane_longitude_deg") != nullptr && r.find("plane_longitude_rad") != nullptr) {
    throw ConfigError(r.path("plane_longitude_deg"), "give degrees or radians, not both");
  }
  out.plane_longitude_rad = per_plane(r, "plane_longitude_rad", planes, out.plane_longitude_rad);
  auto deg = per_plane(r, "plane_longitude_deg", planes, {});
  if (!deg.empty()) {
    for (std::size_t m = 0; m < deg.size(); ++m) out.plane_longitude_rad[m] = deg2rad(deg[m]);
  }
  out.earth_radius_km = c.earth_radius_km;
  out.earth_rotation_rate = c.earth_rotation_rate;
  out.mu = c.mu;
  r.positive("earth_radius_km", out.earth_radius_km);
  r.number("earth_rotation_rad_s", out.earth_rotation_rate);
  r.positive("mu_km3_s2", out.mu);
  c = out;
}

void read_gateways(const json& j, const std::string& path, std::vector<Gateway>& out) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of gateways");
  if (j.size() < 2) throw ConfigError(path, "at least two gateways are required");
  out.clear();
  std::set<std::string> names;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    ObjectReader r(j[i], p);
    Gateway g;
    const json* name = r.find("name");
    if (name == nullptr || !name->is_string() || name->get<std::string>().empty()) {
      throw ConfigError(p + ".name", "expected a non-empty string");
    }
    g.name = name->get<std::string>();
    if (!names.insert(g.name).second) throw ConfigError(p + ".name", "duplicate gateway " + g.name);
    const json* lat = r.find("lat_deg");
    const json* lon = r.find("lon_deg");
    if (lat == nullptr || !lat->is_number()) throw ConfigError(p + ".lat_deg", "expected a number");
    if (lon == nullptr || !lon->is_number()) throw ConfigError(p + ".lon_deg", "expected a number");
    g.position.lat_deg = lat->get<double>();
    g.position.lon_deg = lon->get<double>();
    if (!(std::abs(g.position.lat_deg) <= 90.0)) throw ConfigError(p + ".lat_deg", "must be in [-90, 90]");
    if (!(g.position.lon_deg > -180.0 && g.position.lon_deg <= 180.0)) {
      throw ConfigError(p + ".lon_deg", "must be in (-180, 180]");
    }
    r.finish();
    out.push_back(g);
  }
}

void check(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg = default_config();
  Scenario& s = cfg.scenario;
  {
    ObjectReader r(root, "");
    if (const json* n = r.find("notes")) {
      bool ok = n->is_string() || n->is_array();
      if (n->is_array()) {
        for (const auto& e : *n) ok = ok && e.is_string();
      }
      check(ok, "notes", "expected a string or an array of strings");
    }
    r.object("constellation", [&](ObjectReader& c) { read_constellation(c, s.constellation); });
    if (const json* g = r.find("gateways")) read_gateways(*g, "gateways", s.gateways);
    r.object("link", [&](ObjectReader& l) {
      l.object("satellite", [&](ObjectReader& x) { read_radio(x, s.link.satellite); });
      l.object("gateway", [&](ObjectReader& x) { read_radio(x, s.link.gateway); });
      l.positive("uplink_freq_hz", s.link.uplink_freq_hz);
      l.positive("downlink_freq_hz", s.link.downlink_freq_hz);
      l.positive("isl_freq_hz", s.link.isl_freq_hz);
      l.positive("aperture_efficiency", s.link.aperture_efficiency);
      l.positive("bandwidth_hz", s.link.bandwidth_hz);
      l.positive("noise_temperature_k", s.link.noise_temperature_k);
      l.string("mcs_table", cfg.mcs_path);
      if (const json* m = l.find("mcs")) {
        if (!cfg.mcs_path.empty()) throw ConfigError(l.path("mcs"), "give mcs or mcs_table, not both");
        if (!m->is_array()) throw ConfigError(l.path("mcs"), "expected [[rho, snr_min_db], ...]");
        std::vector<McsEntry> entries;
        for (const auto& e : *m) {
          if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw ConfigError(l.path("mcs"), "expected [[rho, snr_min_db], ...]");
          }
          entries.push_back({e[0].get<double>(), e[1].get<double>()});
        }
        try {
          s.mcs = McsTable(std::move(entries));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(l.path("mcs"), e.what());
        }
      }
    });
    r.object("traffic", [&](ObjectReader& t) {
      t.number("load", s.traffic.load);
      check(s.traffic.load >= 0.0, t.path("load"), "must be >= 0");
      t.positive("packet_bits", s.traffic.packet_bits);
      t.optional_positive("max_load_bps", s.traffic.max_load_override_bps);
      t.optional_positive("gateway_cap_bps", s.traffic.gateway_cap_bps);
    });
    r.object("topology", [&](ObjectReader& t) {
      double range = s.topology.max_isl_range_km;
      t.number("min_isl_grazing_altitude_km", s.topology.min_isl_grazing_altitude_km);
      t.boolean("wrap_planes", s.topology.wrap_planes);
      t.number("min_elevation_deg", s.topology.min_elevation_deg);
      if (const json* v = t.find("max_isl_range_km"); v != nullptr && !v->is_null()) {
        if (!v->is_number() || !(v->get<double>() > 0.0)) {
          throw ConfigError(t.path("max_isl_range_km"), "expected a positive number or null");
        }
        range = v->get<double>();
      }
      s.topology.max_isl_range_km = range;
      check(s.topology.min_elevation_deg >= -90.0 && s.topology.min_elevation_deg < 90.0,
            t.path("min_elevation_deg"), "must be in [-90, 90)");
    });
    r.object("simulation", [&](ObjectReader& t) {
      t.positive("horizon_s", s.sim.horizon_s);
      t.positive("topology_refresh_s", s.sim.topology_refresh_s);
      t.positive("snapshot_interval_s", s.sim.snapshot_interval_s);
      t.integer("queue_capacity", s.sim.queue_capacity, 1);
      t.integer("max_hops", s.sim.max_hops, 1);
      t.number("warmup_s", cfg.warmup_s);
      check(cfg.warmup_s >= 0.0, t.path("warmup_s"), "must be >= 0");
    });
    r.object("analysis", [&](ObjectReader& t) {
      t.number("window", cfg.stability_window);
      check(cfg.stability_window >= 3 && std::floor(cfg.stability_window) == cfg.stability_window,
            t.path("window"), "must be an integer >= 3");
      t.number("significance", cfg.significance);
      check(cfg.significance > 0.0 && cfg.significance < 1.0, t.path("significance"), "must be in (0, 1)");
      t.positive("timeseries_bin_s", cfg.timeseries_bin_s);
    });
    r.object("qlearning", [&](ObjectReader& t) {
      auto& q = cfg.qlearning;
      t.number("alpha", q.alpha);
      check(q.alpha > 0.0 && q.alpha <= 1.0, t.path("alpha"), "must be in (0, 1]");
      t.number("gamma", q.gamma);
      check(q.gamma >= 0.0 && q.gamma < 1.0, t.path("gamma"), "must be in [0, 1)");
      t.number("epsilon_start", q.epsilon_start);
      check(q.epsilon_start >= 0.0 && q.epsilon_start <= 1.0, t.path("epsilon_start"), "must be in [0, 1]");
      t.number("epsilon_min", q.epsilon_min);
      check(q.epsilon_min >= 0.0 && q.epsilon_min <= q.epsilon_start, t.path("epsilon_min"),
            "must be in [0, epsilon_start]");
      t.positive("epsilon_decay", q.epsilon_decay);
      t.number("w_queue", q.w_queue);
      t.number("w_dist", q.w_dist);
      t.number("reward_delivery", q.reward_delivery);
      t.number("reward_loop", q.reward_loop);
      t.number("queue_threshold_packets", q.queue_threshold_packets);
      t.number("capacity_threshold_bps", q.capacity_threshold_bps);
      t.number("initial_q", q.initial_q);
    });
    r.finish();
  }

  if (!cfg.mcs_path.empty()) {
    std::filesystem::path p(cfg.mcs_path);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    try {
      s.mcs = McsTable::from_file(p.string());
    } catch (const std::exception& e) {
      throw ConfigError("link.mcs_table", e.what());
    }
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("<scenario>", e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(buf.str(), dir.empty() ? "." : dir.string());
}

std::string to_json(const ExperimentConfig& cfg, int indent) {
  const Scenario& s = cfg.scenario;
  const auto& c = s.constellation;
  json j;
  j["constellation"] = {
      {"planes", c.num_planes},
      {"sats_per_plane", c.sats_per_plane},
      {"altitude_km", c.altitude_km},
      {"plane_longitude_rad", c.plane_longitude_rad},
      {"inclination_rad", c.inclination_rad},
      {"phasing_rad", c.phasing_rad},
      {"earth_radius_km", c.earth_radius_km},
      {"earth_rotation_rad_s", c.earth_rotation_rate},
      {"mu_km3_s2", c.mu},
  };
  j["gateways"] = json::array();
  for (const auto& g : s.gateways) {
    j["gateways"].push_back({{"name", g.name}, {"lat_deg", g.position.lat_deg}, {"lon_deg", g.position.lon_deg}});
  }
  json mcs = json::array();
  for (const auto& e : s.mcs.entries()) mcs.push_back({e.spectral_efficiency, e.snr_min_db});
  j["link"] = {
      {"satellite", {{"tx_power_w", s.link.satellite.tx_power_w}, {"dish_diameter_m", s.link.satellite.dish_diameter_m}}},
      {"gateway", {{"tx_power_w", s.link.gateway.tx_power_w}, {"dish_diameter_m", s.link.gateway.dish_diameter_m}}},
      {"uplink_freq_hz", s.link.uplink_freq_hz},
      {"downlink_freq_hz", s.link.downlink_freq_hz},
      {"isl_freq_hz", s.link.isl_freq_hz},
      {"aperture_efficiency", s.link.aperture_efficiency},
      {"bandwidth_hz", s.link.bandwidth_hz},
      {"noise_temperature_k", s.link.noise_temperature_k},
      {"mcs", mcs},
  };
  j["traffic"] = {
      {"load", s.traffic.load},
      {"packet_bits", s.traffic.packet_bits},
      {"max_load_bps", s.traffic.max_load_override_bps ? json(*s.traffic.max_load_override_bps) : json(nullptr)},
      {"gateway_cap_bps", s.traffic.gateway_cap_bps ? json(*s.traffic.gateway_cap_bps) : json(nullptr)},
  };
  j["topology"] = {
      {"max_isl_range_km", std::isfinite(s.topology.max_isl_range_km) ? json(s.topology.max_isl_range_km) : json(nullptr)},
      {"min_isl_grazing_altitude_km", s.topology.min_isl_grazing_altitude_km},
      {"wrap_planes", s.topology.wrap_planes},
      {"min_elevation_deg", s.topology.min_elevation_deg},
  };
  j["simulation"] = {
      {"horizon_s", s.sim.horizon_s},
      {"topology_refresh_s", s.sim.topology_refresh_s},
      {"snapshot_interval_s", s.sim.snapshot_interval_s},
      {"queue_capacity", s.sim.queue_capacity},
      {"max_hops", s.sim.max_hops},
      {"warmup_s", cfg.warmup_s},
  };
  j["analysis"] = {
      {"window", cfg.stability_window},
      {"significance", cfg.significance},
      {"timeseries_bin_s", cfg.timeseries_bin_s},
  };
  const auto& q = cfg.qlearning;
  j["qlearning"] = {
      {"alpha", q.alpha},
      {"gamma", q.gamma},
      {"epsilon_start", q.epsilon_start},
      {"epsilon_min", q.epsilon_min},
      {"epsilon_decay", q.epsilon_decay},
      {"w_queue", q.w_queue},
      {"w_dist", q.w_dist},
      {"reward_delivery", q.reward_delivery},
      {"reward_loop", q.reward_loop},
      {"queue_threshold_packets", q.queue_threshold_packets},
      {"capacity_threshold_bps", q.capacity_threshold_bps},
      {"initial_q", q.initial_q},
  };
  return j.dump(indent);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace leosim
