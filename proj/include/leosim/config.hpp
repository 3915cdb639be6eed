#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leosim/qrouting.hpp"
#include "leosim/scenario.hpp"

namespace leosim {

/// The 17 named sites, in the order the sweep activates them.
std::vector<Gateway> default_gateways();

/// Built-in DVB-S2 efficient envelope (same values as data/dvbs2_modcod.csv).
McsTable default_mcs_table();

/// A full experiment configuration: base scenario over the whole gateway
/// list plus the learner's parameters.
struct ExperimentConfig {
  Scenario scenario;  // gateways holds the full ordered list
  QLearningParams qlearning;
  double warmup_s = 5.0;
  double stability_window = 200;
  double significance = 0.05;
  double timeseries_bin_s = 0.05;
  std::string mcs_path;  // empty means the built-in table

  /// Active scenario for the first `num_gateways` sites and `seed`.
  Scenario cell(int num_gateways, std::uint64_t seed) const;
};

/// Per-gateway GSL cap used by the experiment defaults.
inline constexpr double kDefaultGatewayCapBps = 0.6e9;

ExperimentConfig default_config();

/// Parses JSON text over the defaults. Unknown keys and invalid values throw
/// ConfigError naming the key path. Relative paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& json_text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON of every effective setting (used for hashing and manifests).
std::string to_json(const ExperimentConfig& cfg, int indent = 2);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace leosim
