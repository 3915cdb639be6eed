#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "leosim/config.hpp"
#include "leosim/errors.hpp"
#include "leosim/experiment.hpp"

using nlohmann::json;

namespace {

struct Grid {
  std::vector<double> alpha{0.1, 0.3, 0.5};
  std::vector<double> gamma{0.3, 0.5, 0.7};
  std::vector<double> epsilon_decay{100.0, 200.0, 1000.0};
  std::vector<double> w_queue{1.0, 10.0, 100.0};
  std::vector<double> w_dist{1.0, 3.0};
};

std::vector<double> numbers(const json& j, const char* key, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  std::vector<double> v = j.at(key).get<std::vector<double>>();
  if (v.empty()) throw leosim::ConfigError(std::string("grid.") + key, "empty list");
  return v;
}

struct Score {
  double delivery_ratio = 0.0;
  double mean_latency_s = 0.0;
  double objective() const { return delivery_ratio - mean_latency_s; }
};

Score evaluate(const leosim::ExperimentConfig& cfg, int gateways, const std::vector<std::uint64_t>& seeds) {
  Score s;
  for (const auto seed : seeds) {
    const auto cell = leosim::run_cell(cfg, "qlearn", gateways, seed);
    const auto done = cell.counters.delivered + cell.counters.dropped;
    s.delivery_ratio += done == 0 ? 0.0 : static_cast<double>(cell.counters.delivered) / static_cast<double>(done);
    s.mean_latency_s += cell.latency.delivered == 0 ? 1.0 : cell.latency.mean_total_ms * 1e-3;
  }
  s.delivery_ratio /= static_cast<double>(seeds.size());
  s.mean_latency_s /= static_cast<double>(seeds.size());
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid search over Q-routing hyperparameters"};
  std::string config_path;
  std::string grid_path;
  std::string out_path = "tuned.json";
  int gateways = 3;
  double horizon = 10.0;
  std::vector<std::uint64_t> seeds{1};
  app.add_option("--config", config_path, "Base config (JSON)");
  app.add_option("--grid", grid_path, "JSON object of candidate lists per parameter");
  app.add_option("--gateways", gateways, "Active gateways in the tuning scenario");
  app.add_option("--horizon", horizon, "Simulated seconds per evaluation");
  app.add_option("--seeds", seeds, "Seeds averaged per grid point");
  app.add_option("--out", out_path, "Where to write the tuned config");
  CLI11_PARSE(app, argc, argv);

  try {
    leosim::ExperimentConfig cfg = config_path.empty() ? leosim::default_config() : leosim::load_config(config_path);
    cfg.scenario.sim.horizon_s = horizon;
    Grid grid;
    if (!grid_path.empty()) {
      std::ifstream in(grid_path);
      if (!in) throw leosim::ConfigError("--grid", "cannot read " + grid_path);
      const json j = json::parse(in);
      grid.alpha = numbers(j, "alpha", grid.alpha);
      grid.gamma = numbers(j, "gamma", grid.gamma);
      grid.epsilon_decay = numbers(j, "epsilon_decay", grid.epsilon_decay);
      grid.w_queue = numbers(j, "w_queue", grid.w_queue);
      grid.w_dist = numbers(j, "w_dist", grid.w_dist);
    }

    leosim::QLearningParams best = cfg.qlearning;
    double best_obj = -std::numeric_limits<double>::infinity();
    std::printf("alpha,gamma,epsilon_decay,w_queue,w_dist,delivery_ratio,mean_latency_s,objective\n");
    for (double a : grid.alpha)
      for (double g : grid.gamma)
        for (double e : grid.epsilon_decay)
          for (double wq : grid.w_queue)
            for (double wd : grid.w_dist) {
              leosim::ExperimentConfig trial = cfg;
              trial.qlearning.alpha = a;
              trial.qlearning.gamma = g;
              trial.qlearning.epsilon_decay = e;
              trial.qlearning.w_queue = wq;
              trial.qlearning.w_dist = wd;
              trial.qlearning.validate();
              const Score s = evaluate(trial, gateways, seeds);
              std::printf("%g,%g,%g,%g,%g,%.6f,%.6f,%.6f\n", a, g, e, wq, wd, s.delivery_ratio,
                          s.mean_latency_s, s.objective());
              std::fflush(stdout);
              if (s.objective() > best_obj) {
                best_obj = s.objective();
                best = trial.qlearning;
              }
            }

    leosim::ExperimentConfig tuned = config_path.empty() ? leosim::default_config() : leosim::load_config(config_path);
    tuned.qlearning = best;
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << leosim::to_json(tuned) << '\n';
    std::fprintf(stderr, "best objective %.6f written to %s\n", best_obj, out_path.c_str());
  } catch (const leosim::ConfigError& e) {
    std::cerr << json{{"error", "config"}, {"field", e.field()}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "runtime"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }
  return 0;
}
