#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "leosim/analysis.hpp"
#include "leosim/config.hpp"
#include "leosim/errors.hpp"
#include "leosim/experiment.hpp"
#include "leosim/linkbudget.hpp"
#include "leosim/qrouting.hpp"
#include "leosim/routers_baseline.hpp"

namespace py = pybind11;
using namespace leosim;

namespace {

ExperimentConfig config_from(const std::string& text) {
  return text.empty() ? default_config() : parse_config(text);
}

py::dict cell_summary(const CellResult& c) {
  py::dict d;
  d["router"] = c.router;
  d["num_gateways"] = c.num_gateways;
  d["seed"] = c.seed;
  d["dir"] = c.dir;
  d["generated"] = c.counters.generated;
  d["delivered"] = c.counters.delivered;
  d["dropped"] = c.counters.dropped;
  d["in_flight"] = c.counters.in_flight;
  d["conserved"] = c.counters.conserved();
  d["routes_tested"] = c.summary.tested;
  d["routes_unstable"] = c.summary.unstable;
  d["unstable_ratio"] = c.summary.ratio();
  d["mean_queue_ms"] = c.latency.mean_queue_ms;
  d["mean_tx_ms"] = c.latency.mean_tx_ms;
  d["mean_prop_ms"] = c.latency.mean_prop_ms;
  d["mean_e2e_ms"] = c.latency.mean_total_ms;
  py::list rows;
  for (const auto& r : c.stability) {
    rows.append(py::dict(py::arg("src") = r.src, py::arg("dst") = r.dst, py::arg("n") = r.regression.n,
                         py::arg("beta1") = r.regression.beta1, py::arg("se") = r.regression.se,
                         py::arg("t") = r.regression.t, py::arg("decision") = std::string(to_string(r.decision))));
  }
  d["stability"] = rows;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "LEO constellation routing simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InfeasibleScenario>(m, "InfeasibleScenario", PyExc_RuntimeError);

  m.attr("__version__") = std::string(code_version());
  m.attr("ROUTERS") = std::vector<std::string>(std::begin(kRouterNames), std::end(kRouterNames));
  m.attr("STABILITY_CSV_HEADER") = std::string(kStabilityCsvHeader);
  m.attr("LATENCY_CSV_HEADER") = std::string(kLatencyCsvHeader);
  m.attr("TIMESERIES_CSV_HEADER") = std::string(kTimeseriesCsvHeader);
  m.attr("PACKET_CSV_HEADER") = std::string(kPacketCsvHeader);

  m.def("default_config_json", [] { return to_json(default_config()); },
        "Built-in defaults as canonical JSON.");
  m.def("normalize_config", [](const std::string& text) { return to_json(parse_config(text)); },
        py::arg("text"), "Validate a JSON config and return its canonical form.");

  m.def(
      "run_cell",
      [](const std::string& router, int num_gateways, std::uint64_t seed, const std::string& config_json,
         const std::string& out, bool write_packets) {
        const ExperimentConfig cfg = config_from(config_json);
        CellOptions opts;
        opts.out_root = out;
        opts.write_packets = write_packets;
        CellResult c;
        {
          py::gil_scoped_release release;
          c = run_cell(cfg, router, num_gateways, seed, opts);
        }
        return cell_summary(c);
      },
      py::arg("router"), py::arg("num_gateways"), py::arg("seed") = 1, py::arg("config_json") = "",
      py::arg("out") = "", py::arg("write_packets") = true,
      "Run one (router, gateways, seed) cell; the config text overlays the defaults.");

  m.def(
      "regress",
      [](const std::vector<double>& x, const std::vector<double>& y, std::size_t window) {
        const auto r = regress(x, y, window);
        return py::dict(py::arg("n") = r.n, py::arg("beta0") = r.beta0, py::arg("beta1") = r.beta1,
                        py::arg("se") = r.se, py::arg("t") = r.t, py::arg("defined") = r.defined);
      },
      py::arg("x"), py::arg("y"), py::arg("window") = 200);
  m.def(
      "stability_decision",
      [](const std::vector<double>& x, const std::vector<double>& y, std::size_t window, double alpha) {
        return std::string(to_string(stability_test(regress(x, y, window), alpha)));
      },
      py::arg("x"), py::arg("y"), py::arg("window") = 200, py::arg("alpha") = 0.05);
  m.def("t_critical", &t_critical, py::arg("df"), py::arg("alpha"));

  m.def(
      "shortest_path",
      [](int num_nodes, const std::vector<std::tuple<int, int, double>>& edges, int src, int dst) {
        WeightedGraph g(num_nodes);
        for (const auto& [a, b, w] : edges) g.add_edge(a, b, w);
        const Route r = dijkstra(g, src, dst);
        return py::make_tuple(r.nodes, r.cost);
      },
      py::arg("num_nodes"), py::arg("edges"), py::arg("src"), py::arg("dst"),
      "Dijkstra over (from, to, weight) edges; raises RuntimeError when unreachable.");

  m.def("free_space_path_loss_db",
        [](double d_km, double f_hz) { return to_db(free_space_path_loss(d_km, f_hz)); }, py::arg("distance_km"),
        py::arg("freq_hz"));
  m.def("antenna_gain_dbi",
        [](double dia, double f_hz, double eta) { return to_db(antenna_gain(dia, f_hz, eta)); },
        py::arg("diameter_m"), py::arg("freq_hz"), py::arg("efficiency") = 0.6);
  m.def("q_update", [](double q, double reward, double feedback, double alpha, double gamma) {
    QTable t(0, 1, q);
    return update_q(t, 0, 0, reward, feedback, alpha, gamma);
  }, py::arg("q"), py::arg("reward"), py::arg("feedback"), py::arg("alpha"), py::arg("gamma"));
}
