#include "leosim/analysis.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace leosim {

RegressionResult regress(std::span<const double> x, std::span<const double> y, std::size_t window) {
  if (x.size() != y.size()) throw std::invalid_argument("regress: x and y differ in length");
  RegressionResult r;
  const std::size_t n = std::min(window, x.size());
  r.n = n;
  if (n < 3) return r;
  x = x.subspan(x.size() - n);
  y = y.subspan(y.size() - n);

  // Shifting by the first point keeps constant series exactly flat.
  const double x0 = x[0], y0 = y[0];
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += x[i] - x0;
    ym += y[i] - y0;
  }
  xm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = (x[i] - x0) - xm;
    sxx += dx * dx;
    sxy += dx * ((y[i] - y0) - ym);
  }
  if (!(sxx > 0.0)) return r;
  r.beta1 = sxy / sxx;
  r.beta0 = (ym + y0) - r.beta1 * (xm + x0);
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ((y[i] - y0) - ym) - r.beta1 * ((x[i] - x0) - xm);
    sse += e * e;
  }
  r.se = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
  if (r.se > 0.0) {
    r.t = r.beta1 / r.se;
  } else if (r.beta1 != 0.0) {
    r.t = std::copysign(std::numeric_limits<double>::infinity(), r.beta1);
  } else {
    r.t = std::numeric_limits<double>::quiet_NaN();
  }
  r.defined = true;
  return r;
}

double t_critical(double df, double alpha) {
  if (!(df > 0.0)) throw std::invalid_argument("t_critical: df must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("t_critical: alpha must be in (0, 1)");
  const boost::math::students_t dist(df);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Stable: return "stable";
    case Decision::Unstable: return "unstable";
    case Decision::Untested: return "untested";
  }
  return "untested";
}

Decision stability_test(const RegressionResult& r, double alpha) {
  if (!r.defined) return Decision::Untested;
  if (r.se == 0.0) return r.beta1 > 0.0 ? Decision::Unstable : Decision::Stable;
  if (r.beta1 <= 0.0) return Decision::Stable;
  return r.t > t_critical(static_cast<double>(r.n - 2), alpha) ? Decision::Unstable : Decision::Stable;
}

RouteCollector::RouteCollector(int num_gateways, std::size_t window, bool keep_full, double bin_s,
                               double series_start_s)
    : num_gateways_(num_gateways),
      window_(window),
      keep_full_(keep_full),
      bin_s_(bin_s),
      series_start_s_(series_start_s) {
  if (num_gateways < 2) throw std::invalid_argument("RouteCollector needs at least two gateways");
  if (window < 3) throw std::invalid_argument("stability window must be >= 3");
  if (!(bin_s > 0.0)) throw std::invalid_argument("time bin must be > 0");
  const auto n = static_cast<std::size_t>(num_gateways);
  routes_.resize(n * n);
  counts_.assign(n * n, 0);
  for (int s = 0; s < num_gateways; ++s) {
    for (int d = 0; d < num_gateways; ++d) {
      routes_[key(s, d)].src = s;
      routes_[key(s, d)].dst = d;
    }
  }
}

void RouteCollector::on_packet_done(const PacketRecord& r) {
  if (r.dropped) {
    ++dropped_;
    return;
  }
  const double latency_s = r.latency_s();
  ++delivered_;
  sum_queue_ += r.queue_s;
  sum_tx_ += r.tx_s;
  sum_prop_ += r.prop_s;
  sum_total_ += latency_s;

  if (r.created_s >= series_start_s_) {
    const std::size_t k = key(r.source, r.destination);
    auto& series = routes_[k];
    series.index.push_back(static_cast<double>(++counts_[k]));
    series.latency_ms.push_back(latency_s * 1e3);
    series.created_s.push_back(r.created_s);
    if (!keep_full_ && series.size() >= 2 * window_) {
      const auto cut = static_cast<std::ptrdiff_t>(series.size() - window_);
      series.index.erase(series.index.begin(), series.index.begin() + cut);
      series.latency_ms.erase(series.latency_ms.begin(), series.latency_ms.begin() + cut);
      series.created_s.erase(series.created_s.begin(), series.created_s.begin() + cut);
    }
  }

  const auto bin = static_cast<std::size_t>(std::floor(r.created_s / bin_s_));
  if (bin >= bin_sum_.size()) {
    bin_sum_.resize(bin + 1, 0.0);
    bin_count_.resize(bin + 1, 0);
  }
  bin_sum_[bin] += latency_s * 1e3;
  ++bin_count_[bin];
}

const RouteSeries& RouteCollector::route(int src, int dst) const {
  if (src < 0 || dst < 0 || src >= num_gateways_ || dst >= num_gateways_) {
    throw std::out_of_range("route index out of range");
  }
  return routes_[key(src, dst)];
}

std::uint64_t RouteCollector::delivered_on(int src, int dst) const {
  route(src, dst);
  return counts_[key(src, dst)];
}

LatencyDecomposition RouteCollector::latency() const {
  LatencyDecomposition d;
  d.delivered = delivered_;
  if (delivered_ == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    d.mean_queue_ms = d.mean_tx_ms = d.mean_prop_ms = d.mean_total_ms = nan;
    return d;
  }
  const double n = static_cast<double>(delivered_);
  d.mean_queue_ms = sum_queue_ / n * 1e3;
  d.mean_tx_ms = sum_tx_ / n * 1e3;
  d.mean_prop_ms = sum_prop_ / n * 1e3;
  d.mean_total_ms = sum_total_ / n * 1e3;
  return d;
}

std::vector<TimeseriesPoint> RouteCollector::timeseries() const {
  std::vector<TimeseriesPoint> out;
  for (std::size_t b = 0; b < bin_sum_.size(); ++b) {
    if (bin_count_[b] == 0) continue;
    out.push_back({static_cast<double>(b) * bin_s_, bin_sum_[b] / static_cast<double>(bin_count_[b]),
                   bin_count_[b]});
  }
  return out;
}

std::vector<StabilityRow> RouteCollector::stability(double alpha) const {
  std::vector<StabilityRow> rows;
  for (int s = 0; s < num_gateways_; ++s) {
    for (int d = 0; d < num_gateways_; ++d) {
      if (s == d) continue;
      const auto& series = routes_[key(s, d)];
      StabilityRow row;
      row.src = s;
      row.dst = d;
      row.regression = regress(series.index, series.latency_ms, window_);
      row.decision = stability_test(row.regression, alpha);
      rows.push_back(row);
    }
  }
  return rows;
}

StabilitySummary summarize(std::span<const StabilityRow> rows) {
  StabilitySummary s;
  for (const auto& r : rows) {
    switch (r.decision) {
      case Decision::Stable: ++s.tested; break;
      case Decision::Unstable:
        ++s.tested;
        ++s.unstable;
        break;
      case Decision::Untested: ++s.untested; break;
    }
  }
  return s;
}

void write_double(std::ostream& out, double v) {
  if (std::isnan(v)) return;
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

void write_stability_csv(std::ostream& out, std::span<const StabilityRow> rows) {
  out << kStabilityCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.src << ',' << r.dst << ',' << r.regression.n << ',';
    if (r.regression.defined) {
      write_double(out, r.regression.beta1);
      out << ',';
      write_double(out, r.regression.se);
      out << ',';
      write_double(out, r.regression.t);
    } else {
      out << ",,";
    }
    out << ',' << to_string(r.decision) << '\n';
  }
}

void write_latency_csv_header(std::ostream& out) { out << kLatencyCsvHeader << '\n'; }

void write_latency_csv_row(std::ostream& out, int num_gateways, std::string_view router,
                           const LatencyDecomposition& d) {
  out << num_gateways << ',' << router << ',';
  write_double(out, d.mean_queue_ms);
  out << ',';
  write_double(out, d.mean_tx_ms);
  out << ',';
  write_double(out, d.mean_prop_ms);
  out << '\n';
}

void write_timeseries_csv_header(std::ostream& out) { out << kTimeseriesCsvHeader << '\n'; }

void write_timeseries_csv_rows(std::ostream& out, std::string_view router, int num_gateways,
                               std::span<const TimeseriesPoint> points) {
  for (const auto& p : points) {
    out << router << ',' << num_gateways << ',';
    write_double(out, p.sim_time_s);
    out << ',';
    write_double(out, p.e2e_ms);
    out << '\n';
  }
}

}  // namespace leosim
