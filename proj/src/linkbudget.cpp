#include "leosim/linkbudget.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "leosim/errors.hpp"

namespace leosim {

double LinkBudgetParams::frequency(LinkClass cls) const {
  switch (cls) {
    case LinkClass::Uplink: return uplink_freq_hz;
    case LinkClass::Downlink: return downlink_freq_hz;
    case LinkClass::Isl: return isl_freq_hz;
  }
  return isl_freq_hz;
}

const RadioParams& LinkBudgetParams::transmitter(LinkClass cls) const {
  return cls == LinkClass::Uplink ? gateway : satellite;
}

const RadioParams& LinkBudgetParams::receiver(LinkClass cls) const {
  return cls == LinkClass::Downlink ? gateway : satellite;
}

void LinkBudgetParams::validate() const {
  const double values[] = {satellite.tx_power_w, satellite.dish_diameter_m, gateway.tx_power_w,
                           gateway.dish_diameter_m, uplink_freq_hz, downlink_freq_hz, isl_freq_hz,
                           aperture_efficiency, bandwidth_hz, noise_temperature_k, boltzmann,
                           speed_of_light};
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("link budget parameters must be finite and > 0");
    }
  }
}

double antenna_gain(double diameter_m, double freq_hz, double efficiency, double speed_of_light) {
  const double k = std::numbers::pi * diameter_m * freq_hz / speed_of_light;
  return efficiency * k * k;
}

double free_space_path_loss(double distance_km, double freq_hz, double speed_of_light) {
  const double k = 4.0 * std::numbers::pi * distance_km * 1e3 * freq_hz / speed_of_light;
  return k * k;
}

double received_power(LinkClass cls, const LinkBudgetParams& p, double distance_km) {
  if (!(distance_km > 0.0)) throw std::domain_error("received_power: distance must be > 0");
  const double f = p.frequency(cls);
  const auto& tx = p.transmitter(cls);
  const auto& rx = p.receiver(cls);
  const double gt = antenna_gain(tx.dish_diameter_m, f, p.aperture_efficiency, p.speed_of_light);
  const double gr = antenna_gain(rx.dish_diameter_m, f, p.aperture_efficiency, p.speed_of_light);
  return tx.tx_power_w * gt * gr / free_space_path_loss(distance_km, f, p.speed_of_light);
}

double snr_db(LinkClass cls, const LinkBudgetParams& p, double distance_km) {
  const double noise = p.boltzmann * p.noise_temperature_k * p.bandwidth_hz;
  return to_db(received_power(cls, p, distance_km) / noise);
}

McsTable::McsTable(std::vector<McsEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("MODCOD table is empty");
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (!(entries_[i].spectral_efficiency > entries_[i - 1].spectral_efficiency) ||
        !(entries_[i].snr_min_db > entries_[i - 1].snr_min_db)) {
      throw std::invalid_argument("MODCOD table must be strictly ascending (line entry " +
                                  std::to_string(i + 1) + ")");
    }
  }
}

McsTable McsTable::parse(std::istream& in) {
  std::vector<McsEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    McsEntry e;
    if (!(fields >> e.spectral_efficiency >> e.snr_min_db)) {
      throw std::invalid_argument("MODCOD table: malformed line " + std::to_string(lineno));
    }
    entries.push_back(e);
  }
  return McsTable(std::move(entries));
}

McsTable McsTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open MODCOD table " + path);
  return parse(in);
}

std::optional<std::size_t> McsTable::select(double snr) const {
  auto it = std::upper_bound(entries_.begin(), entries_.end(), snr,
                             [](double v, const McsEntry& e) { return v < e.snr_min_db; });
  if (it == entries_.begin()) return std::nullopt;
  return static_cast<std::size_t>(std::distance(entries_.begin(), it) - 1);
}

double McsTable::median_efficiency() const {
  const std::size_t n = entries_.size();
  if (n == 0) return 0.0;
  if (n % 2 == 1) return entries_[n / 2].spectral_efficiency;
  return 0.5 * (entries_[n / 2 - 1].spectral_efficiency + entries_[n / 2].spectral_efficiency);
}

double link_rate(LinkClass cls, const LinkBudgetParams& p, const McsTable& mcs, double distance_km) {
  const auto idx = mcs.select(snr_db(cls, p, distance_km));
  if (!idx) return 0.0;
  return p.bandwidth_hz * mcs.entries()[*idx].spectral_efficiency;
}

double max_link_range_km(LinkClass cls, const LinkBudgetParams& p, const McsTable& mcs) {
  if (mcs.empty()) return 0.0;
  // SNR scales with 1/d^2.
  constexpr double ref_km = 1000.0;
  const double margin_db = snr_db(cls, p, ref_km) - mcs.entries().front().snr_min_db;
  return ref_km * std::pow(10.0, margin_db / 20.0);
}

HopLatency hop_latency(double queue_delay_s, double bits, double rate_bps, double distance_km,
                       double speed_of_light) {
  if (!(rate_bps > 0.0)) throw InfeasibleLink("hop_latency: link rate is zero");
  return {queue_delay_s, bits / rate_bps, distance_km * 1e3 / speed_of_light};
}

}  // namespace leosim
