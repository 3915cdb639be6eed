#pragma once

#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace leosim {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K

enum class LinkClass { Uplink, Downlink, Isl };

struct RadioParams {
  double tx_power_w = 0.0;
  double dish_diameter_m = 0.0;
};

struct LinkBudgetParams {
  RadioParams satellite{10.0, 0.26};
  RadioParams gateway{20.0, 0.33};
  double uplink_freq_hz = 30e9;
  double downlink_freq_hz = 20e9;
  double isl_freq_hz = 26e9;
  double aperture_efficiency = 0.6;
  double bandwidth_hz = 500e6;
  double noise_temperature_k = 290.0;
  double boltzmann = kBoltzmann;
  double speed_of_light = kSpeedOfLight;

  double frequency(LinkClass cls) const;
  const RadioParams& transmitter(LinkClass cls) const;
  const RadioParams& receiver(LinkClass cls) const;
  void validate() const;
};

/// Parabolic dish gain eta * (pi D f / c)^2, linear.
double antenna_gain(double diameter_m, double freq_hz, double efficiency,
                    double speed_of_light = kSpeedOfLight);

/// (4 pi d f / c)^2, linear, d in km.
double free_space_path_loss(double distance_km, double freq_hz,
                            double speed_of_light = kSpeedOfLight);

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

/// Received power in W. Throws std::domain_error unless distance > 0.
double received_power(LinkClass cls, const LinkBudgetParams& params, double distance_km);

/// SNR in dB with noise k_B T_S W over the whole bandwidth.
double snr_db(LinkClass cls, const LinkBudgetParams& params, double distance_km);

struct McsEntry {
  double spectral_efficiency = 0.0;  // bits/s/Hz
  double snr_min_db = 0.0;
};

/// MODCOD table sorted strictly ascending in both efficiency and threshold.
class McsTable {
 public:
  McsTable() = default;
  /// Throws std::invalid_argument if empty or not strictly ascending.
  explicit McsTable(std::vector<McsEntry> entries);

  /// Lines of `rho, snr_min_db`; '#' starts a comment.
  static McsTable parse(std::istream& in);
  static McsTable from_file(const std::string& path);

  std::span<const McsEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Highest entry whose threshold is <= snr (inclusive); nullopt if none.
  std::optional<std::size_t> select(double snr_db) const;
  /// Median spectral efficiency (mean of the middle pair for even sizes).
  double median_efficiency() const;

 private:
  std::vector<McsEntry> entries_;
};

/// W * rho* in bits/s, or 0 when the SNR is below every threshold.
double link_rate(LinkClass cls, const LinkBudgetParams& params, const McsTable& mcs,
                 double distance_km);

/// Longest distance with a nonzero rate.
double max_link_range_km(LinkClass cls, const LinkBudgetParams& params, const McsTable& mcs);

struct HopLatency {
  double queue_s = 0.0;
  double tx_s = 0.0;
  double prop_s = 0.0;
  double total() const { return queue_s + tx_s + prop_s; }
};

/// Queue, transmission and propagation terms of one hop. Throws InfeasibleLink on rate <= 0.
HopLatency hop_latency(double queue_delay_s, double bits, double rate_bps, double distance_km,
                       double speed_of_light = kSpeedOfLight);

}  // namespace leosim
