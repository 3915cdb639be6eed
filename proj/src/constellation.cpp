#include "leosim/constellation.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace leosim {

ConstellationConfig ConstellationConfig::uniform(int planes, int per_plane, double altitude_km,
                                                 double inclination_deg, double phasing_deg,
                                                 double raan_spread_rad) {
  ConstellationConfig cfg;
  cfg.num_planes = planes;
  cfg.sats_per_plane = per_plane;
  cfg.altitude_km.assign(static_cast<std::size_t>(std::max(planes, 0)), altitude_km);
  cfg.plane_longitude_rad.resize(cfg.altitude_km.size());
  for (int m = 0; m < planes; ++m) {
    cfg.plane_longitude_rad[static_cast<std::size_t>(m)] = raan_spread_rad * m / planes;
  }
  cfg.inclination_rad = deg2rad(inclination_deg);
  cfg.phasing_rad = deg2rad(phasing_deg);
  return cfg;
}

double ConstellationConfig::orbital_period_s(int plane) const {
  const double r = orbit_radius_km(plane);
  return 2.0 * std::numbers::pi * std::sqrt(r * r * r / mu);
}

void ConstellationConfig::validate() const {
  if (num_planes < 1) throw std::invalid_argument("num_planes must be >= 1");
  if (sats_per_plane < 1) throw std::invalid_argument("sats_per_plane must be >= 1");
  const auto planes = static_cast<std::size_t>(num_planes);
  if (altitude_km.size() != planes) throw std::invalid_argument("altitude_km needs one entry per plane");
  if (plane_longitude_rad.size() != planes) {
    throw std::invalid_argument("plane_longitude_rad needs one entry per plane");
  }
  for (double h : altitude_km) {
    if (!(h > 0.0)) throw std::invalid_argument("altitude must be > 0");
  }
  if (!(earth_radius_km > 0.0) || !(mu > 0.0)) throw std::invalid_argument("bad physical constants");
}

SatelliteId SatelliteId::from_flat(const ConstellationConfig& cfg, int flat) {
  if (flat < 0 || flat >= cfg.total()) {
    throw std::out_of_range("satellite index " + std::to_string(flat) + " out of range");
  }
  return {flat / cfg.sats_per_plane, flat % cfg.sats_per_plane};
}

namespace {

void check(const ConstellationConfig& cfg, SatelliteId sat) {
  if (sat.plane < 0 || sat.plane >= cfg.num_planes || sat.index < 0 ||
      sat.index >= cfg.sats_per_plane) {
    throw std::out_of_range("satellite (" + std::to_string(sat.plane) + ", " +
                            std::to_string(sat.index) + ") out of range");
  }
}

}  // namespace

EcefVector satellite_position_inertial(const ConstellationConfig& cfg, SatelliteId sat, double t) {
  check(cfg, sat);
  const double r = cfg.orbit_radius_km(sat.plane);
  const double mean_motion = std::sqrt(cfg.mu / (r * r * r));
  const double u = 2.0 * std::numbers::pi * sat.index / cfg.sats_per_plane +
                   cfg.phasing_rad * sat.plane + mean_motion * t;
  const double raan = cfg.plane_longitude_rad[static_cast<std::size_t>(sat.plane)];
  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(raan), so = std::sin(raan);
  const double ci = std::cos(cfg.inclination_rad), si = std::sin(cfg.inclination_rad);
  return {r * (co * cu - so * su * ci), r * (so * cu + co * su * ci), r * su * si};
}

EcefVector satellite_position(const ConstellationConfig& cfg, SatelliteId sat, double t) {
  const EcefVector p = satellite_position_inertial(cfg, sat, t);
  const double theta = cfg.earth_rotation_rate * t;
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * p.x + s * p.y, -s * p.x + c * p.y, p.z};
}

std::vector<EcefVector> satellite_positions(const ConstellationConfig& cfg, double t) {
  std::vector<EcefVector> out;
  out.reserve(static_cast<std::size_t>(cfg.total()));
  for (int flat = 0; flat < cfg.total(); ++flat) {
    out.push_back(satellite_position(cfg, SatelliteId::from_flat(cfg, flat), t));
  }
  return out;
}

EcefVector gateway_position(const GeoPosition& geo, double /*t*/, double earth_radius_km) {
  if (!(std::abs(geo.lat_deg) <= 90.0) || !(geo.lon_deg > -180.0 && geo.lon_deg <= 180.0)) {
    throw std::invalid_argument("invalid geographic position");
  }
  const double r = earth_radius_km + geo.alt_km;
  const double lat = deg2rad(geo.lat_deg), lon = deg2rad(geo.lon_deg);
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

double elevation_deg(EcefVector observer, EcefVector target) {
  const Vec3 los = target - observer;
  const double s = dot(los, observer) / (norm(los) * norm(observer));
  return rad2deg(std::asin(std::clamp(s, -1.0, 1.0)));
}

}  // namespace leosim
