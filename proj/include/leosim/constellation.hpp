#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace leosim {

inline constexpr double kEarthMu = 3.986004418e5;          // km^3/s^2
inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kEarthRotationRate = 7.2921159e-5;  // rad/s

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

inline constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

/// Positions in kilometres, Earth-centred Earth-fixed.
using EcefVector = Vec3;

/// Circular-orbit constellation with `num_planes` planes of `sats_per_plane`
/// evenly spaced satellites. Altitude and plane longitude (RAAN) are per plane.
struct ConstellationConfig {
  int num_planes = 7;
  int sats_per_plane = 20;
  std::vector<double> altitude_km;
  std::vector<double> plane_longitude_rad;
  double inclination_rad = deg2rad(98.6);
  /// Extra argument-of-latitude offset applied per plane index.
  double phasing_rad = 0.0;
  double earth_radius_km = kEarthRadiusKm;
  double earth_rotation_rate = kEarthRotationRate;
  double mu = kEarthMu;

  /// Planes spread evenly over `raan_spread_rad` (pi for a polar star pattern).
  static ConstellationConfig uniform(int planes, int per_plane, double altitude_km,
                                     double inclination_deg, double phasing_deg = 0.0,
                                     double raan_spread_rad = std::numbers::pi);

  int total() const { return num_planes * sats_per_plane; }
  double orbit_radius_km(int plane) const { return earth_radius_km + altitude_km.at(plane); }
  double orbital_period_s(int plane) const;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

struct SatelliteId {
  int plane = 0;
  int index = 0;

  /// Throws std::out_of_range when `flat` is not a satellite of `cfg`.
  static SatelliteId from_flat(const ConstellationConfig& cfg, int flat);
  int flat(const ConstellationConfig& cfg) const { return plane * cfg.sats_per_plane + index; }
  friend bool operator==(SatelliteId, SatelliteId) = default;
};

struct GeoPosition {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_km = 0.0;
};

/// Inertial-frame position (coincides with ECEF at t = 0).
EcefVector satellite_position_inertial(const ConstellationConfig& cfg, SatelliteId sat, double t);

EcefVector satellite_position(const ConstellationConfig& cfg, SatelliteId sat, double t);

/// All satellites, indexed by flat id.
std::vector<EcefVector> satellite_positions(const ConstellationConfig& cfg, double t);

/// Spherical-Earth conversion. Gateways are fixed in ECEF, so `t` has no effect.
EcefVector gateway_position(const GeoPosition& geo, double t,
                            double earth_radius_km = kEarthRadiusKm);

inline double slant_range(EcefVector a, EcefVector b) { return norm(a - b); }

/// Elevation of `target` seen from ground point `observer`, degrees.
double elevation_deg(EcefVector observer, EcefVector target);

}  // namespace leosim
