#pragma once

#include <array>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "leosim/constellation.hpp"

namespace leosim {

inline constexpr int kNone = -1;

/// ISL antenna slots. Front/back face along-track in the same plane,
/// left/right face the previous/next plane.
enum class IslSlot : int { IntraFront = 0, IntraBack = 1, InterLeft = 2, InterRight = 3 };
inline constexpr int kIslSlots = 4;

struct TopologyOptions {
  /// ISLs longer than this are infeasible (derived from the link budget).
  double max_isl_range_km = std::numeric_limits<double>::infinity();
  /// Reject ISLs whose line of sight dips below this altitude above the surface.
  double min_isl_grazing_altitude_km = 0.0;
  /// Link plane M-1 to plane 0 (only meaningful for 2*pi RAAN spreads).
  bool wrap_planes = false;
  /// GSL elevation mask; -90 disables it.
  double min_elevation_deg = -90.0;
};

/// A snapshot of the feasible links at one instant.
///
/// Satellites are identified by flat index, gateways by their index in the
/// active gateway list.
struct EdgeSet {
  /// Per satellite, the neighbour in each slot or kNone.
  std::vector<std::array<int, kIslSlots>> neighbors;
  /// Per gateway, the satellite holding its GSL (kNone only under an elevation mask).
  std::vector<int> serving_satellite;
  /// Per satellite, the closest of the gateways it serves, or kNone.
  std::vector<int> nearest_gateway;

  int num_satellites() const { return static_cast<int>(neighbors.size()); }
  int num_gateways() const { return static_cast<int>(serving_satellite.size()); }
  int degree(int sat) const;
  bool has_isl(int a, int b) const;
  /// Slot of `b` in satellite `a`'s neighbour table, or kNone.
  int slot_of(int a, int b) const;
  bool serves(int sat, int gateway) const { return serving_satellite.at(gateway) == sat; }
  /// Unique undirected ISLs as (low, high) pairs, sorted.
  std::vector<std::pair<int, int>> isl_edges() const;
};

/// Ring links inside each plane as (sat, front neighbour) pairs.
std::vector<std::pair<int, int>> build_intra_plane_isls(const ConstellationConfig& cfg);

/// Greedy nearest-first matching between adjacent planes; returns (left sat, right sat)
/// pairs where the left satellite lives in the lower-indexed plane.
std::vector<std::pair<int, int>> build_inter_plane_isls(const ConstellationConfig& cfg,
                                                        std::span<const EcefVector> positions,
                                                        const TopologyOptions& opts = {});

/// Serving satellite per gateway: minimum slant range, ties to the lowest index.
std::vector<int> build_gsls(std::span<const EcefVector> gateways,
                            std::span<const EcefVector> satellites,
                            const TopologyOptions& opts = {});

EdgeSet build_edge_set(const ConstellationConfig& cfg, std::span<const EcefVector> satellites,
                       std::span<const EcefVector> gateways, const TopologyOptions& opts = {});

/// True when the segment a-b stays above `earth_radius_km + margin_km`.
bool line_of_sight(EcefVector a, EcefVector b, double earth_radius_km, double margin_km = 0.0);

}  // namespace leosim
