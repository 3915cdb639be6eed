#include "leosim/topology.hpp"

#include <algorithm>
#include <tuple>

namespace leosim {

int EdgeSet::degree(int sat) const {
  const auto& slots = neighbors.at(static_cast<std::size_t>(sat));
  return static_cast<int>(std::count_if(slots.begin(), slots.end(), [](int n) { return n != kNone; }));
}

bool EdgeSet::has_isl(int a, int b) const { return slot_of(a, b) != kNone; }

int EdgeSet::slot_of(int a, int b) const {
  if (a < 0 || a >= num_satellites()) return kNone;
  const auto& slots = neighbors[static_cast<std::size_t>(a)];
  for (int s = 0; s < kIslSlots; ++s) {
    if (slots[static_cast<std::size_t>(s)] == b && b != kNone) return s;
  }
  return kNone;
}

std::vector<std::pair<int, int>> EdgeSet::isl_edges() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < num_satellites(); ++a) {
    for (int b : neighbors[static_cast<std::size_t>(a)]) {
      if (b != kNone && a < b) out.emplace_back(a, b);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::pair<int, int>> build_intra_plane_isls(const ConstellationConfig& cfg) {
  std::vector<std::pair<int, int>> out;
  const int n = cfg.sats_per_plane;
  if (n < 2) return out;
  // A two-satellite ring has a single edge.
  const int links_per_plane = n == 2 ? 1 : n;
  for (int m = 0; m < cfg.num_planes; ++m) {
    for (int k = 0; k < links_per_plane; ++k) {
      out.emplace_back(SatelliteId{m, k}.flat(cfg), SatelliteId{m, (k + 1) % n}.flat(cfg));
    }
  }
  return out;
}

bool line_of_sight(EcefVector a, EcefVector b, double earth_radius_km, double margin_km) {
  const Vec3 d = b - a;
  const double len2 = dot(d, d);
  double s = len2 > 0.0 ? -dot(a, d) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  const Vec3 closest = a + s * d;
  return norm(closest) >= earth_radius_km + margin_km;
}

namespace {

bool isl_feasible(EcefVector a, EcefVector b, double earth_radius_km, const TopologyOptions& opts) {
  return slant_range(a, b) <= opts.max_isl_range_km &&
         line_of_sight(a, b, earth_radius_km, opts.min_isl_grazing_altitude_km);
}

}  // namespace

std::vector<std::pair<int, int>> build_inter_plane_isls(const ConstellationConfig& cfg,
                                                        std::span<const EcefVector> positions,
                                                        const TopologyOptions& opts) {
  std::vector<std::pair<int, int>> out;
  const int planes = cfg.num_planes;
  if (planes < 2) return out;
  const int pairs = (opts.wrap_planes && planes > 2) ? planes : planes - 1;
  const int n = cfg.sats_per_plane;

  std::vector<std::tuple<double, int, int>> candidates;
  std::vector<char> left_taken, right_taken;
  for (int m = 0; m < pairs; ++m) {
    const int next = (m + 1) % planes;
    candidates.clear();
    for (int a = 0; a < n; ++a) {
      const int fa = SatelliteId{m, a}.flat(cfg);
      for (int b = 0; b < n; ++b) {
        const int fb = SatelliteId{next, b}.flat(cfg);
        const auto pa = positions[static_cast<std::size_t>(fa)];
        const auto pb = positions[static_cast<std::size_t>(fb)];
        if (isl_feasible(pa, pb, cfg.earth_radius_km, opts)) {
          candidates.emplace_back(slant_range(pa, pb), fa, fb);
        }
      }
    }
    std::sort(candidates.begin(), candidates.end());
    right_taken.assign(static_cast<std::size_t>(n), 0);  // indexed by in-plane index in m
    left_taken.assign(static_cast<std::size_t>(n), 0);   // indexed by in-plane index in next
    for (const auto& [dist, fa, fb] : candidates) {
      const auto ia = static_cast<std::size_t>(fa % n), ib = static_cast<std::size_t>(fb % n);
      if (right_taken[ia] || left_taken[ib]) continue;
      right_taken[ia] = left_taken[ib] = 1;
      out.emplace_back(fa, fb);
    }
  }
  return out;
}

std::vector<int> build_gsls(std::span<const EcefVector> gateways,
                            std::span<const EcefVector> satellites, const TopologyOptions& opts) {
  std::vector<int> serving(gateways.size(), kNone);
  for (std::size_t g = 0; g < gateways.size(); ++g) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < satellites.size(); ++s) {
      if (opts.min_elevation_deg > -90.0 &&
          elevation_deg(gateways[g], satellites[s]) < opts.min_elevation_deg) {
        continue;
      }
      const double d = slant_range(gateways[g], satellites[s]);
      if (d < best) {
        best = d;
        serving[g] = static_cast<int>(s);
      }
    }
  }
  return serving;
}

EdgeSet build_edge_set(const ConstellationConfig& cfg, std::span<const EcefVector> satellites,
                       std::span<const EcefVector> gateways, const TopologyOptions& opts) {
  EdgeSet edges;
  const auto n = static_cast<std::size_t>(cfg.total());
  edges.neighbors.assign(n, {kNone, kNone, kNone, kNone});

  for (const auto& [a, front] : build_intra_plane_isls(cfg)) {
    if (!isl_feasible(satellites[static_cast<std::size_t>(a)],
                      satellites[static_cast<std::size_t>(front)], cfg.earth_radius_km, opts)) {
      continue;
    }
    edges.neighbors[static_cast<std::size_t>(a)][static_cast<int>(IslSlot::IntraFront)] = front;
    edges.neighbors[static_cast<std::size_t>(front)][static_cast<int>(IslSlot::IntraBack)] = a;
  }
  for (const auto& [left, right] : build_inter_plane_isls(cfg, satellites, opts)) {
    edges.neighbors[static_cast<std::size_t>(left)][static_cast<int>(IslSlot::InterRight)] = right;
    edges.neighbors[static_cast<std::size_t>(right)][static_cast<int>(IslSlot::InterLeft)] = left;
  }

  edges.serving_satellite = build_gsls(gateways, satellites, opts);
  edges.nearest_gateway.assign(n, kNone);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  for (std::size_t g = 0; g < gateways.size(); ++g) {
    const int s = edges.serving_satellite[g];
    if (s == kNone) continue;
    const auto si = static_cast<std::size_t>(s);
    const double d = slant_range(gateways[g], satellites[si]);
    if (d < best[si]) {
      best[si] = d;
      edges.nearest_gateway[si] = static_cast<int>(g);
    }
  }
  return edges;
}

}  // namespace leosim
