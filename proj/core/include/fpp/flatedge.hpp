#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fpp/environment.hpp"
#include "fpp/geometry.hpp"
#include "fpp/passage.hpp"
#include "fpp/paths.hpp"

namespace fpp {

/// Oriented bond percolation on the rotated lattice: site (n, x) with
/// x = a - b, n = a + b for the lattice point (a, b); bonds go to (n+1, x+1)
/// and (n+1, x-1). alpha_raw is the right-edge displacement per generation
/// in these coordinates, alpha = alpha_raw / sqrt(2) the speed in the
/// lattice normalization where M_q = (1/2 + alpha/sqrt2, 1/2 - alpha/sqrt2).
struct OrientedSpeedEstimate {
  double q = 0.0;
  int generations = 0;
  int replicas = 0;
  int surviving = 0;
  double survival_frequency = 0.0;
  bool supercritical = false;
  /// Undefined when every replica dies.
  std::optional<double> alpha_raw;
  std::optional<double> alpha_hat;
  double std_error = 0.0;
};

struct OrientedSpeedOptions {
  std::uint64_t seed = 0;
  int jobs = 1;
  double survival_threshold = 0.1;
};

/// Right edge r_n of the cluster of the origin for n = 0..generations, or
/// nothing if it dies first. Bond randomness is shared across q for a fixed
/// (seed, replica).
std::optional<std::vector<int>> oriented_right_edge(double q, int generations,
                                                    std::uint64_t seed);

/// Replicas start from a single site; on survival the right edge coincides
/// with the half-line process, so each surviving replica contributes
/// (r_n - r_{n/2}) / (n/2).
OrientedSpeedEstimate oriented_speed(double q, int generations, int replicas,
                                     const OrientedSpeedOptions& options = {});

/// M_q and N_q (before division by nu_min). With no estimate (subcritical)
/// both collapse to the diagonal point (1/2, 1/2).
std::pair<Vec2, Vec2> flat_edge_endpoints(const OrientedSpeedEstimate& speed);

struct FlatEdgeOptions {
  int bins = 20;
  /// Relative width of the band |x|_1 in [(1 - eps) t, t] / nu_min.
  double band = 0.02;
  /// Slack on d(0,x) - nu_min |x|_1; zero is exact equality.
  double time_tolerance = 0.0;
  int bin_slack = 2;
};

struct FlatEdgeBin {
  double s_lo = 0.0;
  double s_hi = 0.0;
  std::int64_t boundary = 0;
  std::int64_t contact = 0;
  double fraction() const {
    return boundary > 0 ? static_cast<double>(contact) / static_cast<double>(boundary) : 0.0;
  }
};

/// Contact of B_t with the diamond boundary, folded over the four quadrants
/// onto the positive one. Bins are uniform in s = |x_1| / |x|_1, the
/// position along the diamond edge from (0, 1) to (1, 0). Each quadrant is
/// a separate sample of the contact extent.
struct FlatEdgeReport {
  double q = 0.0;
  double nu_min = 0.0;
  double t = 0.0;
  OrientedSpeedEstimate speed;
  Vec2 m_q;
  Vec2 n_q;
  FlatEdgeOptions options;
  std::vector<FlatEdgeBin> bins;
  std::vector<Point> contact_set;
  std::int64_t boundary_count = 0;
  /// Lowest and highest contact bin of each quadrant sample with contact.
  std::vector<std::pair<int, int>> quadrant_extents;
  /// Median over quadrant_extents.
  std::optional<int> contact_lo_bin;
  std::optional<int> contact_hi_bin;
  int predicted_lo_bin = 0;
  int predicted_hi_bin = 0;
  bool segment_match = false;

  double contact_fraction() const {
    return boundary_count > 0 ? static_cast<double>(contact_set.size()) /
                                    static_cast<double>(boundary_count)
                              : 0.0;
  }
};

/// Bin of s in [0, 1] among `bins` uniform bins.
int flat_edge_bin(double s, int bins);

FlatEdgeReport flat_edge_scan(const WetSet& from_origin, double t, double nu_min,
                              double q, const OrientedSpeedEstimate& speed,
                              const FlatEdgeOptions& options = {});
FlatEdgeReport flat_edge_scan(const Environment& env, const PassageField& field, double t,
                              const OrientedSpeedEstimate& speed,
                              const FlatEdgeOptions& options = {});

/// Sums bins and contact sets of reports sharing (t, nu_min, speed, options)
/// and recomputes the extent.
FlatEdgeReport pool_flat_edge(std::span<const FlatEdgeReport> reports);

}  // namespace fpp
