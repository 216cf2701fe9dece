#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpp/environment.hpp"
#include "fpp/geometry.hpp"
#include "fpp/passage.hpp"
#include "fpp/paths.hpp"

namespace fpp {

/// Independent (environment, passage field) replicas. env.seed and
/// model.seed are the two base seeds; replica i derives its own pair.
struct ReplicaSpec {
  EnvConfig env;
  PassageModel model;
  int replicas = 20;
  /// Rejection budget per replica for the origin-in-giant conditioning.
  int max_attempts = 200;
  int jobs = 1;
};

struct Replica {
  int index = 0;
  int attempts = 0;
  std::uint64_t env_seed = 0;
  std::uint64_t passage_seed = 0;
  Environment env;
  PassageField field;
};

/// Replica `index`, conditioned on the origin lying in the giant proxy by
/// resampling the environment seed. Road-network models resample the
/// company seeds instead and use the chosen company's environment.
Replica make_replica(const ReplicaSpec& spec, int index);

/// The multiples k*u (k divisible by `multiple`) along a primitive u.
/// The estimated constant is that of the vector multiple * u.
struct Ray {
  Point direction;
  int multiple = 1;

  Point vector() const { return direction * multiple; }
};

struct RaySample {
  std::vector<std::int64_t> hits;
  std::vector<double> ratios;
};

struct DirectionalEstimate {
  Ray ray;
  std::vector<RaySample> samples;
  std::vector<double> replica_values;
  double mu_hat = 0.0;
  double std_error = 0.0;
  /// Smallest number of hits used by any replica.
  std::size_t n_hits = 0;

  Point vector() const { return ray.vector(); }
};

/// d(0, k u) / (k / multiple) along the ray, from a full wet set around the
/// origin. At most n_hits hits (n_hits < 0: all inside the inner box).
RaySample sample_ray(const Environment& env, const WetSet& from_origin, const Ray& ray,
                     std::int64_t n_hits);

/// Tail-averaged estimate: mean over replicas of each replica's last ratio.
DirectionalEstimate aggregate_ray(const Ray& ray, std::vector<RaySample> samples);

/// All rays share the replicas; one shortest-path sweep per replica.
std::vector<DirectionalEstimate> estimate_directions(const ReplicaSpec& spec,
                                                     std::span<const Ray> rays,
                                                     std::int64_t n_hits = -1);

DirectionalEstimate estimate_mu(const ReplicaSpec& spec, const Ray& ray,
                                std::int64_t n_hits = -1);
DirectionalEstimate estimate_mu(std::span<const Replica> replicas, const Ray& ray,
                                std::int64_t n_hits = -1);

struct PropertyCheck {
  std::string property;
  std::string detail;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct NormReport {
  double mu_star = 0.0;
  double tolerance = 3.0;
  std::vector<PropertyCheck> checks;

  bool all_pass() const;
  std::size_t count(std::string_view property) const;
  bool passed(std::string_view property) const;
};

/// Checks, at tol pooled standard errors:
///   symmetry      mu(-w) = mu(w)
///   reflection    mu(w with one coordinate negated) = mu(w)
///   permutation   mu(w with two coordinates swapped) = mu(w)
///   homogeneity   mu(k w) = k mu(w)
///   subadditivity mu(v + w) <= mu(v) + mu(w)
///   bound         mu(w) <= mu_* |w|_1
///   continuity    |mu(v) - mu(w)| <= mu_* |v - w|_1
/// with mu_* the largest axis estimate present.
NormReport check_norm_properties(std::span<const DirectionalEstimate> estimates, double tol);

/// Primitive vectors with all |coordinates| <= max_coord.
std::vector<Point> direction_fan(int dim, int max_coord);

struct ShapeEstimate {
  std::vector<DirectionalEstimate> estimates;
  /// Convex hull of +-w / mu_hat(w) (d = 2 only).
  ConvexPolygon ball;
  double mu_star = 0.0;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

ShapeEstimate shape_from_estimates(std::vector<DirectionalEstimate> estimates);
ShapeEstimate estimate_shape(const ReplicaSpec& spec, std::span<const Point> fan,
                             std::int64_t n_hits = -1);

struct HausdorffTrace {
  std::vector<double> times;
  std::vector<double> distances;
  int resolution = 0;
};

/// Hull of the unit cells (side 1/t) centred at the points of B_t / t.
ConvexPolygon rescaled_wet_hull(const WetSet& ws, double t);

/// D(B_t / t, ball) for each t, in the gauge of `gauge` (default: ball), by
/// support-function comparison. Throws TruncationError when B_t leaves the
/// inner box.
HausdorffTrace hausdorff_trace(const WetSet& from_origin, const ConvexPolygon& ball,
                               std::span<const double> times,
                               const ConvexPolygon* gauge = nullptr, int resolution = 1440);
HausdorffTrace hausdorff_trace(const Environment& env, const PassageField& field,
                               const ConvexPolygon& ball, std::span<const double> times,
                               const ConvexPolygon* gauge = nullptr, int resolution = 1440);

enum class DegeneracyVerdict { degenerate, norm, inconclusive };
std::string_view to_string(DegeneracyVerdict v);

struct DegeneracyProbe {
  double p = 0.0;
  double q_zero = 0.0;
  DirectionalEstimate axis;
  DegeneracyVerdict verdict = DegeneracyVerdict::inconclusive;
};

struct DegeneracyThresholds {
  double eps_degenerate = 0.05;
  double eps_norm = 0.2;
};

/// mu_hat(e_1) in d = 2 under nu = q_zero delta_0 + (1 - q_zero) delta_1.
DegeneracyProbe degeneracy_probe(double p, double q_zero, int half_width, int replicas,
                                 std::uint64_t env_seed, std::uint64_t passage_seed,
                                 DegeneracyThresholds thresholds = {}, int jobs = 1);

}  // namespace fpp
