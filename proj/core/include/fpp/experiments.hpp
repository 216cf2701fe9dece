#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpp/asymptotics.hpp"
#include "fpp/environment.hpp"
#include "fpp/passage.hpp"
#include "fpp/paths.hpp"

namespace fpp {

/// Mean-type check: |estimate - expected| <= tol * std_error.
struct StatCheck {
  std::string name;
  double estimate = 0.0;
  double expected = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  bool pass = false;
};

StatCheck make_stat_check(std::string name, double estimate, double expected,
                          double std_error, std::uint64_t samples, double tol);

// ---- exponential coupling ----

/// Per edge: eta ~ exp(p), x ~ exp(1 - p), z ~ exp(1) from one seed;
/// omega = 1{eta <= x}, eta' = eta on omega-open edges and z elsewhere.
struct CoupledEdge {
  double eta = 0.0;
  double x = 0.0;
  double z = 0.0;
  bool omega = false;
  double eta_prime = 0.0;
};

CoupledEdge coupled_edge(double p, std::uint64_t seed, EdgeId e);

/// Running sums over edges for the (omega, eta') marginal tests.
struct CouplingMarginals {
  std::uint64_t n = 0;
  double sum_omega = 0.0;
  double sum_eta_prime = 0.0;
  double sum_eta_prime_sq = 0.0;
  double sum_omega_eta_prime = 0.0;

  void add(const CoupledEdge& e);
  void merge(const CouplingMarginals& o);
  /// P(omega = 1) = p, Var omega, E eta' = 1, Var eta' = 1, Cov(omega, eta') = 0.
  std::vector<StatCheck> checks(double p, double tol = 3.0) const;
};

struct HorizonCheck {
  double t = 0.0;
  std::size_t wet = 0;
  std::size_t wet_prime = 0;
  std::size_t violations = 0;
};

struct CouplingRun {
  std::uint64_t seed = 0;
  double p = 0.0;
  int half_width = 0;
  std::vector<HorizonCheck> horizons;
  CouplingMarginals marginals;

  std::size_t violations() const;
};

/// B_t with times eta on the full lattice against B'_t with times eta' on
/// omega, both from the origin.
CouplingRun exponential_coupling(double p, int half_width, std::span<const double> horizons,
                                 std::uint64_t seed);

// ---- scaling ----

struct ScalingRow {
  double lambda = 0.0;
  DirectionalEstimate estimate;
  double ratio = 0.0;
  double expected = 0.0;
  double pooled_std_error = 0.0;
  bool pass = false;
};

/// mu_hat under exponential(lambda) against mu_hat under exponential(1) / lambda
/// on the same replicas. `spec.model` supplies only the passage seed.
std::vector<ScalingRow> scaling_check(const ReplicaSpec& spec, std::span<const double> lambdas,
                                      const Ray& ray, double tol = 3.0);

// ---- stochastic comparison ----

struct ComparisonVerdict {
  std::size_t compared = 0;
  std::size_t violations = 0;
  std::size_t equal = 0;
  /// min and max of d / d' over vertices with 0 < d' < inf.
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::optional<double> ray_time;
  std::optional<double> ray_time_prime;

  bool pass() const { return violations == 0; }
};

/// nu' below nu in the sense quantile'(u) <= quantile(u) on a uniform grid.
bool stochastically_below(const PassageModel& lower, const PassageModel& upper,
                          int grid = 4096);

/// (p, nu) against (p', nu') on shared per-edge uniforms: pathwise
/// d'(0, y) <= d(0, y) for every y reached under (p, nu). Requires p <= p'
/// and nu' below nu. The ray records d and d' at its farthest hit.
ComparisonVerdict stochastic_comparison(const EnvConfig& env, double p_prime,
                                        const PassageModel& nu, const PassageModel& nu_prime,
                                        const Point& direction);

// ---- sandwich ----

struct SandwichRow {
  Ray ray;
  DirectionalEstimate mu;
  DirectionalEstimate mu_tilde;
  double nu_min = 0.0;
  double nu_mean = 0.0;
  bool lower_pass = false;
  bool upper_pass = false;
};

/// nu_min mu~ <= mu <= nu_mean mu~ with mu~ from dirac(1) on the same
/// environments, within tol pooled standard errors.
std::vector<SandwichRow> sandwich_check(const ReplicaSpec& spec, std::span<const Ray> rays,
                                        double tol = 3.0);

// ---- chemical tail ----

struct TailBin {
  std::int64_t norm_lo = 0;
  std::int64_t norm_hi = 0;
  std::uint64_t samples = 0;
  std::uint64_t connected = 0;
  /// exceed[k]: #{0 <-> x, D(0,x) > r_k |x|_1}
  std::vector<std::uint64_t> exceed;

  double frequency(std::size_t k) const {
    return samples > 0 ? static_cast<double>(exceed[k]) / static_cast<double>(samples) : 0.0;
  }
};

struct TailDiagnostic {
  double p = 0.0;
  int half_width = 0;
  int replicas = 0;
  std::vector<double> r_grid;
  std::vector<TailBin> bins;
  /// Smallest r whose frequency in the outermost bin is below 1 / samples.
  std::optional<double> rho_hat;
};

TailDiagnostic chemical_tail_diagnostic(double p, int half_width, int replicas,
                                        std::span<const double> r_grid, std::uint64_t seed,
                                        int n_bins = 8, int jobs = 1);

// ---- road network ----

struct CompanyShape {
  int company = 0;
  ShapeEstimate shape;
};

/// Per-company shape estimates; company c conditions on the origin in its
/// own giant. The same base seeds are used for every company.
std::vector<CompanyShape> road_network_run(const RoadNetworkSpec& spec, const Box& box,
                                           std::uint64_t seed, int replicas,
                                           std::span<const Point> fan,
                                           std::span<const int> companies, int jobs = 1);

}  // namespace fpp
