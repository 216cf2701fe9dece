#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fpp/environment.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

/// Passage times live on the dyadic grid 2^-24 so that path sums of up to
/// ~2^25 time units are exact in double precision (sums are associative,
/// d(x,y) == d(y,x) bit for bit).
inline constexpr double kTimeQuantum = 0x1.0p-24;
double quantize_time(double t);

inline constexpr std::uint64_t kPassageStream = 0x7a55;

struct Dirac {
  double c = 1.0;
};

struct Exponential {
  double rate = 1.0;
};

/// q * delta_a + (1 - q) * delta_b
struct BernoulliMixture {
  double q = 0.5;
  double a = 0.0;
  double b = 1.0;
};

/// X_k^{axis_i} += weight * Z_{k + offset}^{axis_j}, Z i.i.d. standard normal
/// indexed by (site, axis).
struct KernelTap {
  Point offset;
  int axis_i = 0;
  int axis_j = 0;
  double weight = 1.0;
};

struct GaussianKernel {
  int dim = 2;
  std::vector<KernelTap> taps;

  /// E X_0^i X_lag^j, exact from the taps.
  double covariance(const Point& lag, int i, int j) const;
  double variance(int i) const { return covariance(Point(dim), i, i); }
  /// min_i Var(X_0^i)
  double sigma2() const;
  /// sum over lags of sum_{i <= j} |E X_0^i X_k^j|
  double summed_abs_covariance() const;
  /// Lags where E X_0^i X_k^j can be nonzero.
  std::vector<Point> support_lags(int i, int j) const;
};

/// n companies; company c builds on each edge with probability p[c].
/// f[c][j] is company c's time on an edge offered by j companies.
struct RoadNetworkSpec {
  std::vector<double> p;
  std::vector<std::vector<double>> f;
  int company = 0;

  int n() const { return static_cast<int>(p.size()); }
  void validate() const;
};

using PassageVariant =
    std::variant<Dirac, Exponential, BernoulliMixture, GaussianKernel, RoadNetworkSpec>;

struct PassageModel {
  PassageVariant variant = Dirac{};
  std::uint64_t seed = 0;

  void validate(int dim) const;
  /// i.i.d. law given by inverse transform of one uniform per edge.
  bool is_product() const;
  /// Quantile function of the one-edge law (product variants only).
  double quantile(double u) const;
  std::string describe() const;
};

struct ModelStats {
  double nu_min = 0.0;
  double nu_mean = 0.0;
  double m = 0.0;
};

/// Closed-form (nu_min, nu_mean, m). For road networks nu_mean is reported as
/// the largest table entry (an upper bound; the exact mean depends on the
/// giant-cluster geometry).
ModelStats model_stats(const PassageModel& model);

/// nu({nu_min}), the mass of the one-edge law at its essential infimum.
double mass_at_minimum(const PassageModel& model);

class PassageField {
 public:
  /// Validates that every time is finite and nonnegative.
  PassageField(Box box, PassageModel model, std::vector<double> times);

  double time(EdgeId e) const { return times_[e]; }
  std::span<const double> times() const { return times_; }
  const PassageModel& model() const { return model_; }
  const Box& box() const { return box_; }

 private:
  Box box_;
  PassageModel model_;
  std::vector<double> times_;
};

/// Samples times on every edge of env's box. Product and Gaussian variants do
/// not read env's bits; road networks build their own company environments.
PassageField sample_field(const PassageModel& model, const Environment& env);
PassageField sample_field(const PassageModel& model, const Box& box);

/// Unquantized X_site^axis of the Gaussian moving average.
double gaussian_component(const GaussianKernel& kernel, std::uint64_t seed,
                          const Point& site, int axis);

class RoadNetwork {
 public:
  RoadNetwork(RoadNetworkSpec spec, const Box& box, std::uint64_t seed,
              std::uint64_t max_vertices = kDefaultMaxVertices);

  static std::uint64_t company_seed(std::uint64_t seed, int company);

  const RoadNetworkSpec& spec() const { return spec_; }
  const Environment& company_environment(int c) const { return envs_[c]; }
  /// eta_e: number of companies whose giant proxy offers edge e.
  int offer_count(EdgeId e) const { return counts_[e]; }
  std::span<const std::uint8_t> offer_counts() const { return counts_; }
  PassageField company_field(int c, const PassageModel& model) const;

 private:
  RoadNetworkSpec spec_;
  std::vector<Environment> envs_;
  std::vector<std::uint8_t> counts_;
};

struct TailRow {
  int size = 0;
  int trials = 0;
  int exceed = 0;
  double probability = 0.0;
};

struct HAlphaDiagnostic {
  double threshold = 0.0;
  std::vector<TailRow> rows;
  /// Least-squares slope of log P against log |Lambda| over rows with P > 0;
  /// estimates -alpha.
  std::optional<double> slope;
};

/// Empirical P[sum_{e in Lambda} eta_e >= B |Lambda|] over random connected
/// edge sets Lambda of each requested size.
HAlphaDiagnostic h_alpha_diagnostic(const PassageField& field, double B,
                                    std::span<const int> sizes, int trials,
                                    std::uint64_t seed);

}  // namespace fpp
