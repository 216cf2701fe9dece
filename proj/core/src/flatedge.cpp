#include "fpp/flatedge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "fpp/error.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"

namespace fpp {

namespace {

constexpr std::uint64_t kOrientedStream = 0x0a1e;
constexpr double kEmptyContactFraction = 0.01;

std::uint64_t bond_counter(int n, int x, int dir) {
  const auto shifted = static_cast<std::uint64_t>(static_cast<std::int64_t>(x) + (1LL << 30));
  return (static_cast<std::uint64_t>(n) << 32) | (shifted << 1) | static_cast<std::uint64_t>(dir);
}

int lower_median(std::vector<int> v) {
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2), v.end());
  return v[(v.size() - 1) / 2];
}

void finish_report(FlatEdgeReport& r) {
  r.contact_lo_bin.reset();
  r.contact_hi_bin.reset();
  if (!r.quadrant_extents.empty()) {
    std::vector<int> lo;
    std::vector<int> hi;
    for (const auto& [a, b] : r.quadrant_extents) {
      lo.push_back(a);
      hi.push_back(b);
    }
    r.contact_lo_bin = lower_median(std::move(lo));
    r.contact_hi_bin = lower_median(std::move(hi));
  }
  const int bins = static_cast<int>(r.bins.size());
  r.predicted_lo_bin = flat_edge_bin(r.n_q.x, bins);
  r.predicted_hi_bin = flat_edge_bin(r.m_q.x, bins);
  if (r.speed.supercritical) {
    r.segment_match = r.contact_lo_bin.has_value() &&
                      std::abs(*r.contact_lo_bin - r.predicted_lo_bin) <= r.options.bin_slack &&
                      std::abs(*r.contact_hi_bin - r.predicted_hi_bin) <= r.options.bin_slack;
  } else {
    r.segment_match = r.contact_fraction() < kEmptyContactFraction;
  }
}

}  // namespace

std::optional<std::vector<int>> oriented_right_edge(double q, int generations,
                                                    std::uint64_t seed) {
  if (!(q > 0.0 && q <= 1.0)) throw ConfigError("oriented parameter q must lie in (0, 1]");
  if (generations < 1) throw ConfigError("need at least one generation");
  const int g = generations;
  std::vector<std::uint8_t> cur(2 * static_cast<std::size_t>(g) + 3, 0);
  std::vector<std::uint8_t> next(cur.size(), 0);
  auto at = [g](int x) { return static_cast<std::size_t>(x + g + 1); };
  cur[at(0)] = 1;
  int lo = 0;
  int hi = 0;
  std::vector<int> right{0};
  right.reserve(static_cast<std::size_t>(g) + 1);
  for (int n = 0; n < g; ++n) {
    int new_lo = hi + 2;
    int new_hi = lo - 2;
    for (int x = lo; x <= hi; x += 2) {
      if (!cur[at(x)]) continue;
      cur[at(x)] = 0;
      if (counter_uniform(seed, kOrientedStream, bond_counter(n, x, 0)) < q) {
        next[at(x + 1)] = 1;
        new_lo = std::min(new_lo, x + 1);
        new_hi = std::max(new_hi, x + 1);
      }
      if (counter_uniform(seed, kOrientedStream, bond_counter(n, x, 1)) < q) {
        next[at(x - 1)] = 1;
        new_lo = std::min(new_lo, x - 1);
        new_hi = std::max(new_hi, x - 1);
      }
    }
    if (new_lo > new_hi) return std::nullopt;
    std::swap(cur, next);
    lo = new_lo;
    hi = new_hi;
    right.push_back(hi);
  }
  return right;
}

OrientedSpeedEstimate oriented_speed(double q, int generations, int replicas,
                                     const OrientedSpeedOptions& options) {
  if (!(q > 0.0 && q <= 1.0)) throw ConfigError("oriented parameter q must lie in (0, 1]");
  if (replicas < 1) throw ConfigError("need at least one oriented replica");
  if (generations < 2) throw ConfigError("need at least two generations");
  std::vector<std::optional<double>> speeds(static_cast<std::size_t>(replicas));
  const int half = generations / 2;
  parallel_for(speeds.size(), options.jobs, [&](std::size_t i) {
    const auto right = oriented_right_edge(q, generations, derive_seed(options.seed, 0x0a1e, i));
    if (!right) return;
    speeds[i] = static_cast<double>((*right)[generations] - (*right)[half]) /
                static_cast<double>(generations - half);
  });

  OrientedSpeedEstimate est;
  est.q = q;
  est.generations = generations;
  est.replicas = replicas;
  std::vector<double> alive;
  for (const auto& s : speeds) {
    if (s) alive.push_back(*s);
  }
  est.surviving = static_cast<int>(alive.size());
  est.survival_frequency = static_cast<double>(alive.size()) / replicas;
  est.supercritical = est.survival_frequency > options.survival_threshold;
  if (alive.empty()) return est;

  double mean = 0.0;
  for (double s : alive) mean += s;
  mean /= static_cast<double>(alive.size());
  double se = 0.0;
  if (alive.size() >= 2) {
    double ss = 0.0;
    for (double s : alive) ss += (s - mean) * (s - mean);
    se = std::sqrt(ss / static_cast<double>(alive.size() - 1) / static_cast<double>(alive.size()));
  }
  mean = std::clamp(mean, 0.0, 1.0);
  constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;
  est.alpha_raw = mean;
  est.alpha_hat = mean * kInvSqrt2;
  est.std_error = se * kInvSqrt2;
  return est;
}

std::pair<Vec2, Vec2> flat_edge_endpoints(const OrientedSpeedEstimate& speed) {
  if (!speed.supercritical || !speed.alpha_raw) return {{0.5, 0.5}, {0.5, 0.5}};
  // alpha / sqrt2 == alpha_raw / 2, kept in the raw form so q = 1 is exact.
  const double a = *speed.alpha_raw;
  return {{(1.0 + a) / 2.0, (1.0 - a) / 2.0}, {(1.0 - a) / 2.0, (1.0 + a) / 2.0}};
}

int flat_edge_bin(double s, int bins) {
  const int b = static_cast<int>(std::floor(s * bins));
  return std::clamp(b, 0, bins - 1);
}

FlatEdgeReport flat_edge_scan(const WetSet& from_origin, double t, double nu_min, double q,
                              const OrientedSpeedEstimate& speed,
                              const FlatEdgeOptions& options) {
  const Box& box = from_origin.box();
  if (box.dim() != 2) throw UnsupportedDimensionError("flat-edge analysis needs d = 2");
  if (!(nu_min > 0.0)) throw HypothesisViolatedError("flat-edge analysis needs nu_min > 0");
  if (options.bins < 1) throw ConfigError("need at least one bin");
  if (!(options.band > 0.0 && options.band < 1.0)) throw ConfigError("band must lie in (0, 1)");
  if (!(t > 0.0) || t > from_origin.horizon()) {
    throw ConfigError("scan time must be positive and within the wet-set horizon");
  }
  const auto r_hi = static_cast<std::int64_t>(std::floor(t / nu_min));
  const auto r_lo =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((1.0 - options.band) * t / nu_min)));
  if (r_hi > box.inner_half_width()) {
    throw InsufficientBoxError("t / nu_min exceeds the inner box half-width");
  }

  FlatEdgeReport r;
  r.q = q;
  r.nu_min = nu_min;
  r.t = t;
  r.speed = speed;
  r.options = options;
  std::tie(r.m_q, r.n_q) = flat_edge_endpoints(speed);
  r.bins.resize(static_cast<std::size_t>(options.bins));
  for (int b = 0; b < options.bins; ++b) {
    r.bins[b].s_lo = static_cast<double>(b) / options.bins;
    r.bins[b].s_hi = static_cast<double>(b + 1) / options.bins;
  }

  std::pair<int, int> extent[4];
  bool touched[4] = {false, false, false, false};
  for (std::int64_t k = r_lo; k <= r_hi; ++k) {
    const double bound = nu_min * static_cast<double>(k) + options.time_tolerance;
    const int kk = static_cast<int>(k);
    for (int i = 0; i < 4 * kk; ++i) {
      const int j = i % kk;
      const Point quarter[] = {{kk - j, j}, {-j, kk - j}, {j - kk, -j}, {j, j - kk}};
      const int quadrant = i / kk;
      const Point& x = quarter[quadrant];
      const double s = static_cast<double>(std::abs(x[0])) / static_cast<double>(k);
      const int b = flat_edge_bin(s, options.bins);
      FlatEdgeBin& bin = r.bins[b];
      ++bin.boundary;
      ++r.boundary_count;
      const TravelTime d = from_origin.time(x);
      if (d.is_finite() && d.value() <= t && d.value() <= bound) {
        ++bin.contact;
        r.contact_set.push_back(x);
        auto& [lo, hi] = extent[quadrant];
        if (!touched[quadrant]) {
          touched[quadrant] = true;
          lo = hi = b;
        }
        lo = std::min(lo, b);
        hi = std::max(hi, b);
      }
    }
  }
  for (int qd = 0; qd < 4; ++qd) {
    if (touched[qd]) r.quadrant_extents.push_back(extent[qd]);
  }
  finish_report(r);
  return r;
}

FlatEdgeReport flat_edge_scan(const Environment& env, const PassageField& field, double t,
                              const OrientedSpeedEstimate& speed,
                              const FlatEdgeOptions& options) {
  const PassageModel& model = field.model();
  const double nu_min = quantize_time(model_stats(model).nu_min);
  const double q = env.config().p * mass_at_minimum(model);
  const WetSet ws = wet_set(env, field, Point(env.box().dim()), t);
  return flat_edge_scan(ws, t, nu_min, q, speed, options);
}

FlatEdgeReport pool_flat_edge(std::span<const FlatEdgeReport> reports) {
  if (reports.empty()) throw ConfigError("nothing to pool");
  FlatEdgeReport pooled = reports.front();
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const FlatEdgeReport& r = reports[i];
    if (r.bins.size() != pooled.bins.size()) throw ConfigError("pooled reports differ in bins");
    for (std::size_t b = 0; b < r.bins.size(); ++b) {
      pooled.bins[b].boundary += r.bins[b].boundary;
      pooled.bins[b].contact += r.bins[b].contact;
    }
    pooled.boundary_count += r.boundary_count;
    pooled.quadrant_extents.insert(pooled.quadrant_extents.end(), r.quadrant_extents.begin(),
                                   r.quadrant_extents.end());
    pooled.contact_set.insert(pooled.contact_set.end(), r.contact_set.begin(),
                              r.contact_set.end());
  }
  finish_report(pooled);
  return pooled;
}

}  // namespace fpp
