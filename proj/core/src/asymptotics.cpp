#include "fpp/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "fpp/error.hpp"
#include "fpp/io.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"

namespace fpp {

Replica make_replica(const ReplicaSpec& spec, int index) {
  spec.env.validate();
  spec.model.validate(spec.env.dim());
  const Box& box = spec.env.box;
  const Point origin(box.dim());
  const auto idx = static_cast<std::uint64_t>(index);

  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    const auto att = static_cast<std::uint64_t>(attempt);
    if (const auto* road = std::get_if<RoadNetworkSpec>(&spec.model.variant)) {
      PassageModel model = spec.model;
      model.seed = derive_seed(spec.model.seed, idx, att);
      RoadNetwork net(*road, box, model.seed);
      const Environment& env = net.company_environment(road->company);
      if (!env.in_giant(origin)) continue;
      return Replica{index,
                     attempt + 1,
                     RoadNetwork::company_seed(model.seed, road->company),
                     model.seed,
                     env,
                     net.company_field(road->company, model)};
    }
    const std::uint64_t env_seed = derive_seed(spec.env.seed, idx, att);
    Environment env = Environment::generate(EnvConfig{box, spec.env.p, env_seed});
    if (!env.in_giant(origin)) continue;
    PassageModel model = spec.model;
    model.seed = derive_seed(spec.model.seed, idx);
    PassageField field = sample_field(model, env);
    return Replica{index, attempt + 1, env_seed, model.seed, std::move(env), std::move(field)};
  }
  throw InsufficientBoxError("origin never landed in the giant cluster after " +
                             std::to_string(spec.max_attempts) + " environment draws");
}

RaySample sample_ray(const Environment& env, const WetSet& from_origin, const Ray& ray,
                     std::int64_t n_hits) {
  if (ray.multiple < 1) throw ConfigError("ray multiple must be >= 1");
  if (!is_primitive(ray.direction)) {
    throw ConfigError("ray direction " + ray.direction.to_string() + " is not primitive");
  }
  RaySample s;
  for (std::int64_t k : line_cluster_hits(env, ray.direction)) {
    if (k % ray.multiple != 0) continue;
    if (n_hits >= 0 && static_cast<std::int64_t>(s.hits.size()) >= n_hits) break;
    const TravelTime t = from_origin.time(ray.direction * k);
    if (t.is_infinite()) continue;
    s.hits.push_back(k);
    s.ratios.push_back(t.value() / static_cast<double>(k / ray.multiple));
  }
  if (s.hits.empty()) {
    throw InsufficientBoxError("no giant-cluster hit along " + ray.vector().to_string() +
                               " inside the inner box");
  }
  return s;
}

DirectionalEstimate aggregate_ray(const Ray& ray, std::vector<RaySample> samples) {
  DirectionalEstimate est;
  est.ray = ray;
  est.samples = std::move(samples);
  if (est.samples.empty()) return est;
  est.n_hits = est.samples.front().hits.size();
  for (const RaySample& s : est.samples) {
    est.replica_values.push_back(s.ratios.back());
    est.n_hits = std::min(est.n_hits, s.hits.size());
  }
  const auto n = static_cast<double>(est.replica_values.size());
  est.mu_hat = std::accumulate(est.replica_values.begin(), est.replica_values.end(), 0.0) / n;
  if (est.replica_values.size() >= 2) {
    double ss = 0.0;
    for (double v : est.replica_values) ss += (v - est.mu_hat) * (v - est.mu_hat);
    est.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return est;
}

std::vector<DirectionalEstimate> estimate_directions(const ReplicaSpec& spec,
                                                     std::span<const Ray> rays,
                                                     std::int64_t n_hits) {
  if (spec.replicas < 1) throw ConfigError("need at least one replica");
  const auto n_rep = static_cast<std::size_t>(spec.replicas);
  std::vector<std::vector<RaySample>> per_replica(n_rep);
  parallel_for(n_rep, spec.jobs, [&](std::size_t i) {
    const Replica rep = make_replica(spec, static_cast<int>(i));
    const WetSet ws = wet_set(rep.env, rep.field, Point(rep.env.box().dim()));
    auto& out = per_replica[i];
    out.reserve(rays.size());
    for (const Ray& ray : rays) {
      out.push_back(ray.direction.is_zero() ? RaySample{} : sample_ray(rep.env, ws, ray, n_hits));
    }
  });

  std::vector<DirectionalEstimate> estimates;
  estimates.reserve(rays.size());
  for (std::size_t r = 0; r < rays.size(); ++r) {
    if (rays[r].direction.is_zero()) {
      DirectionalEstimate zero;
      zero.ray = rays[r];
      estimates.push_back(std::move(zero));
      continue;
    }
    std::vector<RaySample> samples;
    samples.reserve(n_rep);
    for (auto& rep : per_replica) samples.push_back(std::move(rep[r]));
    estimates.push_back(aggregate_ray(rays[r], std::move(samples)));
  }
  return estimates;
}

DirectionalEstimate estimate_mu(const ReplicaSpec& spec, const Ray& ray, std::int64_t n_hits) {
  const Ray rays[] = {ray};
  return std::move(estimate_directions(spec, rays, n_hits).front());
}

DirectionalEstimate estimate_mu(std::span<const Replica> replicas, const Ray& ray,
                                std::int64_t n_hits) {
  if (ray.direction.is_zero()) {
    DirectionalEstimate zero;
    zero.ray = ray;
    return zero;
  }
  std::vector<RaySample> samples;
  for (const Replica& rep : replicas) {
    const WetSet ws = wet_set(rep.env, rep.field, Point(rep.env.box().dim()));
    samples.push_back(sample_ray(rep.env, ws, ray, n_hits));
  }
  return aggregate_ray(ray, std::move(samples));
}

bool NormReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass; });
}

std::size_t NormReport::count(std::string_view property) const {
  return static_cast<std::size_t>(std::count_if(
      checks.begin(), checks.end(), [&](const PropertyCheck& c) { return c.property == property; }));
}

bool NormReport::passed(std::string_view property) const {
  return std::all_of(checks.begin(), checks.end(), [&](const PropertyCheck& c) {
    return c.property != property || c.pass;
  });
}

namespace {

double pooled(std::initializer_list<double> errs) {
  double s = 0.0;
  for (double e : errs) s += e * e;
  return std::sqrt(s);
}

}  // namespace

NormReport check_norm_properties(std::span<const DirectionalEstimate> estimates, double tol) {
  NormReport report;
  report.tolerance = tol;
  std::map<Point, const DirectionalEstimate*> by_vector;
  for (const DirectionalEstimate& e : estimates) {
    if (!e.vector().is_zero()) by_vector.emplace(e.vector(), &e);
  }
  if (by_vector.empty()) return report;
  const int dim = by_vector.begin()->first.dim();

  const DirectionalEstimate* star = nullptr;
  for (const auto& [w, e] : by_vector) {
    if (norm1(w) == 1 && (!star || e->mu_hat > star->mu_hat)) star = e;
  }
  report.mu_star = star ? star->mu_hat : 0.0;

  auto add = [&](std::string property, std::string detail, double lhs, double rhs) {
    report.checks.push_back({std::move(property), std::move(detail), lhs, rhs, lhs <= rhs});
  };
  auto equal_check = [&](const char* property, const DirectionalEstimate& a,
                         const DirectionalEstimate& b, double scale_b = 1.0) {
    const double diff = std::abs(a.mu_hat - scale_b * b.mu_hat);
    const double slack = tol * pooled({a.std_error, scale_b * b.std_error});
    std::string detail = "mu" + a.vector().to_string() + "=" + format_double(a.mu_hat) + " vs " +
                         (scale_b != 1.0 ? format_double(scale_b) + "*" : std::string()) + "mu" +
                         b.vector().to_string() + "=" + format_double(b.mu_hat);
    add(property, std::move(detail), diff, slack);
  };

  for (const auto& [w, e] : by_vector) {
    if (auto it = by_vector.find(-w); it != by_vector.end() && w < -w) {
      equal_check("symmetry", *e, *it->second);
    }
    for (int i = 0; i < dim; ++i) {
      Point r = w;
      r[i] = -r[i];
      if (auto it = by_vector.find(r); it != by_vector.end() && w < r) {
        equal_check("reflection", *e, *it->second);
      }
      for (int j = i + 1; j < dim; ++j) {
        Point s = w;
        std::swap(s[i], s[j]);
        if (auto it = by_vector.find(s); it != by_vector.end() && w < s) {
          equal_check("permutation", *e, *it->second);
        }
      }
    }
    for (int k = 2; k <= 4; ++k) {
      if (auto it = by_vector.find(w * k); it != by_vector.end()) {
        equal_check("homogeneity", *it->second, *e, static_cast<double>(k));
      }
    }
    if (star) {
      const double n1 = static_cast<double>(norm1(w));
      add("bound",
          "mu" + w.to_string() + "=" + format_double(e->mu_hat) + " <= mu*|w|_1=" +
              format_double(report.mu_star * n1),
          e->mu_hat, report.mu_star * n1 + tol * pooled({e->std_error, n1 * star->std_error}));
    }
  }

  for (auto a = by_vector.begin(); a != by_vector.end(); ++a) {
    for (auto b = std::next(a); b != by_vector.end(); ++b) {
      const Point sum = a->first + b->first;
      if (auto it = by_vector.find(sum); it != by_vector.end()) {
        const DirectionalEstimate& s = *it->second;
        add("subadditivity",
            "mu" + sum.to_string() + "=" + format_double(s.mu_hat) + " <= mu" +
                a->first.to_string() + "+mu" + b->first.to_string() + "=" +
                format_double(a->second->mu_hat + b->second->mu_hat),
            s.mu_hat,
            a->second->mu_hat + b->second->mu_hat +
                tol * pooled({s.std_error, a->second->std_error, b->second->std_error}));
      }
      if (star) {
        const double dist = static_cast<double>(norm1(a->first - b->first));
        add("continuity",
            "|mu" + a->first.to_string() + "-mu" + b->first.to_string() + "| <= mu*|v-w|_1",
            std::abs(a->second->mu_hat - b->second->mu_hat),
            report.mu_star * dist +
                tol * pooled({a->second->std_error, b->second->std_error, dist * star->std_error}));
      }
    }
  }
  return report;
}

std::vector<Point> direction_fan(int dim, int max_coord) {
  if (max_coord < 1) throw ConfigError("fan size must be >= 1");
  std::vector<Point> fan;
  Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = -max_coord;
  while (true) {
    if (is_primitive(p)) fan.push_back(p);
    int i = dim - 1;
    while (i >= 0 && p[i] == max_coord) p[i--] = -max_coord;
    if (i < 0) break;
    ++p[i];
  }
  if (dim == 2) {
    std::sort(fan.begin(), fan.end(), [](const Point& a, const Point& b) {
      return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
    });
  }
  return fan;
}

ShapeEstimate shape_from_estimates(std::vector<DirectionalEstimate> estimates) {
  ShapeEstimate shape;
  shape.estimates = std::move(estimates);
  constexpr double kZero = 1e-9;
  std::size_t zeros = 0;
  std::size_t nonzero_dirs = 0;
  int dim = 0;
  for (const DirectionalEstimate& e : shape.estimates) {
    const Point w = e.vector();
    if (w.is_zero()) continue;
    dim = w.dim();
    ++nonzero_dirs;
    if (e.mu_hat <= kZero) ++zeros;
    if (norm1(w) == 1) shape.mu_star = std::max(shape.mu_star, e.mu_hat);
  }
  if (zeros > 0) {
    shape.degenerate = true;
    if (zeros < nonzero_dirs) {
      shape.warnings.push_back("inconsistent degeneracy: " + std::to_string(zeros) + " of " +
                               std::to_string(nonzero_dirs) + " directions have mu_hat ~ 0");
    } else {
      shape.warnings.push_back("mu_hat ~ 0 in every direction: the shape is all of R^d");
    }
    return shape;
  }
  if (dim != 2) return shape;

  std::vector<Vec2> pts;
  for (const DirectionalEstimate& e : shape.estimates) {
    const Point w = e.vector();
    if (w.is_zero()) continue;
    const Vec2 v{w[0] / e.mu_hat, w[1] / e.mu_hat};
    pts.push_back(v);
    pts.push_back(v * -1.0);
  }
  shape.ball = ConvexPolygon::hull(pts);
  return shape;
}

ShapeEstimate estimate_shape(const ReplicaSpec& spec, std::span<const Point> fan,
                             std::int64_t n_hits) {
  std::vector<Ray> rays;
  rays.reserve(fan.size());
  for (const Point& u : fan) rays.push_back(Ray{u, 1});
  return shape_from_estimates(estimate_directions(spec, rays, n_hits));
}

ConvexPolygon rescaled_wet_hull(const WetSet& ws, double t) {
  const Box& box = ws.box();
  if (box.dim() != 2) throw UnsupportedDimensionError("wet-set hull needs d = 2");
  if (!(t > 0.0)) throw ConfigError("rescaling time must be positive");
  if (t > ws.horizon()) throw ConfigError("time beyond the wet-set horizon");
  const std::size_t n = ws.count_within(t);
  const int inner = box.inner_half_width();
  std::map<int, std::pair<int, int>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = box.vertex_at(ws.entries()[i].vertex);
    if (std::abs(p[0]) > inner || std::abs(p[1]) > inner) {
      throw TruncationError("B_t at t=" + format_double(t) + " reaches " + p.to_string() +
                            " outside the inner box");
    }
    auto [it, fresh] = rows.try_emplace(p[1], p[0], p[0]);
    if (!fresh) {
      it->second.first = std::min(it->second.first, p[0]);
      it->second.second = std::max(it->second.second, p[0]);
    }
  }
  std::vector<Vec2> corners;
  corners.reserve(rows.size() * 4);
  for (const auto& [y, span] : rows) {
    for (double dy : {-0.5, 0.5}) {
      corners.push_back({(span.first - 0.5) / t, (y + dy) / t});
      corners.push_back({(span.second + 0.5) / t, (y + dy) / t});
    }
  }
  return ConvexPolygon::hull(corners);
}

HausdorffTrace hausdorff_trace(const WetSet& from_origin, const ConvexPolygon& ball,
                               std::span<const double> times, const ConvexPolygon* gauge,
                               int resolution) {
  HausdorffTrace trace;
  trace.resolution = resolution;
  const ConvexPolygon& unit = gauge ? *gauge : ball;
  for (double t : times) {
    const ConvexPolygon hull = rescaled_wet_hull(from_origin, t);
    trace.times.push_back(t);
    trace.distances.push_back(gauge_hausdorff(hull, ball, unit, resolution));
  }
  return trace;
}

HausdorffTrace hausdorff_trace(const Environment& env, const PassageField& field,
                               const ConvexPolygon& ball, std::span<const double> times,
                               const ConvexPolygon* gauge, int resolution) {
  const Point origin(env.box().dim());
  if (!env.in_giant(origin)) throw ConfigError("hausdorff trace requires the origin in the giant");
  double horizon = 0.0;
  for (double t : times) horizon = std::max(horizon, t);
  const WetSet ws = wet_set(env, field, origin, horizon);
  return hausdorff_trace(ws, ball, times, gauge, resolution);
}

std::string_view to_string(DegeneracyVerdict v) {
  switch (v) {
    case DegeneracyVerdict::degenerate:
      return "degenerate";
    case DegeneracyVerdict::norm:
      return "norm";
    case DegeneracyVerdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

DegeneracyProbe degeneracy_probe(double p, double q_zero, int half_width, int replicas,
                                 std::uint64_t env_seed, std::uint64_t passage_seed,
                                 DegeneracyThresholds thresholds, int jobs) {
  ReplicaSpec spec{EnvConfig{Box(2, half_width), p, env_seed},
                   PassageModel{BernoulliMixture{q_zero, 0.0, 1.0}, passage_seed}, replicas, 200,
                   jobs};
  DegeneracyProbe probe;
  probe.p = p;
  probe.q_zero = q_zero;
  probe.axis = estimate_mu(spec, Ray{Point{1, 0}, 1});
  if (probe.axis.mu_hat < thresholds.eps_degenerate) {
    probe.verdict = DegeneracyVerdict::degenerate;
  } else if (probe.axis.mu_hat > thresholds.eps_norm) {
    probe.verdict = DegeneracyVerdict::norm;
  }
  return probe;
}

}  // namespace fpp
