#include "fpp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fpp/asymptotics.hpp"
#include "fpp/environment.hpp"
#include "fpp/error.hpp"
#include "fpp/experiments.hpp"
#include "fpp/flatedge.hpp"
#include "fpp/io.hpp"
#include "fpp/passage.hpp"
#include "fpp/paths.hpp"
#include "fpp/render.hpp"

namespace fpp {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Options {
  std::string out = "out";
  std::uint64_t seed = 1;
  std::uint64_t passage_seed = 2;
  int d = 2;
  int L = 100;
  double p = 0.7;
  std::string model = "dirac:1";
  int replicas = 20;
  int jobs = 1;
  double tol = 3.0;

  std::string u = "1,0";
  std::int64_t n_hits = -1;
  double eps_deg = 0.05;
  double eps_norm = 0.2;
  int fan = 6;
  std::vector<double> times;
  int resolution = 1440;

  int generations = 1000;
  int oriented_replicas = 400;
  int bins = 20;
  double band = 0.02;
  double time_tolerance = 0.0;

  int seeds = 1;
  std::vector<double> horizons{20, 50, 100};

  std::string mode = "stochastic";
  double p_prime = -1.0;
  std::string model_prime = "dirac:1";
  std::vector<double> lambdas{1, 2, 4};

  std::vector<double> p_list{0.7, 0.7};
  std::string f_table = "1,1,2;1,1,2";
  std::vector<int> companies;

  std::vector<double> r_grid{1.0, 1.1, 1.25, 1.5, 2.0, 3.0};
  int tail_bins = 8;
  double h_alpha_b = 0.0;
  std::vector<int> animal_sizes{1, 2, 4, 8, 16};
  int animal_trials = 2000;
};

struct Run {
  std::string experiment;
  const Options& o;
  fs::path dir;
  std::ostream& out;

  void write(const std::string& name, const std::string& text) const {
    write_text_file(dir / name, text);
  }
  void write_json(const std::string& name, const json& j) const { write(name, j.dump(2) + "\n"); }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

double parse_number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ConfigError("malformed number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("malformed number '" + s + "'");
  }
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> v;
  for (const std::string& part : split(s, ',')) v.push_back(parse_number(part));
  return v;
}

Point parse_point(const std::string& s, int d) {
  const std::vector<double> v = parse_numbers(s);
  if (static_cast<int>(v.size()) != d) {
    throw ConfigError("direction '" + s + "' needs " + std::to_string(d) + " coordinates");
  }
  Point p(d);
  for (int i = 0; i < d; ++i) {
    if (v[i] != static_cast<int>(v[i])) throw ConfigError("direction coordinates must be integers");
    p[i] = static_cast<int>(v[i]);
  }
  if (p.is_zero()) throw ConfigError("direction must be nonzero");
  return p;
}

/// dirac:c | exp:rate | mixture:q,a,b | gaussian:w0,w1,...
PassageVariant parse_model(const std::string& text, int d) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{} : parse_numbers(text.substr(colon + 1));
  auto need = [&](std::size_t n) {
    if (args.size() != n) {
      throw ConfigError("model '" + kind + "' takes " + std::to_string(n) + " parameter(s)");
    }
  };
  if (kind == "dirac") {
    need(1);
    return Dirac{args[0]};
  }
  if (kind == "exp") {
    need(1);
    return Exponential{args[0]};
  }
  if (kind == "mixture") {
    need(3);
    return BernoulliMixture{args[0], args[1], args[2]};
  }
  if (kind == "gaussian") {
    if (args.empty()) throw ConfigError("gaussian model needs at least one weight");
    GaussianKernel k;
    k.dim = d;
    for (int axis = 0; axis < d; ++axis) {
      for (std::size_t m = 0; m < args.size(); ++m) {
        k.taps.push_back({Point::unit(d, axis) * static_cast<std::int64_t>(m), axis, axis, args[m]});
      }
    }
    return k;
  }
  throw ConfigError("unknown model '" + text + "'");
}

std::vector<std::vector<double>> parse_table(const std::string& s) {
  std::vector<std::vector<double>> rows;
  for (const std::string& row : split(s, ';')) rows.push_back(parse_numbers(row));
  return rows;
}

Ray make_ray(const Point& w) {
  int g = 0;
  for (int c : w.coords()) g = std::gcd(g, std::abs(c));
  Point u(w.dim());
  for (int i = 0; i < w.dim(); ++i) u[i] = w[i] / g;
  return Ray{u, g};
}

ReplicaSpec replica_spec(const Options& o) {
  ReplicaSpec spec{EnvConfig{Box(o.d, o.L), o.p, o.seed},
                   PassageModel{parse_model(o.model, o.d), o.passage_seed}, o.replicas, 200,
                   o.jobs};
  spec.env.validate();
  spec.model.validate(o.d);
  return spec;
}

std::string point_csv(const Point& p) {
  std::string s;
  for (int i = 0; i < p.dim(); ++i) {
    if (i) s += ',';
    s += std::to_string(p[i]);
  }
  return s;
}

std::string coord_header(int d, const std::string& prefix) {
  std::string s;
  for (int i = 1; i <= d; ++i) {
    if (i > 1) s += ',';
    s += prefix + std::to_string(i);
  }
  return s;
}

json point_json(const Point& p) { return json(std::vector<int>(p.coords().begin(), p.coords().end())); }
json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

json estimate_json(const DirectionalEstimate& e) {
  return json{{"vector", point_json(e.vector())},
              {"mu_hat", e.mu_hat},
              {"stderr", e.std_error},
              {"replicas", e.replica_values.size()},
              {"n_hits", e.n_hits}};
}

json header_json(const Run& r) {
  return json{{"experiment", r.experiment},
              {"env_seed", r.o.seed},
              {"passage_seed", r.o.passage_seed},
              {"d", r.o.d},
              {"L", r.o.L},
              {"p", r.o.p},
              {"model", r.o.model},
              {"replicas", r.o.replicas},
              {"note", "stderr covers replica noise only, not finite-size bias"}};
}

std::string estimates_csv(std::span<const DirectionalEstimate> estimates, int d) {
  std::string s = coord_header(d, "w") + ",mu_hat,stderr,replicas,n_hits\n";
  for (const DirectionalEstimate& e : estimates) {
    s += point_csv(e.vector()) + ',' + format_double(e.mu_hat) + ',' + format_double(e.std_error) +
         ',' + std::to_string(e.replica_values.size()) + ',' + std::to_string(e.n_hits) + '\n';
  }
  return s;
}

std::string polygon_csv(const ConvexPolygon& poly) {
  std::string s = "x,y\n";
  for (const Vec2& v : poly.vertices()) s += format_double(v.x) + ',' + format_double(v.y) + '\n';
  return s;
}

double max_time(const Options& o, double fallback) {
  return o.times.empty() ? fallback : *std::max_element(o.times.begin(), o.times.end());
}

int cmd_generate(const Run& r) {
  const Options& o = r.o;
  const Environment env = Environment::generate(EnvConfig{Box(o.d, o.L), o.p, o.seed});
  std::ostringstream dump;
  write_environment(dump, env);
  r.write("environment.txt", dump.str());
  json j = header_json(r);
  j["n_edges"] = env.box().n_edges();
  j["n_open"] = env.n_open();
  j["giant_size"] = env.giant_size();
  j["giant_density"] = giant_density(env);
  j["origin_in_giant"] = env.in_giant(Point(o.d));
  r.write_json("summary.json", j);
  r.out << "giant size " << env.giant_size() << ", inner density "
        << format_double(giant_density(env)) << "\n";
  return 0;
}

int cmd_mu(const Run& r) {
  const Options& o = r.o;
  const ReplicaSpec spec = replica_spec(o);
  const Ray ray = make_ray(parse_point(o.u, o.d));
  const DirectionalEstimate est = estimate_mu(spec, ray, o.n_hits);
  const DirectionalEstimate ests[] = {est};
  r.write("mu.csv", estimates_csv(ests, o.d));

  std::string reps = "replica,last_k,ratio\n";
  for (std::size_t i = 0; i < est.samples.size(); ++i) {
    reps += std::to_string(i) + ',' + std::to_string(est.samples[i].hits.back()) + ',' +
            format_double(est.samples[i].ratios.back()) + '\n';
  }
  r.write("replicas.csv", reps);

  json j = header_json(r);
  j["estimate"] = estimate_json(est);
  const auto* mix = std::get_if<BernoulliMixture>(&spec.model.variant);
  if (mix && mix->a == 0.0 && mix->b > 0.0) {
    const double scaled = est.mu_hat / mix->b;
    const DegeneracyVerdict v = scaled < o.eps_deg    ? DegeneracyVerdict::degenerate
                                : scaled > o.eps_norm ? DegeneracyVerdict::norm
                                                      : DegeneracyVerdict::inconclusive;
    j["degeneracy"] = {{"p_nu0", o.p * mix->q},
                       {"eps_degenerate", o.eps_deg},
                       {"eps_norm", o.eps_norm},
                       {"verdict", std::string(to_string(v))}};
  }
  r.write_json("mu.json", j);
  r.out << "mu_hat " << format_double(est.mu_hat) << " stderr " << format_double(est.std_error)
        << "\n";
  return 0;
}

int cmd_shape(const Run& r) {
  const Options& o = r.o;
  if (o.d != 2 && !o.times.empty()) throw UnsupportedDimensionError("Hausdorff traces need d = 2");
  const ReplicaSpec spec = replica_spec(o);
  const std::vector<Point> fan = direction_fan(o.d, o.fan);
  const ShapeEstimate shape = estimate_shape(spec, fan);
  const NormReport report = check_norm_properties(shape.estimates, o.tol);
  r.write("shape.csv", estimates_csv(shape.estimates, o.d));

  std::string checks = "property,lhs,rhs,pass,detail\n";
  for (const PropertyCheck& c : report.checks) {
    checks += c.property + ',' + format_double(c.lhs) + ',' + format_double(c.rhs) + ',' +
              (c.pass ? "1" : "0") + ",\"" + c.detail + "\"\n";
  }
  r.write("norm_checks.csv", checks);

  json j = header_json(r);
  j["fan"] = o.fan;
  j["mu_star"] = shape.mu_star;
  j["degenerate"] = shape.degenerate;
  j["warnings"] = shape.warnings;
  j["estimates"] = json::array();
  for (const auto& e : shape.estimates) j["estimates"].push_back(estimate_json(e));
  json props = json::object();
  for (const char* name :
       {"symmetry", "reflection", "permutation", "homogeneity", "subadditivity", "bound", "continuity"}) {
    props[name] = {{"checks", report.count(name)}, {"pass", report.passed(name)}};
  }
  j["norm_properties"] = props;
  j["norm_pass"] = report.all_pass();

  if (o.d == 2 && !shape.degenerate) {
    j["ball"] = json::array();
    for (const Vec2& v : shape.ball.vertices()) j["ball"].push_back(vec_json(v));
    r.write("ball.csv", polygon_csv(shape.ball));

    if (!o.times.empty()) {
      const Replica rep = make_replica(spec, 0);
      const double horizon = max_time(o, 0.0);
      const WetSet ws = wet_set(rep.env, rep.field, Point(2), horizon);
      std::string trace = "t,hausdorff\n";
      json jt = json::array();
      for (double t : o.times) {
        try {
          const ConvexPolygon hull = rescaled_wet_hull(ws, t);
          const double dist = gauge_hausdorff(hull, shape.ball, shape.ball, o.resolution);
          trace += format_double(t) + ',' + format_double(dist) + '\n';
          jt.push_back({{"t", t}, {"hausdorff", dist}});
        } catch (const TruncationError&) {
          trace += format_double(t) + ",truncated\n";
          jt.push_back({{"t", t}, {"hausdorff", nullptr}, {"truncated", true}});
        }
      }
      r.write("hausdorff.csv", trace);
      j["hausdorff"] = jt;

      Snapshot snap = make_snapshot(rep.env, ws, horizon);
      snap.overlays.push_back(polygon_overlay("ball", shape.ball, horizon));
      const double nu_min = model_stats(spec.model).nu_min;
      if (nu_min > 0.0) snap.overlays.push_back(polygon_overlay("diamond", diamond(1.0), horizon / nu_min));
      RenderMeta meta = render_meta(rep.env, horizon);
      render_wet_set(snap, meta, r.dir / "snapshot.pgm", r.dir / "snapshot.svg");
    }
  }
  r.write_json("shape.json", j);
  const auto failed = std::count_if(report.checks.begin(), report.checks.end(),
                                    [](const PropertyCheck& c) { return !c.pass; });
  r.out << "mu_* " << format_double(shape.mu_star) << ", norm properties "
        << (report.all_pass() ? "PASS" : "FAIL") << " (" << failed << " of "
        << report.checks.size() << " checks failed)\n";
  return report.all_pass() ? 0 : 1;
}

int cmd_flat_edge(const Run& r) {
  const Options& o = r.o;
  if (o.d != 2) throw UnsupportedDimensionError("flat-edge analysis needs d = 2");
  const ReplicaSpec spec = replica_spec(o);
  const double t = max_time(o, 450.0);
  const double q = o.p * mass_at_minimum(spec.model);
  const OrientedSpeedEstimate speed =
      oriented_speed(q, o.generations, o.oriented_replicas, {o.seed, o.jobs, 0.1});
  FlatEdgeOptions fo;
  fo.bins = o.bins;
  fo.band = o.band;
  fo.time_tolerance = o.time_tolerance;
  std::vector<FlatEdgeReport> reports;
  for (int i = 0; i < o.replicas; ++i) {
    const Replica rep = make_replica(spec, i);
    reports.push_back(flat_edge_scan(rep.env, rep.field, t, speed, fo));
  }
  const FlatEdgeReport pooled = pool_flat_edge(reports);

  std::string bins = "bin,s_lo,s_hi,boundary,contact,fraction\n";
  for (std::size_t b = 0; b < pooled.bins.size(); ++b) {
    const FlatEdgeBin& fb = pooled.bins[b];
    bins += std::to_string(b) + ',' + format_double(fb.s_lo) + ',' + format_double(fb.s_hi) + ',' +
            std::to_string(fb.boundary) + ',' + std::to_string(fb.contact) + ',' +
            format_double(fb.fraction()) + '\n';
  }
  r.write("bins.csv", bins);
  std::string contact = "replica,x1,x2\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (const Point& x : reports[i].contact_set) {
      contact += std::to_string(i) + ',' + point_csv(x) + '\n';
    }
  }
  r.write("contact.csv", contact);

  json j = header_json(r);
  j["t"] = t;
  j["q"] = pooled.q;
  j["nu_min"] = pooled.nu_min;
  j["oriented"] = {{"generations", speed.generations},
                   {"replicas", speed.replicas},
                   {"surviving", speed.surviving},
                   {"survival_frequency", speed.survival_frequency},
                   {"supercritical", speed.supercritical},
                   {"alpha_hat", speed.alpha_hat ? json(*speed.alpha_hat) : json(nullptr)},
                   {"stderr", speed.std_error}};
  j["M_q"] = vec_json(pooled.m_q);
  j["N_q"] = vec_json(pooled.n_q);
  j["M_q_scaled"] = vec_json(pooled.m_q * (1.0 / pooled.nu_min));
  j["N_q_scaled"] = vec_json(pooled.n_q * (1.0 / pooled.nu_min));
  j["contact_count"] = pooled.contact_set.size();
  j["boundary_count"] = pooled.boundary_count;
  j["contact_fraction"] = pooled.contact_fraction();
  j["quadrant_extents"] = json::array();
  for (const auto& [lo, hi] : pooled.quadrant_extents) j["quadrant_extents"].push_back({lo, hi});
  j["contact_bins"] = pooled.contact_lo_bin
                          ? json::array({*pooled.contact_lo_bin, *pooled.contact_hi_bin})
                          : json(nullptr);
  j["predicted_bins"] = json::array({pooled.predicted_lo_bin, pooled.predicted_hi_bin});
  j["segment_match"] = pooled.segment_match;
  j["bin_fraction"] = json::array();
  for (const FlatEdgeBin& fb : pooled.bins) j["bin_fraction"].push_back(fb.fraction());
  r.write_json("flat_edge.json", j);
  r.out << "q " << format_double(q) << ", contact fraction "
        << format_double(pooled.contact_fraction()) << ", segment match "
        << (pooled.segment_match ? "yes" : "no") << "\n";
  return 0;
}

int cmd_couple(const Run& r) {
  const Options& o = r.o;
  if (o.seeds < 1) throw ConfigError("need at least one seed");
  CouplingMarginals marginals;
  std::size_t violations = 0;
  std::string rows = "seed,t,wet,wet_prime,violations\n";
  for (int s = 0; s < o.seeds; ++s) {
    const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(s);
    const CouplingRun run = exponential_coupling(o.p, o.L, o.horizons, seed);
    marginals.merge(run.marginals);
    violations += run.violations();
    for (const HorizonCheck& h : run.horizons) {
      rows += std::to_string(seed) + ',' + format_double(h.t) + ',' + std::to_string(h.wet) + ',' +
              std::to_string(h.wet_prime) + ',' + std::to_string(h.violations) + '\n';
    }
  }
  r.write("horizons.csv", rows);
  const std::vector<StatCheck> checks = marginals.checks(o.p, o.tol);
  std::string mcsv = "check,estimate,expected,stderr,samples,pass\n";
  json jm = json::array();
  for (const StatCheck& c : checks) {
    mcsv += c.name + ',' + format_double(c.estimate) + ',' + format_double(c.expected) + ',' +
            format_double(c.std_error) + ',' + std::to_string(c.samples) + ',' +
            (c.pass ? "1" : "0") + '\n';
    jm.push_back({{"check", c.name}, {"estimate", c.estimate}, {"expected", c.expected},
                  {"stderr", c.std_error}, {"pass", c.pass}});
  }
  r.write("marginals.csv", mcsv);
  json j = header_json(r);
  j["seeds"] = o.seeds;
  j["horizons"] = o.horizons;
  j["violations"] = violations;
  j["inclusion_pass"] = violations == 0;
  j["marginals"] = jm;
  r.write_json("couple.json", j);
  r.out << "B'⊆B: " << (violations == 0 ? "PASS" : "FAIL") << "\n";
  for (const StatCheck& c : checks) {
    r.out << c.name << ": " << (c.pass ? "PASS" : "FAIL") << "\n";
  }
  return violations == 0 ? 0 : 1;
}

int cmd_compare(const Run& r) {
  const Options& o = r.o;
  json j = header_json(r);
  j["mode"] = o.mode;
  bool pass = true;
  if (o.mode == "stochastic") {
    const double p_prime = o.p_prime < 0.0 ? o.p : o.p_prime;
    const PassageModel nu{parse_model(o.model, o.d), o.passage_seed};
    const PassageModel nu_prime{parse_model(o.model_prime, o.d), o.passage_seed};
    const ComparisonVerdict v = stochastic_comparison(EnvConfig{Box(o.d, o.L), o.p, o.seed},
                                                      p_prime, nu, nu_prime,
                                                      parse_point(o.u, o.d));
    pass = v.pass();
    j["p_prime"] = p_prime;
    j["model_prime"] = o.model_prime;
    j["compared"] = v.compared;
    j["violations"] = v.violations;
    j["equal"] = v.equal;
    j["min_ratio"] = v.min_ratio;
    j["max_ratio"] = v.max_ratio;
    j["ray_time"] = v.ray_time ? json(*v.ray_time) : json(nullptr);
    j["ray_time_prime"] = v.ray_time_prime ? json(*v.ray_time_prime) : json(nullptr);
    r.write("comparison.csv", "compared,violations,equal,min_ratio,max_ratio\n" +
                                  std::to_string(v.compared) + ',' + std::to_string(v.violations) +
                                  ',' + std::to_string(v.equal) + ',' + format_double(v.min_ratio) +
                                  ',' + format_double(v.max_ratio) + '\n');
  } else if (o.mode == "sandwich") {
    const ReplicaSpec spec = replica_spec(o);
    std::vector<Ray> rays;
    for (int a = 0; a < o.d; ++a) rays.push_back(Ray{Point::unit(o.d, a), 1});
    const std::vector<SandwichRow> rows = sandwich_check(spec, rays, o.tol);
    std::string csv = coord_header(o.d, "w") +
                      ",mu_hat,stderr,mu_tilde,stderr_tilde,nu_min,nu_mean,lower_pass,upper_pass\n";
    j["rows"] = json::array();
    for (const SandwichRow& row : rows) {
      pass = pass && row.lower_pass && row.upper_pass;
      csv += point_csv(row.ray.vector()) + ',' + format_double(row.mu.mu_hat) + ',' +
             format_double(row.mu.std_error) + ',' + format_double(row.mu_tilde.mu_hat) + ',' +
             format_double(row.mu_tilde.std_error) + ',' + format_double(row.nu_min) + ',' +
             format_double(row.nu_mean) + ',' + (row.lower_pass ? "1" : "0") + ',' +
             (row.upper_pass ? "1" : "0") + '\n';
      j["rows"].push_back({{"vector", point_json(row.ray.vector())},
                           {"mu", estimate_json(row.mu)},
                           {"mu_tilde", estimate_json(row.mu_tilde)},
                           {"lower_pass", row.lower_pass},
                           {"upper_pass", row.upper_pass}});
    }
    r.write("sandwich.csv", csv);
  } else if (o.mode == "scaling") {
    const ReplicaSpec spec = replica_spec(o);
    const std::vector<ScalingRow> rows =
        scaling_check(spec, o.lambdas, make_ray(parse_point(o.u, o.d)), o.tol);
    std::string csv = "lambda,mu_hat,stderr,ratio,expected,pooled_stderr,pass\n";
    j["rows"] = json::array();
    for (const ScalingRow& row : rows) {
      pass = pass && row.pass;
      csv += format_double(row.lambda) + ',' + format_double(row.estimate.mu_hat) + ',' +
             format_double(row.estimate.std_error) + ',' + format_double(row.ratio) + ',' +
             format_double(row.expected) + ',' + format_double(row.pooled_std_error) + ',' +
             (row.pass ? "1" : "0") + '\n';
      j["rows"].push_back({{"lambda", row.lambda}, {"ratio", row.ratio}, {"pass", row.pass}});
    }
    r.write("scaling.csv", csv);
  } else {
    throw ConfigError("unknown compare mode '" + o.mode + "'");
  }
  j["pass"] = pass;
  r.write_json("compare.json", j);
  r.out << o.mode << ": " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

int cmd_roadnet(const Run& r) {
  const Options& o = r.o;
  RoadNetworkSpec spec{o.p_list, parse_table(o.f_table), 0};
  spec.validate();
  std::vector<int> companies = o.companies;
  if (companies.empty()) {
    companies.resize(static_cast<std::size_t>(spec.n()));
    std::iota(companies.begin(), companies.end(), 0);
  }
  const std::vector<Point> fan = direction_fan(o.d, o.fan);
  const std::vector<CompanyShape> shapes =
      road_network_run(spec, Box(o.d, o.L), o.seed, o.replicas, fan, companies, o.jobs);
  std::string csv = "company," + coord_header(o.d, "w") + ",mu_hat,stderr\n";
  json j = header_json(r);
  j["p_list"] = o.p_list;
  j["f_table"] = spec.f;
  j["companies"] = json::array();
  for (const CompanyShape& cs : shapes) {
    json jc{{"company", cs.company},
            {"mu_star", cs.shape.mu_star},
            {"degenerate", cs.shape.degenerate},
            {"warnings", cs.shape.warnings}};
    jc["ball"] = json::array();
    for (const Vec2& v : cs.shape.ball.vertices()) jc["ball"].push_back(vec_json(v));
    j["companies"].push_back(jc);
    for (const DirectionalEstimate& e : cs.shape.estimates) {
      csv += std::to_string(cs.company) + ',' + point_csv(e.vector()) + ',' +
             format_double(e.mu_hat) + ',' + format_double(e.std_error) + '\n';
    }
    r.out << "company " << cs.company << " mu_* " << format_double(cs.shape.mu_star) << "\n";
  }
  r.write("roadnet.csv", csv);
  r.write_json("roadnet.json", j);
  return 0;
}

int cmd_tail(const Run& r) {
  const Options& o = r.o;
  const TailDiagnostic diag =
      chemical_tail_diagnostic(o.p, o.L, o.replicas, o.r_grid, o.seed, o.tail_bins, o.jobs);
  std::string csv = "norm_lo,norm_hi,samples,connected,r,exceed,frequency\n";
  for (const TailBin& b : diag.bins) {
    for (std::size_t k = 0; k < diag.r_grid.size(); ++k) {
      csv += std::to_string(b.norm_lo) + ',' + std::to_string(b.norm_hi) + ',' +
             std::to_string(b.samples) + ',' + std::to_string(b.connected) + ',' +
             format_double(diag.r_grid[k]) + ',' + std::to_string(b.exceed[k]) + ',' +
             format_double(b.frequency(k)) + '\n';
    }
  }
  r.write("tail.csv", csv);
  json j = header_json(r);
  j["r_grid"] = diag.r_grid;
  j["rho_hat"] = diag.rho_hat ? json(*diag.rho_hat) : json(nullptr);

  if (o.h_alpha_b > 0.0) {
    const PassageModel model{parse_model(o.model, o.d), o.passage_seed};
    const PassageField field = sample_field(model, Box(o.d, o.L));
    const HAlphaDiagnostic h =
        h_alpha_diagnostic(field, o.h_alpha_b, o.animal_sizes, o.animal_trials, o.passage_seed);
    std::string hcsv = "size,trials,exceed,probability\n";
    for (const TailRow& row : h.rows) {
      hcsv += std::to_string(row.size) + ',' + std::to_string(row.trials) + ',' +
              std::to_string(row.exceed) + ',' + format_double(row.probability) + '\n';
    }
    r.write("h_alpha.csv", hcsv);
    j["h_alpha"] = {{"B", o.h_alpha_b}, {"slope", h.slope ? json(*h.slope) : json(nullptr)}};
  }
  r.write_json("tail.json", j);
  r.out << "rho_hat " << (diag.rho_hat ? format_double(*diag.rho_hat) : "none") << "\n";
  return 0;
}

int cmd_render(const Run& r) {
  const Options& o = r.o;
  if (o.d != 2) throw UnsupportedDimensionError("rendering needs d = 2");
  const ReplicaSpec spec = replica_spec(o);
  const double t = max_time(o, 100.0);
  const Replica rep = make_replica(spec, 0);
  const WetSet ws = wet_set(rep.env, rep.field, Point(2), t);
  Snapshot snap = make_snapshot(rep.env, ws, t);
  const double nu_min = model_stats(spec.model).nu_min;
  if (nu_min > 0.0) snap.overlays.push_back(polygon_overlay("diamond", diamond(1.0), t / nu_min));
  render_wet_set(snap, render_meta(rep.env, t), r.dir / "snapshot.pgm", r.dir / "snapshot.svg");
  json j = header_json(r);
  j["t"] = t;
  j["replica_env_seed"] = rep.env_seed;
  j["reached"] = snap.count(PixelClass::reached);
  j["origin"] = snap.count(PixelClass::origin);
  j["giant_dry"] = snap.count(PixelClass::giant_dry);
  j["unreached"] = snap.count(PixelClass::unreached);
  r.write_json("render.json", j);
  r.out << "reached " << ws.count_within(t) << " vertices by t=" << format_double(t) << "\n";
  return 0;
}

void add_options(CLI::App& app, Options& o) {
  app.set_config("--config", "", "key = value file mirroring the flags; flags override it");
  app.add_option("--out", o.out, "output root")->capture_default_str();
  app.add_option("--seed", o.seed, "environment seed")->capture_default_str();
  app.add_option("--passage-seed", o.passage_seed, "passage-time seed")->capture_default_str();
  app.add_option("--d", o.d, "dimension")->capture_default_str()->check(CLI::Range(2, kMaxDim));
  app.add_option("--L", o.L, "box half-width")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--p", o.p, "edge-open probability")->capture_default_str();
  app.add_option("--model", o.model, "dirac:c | exp:rate | mixture:q,a,b | gaussian:w0,w1,...")
      ->capture_default_str();
  app.add_option("--replicas", o.replicas)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--jobs", o.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tol, "stderr multiplier")->capture_default_str();

  app.add_option("--u", o.u, "direction, comma separated")->capture_default_str();
  app.add_option("--n-hits", o.n_hits, "hits per replica (-1: all)")->capture_default_str();
  app.add_option("--eps-deg", o.eps_deg)->capture_default_str();
  app.add_option("--eps-norm", o.eps_norm)->capture_default_str();
  app.add_option("--fan", o.fan, "max |coordinate| of the direction fan")->capture_default_str();
  app.add_option("--t", o.times, "times, comma separated")->delimiter(',');
  app.add_option("--resolution", o.resolution)->capture_default_str();

  app.add_option("--generations", o.generations)->capture_default_str();
  app.add_option("--oriented-replicas", o.oriented_replicas)->capture_default_str();
  app.add_option("--bins", o.bins)->capture_default_str();
  app.add_option("--band", o.band)->capture_default_str();
  app.add_option("--time-tolerance", o.time_tolerance)->capture_default_str();

  app.add_option("--seeds", o.seeds, "consecutive seeds from --seed")->capture_default_str();
  app.add_option("--horizons", o.horizons)->delimiter(',')->capture_default_str();

  app.add_option("--mode", o.mode)
      ->capture_default_str()
      ->check(CLI::IsMember({"stochastic", "sandwich", "scaling"}));
  app.add_option("--p-prime", o.p_prime, "(default: --p)");
  app.add_option("--model-prime", o.model_prime)->capture_default_str();
  app.add_option("--lambdas", o.lambdas)->delimiter(',')->capture_default_str();

  app.add_option("--p-list", o.p_list)->delimiter(',')->capture_default_str();
  app.add_option("--f-table", o.f_table, "rows f(c, 0..n) separated by ';'")->capture_default_str();
  app.add_option("--companies", o.companies)->delimiter(',');

  app.add_option("--r-grid", o.r_grid)->delimiter(',')->capture_default_str();
  app.add_option("--tail-bins", o.tail_bins)->capture_default_str();
  app.add_option("--h-alpha-b", o.h_alpha_b, "threshold B (0: skip)")->capture_default_str();
  app.add_option("--animal-sizes", o.animal_sizes)->delimiter(',')->capture_default_str();
  app.add_option("--animal-trials", o.animal_trials)->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"First-passage percolation on the infinite cluster"};
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  add_options(app, o);

  using Cmd = int (*)(const Run&);
  const std::pair<const char*, Cmd> commands[] = {
      {"generate", cmd_generate}, {"mu", cmd_mu},         {"shape", cmd_shape},
      {"flat-edge", cmd_flat_edge}, {"couple", cmd_couple}, {"compare", cmd_compare},
      {"roadnet", cmd_roadnet},   {"tail", cmd_tail},     {"render", cmd_render},
  };
  const char* help[] = {"sample an environment",
                        "directional time constant",
                        "fan estimate of the unit ball and norm checks",
                        "oriented speed and diamond contact",
                        "exponential coupling inclusion",
                        "stochastic comparison, sandwich or scaling",
                        "road-network companies",
                        "chemical-distance tail table",
                        "wet-set snapshot"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    subs.push_back(app.add_subcommand(commands[i].first, help[i]));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      Run run{commands[i].first, o, fs::path(o.out) / (std::string(commands[i].first) + "-" +
                                                       std::to_string(o.seed)),
              out};
      ensure_directory(run.dir);
      run.write("run.ini", app.config_to_str(true, false));
      return commands[i].second(run);
    } catch (const PathwiseViolationError& e) {
      err << "verdict failure: " << e.what() << "\n";
      return 1;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}

}  // namespace fpp
