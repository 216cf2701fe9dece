#include "fpp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpp/error.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"

namespace fpp {

namespace {

constexpr std::uint64_t kEtaStream = 0xc0e1;
constexpr std::uint64_t kClockStream = 0xc0e2;
constexpr std::uint64_t kFreshStream = 0xc0e3;
constexpr std::uint64_t kTailReplica = 0x7a11;

double exponential_draw(double rate, double u) { return -std::log1p(-u) / rate; }

double pooled(double a, double b) { return std::sqrt(a * a + b * b); }

bool close_enough(double lhs, double rhs) {
  return std::abs(lhs - rhs) <= 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace

StatCheck make_stat_check(std::string name, double estimate, double expected,
                          double std_error, std::uint64_t samples, double tol) {
  StatCheck c{std::move(name), estimate, expected, std_error, samples, false};
  c.pass = std::abs(estimate - expected) <= tol * std_error || close_enough(estimate, expected);
  return c;
}

CoupledEdge coupled_edge(double p, std::uint64_t seed, EdgeId e) {
  CoupledEdge c;
  c.eta = exponential_draw(p, counter_uniform(seed, kEtaStream, e));
  c.x = exponential_draw(1.0 - p, counter_uniform(seed, kClockStream, e));
  c.z = exponential_draw(1.0, counter_uniform(seed, kFreshStream, e));
  c.omega = c.eta <= c.x;
  c.eta_prime = c.omega ? c.eta : c.z;
  return c;
}

void CouplingMarginals::add(const CoupledEdge& e) {
  const double w = e.omega ? 1.0 : 0.0;
  ++n;
  sum_omega += w;
  sum_eta_prime += e.eta_prime;
  sum_eta_prime_sq += e.eta_prime * e.eta_prime;
  sum_omega_eta_prime += w * e.eta_prime;
}

void CouplingMarginals::merge(const CouplingMarginals& o) {
  n += o.n;
  sum_omega += o.sum_omega;
  sum_eta_prime += o.sum_eta_prime;
  sum_eta_prime_sq += o.sum_eta_prime_sq;
  sum_omega_eta_prime += o.sum_omega_eta_prime;
}

std::vector<StatCheck> CouplingMarginals::checks(double p, double tol) const {
  if (n < 2) throw ConfigError("marginal checks need at least two edges");
  const double nn = static_cast<double>(n);
  const double m_w = sum_omega / nn;
  const double m_e = sum_eta_prime / nn;
  const double var_e = (sum_eta_prime_sq - nn * m_e * m_e) / (nn - 1.0);
  const double var_w = m_w * (1.0 - m_w);
  const double cov = sum_omega_eta_prime / nn - m_w * m_e;
  const double bern = p * (1.0 - p);
  std::vector<StatCheck> out;
  out.push_back(make_stat_check("omega_mean", m_w, p, std::sqrt(bern / nn), n, tol));
  out.push_back(make_stat_check("omega_variance", var_w, bern,
                                std::max(std::abs(1.0 - 2.0 * p) * std::sqrt(bern / nn), 1.0 / nn),
                                n, tol));
  out.push_back(make_stat_check("eta_prime_mean", m_e, 1.0, std::sqrt(1.0 / nn), n, tol));
  // exp(1): fourth central moment 9, so Var(sample variance) ~ 8 / n
  out.push_back(make_stat_check("eta_prime_variance", var_e, 1.0, std::sqrt(8.0 / nn), n, tol));
  out.push_back(make_stat_check("omega_eta_prime_covariance", cov, 0.0, std::sqrt(bern / nn), n,
                                tol));
  return out;
}

std::size_t CouplingRun::violations() const {
  std::size_t v = 0;
  for (const HorizonCheck& h : horizons) v += h.violations;
  return v;
}

CouplingRun exponential_coupling(double p, int half_width, std::span<const double> horizons,
                                 std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("coupling needs 0 < p < 1");
  if (horizons.empty()) throw ConfigError("coupling needs at least one horizon");
  const Box box(2, half_width);
  const auto n_edges = static_cast<std::size_t>(box.n_edges());

  CouplingRun run;
  run.seed = seed;
  run.p = p;
  run.half_width = half_width;
  std::vector<bool> omega(n_edges);
  std::vector<double> eta(n_edges);
  std::vector<double> eta_prime(n_edges);
  for (std::size_t e = 0; e < n_edges; ++e) {
    const CoupledEdge c = coupled_edge(p, seed, static_cast<EdgeId>(e));
    omega[e] = c.omega;
    eta[e] = quantize_time(c.eta);
    eta_prime[e] = quantize_time(c.eta_prime);
    run.marginals.add(c);
  }

  const Environment full =
      Environment::from_open_bits(EnvConfig{box, 1.0, seed}, std::vector<bool>(n_edges, true));
  const Environment env = Environment::from_open_bits(EnvConfig{box, p, seed}, omega);
  const PassageField field(box, PassageModel{Exponential{p}, seed}, std::move(eta));
  const PassageField field_prime(box, PassageModel{Exponential{1.0}, seed}, std::move(eta_prime));

  const double horizon = *std::max_element(horizons.begin(), horizons.end());
  const Point origin(2);
  const WetSet ws = wet_set(full, field, origin, horizon);
  const WetSet ws_prime = wet_set(env, field_prime, origin, horizon);

  for (double t : horizons) {
    HorizonCheck h;
    h.t = t;
    h.wet = ws.count_within(t);
    h.wet_prime = ws_prime.count_within(t);
    for (std::size_t i = 0; i < h.wet_prime; ++i) {
      const VertexId v = ws_prime.entries()[i].vertex;
      const TravelTime d = ws.time(v);
      if (d.is_infinite() || d.value() > t) ++h.violations;
    }
    run.horizons.push_back(h);
  }
  return run;
}

std::vector<ScalingRow> scaling_check(const ReplicaSpec& spec, std::span<const double> lambdas,
                                      const Ray& ray, double tol) {
  auto with_rate = [&](double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("scaling rate must be positive");
    ReplicaSpec s = spec;
    s.model.variant = Exponential{lambda};
    return estimate_mu(s, ray);
  };
  const DirectionalEstimate base = with_rate(1.0);
  std::vector<ScalingRow> rows;
  for (double lambda : lambdas) {
    ScalingRow row;
    row.lambda = lambda;
    row.estimate = lambda == 1.0 ? base : with_rate(lambda);
    row.ratio = row.estimate.mu_hat / base.mu_hat;
    row.expected = 1.0 / lambda;
    row.pooled_std_error = pooled(row.estimate.std_error, base.std_error / lambda);
    const double diff = std::abs(row.estimate.mu_hat - base.mu_hat / lambda);
    row.pass = diff <= tol * row.pooled_std_error ||
               close_enough(row.estimate.mu_hat, base.mu_hat / lambda);
    rows.push_back(std::move(row));
  }
  return rows;
}

bool stochastically_below(const PassageModel& lower, const PassageModel& upper, int grid) {
  for (int i = 0; i < grid; ++i) {
    const double u = (i + 0.5) / grid;
    if (lower.quantile(u) > upper.quantile(u)) return false;
  }
  return true;
}

ComparisonVerdict stochastic_comparison(const EnvConfig& env_cfg, double p_prime,
                                        const PassageModel& nu, const PassageModel& nu_prime,
                                        const Point& direction) {
  env_cfg.validate();
  if (!(p_prime >= env_cfg.p && p_prime <= 1.0)) {
    throw ConfigError("comparison needs p <= p' <= 1");
  }
  if (!nu.is_product() || !nu_prime.is_product()) {
    throw ConfigError("comparison needs product passage laws");
  }
  if (!stochastically_below(nu_prime, nu)) {
    throw ConfigError("nu' is not stochastically below nu");
  }
  const Environment env = Environment::generate(env_cfg);
  const Environment env_prime = Environment::generate(EnvConfig{env_cfg.box, p_prime, env_cfg.seed});
  PassageModel shared = nu_prime;
  shared.seed = nu.seed;
  const PassageField field = sample_field(nu, env);
  const PassageField field_prime = sample_field(shared, env_prime);

  const Point origin(env_cfg.dim());
  const WetSet ws = wet_set(env, field, origin);
  const WetSet ws_prime = wet_set(env_prime, field_prime, origin);

  ComparisonVerdict v;
  v.min_ratio = std::numeric_limits<double>::infinity();
  v.max_ratio = 0.0;
  for (const WetSet::Entry& e : ws.entries()) {
    ++v.compared;
    const TravelTime dp = ws_prime.time(e.vertex);
    if (dp.is_infinite() || dp.value() > e.time) {
      ++v.violations;
      continue;
    }
    if (dp.value() == e.time) ++v.equal;
    if (dp.value() > 0.0) {
      v.min_ratio = std::min(v.min_ratio, e.time / dp.value());
      v.max_ratio = std::max(v.max_ratio, e.time / dp.value());
    }
  }
  if (v.max_ratio == 0.0) v.min_ratio = 0.0;

  if (!direction.is_zero()) {
    const auto hits = line_cluster_hits(env, direction);
    if (!hits.empty()) {
      const Point y = direction * hits.back();
      const TravelTime d = ws.time(y);
      const TravelTime dp = ws_prime.time(y);
      if (d.is_finite()) v.ray_time = d.value();
      if (dp.is_finite()) v.ray_time_prime = dp.value();
    }
  }
  return v;
}

std::vector<SandwichRow> sandwich_check(const ReplicaSpec& spec, std::span<const Ray> rays,
                                        double tol) {
  if (!spec.model.is_product()) throw ConfigError("sandwich check needs a product passage law");
  const ModelStats stats = model_stats(spec.model);
  const double nu_min = quantize_time(stats.nu_min);
  const double nu_mean = stats.nu_mean;
  ReplicaSpec tilde = spec;
  tilde.model.variant = Dirac{1.0};
  std::vector<DirectionalEstimate> mu = estimate_directions(spec, rays);
  std::vector<DirectionalEstimate> mu_tilde = estimate_directions(tilde, rays);

  std::vector<SandwichRow> rows;
  for (std::size_t r = 0; r < rays.size(); ++r) {
    SandwichRow row;
    row.ray = rays[r];
    row.nu_min = nu_min;
    row.nu_mean = nu_mean;
    const double m = mu[r].mu_hat;
    const double mt = mu_tilde[r].mu_hat;
    const double lo_slack = tol * pooled(mu[r].std_error, nu_min * mu_tilde[r].std_error);
    const double hi_slack = tol * pooled(mu[r].std_error, nu_mean * mu_tilde[r].std_error);
    row.lower_pass = nu_min * mt <= m + lo_slack || close_enough(nu_min * mt, m);
    row.upper_pass = m <= nu_mean * mt + hi_slack || close_enough(m, nu_mean * mt);
    row.mu = std::move(mu[r]);
    row.mu_tilde = std::move(mu_tilde[r]);
    rows.push_back(std::move(row));
  }
  return rows;
}

TailDiagnostic chemical_tail_diagnostic(double p, int half_width, int replicas,
                                        std::span<const double> r_grid, std::uint64_t seed,
                                        int n_bins, int jobs) {
  if (replicas < 1) throw ConfigError("need at least one replica");
  if (n_bins < 1) throw ConfigError("need at least one norm bin");
  if (r_grid.empty()) throw ConfigError("empty r grid");
  if (!std::is_sorted(r_grid.begin(), r_grid.end())) throw ConfigError("r grid must be sorted");
  const Box box(2, half_width);
  const int inner = box.inner_half_width();
  if (inner < n_bins) throw InsufficientBoxError("inner box smaller than the bin count");
  const int width = (inner + n_bins - 1) / n_bins;

  TailDiagnostic out;
  out.p = p;
  out.half_width = half_width;
  out.replicas = replicas;
  out.r_grid.assign(r_grid.begin(), r_grid.end());
  std::vector<TailBin> empty(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b) {
    empty[b].norm_lo = std::int64_t{b} * width + 1;
    empty[b].norm_hi = std::min<std::int64_t>(std::int64_t{b + 1} * width, inner);
    empty[b].exceed.assign(r_grid.size(), 0);
  }

  std::vector<std::vector<TailBin>> per_replica(static_cast<std::size_t>(replicas), empty);
  parallel_for(per_replica.size(), jobs, [&](std::size_t i) {
    const Environment env =
        Environment::generate(EnvConfig{box, p, derive_seed(seed, kTailReplica, i)});
    const PassageField field = sample_field(PassageModel{Dirac{1.0}, 0}, env);
    const WetSet ws = wet_set(env, field, Point(2));
    auto& bins = per_replica[i];
    for (int x = -inner; x <= inner; ++x) {
      const int rest = inner - std::abs(x);
      for (int y = -rest; y <= rest; ++y) {
        const std::int64_t n = std::abs(x) + std::abs(y);
        if (n == 0) continue;
        TailBin& bin = bins[static_cast<std::size_t>((n - 1) / width)];
        ++bin.samples;
        const TravelTime d = ws.time(Point{x, y});
        if (d.is_infinite()) continue;
        ++bin.connected;
        for (std::size_t k = 0; k < r_grid.size(); ++k) {
          if (d.value() > r_grid[k] * static_cast<double>(n)) ++bin.exceed[k];
        }
      }
    }
  });

  out.bins = std::move(empty);
  for (const auto& bins : per_replica) {
    for (std::size_t b = 0; b < bins.size(); ++b) {
      out.bins[b].samples += bins[b].samples;
      out.bins[b].connected += bins[b].connected;
      for (std::size_t k = 0; k < r_grid.size(); ++k) out.bins[b].exceed[k] += bins[b].exceed[k];
    }
  }
  const TailBin& last = out.bins.back();
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    if (last.frequency(k) < 1.0 / static_cast<double>(last.samples)) {
      out.rho_hat = r_grid[k];
      break;
    }
  }
  return out;
}

std::vector<CompanyShape> road_network_run(const RoadNetworkSpec& spec, const Box& box,
                                           std::uint64_t seed, int replicas,
                                           std::span<const Point> fan,
                                           std::span<const int> companies, int jobs) {
  spec.validate();
  std::vector<CompanyShape> out;
  for (int c : companies) {
    if (c < 0 || c >= spec.n()) throw ConfigError("company index out of range");
    RoadNetworkSpec s = spec;
    s.company = c;
    ReplicaSpec rs{EnvConfig{box, spec.p[c], seed}, PassageModel{s, seed}, replicas, 200, jobs};
    out.push_back({c, estimate_shape(rs, fan)});
  }
  return out;
}

}  // namespace fpp
