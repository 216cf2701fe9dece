#include "fpp/passage.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

#include "fpp/error.hpp"
#include "fpp/rng.hpp"

namespace fpp {

double quantize_time(double t) {
  return std::ldexp(std::nearbyint(std::ldexp(t, 24)), -24);
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::uint64_t kInnovationStream = 0x9a055;
constexpr std::uint64_t kAnimalStream = 0xa41a;

std::uint64_t site_key(const Point& site) {
  std::uint64_t key = 0;
  for (int i = 0; i < site.dim(); ++i) {
    key |= static_cast<std::uint64_t>(static_cast<std::uint16_t>(site[i] + 32768))
           << (16 * i);
  }
  return key;
}

}  // namespace

double GaussianKernel::covariance(const Point& lag, int i, int j) const {
  // X_0^i X_lag^j pairs taps t (axis i) and s (axis j) hitting the same
  // innovation: offset_t == lag + offset_s with equal innovation axis.
  double c = 0.0;
  for (const KernelTap& t : taps) {
    if (t.axis_i != i) continue;
    for (const KernelTap& s : taps) {
      if (s.axis_i != j || s.axis_j != t.axis_j) continue;
      if (t.offset == lag + s.offset) c += t.weight * s.weight;
    }
  }
  return c;
}

double GaussianKernel::sigma2() const {
  double s = variance(0);
  for (int i = 1; i < dim; ++i) s = std::min(s, variance(i));
  return s;
}

std::vector<Point> GaussianKernel::support_lags(int i, int j) const {
  std::set<Point> lags;
  for (const KernelTap& t : taps) {
    if (t.axis_i != i) continue;
    for (const KernelTap& s : taps) {
      if (s.axis_i != j || s.axis_j != t.axis_j) continue;
      lags.insert(t.offset - s.offset);
    }
  }
  return {lags.begin(), lags.end()};
}

double GaussianKernel::summed_abs_covariance() const {
  double total = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      for (const Point& k : support_lags(i, j)) total += std::abs(covariance(k, i, j));
    }
  }
  return total;
}

void RoadNetworkSpec::validate() const {
  const int n_comp = n();
  if (n_comp < 1 || n_comp > 255) throw ConfigError("road network needs 1..255 companies");
  for (double pi : p) {
    if (!(pi >= 0.0 && pi <= 1.0)) throw ConfigError("company density must lie in [0, 1]");
  }
  if (static_cast<int>(f.size()) != n_comp) {
    throw ConfigError("cost table must have one row per company");
  }
  for (const auto& row : f) {
    if (static_cast<int>(row.size()) != n_comp + 1) {
      throw ConfigError("cost table rows must have n + 1 entries (j = 0..n)");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!(row[j] >= 0.0) || !std::isfinite(row[j])) {
        throw ConfigError("cost table entries must be finite and >= 0");
      }
      if (j >= 1 && row[j] <= 0.0) {
        throw HypothesisViolatedError("f(i, j) must be > 0 for j >= 1");
      }
    }
  }
  if (company < 0 || company >= n_comp) throw ConfigError("company index out of range");
}

void PassageModel::validate(int dim) const {
  std::visit(
      Overloaded{
          [](const Dirac& m) {
            if (!(m.c >= 0.0) || !std::isfinite(m.c)) {
              throw ConfigError("dirac time must be finite and >= 0");
            }
          },
          [](const Exponential& m) {
            if (!(m.rate > 0.0) || !std::isfinite(m.rate)) {
              throw ConfigError("exponential rate must be > 0");
            }
          },
          [](const BernoulliMixture& m) {
            if (!(m.q >= 0.0 && m.q <= 1.0)) throw ConfigError("mixture weight must lie in [0, 1]");
            if (!(m.a >= 0.0 && m.b >= 0.0) || !std::isfinite(m.a) || !std::isfinite(m.b)) {
              throw ConfigError("mixture atoms must be finite and >= 0");
            }
          },
          [dim](const GaussianKernel& k) {
            if (k.dim != dim) throw ConfigError("kernel dimension does not match the box");
            if (k.taps.empty()) throw ConfigError("gaussian kernel has no taps");
            for (const KernelTap& t : k.taps) {
              if (t.offset.dim() != dim || t.axis_i < 0 || t.axis_i >= dim ||
                  t.axis_j < 0 || t.axis_j >= dim || !std::isfinite(t.weight)) {
                throw ConfigError("malformed gaussian kernel tap");
              }
            }
            if (!(k.sigma2() > 0.0)) {
              throw DegenerateKernelError("gaussian kernel has a component with zero variance");
            }
          },
          [](const RoadNetworkSpec& r) { r.validate(); },
      },
      variant);
}

bool PassageModel::is_product() const {
  return std::holds_alternative<Dirac>(variant) ||
         std::holds_alternative<Exponential>(variant) ||
         std::holds_alternative<BernoulliMixture>(variant);
}

double PassageModel::quantile(double u) const {
  return std::visit(
      Overloaded{
          [](const Dirac& m) { return m.c; },
          [u](const Exponential& m) { return -std::log1p(-u) / m.rate; },
          [u](const BernoulliMixture& m) {
            const double lo = std::min(m.a, m.b);
            const double hi = std::max(m.a, m.b);
            const double p_lo = m.a <= m.b ? m.q : 1.0 - m.q;
            return u < p_lo ? lo : hi;
          },
          [](const GaussianKernel&) -> double {
            throw ConfigError("gaussian model has no one-edge quantile");
          },
          [](const RoadNetworkSpec&) -> double {
            throw ConfigError("road network model has no one-edge quantile");
          },
      },
      variant);
}

std::string PassageModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const Dirac& m) { os << "dirac:" << m.c; },
                 [&](const Exponential& m) { os << "exp:" << m.rate; },
                 [&](const BernoulliMixture& m) {
                   os << "mix:" << m.q << ',' << m.a << ',' << m.b;
                 },
                 [&](const GaussianKernel& k) { os << "gauss:" << k.taps.size() << "taps"; },
                 [&](const RoadNetworkSpec& r) {
                   os << "road:" << r.n() << "companies:company" << r.company;
                 },
             },
             variant);
  return os.str();
}

ModelStats model_stats(const PassageModel& model) {
  return std::visit(
      Overloaded{
          [](const Dirac& m) { return ModelStats{m.c, m.c, m.c}; },
          [](const Exponential& m) { return ModelStats{0.0, 1.0 / m.rate, 1.0 / m.rate}; },
          [](const BernoulliMixture& m) {
            const double mean = m.q * m.a + (1.0 - m.q) * m.b;
            double lo = std::min(m.a, m.b);
            if (m.q == 1.0) lo = m.a;
            if (m.q == 0.0) lo = m.b;
            return ModelStats{lo, mean, mean};
          },
          [](const GaussianKernel& k) {
            double mean = 0.0;
            double m = 0.0;
            for (int i = 0; i < k.dim; ++i) {
              mean += k.variance(i);
              m = std::max(m, k.variance(i));
            }
            return ModelStats{0.0, mean / k.dim, m};
          },
          [](const RoadNetworkSpec& r) {
            const auto& row = r.f.at(r.company);
            const auto [lo, hi] = std::minmax_element(row.begin() + 1, row.end());
            return ModelStats{*lo, *hi, *hi};
          },
      },
      model.variant);
}

double mass_at_minimum(const PassageModel& model) {
  return std::visit(Overloaded{
                        [](const Dirac&) { return 1.0; },
                        [](const Exponential&) { return 0.0; },
                        [](const BernoulliMixture& m) {
                          if (m.a == m.b) return 1.0;
                          return m.a < m.b ? m.q : 1.0 - m.q;
                        },
                        [](const GaussianKernel&) { return 0.0; },
                        [](const RoadNetworkSpec&) { return 0.0; },
                    },
                    model.variant);
}

PassageField::PassageField(Box box, PassageModel model, std::vector<double> times)
    : box_(std::move(box)), model_(std::move(model)), times_(std::move(times)) {
  if (times_.size() != box_.n_edges()) {
    throw ValidationError("passage field size does not match the box");
  }
  for (double t : times_) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw ValidationError("passage times must be finite and nonnegative");
    }
  }
}

double gaussian_component(const GaussianKernel& kernel, std::uint64_t seed,
                          const Point& site, int axis) {
  double x = 0.0;
  for (const KernelTap& t : kernel.taps) {
    if (t.axis_i != axis) continue;
    x += t.weight * counter_normal(seed, kInnovationStream + static_cast<std::uint64_t>(t.axis_j),
                                   site_key(site + t.offset));
  }
  return x;
}

PassageField sample_field(const PassageModel& model, const Box& box) {
  model.validate(box.dim());
  std::vector<double> times(box.n_edges());
  if (model.is_product()) {
    const double fixed = std::holds_alternative<Dirac>(model.variant)
                             ? quantize_time(std::get<Dirac>(model.variant).c)
                             : -1.0;
    for (std::size_t e = 0; e < times.size(); ++e) {
      times[e] = fixed >= 0.0
                     ? fixed
                     : quantize_time(model.quantile(
                           counter_uniform(model.seed, kPassageStream, e)));
    }
  } else if (const auto* kernel = std::get_if<GaussianKernel>(&model.variant)) {
    box.for_each_edge([&](EdgeId e, VertexId tail, int axis) {
      const double x = gaussian_component(*kernel, model.seed, box.vertex_at(tail), axis);
      times[e] = quantize_time(x * x);
    });
  } else {
    const auto& spec = std::get<RoadNetworkSpec>(model.variant);
    RoadNetwork net(spec, box, model.seed);
    return net.company_field(spec.company, model);
  }
  return PassageField(box, model, std::move(times));
}

PassageField sample_field(const PassageModel& model, const Environment& env) {
  return sample_field(model, env.box());
}

std::uint64_t RoadNetwork::company_seed(std::uint64_t seed, int company) {
  return derive_seed(seed, 0x20ad, static_cast<std::uint64_t>(company));
}

RoadNetwork::RoadNetwork(RoadNetworkSpec spec, const Box& box, std::uint64_t seed,
                         std::uint64_t max_vertices)
    : spec_(std::move(spec)) {
  spec_.validate();
  envs_.reserve(spec_.p.size());
  for (int c = 0; c < spec_.n(); ++c) {
    envs_.push_back(Environment::generate(
        EnvConfig{box, spec_.p[c], company_seed(seed, c)}, max_vertices));
  }
  counts_.assign(box.n_edges(), 0);
  box.for_each_edge([&](EdgeId e, VertexId tail, int axis) {
    const auto head = static_cast<VertexId>(tail + box.vertex_stride(axis));
    int count = 0;
    for (const Environment& env : envs_) {
      if (env.is_open(e) && (env.in_giant(tail) || env.in_giant(head))) ++count;
    }
    counts_[e] = static_cast<std::uint8_t>(count);
  });
}

PassageField RoadNetwork::company_field(int c, const PassageModel& model) const {
  const auto& row = spec_.f.at(c);
  std::vector<double> times(counts_.size());
  for (std::size_t e = 0; e < counts_.size(); ++e) times[e] = quantize_time(row[counts_[e]]);
  return PassageField(envs_.at(c).box(), model, std::move(times));
}

HAlphaDiagnostic h_alpha_diagnostic(const PassageField& field, double B,
                                    std::span<const int> sizes, int trials,
                                    std::uint64_t seed) {
  const Box& box = field.box();
  HAlphaDiagnostic out;
  out.threshold = B;
  std::uint64_t counter = 0;
  auto uniform = [&] { return counter_uniform(seed, kAnimalStream, counter++); };
  auto pick = [&](std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  };

  // Edges touching vertex v.
  auto incident = [&](const Point& v, std::vector<EdgeId>& out_edges) {
    for (int a = 0; a < box.dim(); ++a) {
      if (v[a] < box.half_width()) out_edges.push_back(box.edge_index(Edge{v, a}));
      Point w = v;
      w[a] -= 1;
      if (box.contains(w)) out_edges.push_back(box.edge_index(Edge{w, a}));
    }
  };

  for (int size : sizes) {
    if (size < 1) throw ConfigError("edge-set sizes must be positive");
    TailRow row{size, trials, 0, 0.0};
    for (int trial = 0; trial < trials; ++trial) {
      std::unordered_set<EdgeId> chosen;
      std::vector<EdgeId> members;
      std::vector<EdgeId> frontier;
      const auto start = static_cast<EdgeId>(pick(box.n_edges()));
      chosen.insert(start);
      members.push_back(start);
      while (static_cast<int>(members.size()) < size) {
        frontier.clear();
        for (EdgeId e : members) {
          const Edge edge = box.edge_at(e);
          incident(edge.endpoint, frontier);
          incident(edge.other(), frontier);
        }
        std::erase_if(frontier, [&](EdgeId e) { return chosen.contains(e); });
        if (frontier.empty()) throw ConfigError("box too small for the requested edge-set size");
        const EdgeId next = frontier[pick(frontier.size())];
        chosen.insert(next);
        members.push_back(next);
      }
      double sum = 0.0;
      for (EdgeId e : members) sum += field.time(e);
      if (sum >= B * size) ++row.exceed;
    }
    row.probability = trials ? static_cast<double>(row.exceed) / trials : 0.0;
    out.rows.push_back(row);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const TailRow& r : out.rows) {
    if (r.probability <= 0.0) continue;
    const double x = std::log(static_cast<double>(r.size));
    const double y = std::log(r.probability);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2 && n * sxx - sx * sx > 0.0) out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

}  // namespace fpp
