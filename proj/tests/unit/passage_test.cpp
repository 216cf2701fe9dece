#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fpp/error.hpp"
#include "fpp/passage.hpp"
#include "fpp/rng.hpp"
#include "oracles/oracles.hpp"

using namespace fpp;

TEST(Rng, uniform_range_and_determinism) {
  double lo = 1.0;
  double hi = 0.0;
  double sum = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = counter_uniform(42, 7, static_cast<std::uint64_t>(i));
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_EQ(counter_uniform(1, 2, 3), counter_uniform(1, 2, 3));
  EXPECT_NE(counter_uniform(1, 2, 3), counter_uniform(1, 3, 3));
  EXPECT_NE(derive_seed(5, 1), derive_seed(5, 2));
}

TEST(Rng, normal_moments) {
  constexpr int n = 200000;
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = counter_normal(3, 1, static_cast<std::uint64_t>(i));
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(Quantize, grid) {
  EXPECT_EQ(quantize_time(1.0), 1.0);
  EXPECT_EQ(quantize_time(0.0), 0.0);
  const double q = quantize_time(0.1);
  EXPECT_EQ(q * 0x1.0p24, std::round(q * 0x1.0p24));
  EXPECT_LE(std::abs(q - 0.1), kTimeQuantum / 2);
}

TEST(PassageModel, quantiles) {
  const PassageModel mix{BernoulliMixture{0.3, 1.0, 4.0}, 0};
  EXPECT_EQ(mix.quantile(0.0), 1.0);
  EXPECT_EQ(mix.quantile(0.29), 1.0);
  EXPECT_EQ(mix.quantile(0.31), 4.0);
  const PassageModel ex{Exponential{2.0}, 0};
  EXPECT_DOUBLE_EQ(ex.quantile(0.5), std::log(2.0) / 2.0);
  EXPECT_EQ(PassageModel{Dirac{3.0}}.quantile(0.7), 3.0);
  GaussianKernel k{2, {{Point{0, 0}, 0, 0, 1.0}, {Point{0, 0}, 1, 1, 1.0}}};
  EXPECT_THROW((PassageModel{k}.quantile(0.5)), ConfigError);
}

TEST(PassageModel, stats) {
  const ModelStats d = model_stats(PassageModel{Dirac{2.5}});
  EXPECT_EQ(d.nu_min, 2.5);
  EXPECT_EQ(d.nu_mean, 2.5);
  const ModelStats m = model_stats(PassageModel{BernoulliMixture{0.5, 1.0, 3.0}});
  EXPECT_EQ(m.nu_min, 1.0);
  EXPECT_EQ(m.nu_mean, 2.0);
  EXPECT_EQ(model_stats(PassageModel{Exponential{1.0}}).nu_min, 0.0);
  EXPECT_EQ(model_stats(PassageModel{Exponential{4.0}}).nu_mean, 0.25);
  EXPECT_EQ(mass_at_minimum(PassageModel{BernoulliMixture{0.2, 0.0, 1.0}}), 0.2);
  EXPECT_EQ(mass_at_minimum(PassageModel{BernoulliMixture{0.2, 5.0, 1.0}}), 0.8);
  EXPECT_EQ(mass_at_minimum(PassageModel{Dirac{1.0}}), 1.0);
}

TEST(PassageModel, validation) {
  EXPECT_THROW(PassageModel{Exponential{0.0}}.validate(2), ConfigError);
  EXPECT_THROW(PassageModel{Dirac{-1.0}}.validate(2), ConfigError);
  EXPECT_THROW((PassageModel{BernoulliMixture{1.5, 0.0, 1.0}}.validate(2)), ConfigError);
  GaussianKernel zero{2, {{Point{0, 0}, 0, 0, 1.0}}};
  EXPECT_THROW(PassageModel{zero}.validate(2), DegenerateKernelError);
  GaussianKernel wrong_dim{3, {{Point{0, 0, 0}, 0, 0, 1.0}}};
  EXPECT_THROW(PassageModel{wrong_dim}.validate(2), ConfigError);
}

TEST(PassageField, deterministic_and_quantized) {
  const Box box(2, 10);
  const PassageModel model{Exponential{1.0}, 17};
  const PassageField a = sample_field(model, box);
  const PassageField b = sample_field(model, box);
  ASSERT_EQ(a.times().size(), box.n_edges());
  for (std::size_t e = 0; e < a.times().size(); ++e) {
    EXPECT_EQ(a.times()[e], b.times()[e]);
    EXPECT_EQ(a.times()[e], quantize_time(a.times()[e]));
    EXPECT_GE(a.times()[e], 0.0);
  }
  EXPECT_THROW(PassageField(box, model, std::vector<double>(3, 1.0)), ValidationError);
  std::vector<double> bad(box.n_edges(), 1.0);
  bad[4] = -1.0;
  EXPECT_THROW(PassageField(box, model, bad), ValidationError);
}

TEST(PassageField, exponential_scaling_is_pathwise) {
  const Box box(2, 20);
  const PassageField one = sample_field(PassageModel{Exponential{1.0}, 3}, box);
  const PassageField four = sample_field(PassageModel{Exponential{4.0}, 3}, box);
  for (std::size_t e = 0; e < one.times().size(); ++e) {
    EXPECT_NEAR(four.times()[e], one.times()[e] / 4.0, kTimeQuantum);
  }
}

TEST(PassageField, mixture_frequencies) {
  const Box box(2, 150);
  const PassageField f = sample_field(PassageModel{BernoulliMixture{0.3, 0.0, 1.0}, 8}, box);
  const double n = static_cast<double>(f.times().size());
  const double zeros = static_cast<double>(std::count(f.times().begin(), f.times().end(), 0.0));
  EXPECT_NEAR(zeros / n, 0.3, 4.0 * std::sqrt(0.21 / n));
}

TEST(GaussianKernel, analytic_covariance_of_two_taps) {
  // X_k = a Z_k + b Z_{k+e1}: Var = a^2 + b^2, lag +-e1 gives ab.
  GaussianKernel k{2, {{Point{0, 0}, 0, 0, 0.8}, {Point{1, 0}, 0, 0, 0.6},
                       {Point{0, 0}, 1, 1, 1.0}}};
  EXPECT_DOUBLE_EQ(k.variance(0), 1.0);
  EXPECT_DOUBLE_EQ(k.covariance(Point{1, 0}, 0, 0), 0.48);
  EXPECT_DOUBLE_EQ(k.covariance(Point{-1, 0}, 0, 0), 0.48);
  EXPECT_DOUBLE_EQ(k.covariance(Point{0, 1}, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(k.covariance(Point{0, 0}, 0, 1), 0.0);
  EXPECT_DOUBLE_EQ(k.sigma2(), 1.0);
  EXPECT_DOUBLE_EQ(k.summed_abs_covariance(), 1.0 + 2 * 0.48 + 1.0);
  const auto lags = k.support_lags(0, 0);
  EXPECT_EQ(lags.size(), 3u);
}

TEST(GaussianKernel, field_is_square_of_component) {
  GaussianKernel k{2, {{Point{0, 0}, 0, 0, 1.0}, {Point{0, 1}, 0, 0, -0.5},
                       {Point{0, 0}, 1, 1, 1.0}}};
  const Box box(2, 4);
  const PassageModel model{k, 21};
  const PassageField f = sample_field(model, box);
  box.for_each_edge([&](EdgeId e, VertexId tail, int axis) {
    const double x = gaussian_component(k, 21, box.vertex_at(tail), axis);
    EXPECT_EQ(f.time(e), quantize_time(x * x));
  });
}

TEST(RoadNetwork, offer_counts_match_brute_force) {
  const RoadNetworkSpec spec{{0.6, 0.7, 0.8}, {{0, 1, 2, 3}, {0, 1, 1, 1}, {0, 3, 2, 1}}, 1};
  const Box box(2, 8);
  const RoadNetwork net(spec, box, 77);
  std::vector<std::vector<std::int64_t>> labels;
  std::vector<std::int64_t> giants;
  for (int c = 0; c < 3; ++c) {
    const Environment& env = net.company_environment(c);
    EXPECT_EQ(env.config().seed, RoadNetwork::company_seed(77, c));
    const auto adj = oracle::open_graph(env);
    labels.push_back(oracle::flood_fill_labels(adj));
    giants.push_back(oracle::giant_label(adj, labels.back()));
  }
  box.for_each_edge([&](EdgeId e, VertexId tail, int) {
    int count = 0;
    for (int c = 0; c < 3; ++c) {
      if (net.company_environment(c).is_open(e) && labels[c][tail] == giants[c]) ++count;
    }
    EXPECT_EQ(net.offer_count(e), count);
  });
  const PassageField f = net.company_field(2, PassageModel{spec, 77});
  for (EdgeId e = 0; e < box.n_edges(); ++e) {
    EXPECT_EQ(f.time(e), spec.f[2][net.offer_count(e)]);
  }
}

TEST(RoadNetwork, company_seeds_do_not_depend_on_n) {
  const Box box(2, 6);
  const RoadNetwork one({{0.7}, {{0, 1}}, 0}, box, 5);
  const RoadNetwork two({{0.7, 0.7}, {{0, 1, 1}, {0, 1, 1}}, 0}, box, 5);
  EXPECT_EQ(one.company_environment(0), two.company_environment(0));
}

TEST(RoadNetwork, hypothesis_violation) {
  const RoadNetworkSpec bad{{0.7, 0.7}, {{0, 1, 0}, {0, 1, 1}}, 0};
  EXPECT_THROW(bad.validate(), HypothesisViolatedError);
  const RoadNetworkSpec short_row{{0.7, 0.7}, {{0, 1}, {0, 1, 1}}, 0};
  EXPECT_THROW(short_row.validate(), ConfigError);
}

TEST(HAlpha, tail_probabilities) {
  const Box box(2, 30);
  const PassageField f = sample_field(PassageModel{Exponential{1.0}, 4}, box);
  const int sizes[] = {1, 2, 4, 8};
  const HAlphaDiagnostic h = h_alpha_diagnostic(f, 1.5, sizes, 4000, 9);
  ASSERT_EQ(h.rows.size(), 4u);
  // single exponential: P[eta >= 1.5] = exp(-1.5)
  EXPECT_NEAR(h.rows[0].probability, std::exp(-1.5), 4.0 * std::sqrt(0.22 * 0.78 / 4000));
  for (std::size_t i = 1; i < h.rows.size(); ++i) {
    EXPECT_LE(h.rows[i].probability, h.rows[i - 1].probability);
  }
  ASSERT_TRUE(h.slope.has_value());
  EXPECT_LT(*h.slope, 0.0);

  const PassageField unit = sample_field(PassageModel{Dirac{1.0}, 0}, box);
  const HAlphaDiagnostic none = h_alpha_diagnostic(unit, 1.5, sizes, 100, 9);
  for (const TailRow& r : none.rows) EXPECT_EQ(r.exceed, 0);
}

TEST(HAlpha, constant_times) {
  const Box box(2, 20);
  const int sizes[] = {8, 16, 32};
  const HAlphaDiagnostic below = h_alpha_diagnostic(sample_field(PassageModel{Dirac{1.0}}, box), 2.0,
                                                    sizes, 200, 1);
  for (const TailRow& r : below.rows) EXPECT_EQ(r.probability, 0.0);
  const HAlphaDiagnostic above = h_alpha_diagnostic(
      sample_field(PassageModel{BernoulliMixture{0.5, 5.0, 5.0}, 1}, box), 4.0, sizes, 200, 1);
  for (const TailRow& r : above.rows) EXPECT_EQ(r.probability, 1.0);
}
