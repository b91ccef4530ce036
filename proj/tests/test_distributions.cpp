#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mosaic/distributions.hpp"
#include "mosaic/errors.hpp"
#include "mosaic/estimation.hpp"
#include "support.hpp"

using namespace mosaic;
using mosaic::test::close;

namespace {

double series_pgf(const CountDistribution& n, double t, std::uint64_t terms) {
  const auto pmf = n.pmf_table(terms);
  double s = 0.0, tk = 1.0;
  for (double p : pmf) {
    s += p * tk;
    tk *= t;
  }
  return s;
}

double sample_mean(const CountDistribution& n, int draws, std::uint64_t seed) {
  auto g = make_root_generator(seed);
  double s = 0.0;
  for (int i = 0; i < draws; ++i) s += static_cast<double>(n.sample(g));
  return s / draws;
}

}  // namespace

TEST_SUITE("distributions") {

TEST_CASE("pgf closed forms") {
  const double t = 0.3;
  CHECK(close(CountDistribution::poisson(2.5).pgf(t), std::exp(2.5 * (t - 1.0)), 1e-15));
  CHECK(close(CountDistribution::geometric(0.4).pgf(t), 0.4 * t / (1.0 - 0.6 * t), 1e-15));
  CHECK(close(CountDistribution::binomial(5, 0.2).pgf(t), std::pow(0.8 + 0.2 * t, 5), 1e-15));
  CHECK(close(CountDistribution::negative_binomial(1.5, 0.3).pgf(t), std::pow(0.3 / (1.0 - 0.7 * t), 1.5), 1e-15));
  CHECK(close(CountDistribution::power_alpha(0.5).pgf(t), 1.0 - std::sqrt(0.7), 1e-15));
  CHECK(CountDistribution::deterministic(0).pgf(-1.0) == 1.0);
  CHECK(close(CountDistribution::deterministic(3).pgf(t), 0.027, 1e-15));
}

TEST_CASE("pgf of a compound is the composition") {
  const auto outer = CountDistribution::poisson(1.7);
  const auto inner = CountDistribution::power_alpha(0.6);
  const auto n = CountDistribution::compound(outer, inner);
  for (double t : {-1.0, -0.4, 0.0, 0.5, 0.9, 1.0}) CHECK(close(n.pgf(t), outer.pgf(inner.pgf(t)), 1e-15));
  CHECK(close(n.pgf(0.5), series_pgf(n, 0.5, 400), 1e-12));
}

TEST_CASE("series pgf matches closed forms") {
  const std::vector<CountDistribution> laws = {
      CountDistribution::poisson(3.0), CountDistribution::geometric(0.35), CountDistribution::binomial(7, 0.45),
      CountDistribution::negative_binomial(2.2, 0.6), CountDistribution::table({0.1, 0.2, 0.7})};
  for (const auto& n : laws)
    for (double t : {-1.0, -0.5, 0.0, 0.5, 0.99}) CHECK(close(n.pgf(t), series_pgf(n, t, 3000), 1e-12));
}

TEST_CASE("pgf derivative matches central differences") {
  const std::vector<CountDistribution> laws = {
      CountDistribution::poisson(3.0), CountDistribution::geometric(0.35), CountDistribution::binomial(7, 0.45),
      CountDistribution::negative_binomial(2.2, 0.6), CountDistribution::power_alpha(0.7),
      CountDistribution::compound(CountDistribution::binomial(4, 0.5), CountDistribution::power_alpha(0.8))};
  const double h = 1e-6;
  for (const auto& n : laws)
    for (double t : {-0.5, 0.0, 0.4, 0.8}) {
      const double fd = (n.pgf(t + h) - n.pgf(t - h)) / (2 * h);
      CHECK(close(n.pgf_derivative(t), fd, 1e-7));
    }
}

TEST_CASE("pgf rejects arguments outside [-1, 1]") {
  CHECK_THROWS_AS(CountDistribution::poisson(1.0).pgf(1.5), DomainError);
  CHECK_THROWS_AS(CountDistribution::poisson(1.0).pgf_derivative(-1.01), DomainError);
}

TEST_CASE("power-alpha pmf by the recurrence") {
  const auto k = CountDistribution::power_alpha(0.5);
  CHECK(close(k.pmf(1), 0.5, 1e-15));
  CHECK(close(k.pmf(2), 0.125, 1e-14));
  CHECK(close(k.pmf(3), 0.0625, 1e-14));
  CHECK(k.pmf(0) == 0.0);
  const auto table = k.pmf_table(3);
  CHECK(close(table[3], 0.0625, 1e-15));
  CHECK(CountDistribution::power_alpha(1.0).pmf(1) == 1.0);
  CHECK(CountDistribution::power_alpha(1.0).pmf(2) == 0.0);
}

TEST_CASE("power-alpha survival agrees with the recurrence") {
  for (double alpha : {0.1, 0.5, 0.9}) {
    const auto pmf = CountDistribution::power_alpha(alpha).pmf_table(5000);
    double cum = 0.0;
    for (std::uint64_t k = 1; k <= 5000; ++k) {
      cum += pmf[k];
      if (k == 10 || k == 1000 || k == 5000)
        CHECK(close(1.0 - cum, std::exp(power_alpha_log_survival(alpha, static_cast<double>(k))), 1e-10));
    }
  }
  // Beyond the exact range the survival follows k^-alpha / Gamma(1 - alpha).
  const double s = std::exp(power_alpha_log_survival(0.5, 1e8));
  CHECK(close(s, std::pow(1e8, -0.5) / std::tgamma(0.5), 1e-6));
}

TEST_CASE("power-alpha sampling reproduces the head of the law") {
  const double alpha = 0.4;
  const auto k = CountDistribution::power_alpha(alpha);
  auto g = make_root_generator(3);
  const int draws = 200000;
  std::vector<int> counts(5, 0);
  for (int i = 0; i < draws; ++i) {
    const auto x = k.sample(g);
    REQUIRE(x >= 1);
    if (x < 5) ++counts[x];
  }
  for (std::uint64_t j = 1; j < 5; ++j) {
    const double p = k.pmf(j);
    CHECK(std::abs(counts[j] / double(draws) - p) < 5.0 * std::sqrt(p * (1 - p) / draws));
  }
}

TEST_CASE("sample means match") {
  struct Case {
    CountDistribution law;
    double mean;
    double variance;
  };
  const std::vector<Case> cases = {{CountDistribution::poisson(4.0), 4.0, 4.0},
                                   {CountDistribution::geometric(0.25), 4.0, 12.0},
                                   {CountDistribution::binomial(10, 0.3), 3.0, 2.1},
                                   {CountDistribution::negative_binomial(2.0, 0.4), 3.0, 7.5},
                                   {CountDistribution::table({0.5, 0.0, 0.5}), 1.0, 1.0}};
  const int draws = 100000;
  for (const auto& c : cases) {
    CHECK(close(c.law.mean(), c.mean, 1e-14));
    CHECK(close(c.law.variance(), c.variance, 1e-14));
    CHECK(std::abs(sample_mean(c.law, draws, 17) - c.mean) < 5.0 * std::sqrt(c.variance / draws));
  }
}

TEST_CASE("compound with alpha = 1 has the outer law") {
  const auto n = CountDistribution::compound(CountDistribution::poisson(2.0), CountDistribution::power_alpha(1.0));
  CHECK(close(n.mean(), 2.0, 1e-15));
  CHECK(close(n.variance(), 2.0, 1e-15));
  for (std::uint64_t k = 0; k < 8; ++k) CHECK(close(n.pmf(k), CountDistribution::poisson(2.0).pmf(k), 1e-14));
}

TEST_CASE("infinite mean for heavy tails") {
  CHECK(std::isinf(CountDistribution::power_alpha(0.5).mean()));
  CHECK(CountDistribution::power_alpha(1.0).mean() == 1.0);
}

TEST_CASE("truncation renormalizes") {
  const auto t = CountDistribution::poisson(3.0).truncated(10);
  double total = 0.0;
  for (std::uint64_t k = 0; k <= 10; ++k) total += t.pmf(k);
  CHECK(close(total, 1.0, 1e-15));
  CHECK(t.pmf(11) == 0.0);
  CHECK(close(t.pmf(3) / t.pmf(2), 1.0, 1e-14));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(CountDistribution::poisson(-1.0), DomainError);
  CHECK_THROWS_AS(CountDistribution::geometric(0.0), DomainError);
  CHECK_THROWS_AS(CountDistribution::binomial(0, 0.5), DomainError);
  CHECK_THROWS_AS(CountDistribution::negative_binomial(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(CountDistribution::power_alpha(1.5), DomainError);
  CHECK_THROWS_AS(CountDistribution::power_alpha(0.0), DomainError);
  CHECK_THROWS_AS(CountDistribution::table({0.5, 0.1}), DomainError);
  CHECK_THROWS_AS(ValueDistribution::gaussian(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(RadiusLaw::cos_polynomial({0.3}), DomainError);
  CHECK_THROWS_AS(RadiusLaw::cos_polynomial({0.6, -0.1}), DomainError);
}

TEST_CASE("value laws") {
  const auto u = ValueDistribution::uniform(-1.0, 3.0);
  CHECK(u.mean() == 1.0);
  CHECK(close(u.variance(), 16.0 / 12.0, 1e-15));
  const auto tp = ValueDistribution::two_point(0.0, 2.0, 0.25);
  CHECK(close(tp.mean(), 1.5, 1e-15));
  CHECK(close(tp.second_moment(), 3.0, 1e-15));

  auto g = make_root_generator(8);
  std::vector<double> xs(50000);
  const auto gauss = ValueDistribution::gaussian(1.0 / std::numbers::sqrt2, 0.5);
  for (auto& x : xs) x = gauss.sample(g);
  const double d = ks_statistic(xs, [](double x) { return standard_normal_cdf((x - 1.0 / std::numbers::sqrt2) / std::sqrt(0.5)); });
  CHECK(ks_pvalue(d, xs.size()) > 1e-3);
}

TEST_CASE("spherical-model diameter law") {
  const double a = 0.8;
  const auto law = RadiusLaw::spherical(a);
  auto g = make_root_generator(9);
  std::vector<double> xs(50000);
  for (auto& x : xs) {
    x = law.sample(g);
    REQUIRE(x >= 0.0);
    REQUIRE(x <= a);
  }
  const double d = ks_statistic(xs, [&](double x) { return (a - std::sqrt(a * a - x * x)) / a; });
  CHECK(ks_pvalue(d, xs.size()) > 1e-3);
  CHECK(close(law.mean(), a * std::numbers::pi / 4.0, 1e-15));
}

TEST_CASE("cos-polynomial radius law") {
  const std::vector<double> p = {0.25, 0.25};
  CHECK(RadiusLaw::cos_cdf(p, -1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(RadiusLaw::cos_cdf(p, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double u : {1e-9, 0.1, 0.5, 0.77, 1.0 - 1e-9}) {
    const double t = RadiusLaw::cos_quantile(p, u);
    CHECK(std::abs(RadiusLaw::cos_cdf(p, t) - u) < 1e-12);
  }
  const auto law = RadiusLaw::cos_polynomial(p);
  auto g = make_root_generator(10);
  std::vector<double> cs(50000);
  for (auto& c : cs) c = std::cos(law.sample(g));
  const double d = ks_statistic(cs, [&](double t) { return RadiusLaw::cos_cdf(p, t); });
  CHECK(ks_pvalue(d, cs.size()) > 1e-3);
  // cos R uniform gives E R = pi / 2
  CHECK(close(RadiusLaw::cos_polynomial({0.5}).mean(), std::numbers::pi / 2.0, 1e-10));
}

}
