#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mosaic/analytics.hpp"
#include "mosaic/errors.hpp"
#include "support.hpp"

using namespace mosaic;
using mosaic::test::brute_moments;
using mosaic::test::CellKey;
using mosaic::test::close;

namespace {

CellKey key_for(GKind g) {
  switch (g) {
    case GKind::injective: return CellKey::injective;
    case GKind::constant: return CellKey::constant;
    case GKind::max_index: return CellKey::max_index;
  }
  return CellKey::injective;
}

const std::vector<HitProbs> kTriples = {{0.3, 0.3, 0.2}, {0.5, 0.5, 0.5}, {0.2, 0.6, 0.1}, {0.7, 0.4, 0.3},
                                        {0.1, 0.1, 0.0}, {0.9, 0.9, 0.85}, {0.5, 0.5, 0.0}, {0.4, 0.7, 0.35}};

struct Shape {
  LinearF f;
  GKind g;
};

const std::vector<Shape> kShapes = {{{0, 0, 1}, GKind::injective}, {{1, 0, 0}, GKind::constant},
                                    {{1, 0, 0}, GKind::injective}, {{0, 0, 1}, GKind::max_index},
                                    {{2, 1, 1}, GKind::injective}, {{-1, 1, 2}, GKind::constant},
                                    {{1, 2, 3}, GKind::max_index}};

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("trivial conditional moments") {
  const auto value = ValueDistribution::gaussian(2.0, 3.0);
  const HitProbs p{0.4, 0.4, 0.4};
  const auto m0 = conditional_moments({0, 0, 1}, GKind::injective, 0, {0.3, 0.2, 0.1}, value);
  CHECK(close(m0.mean_x, 2.0, 1e-15));
  CHECK(close(m0.mixed, 7.0, 1e-15));
  CHECK(close(conditional_mixed_moment({0, 0, 1}, GKind::injective, 1, p, value), 7.0, 1e-15));
  // token with N = 6: E U^2 * 6 pxy + (E U)^2 * 30 px py
  const HitProbs q{0.3, 0.5, 0.2};
  CHECK(close(conditional_mixed_moment({1, 0, 0}, GKind::constant, 6, q, value),
              7.0 * 6 * 0.2 + 4.0 * 30 * 0.15, 1e-12));
}

TEST_CASE("closed forms agree with brute-force enumeration") {
  const auto value = ValueDistribution::uniform(-1.0, 3.0);
  for (const auto& s : kShapes)
    for (const auto& p : kTriples)
      for (std::uint64_t n = 0; n <= 6; ++n) {
        const long c = s.f.c_for(n);
        const auto b = brute_moments(static_cast<int>(n), s.f.a, s.f.b, c, key_for(s.g), p.px, p.py, p.pxy,
                                     value.mean(), value.variance());
        const auto m = conditional_moments(s.f, s.g, n, p, value);
        const auto o = enumerate_oracle(n, s.f, s.g, p, value);
        INFO("f=(" << s.f.a << "," << s.f.b << "," << s.f.c << ") g=" << gkind_name(s.g) << " n=" << n);
        CHECK(close(m.mean_x, b.mean_x, 1e-12));
        CHECK(close(m.mixed, b.mixed, 1e-12));
        CHECK(close(m.second_x, b.second_x, 1e-12));
        CHECK(close(o.mixed, b.mixed, 1e-12));
        CHECK(close(o.second_x, b.second_x, 1e-12));
      }
}

TEST_CASE("mixing over the count matches the weighted conditional moments") {
  const auto value = ValueDistribution::gaussian(1.0, 1.0);
  const std::vector<CountDistribution> counts = {
      CountDistribution::poisson(2.5),
      CountDistribution::geometric(0.4),
      CountDistribution::binomial(7, 0.3),
      CountDistribution::negative_binomial(2.5, 0.6),
      CountDistribution::power_alpha(0.6),
      CountDistribution::compound(CountDistribution::poisson(1.5), CountDistribution::geometric(0.5)),
      CountDistribution::table({0.1, 0.2, 0.3, 0.4})};
  for (const auto& count : counts)
    for (const auto& s : kShapes) {
      if (s.f.b != 0) continue;  // c_n grows with n; the series path handles it below
      for (const auto& p : kTriples) {
        double mean = 0.0, mixed = 0.0, mass = 0.0;
        for (std::uint64_t n = 0; n < 4000 && mass < 1.0 - 1e-14; ++n) {
          const double w = count.pmf(n);
          mass += w;
          const auto m = conditional_moments(s.f, s.g, n, p, value);
          mean += w * m.mean_x;
          mixed += w * m.mixed;
        }
        if (mass < 1.0 - 1e-10) continue;  // heavy tail: too slow to sum directly
        INFO(count.describe() << " g=" << gkind_name(s.g));
        CHECK(close(mean_general(s.f, count, p.px, value), mean, 1e-9));
        CHECK(close(mixed_moment_general(s.f, s.g, count, p, value), mixed, 1e-9));
      }
    }
}

TEST_CASE("series path with n-dependent offset") {
  const auto value = ValueDistribution::gaussian(0.5, 2.0);
  const auto count = CountDistribution::binomial(6, 0.5);
  const LinearF f{2, 1, 1};
  const HitProbs p{0.3, 0.4, 0.2};
  double mixed = 0.0;
  for (std::uint64_t n = 0; n <= 6; ++n)
    mixed += count.pmf(n) * conditional_mixed_moment(f, GKind::injective, n, p, value);
  CHECK(close(mixed_moment_general(f, GKind::injective, count, p, value), mixed, 1e-12));
}

TEST_CASE("named correlations") {
  const auto value = ValueDistribution::gaussian(1.0, 2.0);
  const HitProbs p{0.3, 0.3, 0.2};
  const auto pois = CountDistribution::poisson(3.0);
  // simple mosaic: the pgf at the agreement probability
  CHECK(close(corr_simple(p, pois), std::exp(-3.0 * (1.0 - p.agree())), 1e-14));
  // token with Poisson count: pxy / px
  CHECK(close(corr_token(p, pois, value), p.pxy / p.px, 1e-14));
  for (const auto& count : {pois, CountDistribution::geometric(0.3), CountDistribution::binomial(5, 0.4)}) {
    CHECK(close(corr_simple(p, count), moment_report({0, 0, 1}, GKind::injective, count, p, value).correlation, 1e-12));
    CHECK(close(corr_token(p, count, value), moment_report({1, 0, 0}, GKind::constant, count, p, value).correlation,
                1e-12));
    CHECK(close(corr_mixture(p, count, value),
                moment_report({1, 0, 0}, GKind::injective, count, p, value).correlation, 1e-12));
    CHECK(close(corr_deadleaves(p, count), moment_report({0, 0, 1}, GKind::max_index, count, p, value).correlation,
                1e-12));
  }
}

TEST_CASE("Poisson mixture identity") {
  const auto value = ValueDistribution::two_point(0.0, 2.0, 0.25);
  const double lambda = value.variance() / (value.variance() + value.mean() * value.mean());
  const auto count = CountDistribution::poisson(4.0);
  for (double pxy = 0.0; pxy <= 0.3; pxy += 0.05) {
    const HitProbs p{0.3, 0.3, pxy};
    const double rt = corr_token(p, count, value), m = corr_simple(p, count);
    CHECK(close(corr_mixture(p, count, value), lambda * rt * m + (1.0 - lambda) * rt, 1e-12));
  }
}

TEST_CASE("model correlations are bounded and equal one at zero distance") {
  const auto model = FieldModel{Space::sphere(2), SetFamily::sphere_cap(2, RadiusLaw::hemisphere()),
                                CountDistribution::geometric(0.2), ValueDistribution::gaussian(1, 1), DeadLeaves{}};
  const Point x{0, 0, 1};
  CHECK(close(model_correlation(model, x, x), 1.0, 1e-12));
  for (double t = 0.0; t <= std::numbers::pi; t += 0.1) {
    const double r = model_correlation(model, x, {std::sin(t), 0, std::cos(t)});
    CHECK(r <= 1.0 + 1e-9);
    CHECK(r >= -1.0 - 1e-9);
  }
  CHECK(close(model_mean(model, x), 1.0, 1e-12));
  CHECK(model_variance(model, x) > 0.0);
}

TEST_CASE("invalid inputs") {
  const auto value = ValueDistribution::gaussian(0.0, 1.0);
  CHECK_THROWS_AS((HitProbs{0.3, 0.3, 0.4}.validate()), DomainError);
  CHECK_THROWS_AS((HitProbs{0.8, 0.8, 0.5}.validate()), DomainError);
  CHECK_THROWS_AS(conditional_moments({-2, 1, 1}, GKind::injective, 2, {0.3, 0.3, 0.1}, value), DomainError);
  CHECK_THROWS(enumerate_oracle(20, {0, 0, 1}, GKind::injective, {0.3, 0.3, 0.1}, value));
}

}
