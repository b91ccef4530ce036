#include <algorithm>
#include <bit>
#include <iterator>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "doctest.h"
#include "mosaic/analytics.hpp"
#include "mosaic/errors.hpp"
#include "mosaic/fields.hpp"
#include "support.hpp"

using namespace mosaic;
using mosaic::test::close;

namespace {

constexpr double kPi = std::numbers::pi;

FieldModel sphere_model(RadiusLaw radius, CountDistribution count, Submodel submodel,
                        ValueDistribution value = ValueDistribution::gaussian(1.0, 1.0)) {
  return FieldModel{Space::sphere(2), SetFamily::sphere_cap(2, std::move(radius)), std::move(count), std::move(value),
                    submodel};
}

FieldModel plane_model(CountDistribution count, Submodel submodel,
                       ValueDistribution value = ValueDistribution::gaussian(1.0, 1.0)) {
  return FieldModel{Space::euclid_rect({1.0, 1.0}), SetFamily::halfspace(2, std::numbers::sqrt2), std::move(count),
                    std::move(value), submodel};
}

IndexSet cell_of(std::uint32_t mask, int n) {
  IndexSet out;
  for (int i = 0; i < n; ++i)
    if ((mask >> i) & 1u) out.push_back(static_cast<std::uint64_t>(i + 1));
  return out;
}

std::size_t shared_members(const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y) {
  std::vector<std::uint64_t> both;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
  return both.size();
}

struct Pair {
  double mean_x = 0, mean_y = 0, var_x = 0, cov = 0;
  double se_mean = 0, se_var = 0, se_cov = 0;
};

Pair empirical(const FieldModel& model, const Point& x, const Point& y, int runs, std::uint64_t seed) {
  auto root = make_root_generator(seed);
  const auto shared = std::make_shared<const FieldModel>(model);
  std::vector<double> zx(runs), zy(runs);
  const Point pts[] = {x, y};
  for (int r = 0; r < runs; ++r) {
    const Realization real(shared, root.derive("replicate", static_cast<std::uint64_t>(r)));
    const auto z = real.evaluate_many(pts);
    zx[r] = z[0];
    zy[r] = z[1];
  }
  Pair p;
  for (int r = 0; r < runs; ++r) p.mean_x += zx[r], p.mean_y += zy[r];
  p.mean_x /= runs, p.mean_y /= runs;
  double m4 = 0, c2 = 0;
  for (int r = 0; r < runs; ++r) {
    const double dx = zx[r] - p.mean_x, dy = zy[r] - p.mean_y;
    p.var_x += dx * dx;
    p.cov += dx * dy;
    m4 += dx * dx * dx * dx;
    c2 += dx * dx * dy * dy;
  }
  p.var_x /= runs, p.cov /= runs, m4 /= runs, c2 /= runs;
  p.se_mean = std::sqrt(p.var_x / runs);
  p.se_var = std::sqrt(std::max(m4 - p.var_x * p.var_x, 0.0) / runs);
  p.se_cov = std::sqrt(std::max(c2 - p.cov * p.cov, 0.0) / runs);
  return p;
}

}  // namespace

TEST_SUITE("fields") {

TEST_CASE("index families have the prescribed intersection sizes") {
  for (std::uint32_t i = 0; i < 8; ++i)
    CHECK(index_family(3, 0, 0, 1).members(cell_of(i, 3)) == std::vector<std::uint64_t>{0});
  const auto token = index_family(4, 1, 0, 0);
  for (std::uint32_t i = 0; i < 16; ++i)
    for (std::uint32_t j = 0; j < 16; ++j)
      CHECK(shared_members(token.members(cell_of(i, 4)), token.members(cell_of(j, 4))) ==
            static_cast<std::size_t>(std::popcount(i & j)));
  const auto f = index_family(3, 2, 1, 4);
  CHECK(shared_members(f.members({1}), f.members({2})) == 2);
  CHECK(f.size(2) == f.members({1, 3}).size());
}

TEST_CASE("index family hypotheses") {
  CHECK_THROWS_AS(index_family(2, -2, 1, 2), DomainError);
  CHECK_THROWS_AS(index_family(3, 1, 1, 2), DomainError);
  CHECK_NOTHROW(index_family(3, -1, 1, 3));
  GeneralLinear gl{1, 2, 1, GKind::injective};
  CHECK(gl.c_for(5) == 10);
  CHECK(gl.c_for(0) == 1);
}

TEST_CASE("no sets gives a single cell") {
  const auto model = sphere_model(RadiusLaw::deterministic(1.0), CountDistribution::deterministic(0), SimpleMosaic{});
  const auto real = realize(model, make_root_generator(1));
  CHECK(real.n() == 0);
  CHECK(real.membership_set({0, 0, 1}).empty());
  CHECK(real.evaluate({0, 0, 1}) == real.evaluate({1, 0, 0}));
  const auto token = realize(sphere_model(RadiusLaw::deterministic(1.0), CountDistribution::deterministic(0),
                                          RandomToken{}),
                             make_root_generator(1));
  CHECK(token.evaluate({0, 1, 0}) == 0.0);
}

TEST_CASE("membership and evaluation by submodel") {
  // caps of radius pi cover everything, caps of radius 0 cover nothing (almost surely)
  const auto all = sphere_model(RadiusLaw::deterministic(kPi), CountDistribution::deterministic(3), DeadLeaves{});
  const auto real = realize(all, make_root_generator(2));
  CHECK(real.n() == 3);
  CHECK(real.membership_set({0, 0, 1}) == IndexSet{1, 2, 3});
  CHECK(real.evaluate({0, 0, 1}) == real.index_value(3));

  const auto none = sphere_model(RadiusLaw::deterministic(0.0), CountDistribution::deterministic(5), RandomToken{});
  const auto empty = realize(none, make_root_generator(3));
  CHECK(empty.membership_set({0, 0, 1}).empty());
  CHECK(empty.evaluate({0, 0, 1}) == 0.0);

  const auto token = sphere_model(RadiusLaw::deterministic(kPi), CountDistribution::deterministic(5), RandomToken{});
  const auto t = realize(token, make_root_generator(4));
  double sum = 0.0;
  for (std::uint64_t i = 1; i <= 5; ++i) sum += t.index_value(i);
  CHECK(close(t.evaluate({1, 0, 0}), sum, 1e-15));

  const auto simple = sphere_model(RadiusLaw::deterministic(kPi), CountDistribution::deterministic(4), SimpleMosaic{});
  const auto s = realize(simple, make_root_generator(5));
  CHECK(s.evaluate({1, 0, 0}) == s.evaluate({0, 0, -1}));
}

TEST_CASE("cells with different index sets get different values") {
  const auto model = plane_model(CountDistribution::deterministic(6), SimpleMosaic{});
  auto root = make_root_generator(6);
  std::size_t compared = 0;
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto real = realize(model, root.derive("r", r));
    const Point a{-0.9, -0.9}, b{0.9, 0.9};
    if (real.membership_set(a) != real.membership_set(b)) {
      CHECK(real.evaluate(a) != real.evaluate(b));
      ++compared;
    } else {
      CHECK(real.evaluate(a) == real.evaluate(b));
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("realizations are reproducible and order independent") {
  const std::vector<Submodel> subs = {SimpleMosaic{}, RandomToken{}, Mixture{}, DeadLeaves{},
                                      GeneralLinear{2, 1, 1, GKind::injective}, GeneralLinear{1, 0, 2, GKind::max_index}};
  std::vector<Point> pts;
  for (int i = 0; i < 40; ++i) pts.push_back({-1.0 + 0.05 * i, 0.3 - 0.02 * i});
  for (const auto& sub : subs) {
    const auto model = plane_model(CountDistribution::poisson(6.0), sub);
    const auto a = realize(model, make_root_generator(99));
    const auto b = realize(model, make_root_generator(99));
    CHECK(a.n() == b.n());
    const auto za = a.evaluate_many(pts);
    CHECK(za == b.evaluate_many(pts));
    auto reversed = pts;
    std::reverse(reversed.begin(), reversed.end());
    auto zr = a.evaluate_many(reversed);
    std::reverse(zr.begin(), zr.end());
    CHECK(za == zr);
    for (std::size_t k = 0; k < pts.size(); k += 7) CHECK(a.evaluate(pts[k]) == za[k]);
  }
}

TEST_CASE("large realizations regenerate sets on demand") {
  const std::uint64_t n = Realization::kCacheLimit + 100;
  const auto model = plane_model(CountDistribution::deterministic(n), RandomToken{});
  const auto real = realize(model, make_root_generator(8));
  const Point x{0.2, -0.4};
  double sum = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i)
    if (contains(real.instance(i), x)) sum += real.index_value(i);
  CHECK(close(real.evaluate(x), sum, 1e-12));

  const auto leaves = plane_model(CountDistribution::power_alpha(0.3), DeadLeaves{});
  auto root = make_root_generator(9);
  for (std::uint64_t r = 0; r < 200; ++r) CHECK(std::isfinite(realize(leaves, root.derive("r", r)).evaluate(x)));
}

TEST_CASE("general linear submodel reduces to the named submodels") {
  const Point x{-0.3, 0.2}, y{0.25, -0.1};
  const auto value = ValueDistribution::gaussian(0.5, 2.0);
  const struct {
    GeneralLinear general;
    Submodel named;
  } cases[] = {{{0, 0, 1, GKind::injective}, SimpleMosaic{}},
               {{1, 0, 0, GKind::constant}, RandomToken{}},
               {{1, 0, 0, GKind::injective}, Mixture{}},
               {{0, 0, 1, GKind::max_index}, DeadLeaves{}}};
  for (const auto& c : cases) {
    const auto general = plane_model(CountDistribution::poisson(3.0), c.general, value);
    const auto named = plane_model(CountDistribution::poisson(3.0), c.named, value);
    const auto rep = model_moments(named, x, y);
    const auto emp = empirical(general, x, y, 40000, 10);
    INFO(submodel_name(c.named));
    CHECK(std::abs(emp.mean_x - rep.mean_x) <= 4 * emp.se_mean);
    CHECK(std::abs(emp.cov - rep.covariance) <= 4 * emp.se_cov);
  }
}

TEST_CASE("empirical moments match the closed forms") {
  const Point x{-0.3, 0.2}, y{0.25, -0.1};
  const auto value = ValueDistribution::uniform(-1.0, 2.0);
  const std::vector<Submodel> subs = {SimpleMosaic{}, RandomToken{}, Mixture{}, DeadLeaves{},
                                      GeneralLinear{2, 1, 1, GKind::injective},
                                      GeneralLinear{-1, 1, 1, GKind::max_index}};
  for (const auto& sub : subs) {
    const auto model = plane_model(CountDistribution::geometric(0.3), sub, value);
    INFO(submodel_name(sub));
    const auto rep = model_moments(model, x, y);
    const auto emp = empirical(model, x, y, 40000, 11);
    CHECK(std::abs(emp.mean_x - rep.mean_x) <= 4 * emp.se_mean);
    CHECK(std::abs(emp.var_x - model_variance(model, x)) <= 4 * emp.se_var);
    CHECK(std::abs(emp.cov - rep.covariance) <= 4 * emp.se_cov);
  }
}

TEST_CASE("normalized sums are standardized") {
  const auto model = sphere_model(RadiusLaw::hemisphere(), CountDistribution::poisson(5.0), SimpleMosaic{});
  const Point pts[] = {{0, 0, 1}};
  auto root = make_root_generator(12);
  const int runs = 100000;
  double s = 0, s2 = 0;
  for (int r = 0; r < runs; ++r) {
    const double z = normalized_sum(model, 1, pts, root.derive("run", static_cast<std::uint64_t>(r)))[0];
    s += z;
    s2 += z * z;
  }
  const double mean = s / runs, var = s2 / runs - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(double(runs)));
  CHECK(std::abs(var - 1.0) < 0.02);
  CHECK_THROWS_AS(normalized_sum(sphere_model(RadiusLaw::hemisphere(), CountDistribution::poisson(5.0), SimpleMosaic{},
                                              ValueDistribution::deterministic(1.0)),
                                 3, pts, root),
                  DegenerateError);
}

TEST_CASE("rasters") {
  const auto model = plane_model(CountDistribution::deterministic(5), SimpleMosaic{});
  const GridSpec grid{64, 48};
  const auto a = raster(model, grid, make_root_generator(13));
  const auto b = raster(model, grid, make_root_generator(13));
  CHECK(a.rows == 48);
  CHECK(a.cols == 64);
  CHECK(a.values == b.values);
  std::set<double> distinct(a.values.begin(), a.values.end());
  CHECK(distinct.size() <= 32);
  CHECK(distinct.size() > 1);

  const auto flat = raster(plane_model(CountDistribution::deterministic(0), SimpleMosaic{}), {2, 2},
                           make_root_generator(14));
  CHECK(std::all_of(flat.values.begin(), flat.values.end(), [&](double v) { return v == flat.values[0]; }));

  for (const auto& space : {Space::sphere(2), Space::cylinder(1.0), Space::torus(), Space::euclid_ball(2, 1.0)})
    for (const auto& p : grid_points(space, {16, 8})) CHECK(space.contains(p));
  CHECK_THROWS_AS(grid_points(Space::sphere(3), {4, 4}), ConfigError);
  CHECK_THROWS_AS(grid_points(Space::torus(), {0, 4}), ConfigError);
}

}
