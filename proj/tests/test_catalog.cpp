#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "doctest.h"
#include "mosaic/analytics.hpp"
#include "mosaic/catalog.hpp"
#include "mosaic/errors.hpp"
#include "support.hpp"

using namespace mosaic;
using mosaic::test::close;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<ParamValues> kSettings = {
    {},
    {{"alpha", 0.9}, {"beta", 2.0}, {"c", 0.7}, {"c1", 0.6}, {"lambda1", 0.3}, {"lambda2", 0.8}, {"a", 0.8}},
    {{"alpha", 1.0}, {"n", 2.0}, {"c2", 5.0}, {"r", 0.6}, {"a1", 0.3}, {"a2", 0.7}, {"cm", 1.5}, {"a", 1.0}},
};

ParamValues applicable(const CatalogEntry& entry, const ParamValues& values) {
  ParamValues out;
  for (const auto& spec : entry.params)
    if (auto it = values.find(spec.name); it != values.end()) out.emplace(spec.name, it->second);
  return out;
}

}  // namespace

TEST_SUITE("catalog") {

TEST_CASE("every row is a correlation function of its model") {
  CHECK(catalog_entries().size() == 21);
  for (const auto& entry : catalog_entries())
    for (const auto& setting : kSettings) {
      const auto cm = catalog(entry.id, applicable(entry, setting));
      INFO(entry.id);
      CHECK(close(cm.rho(0.0), 1.0, 1e-10));
      for (int k = 0; k <= 24; ++k) {
        const double d = cm.max_distance * k / 24.0;
        const auto [x, y] = pair_at_distance(cm.model.space, d);
        const double r = cm.rho_points(x, y);
        INFO("d=" << d);
        CHECK(r <= 1.0 + 1e-9);
        CHECK(r >= -1.0 - 1e-9);
        CHECK(close(r, model_correlation(cm.model, x, y), 1e-10));
      }
    }
}

TEST_CASE("rows reproduce their printed formulas") {
  const std::function<double(double)> t1r1 = [](double d) { return std::exp(-std::pow(d / 0.6, 0.9)); };
  const std::function<double(double)> t2r5 = [](double d) {
    return 1.0 - std::pow(2.0, 0.5) * (d / kPi) / std::pow(1.0 + d / kPi, 0.5);
  };
  const std::function<double(double)> t2r10 = [](double d) {
    const double s = std::sin(d / 2), c = std::cos(d / 2);
    return 1.0 - s * s * s / 4.0 - 3.0 * s * c * c / 8.0;
  };
  const std::function<double(double)> t2r11 = [](double d) { return 1.0 - std::pow(std::sin(d / 2) / 2, 0.9); };
  const std::function<double(double)> t1r8 = [](double d) {
    return d >= 0.8 ? 0.0 : 1.0 - 1.5 * d / 0.8 + 0.5 * std::pow(d / 0.8, 3);
  };
  const std::function<double(double)> t1r4 = [](double d) { return 0.3 * (1.0 - d / kPi) + 0.7; };
  const struct {
    const char* id;
    const std::function<double(double)>& rho;
  } rows[] = {{"t1r1", t1r1}, {"t2r5", t2r5}, {"t2r10", t2r10}, {"t2r11", t2r11}, {"t1r8", t1r8}, {"t1r4", t1r4}};
  const ParamValues p = {{"alpha", 0.9}, {"c1", 0.6}, {"a", 0.8}, {"lambda1", 0.3}};
  for (const auto& row : rows) {
    ParamValues values = applicable(catalog_entry(row.id), p);
    if (std::string(row.id) == "t2r5") values["alpha"] = 0.5;
    const auto cm = catalog(row.id, values);
    for (int k = 0; k <= 30; ++k) {
      const double d = cm.max_distance * k / 30.0;
      INFO(row.id << " d=" << d);
      CHECK(close(cm.rho(d), row.rho(d), 1e-10));
    }
  }
}

TEST_CASE("hemisphere dead leaves vanish at the antipode") {
  CHECK(std::abs(catalog("t2r5", {{"alpha", 0.5}}).rho(kPi)) < 1e-12);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(catalog("t9r9"), ConfigError);
  CHECK_THROWS_AS(catalog("t2r5", {{"alpha", 1.5}}), ConfigError);
  CHECK_THROWS_AS(catalog("t2r5", {{"alpha", 0.0}}), ConfigError);
  CHECK_THROWS_AS(catalog("t2r5", {{"beta", 1.0}}), ConfigError);
  CHECK_THROWS_AS(catalog("t1r2", {{"c2", 3.0}}), ConfigError);
  CHECK_NOTHROW(catalog("t1r2", {{"c2", kPi}}));
  CHECK_THROWS_AS(catalog("t1r2", {{"n", 2.5}}), ConfigError);
  CHECK_THROWS_AS(catalog("t1r5", {{"lambda2", 1.0}}), ConfigError);
  CHECK_NOTHROW(catalog("t1r4", {{"lambda1", 1.0}}));
  CHECK_THROWS_AS(catalog("t2r6", {{"r", 2.0}}), ConfigError);
  CHECK_THROWS_AS(catalog("t1r7", {{"a", -1.0}}), ConfigError);
  try {
    catalog("t2r5", {{"alpha", 1.5}});
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
  }
}

}
