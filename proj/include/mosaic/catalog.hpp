#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mosaic/fields.hpp"

namespace mosaic {

enum class ParamRange {
  positive,          // (0, inf)
  unit_closed,       // (0, 1]
  unit_open,         // (0, 1)
  natural,           // 1, 2, ...
  cap_radius,        // (0, pi/2]
  at_least_pi_radius // [pi C_M, inf)
};

std::string range_text(ParamRange range);

struct ParamSpec {
  std::string name;
  double fallback;
  ParamRange range;
};

struct CatalogEntry {
  std::string id;
  std::string title;
  std::string formula;
  std::vector<ParamSpec> params;
};

using ParamValues = std::map<std::string, double, std::less<>>;

/// A closed-form correlation function together with a field that has it.
struct CorrelationModel {
  std::string id;
  std::string title;
  std::string formula;
  ParamValues params;
  FieldModel model;
  /// Correlation of two points.
  std::function<double(const Point&, const Point&)> rho_points;
  /// Largest distance reachable along line_design's probe direction.
  double max_distance = 0.0;

  /// Correlation of the pair pair_at_distance(model.space, d).
  double rho(double d) const;
};

/// Rows t1r1..t1r10 (bounded subsets of R^2) and t2r1..t2r11 (S^2).
const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& catalog_entry(std::string_view id);
/// Throws ConfigError for unknown ids, unknown parameter names and
/// out-of-range values.
CorrelationModel catalog(std::string_view id, const ParamValues& overrides = {});

/// Two points of the space at distance d, placed like line_design's anchor and probe.
std::pair<Point, Point> pair_at_distance(const Space& space, double d);

}  // namespace mosaic
