#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mosaic/catalog.hpp"
#include "mosaic/fields.hpp"

namespace mosaic {

/// A run described by one JSON document. The model comes either from
/// "catalog" (+ "params") or from the "space", "sets", "count", "value" and
/// "submodel" blocks. Everything else is an optional command setting.
struct RunConfig {
  std::optional<FieldModel> model;
  std::optional<std::string> catalog_id;
  ParamValues params;

  std::optional<std::uint64_t> seed;
  std::optional<GridSpec> grid;
  std::optional<std::uint64_t> replicates;
  std::vector<double> distances;
  std::optional<std::size_t> distance_count;
  std::optional<std::uint64_t> oracle_n;
  std::optional<std::uint64_t> sum_m;
  std::optional<std::uint64_t> runs;
  std::vector<Point> points;
  std::optional<unsigned> threads;
  std::optional<std::string> format;
  std::optional<std::string> out;
};

/// Throws ConfigError naming the offending key as a JSON pointer, or the
/// line and column of a syntax error.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// "WxH", both positive.
GridSpec parse_grid(std::string_view text);

/// The model of the config: the catalog row when one is named, else the explicit blocks.
FieldModel resolve_model(const RunConfig& config);

}  // namespace mosaic
