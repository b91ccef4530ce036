#include "mosaic/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mosaic/errors.hpp"

namespace mosaic {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError((where.empty() ? "/" : where) + ": " + what);
}

std::string child(const std::string& where, const std::string& key) { return where + "/" + key; }

const json& require_key(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.is_object()) fail(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(child(where, key), "missing key");
  return *it;
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) {
      std::string list;
      for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      fail(child(where, key), "unknown key (expected one of: " + list + ")");
    }
  }
}

double number(const json& obj, const std::string& where, const std::string& key) {
  const json& v = require_key(obj, where, key);
  if (!v.is_number()) fail(child(where, key), "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& where, const std::string& key, double fallback) {
  return obj.contains(key) ? number(obj, where, key) : fallback;
}

std::uint64_t unsigned_value(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  fail(where, "expected a non-negative integer");
}

std::int64_t integer_value(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  fail(where, "expected an integer");
}

std::string text(const json& obj, const std::string& where, const std::string& key) {
  const json& v = require_key(obj, where, key);
  if (!v.is_string()) fail(child(where, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(child(where, std::to_string(i)), "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

// Runs a factory and attributes its domain errors to the block being parsed.
template <class Make>
auto at(const std::string& where, Make make) -> decltype(make()) {
  try {
    return make();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

Space parse_space(const json& v, const std::string& where) {
  const std::string type = text(v, where, "type");
  if (type == "euclid-ball") {
    check_keys(v, where, {"type", "d", "radius"});
    const auto d = integer_value(require_key(v, where, "d"), child(where, "d"));
    return at(where, [&] { return Space::euclid_ball(static_cast<int>(d), number(v, where, "radius")); });
  }
  if (type == "euclid-rect") {
    check_keys(v, where, {"type", "half_widths"});
    const auto hw = numbers(require_key(v, where, "half_widths"), child(where, "half_widths"));
    return at(where, [&] { return Space::euclid_rect(hw); });
  }
  if (type == "sphere") {
    check_keys(v, where, {"type", "d"});
    const auto d = integer_value(require_key(v, where, "d"), child(where, "d"));
    return at(where, [&] { return Space::sphere(static_cast<int>(d)); });
  }
  if (type == "cylinder") {
    check_keys(v, where, {"type", "h"});
    return at(where, [&] { return Space::cylinder(number(v, where, "h")); });
  }
  if (type == "torus") {
    check_keys(v, where, {"type"});
    return Space::torus();
  }
  fail(child(where, "type"), "unknown space '" + type + "' (euclid-ball, euclid-rect, sphere, cylinder, torus)");
}

RadiusLaw parse_radius(const json& v, const std::string& where) {
  const std::string law = text(v, where, "law");
  if (law == "deterministic") {
    check_keys(v, where, {"law", "value"});
    return at(where, [&] { return RadiusLaw::deterministic(number(v, where, "value")); });
  }
  if (law == "spherical" || law == "uniform") {
    check_keys(v, where, {"law", "a"});
    const double a = number(v, where, "a");
    return at(where, [&] { return law == "uniform" ? RadiusLaw::uniform_diameter(a) : RadiusLaw::spherical(a); });
  }
  if (law == "cos-polynomial") {
    check_keys(v, where, {"law", "p"});
    const auto p = numbers(require_key(v, where, "p"), child(where, "p"));
    return at(where, [&] { return RadiusLaw::cos_polynomial(p); });
  }
  if (law == "hemisphere") {
    check_keys(v, where, {"law"});
    return RadiusLaw::hemisphere();
  }
  fail(child(where, "law"), "unknown law '" + law + "' (deterministic, spherical, uniform, cos-polynomial, hemisphere)");
}

SetFamily parse_sets(const json& v, const std::string& where, const Space& space) {
  const std::string type = text(v, where, "type");
  const auto radius_or_enclosing = [&] {
    return v.contains("radius") ? number(v, where, "radius") : space.enclosing_radius();
  };
  SetFamily family = [&] {
    if (type == "halfspace") {
      check_keys(v, where, {"type", "radius"});
      if (!space.is_euclidean()) fail(child(where, "type"), "half-spaces need a Euclidean space");
      return at(where, [&] { return SetFamily::halfspace(space.dimension(), radius_or_enclosing()); });
    }
    if (type == "ball") {
      check_keys(v, where, {"type", "radius", "diameter"});
      const RadiusLaw law = parse_radius(require_key(v, where, "diameter"), child(where, "diameter"));
      return std::visit(
          [&](const auto& s) -> SetFamily {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Space::Cylinder>)
              return at(where, [&] { return SetFamily::cylinder_ball(s.h, law); });
            else if constexpr (std::is_same_v<T, Space::Torus>)
              return at(where, [&] { return SetFamily::torus_ball(law); });
            else if constexpr (std::is_same_v<T, Space::Sphere>)
              fail(child(where, "type"), "use type 'cap' on the sphere");
            else
              return at(where, [&] { return SetFamily::euclid_ball(space.dimension(), radius_or_enclosing(), law); });
          },
          space.kind());
    }
    if (type == "hyperrect") {
      check_keys(v, where, {"type", "a", "bounds"});
      const auto a = numbers(require_key(v, where, "a"), child(where, "a"));
      std::vector<double> bounds;
      if (v.contains("bounds")) bounds = numbers(v["bounds"], child(where, "bounds"));
      else if (const auto* r = std::get_if<Space::EuclidRect>(&space.kind())) bounds = r->half_widths;
      else bounds.assign(a.size(), space.enclosing_radius());
      return at(where, [&] { return SetFamily::hyperrect(a, bounds); });
    }
    if (type == "cap") {
      check_keys(v, where, {"type", "radius"});
      if (!std::holds_alternative<Space::Sphere>(space.kind())) fail(child(where, "type"), "caps need a sphere");
      const RadiusLaw law = parse_radius(require_key(v, where, "radius"), child(where, "radius"));
      return at(where, [&] { return SetFamily::sphere_cap(space.dimension(), law); });
    }
    fail(child(where, "type"), "unknown set family '" + type + "' (halfspace, ball, hyperrect, cap)");
  }();
  at(where, [&] {
    family.check_compatible(space);
    return 0;
  });
  return family;
}

CountDistribution parse_count(const json& v, const std::string& where) {
  const std::string type = text(v, where, "type");
  if (type == "poisson") {
    check_keys(v, where, {"type", "lambda"});
    return at(child(where, "lambda"), [&] { return CountDistribution::poisson(number_or(v, where, "lambda", 10.0)); });
  }
  if (type == "geometric") {
    check_keys(v, where, {"type", "p"});
    return at(child(where, "p"), [&] { return CountDistribution::geometric(number(v, where, "p")); });
  }
  if (type == "binomial") {
    check_keys(v, where, {"type", "n", "p"});
    const auto n = unsigned_value(require_key(v, where, "n"), child(where, "n"));
    return at(where, [&] { return CountDistribution::binomial(n, number(v, where, "p")); });
  }
  if (type == "negative-binomial") {
    check_keys(v, where, {"type", "r", "p"});
    return at(where,
              [&] { return CountDistribution::negative_binomial(number(v, where, "r"), number(v, where, "p")); });
  }
  if (type == "power-alpha") {
    check_keys(v, where, {"type", "alpha"});
    return at(child(where, "alpha"), [&] { return CountDistribution::power_alpha(number(v, where, "alpha")); });
  }
  if (type == "compound") {
    check_keys(v, where, {"type", "outer", "inner"});
    auto outer = parse_count(require_key(v, where, "outer"), child(where, "outer"));
    auto inner = parse_count(require_key(v, where, "inner"), child(where, "inner"));
    return at(where, [&] { return CountDistribution::compound(outer, inner); });
  }
  if (type == "deterministic") {
    check_keys(v, where, {"type", "n"});
    return CountDistribution::deterministic(unsigned_value(require_key(v, where, "n"), child(where, "n")));
  }
  if (type == "table") {
    check_keys(v, where, {"type", "pmf"});
    const auto pmf = numbers(require_key(v, where, "pmf"), child(where, "pmf"));
    return at(where, [&] { return CountDistribution::table(pmf); });
  }
  fail(child(where, "type"),
       "unknown count law '" + type +
           "' (poisson, geometric, binomial, negative-binomial, power-alpha, compound, deterministic, table)");
}

ValueDistribution parse_value(const json& v, const std::string& where) {
  const std::string type = text(v, where, "type");
  if (type == "gaussian") {
    check_keys(v, where, {"type", "mean", "variance"});
    return at(where, [&] {
      return ValueDistribution::gaussian(number_or(v, where, "mean", 1.0), number_or(v, where, "variance", 1.0));
    });
  }
  if (type == "uniform") {
    check_keys(v, where, {"type", "lo", "hi"});
    return at(where, [&] { return ValueDistribution::uniform(number(v, where, "lo"), number(v, where, "hi")); });
  }
  if (type == "two-point") {
    check_keys(v, where, {"type", "low", "high", "p_low"});
    return at(where, [&] {
      return ValueDistribution::two_point(number(v, where, "low"), number(v, where, "high"), number(v, where, "p_low"));
    });
  }
  if (type == "deterministic") {
    check_keys(v, where, {"type", "value"});
    return ValueDistribution::deterministic(number(v, where, "value"));
  }
  fail(child(where, "type"), "unknown value law '" + type + "' (gaussian, uniform, two-point, deterministic)");
}

Submodel parse_submodel(const json& v, const std::string& where) {
  const auto named = [&](const std::string& name) -> Submodel {
    if (name == "simple") return SimpleMosaic{};
    if (name == "token") return RandomToken{};
    if (name == "mixture") return Mixture{};
    if (name == "dead-leaves") return DeadLeaves{};
    fail(where, "unknown submodel '" + name + "' (simple, token, mixture, dead-leaves, or a general block)");
  };
  if (v.is_string()) return named(v.get<std::string>());
  const std::string type = text(v, where, "type");
  if (type != "general") {
    check_keys(v, where, {"type"});
    return named(type);
  }
  check_keys(v, where, {"type", "a", "b", "c", "g"});
  GeneralLinear gl;
  gl.a = integer_value(require_key(v, where, "a"), child(where, "a"));
  gl.b = integer_value(require_key(v, where, "b"), child(where, "b"));
  gl.c_min = v.contains("c") ? integer_value(v["c"], child(where, "c")) : 1;
  const std::string g = v.contains("g") ? text(v, where, "g") : "injective";
  if (g == "injective") gl.g = GKind::injective;
  else if (g == "constant") gl.g = GKind::constant;
  else if (g == "max-index") gl.g = GKind::max_index;
  else fail(child(where, "g"), "unknown index map '" + g + "' (injective, constant, max-index)");
  if (gl.b < 0 || gl.a < -gl.b || gl.c_min < 0) fail(where, "need b >= 0, a >= -b and c >= 0");
  return gl;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') ++line, column = 1;
    else ++column;
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

GridSpec parse_grid(std::string_view text) {
  const auto x = text.find('x');
  if (x == std::string_view::npos) throw ConfigError("grid '" + std::string(text) + "': expected WxH");
  GridSpec grid;
  const auto read = [&](std::string_view part, std::size_t& out) {
    const auto res = std::from_chars(part.data(), part.data() + part.size(), out);
    return res.ec == std::errc{} && res.ptr == part.data() + part.size() && out > 0;
  };
  if (!read(text.substr(0, x), grid.cols) || !read(text.substr(x + 1), grid.rows) || grid.cols > 16384 ||
      grid.rows > 16384)
    throw ConfigError("grid '" + std::string(text) + "': expected WxH with 1 <= W, H <= 16384");
  return grid;
}

RunConfig parse_config(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("config syntax error at " + line_column(source, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                      e.what());
  }
  check_keys(doc, "", {"seed", "catalog", "params", "space", "sets", "count", "value", "submodel", "grid",
                       "replicates", "distances", "distance_count", "n", "m", "runs", "points", "threads", "format",
                       "out"});
  RunConfig cfg;
  if (doc.contains("seed")) cfg.seed = unsigned_value(doc["seed"], "/seed");
  if (doc.contains("catalog")) {
    if (!doc["catalog"].is_string()) fail("/catalog", "expected a row id string");
    cfg.catalog_id = doc["catalog"].get<std::string>();
    for (auto key : {"space", "sets", "count", "value", "submodel"})
      if (doc.contains(key)) fail(std::string("/") + key, "not allowed together with /catalog");
    if (doc.contains("params")) {
      const json& params = doc["params"];
      if (!params.is_object()) fail("/params", "expected an object");
      for (const auto& [key, value] : params.items()) {
        if (!value.is_number()) fail("/params/" + key, "expected a number");
        cfg.params[key] = value.get<double>();
      }
    }
    try {
      cfg.model = catalog(*cfg.catalog_id, cfg.params).model;
    } catch (const ConfigError& e) {
      fail("/catalog", e.what());
    }
  } else if (doc.contains("params")) {
    fail("/params", "only meaningful together with /catalog");
  } else if (doc.contains("space") || doc.contains("sets")) {
    const Space space = parse_space(require_key(doc, "", "space"), "/space");
    SetFamily sets = parse_sets(require_key(doc, "", "sets"), "/sets", space);
    CountDistribution count = doc.contains("count") ? parse_count(doc["count"], "/count")
                                                    : CountDistribution::poisson(10.0);
    ValueDistribution value = doc.contains("value") ? parse_value(doc["value"], "/value")
                                                    : ValueDistribution::gaussian(1.0, 1.0);
    Submodel submodel = parse_submodel(require_key(doc, "", "submodel"), "/submodel");
    FieldModel model{space, std::move(sets), std::move(count), std::move(value), submodel};
    at("/", [&] {
      model.validate();
      return 0;
    });
    cfg.model = std::move(model);
  }
  if (doc.contains("grid")) {
    if (!doc["grid"].is_string()) fail("/grid", "expected \"WxH\"");
    try {
      cfg.grid = parse_grid(doc["grid"].get<std::string>());
    } catch (const ConfigError& e) {
      fail("/grid", e.what());
    }
  }
  if (doc.contains("replicates")) cfg.replicates = unsigned_value(doc["replicates"], "/replicates");
  if (doc.contains("distances")) cfg.distances = numbers(doc["distances"], "/distances");
  if (doc.contains("distance_count")) cfg.distance_count = unsigned_value(doc["distance_count"], "/distance_count");
  if (doc.contains("n")) cfg.oracle_n = unsigned_value(doc["n"], "/n");
  if (doc.contains("m")) cfg.sum_m = unsigned_value(doc["m"], "/m");
  if (doc.contains("runs")) cfg.runs = unsigned_value(doc["runs"], "/runs");
  if (doc.contains("points")) {
    const json& pts = doc["points"];
    if (!pts.is_array()) fail("/points", "expected an array of coordinate arrays");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto coords = numbers(pts[i], "/points/" + std::to_string(i));
      if (coords.empty() || coords.size() > kMaxAmbient) fail("/points/" + std::to_string(i), "bad coordinate count");
      Point p(coords);
      if (cfg.model && !cfg.model->space.contains(p)) fail("/points/" + std::to_string(i), "point outside the space");
      cfg.points.push_back(p);
    }
  }
  if (doc.contains("threads")) cfg.threads = static_cast<unsigned>(unsigned_value(doc["threads"], "/threads"));
  if (doc.contains("format")) cfg.format = text(doc, "", "format");
  if (doc.contains("out")) cfg.out = text(doc, "", "out");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

FieldModel resolve_model(const RunConfig& config) {
  if (config.model) return *config.model;
  throw ConfigError("no model: give /catalog or the /space, /sets, /count, /value and /submodel blocks");
}

}  // namespace mosaic
