#include "mosaic/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "mosaic/errors.hpp"
#include "mosaic/estimation.hpp"

namespace mosaic {

namespace {

constexpr double kPi = std::numbers::pi;

const ParamSpec kAlpha{"alpha", 0.5, ParamRange::unit_closed};
const ParamSpec kBeta{"beta", 1.0, ParamRange::positive};
const ParamSpec kC{"c", 1.0, ParamRange::positive};
const ParamSpec kC1{"c1", 1.0, ParamRange::positive};
const ParamSpec kC2{"c2", 4.0, ParamRange::at_least_pi_radius};
const ParamSpec kN{"n", 3.0, ParamRange::natural};
const ParamSpec kLambda1{"lambda1", 0.5, ParamRange::unit_closed};
const ParamSpec kLambda2{"lambda2", 0.5, ParamRange::unit_open};
const ParamSpec kA{"a", 0.5, ParamRange::positive};
const ParamSpec kA1{"a1", 0.5, ParamRange::positive};
const ParamSpec kA2{"a2", 0.5, ParamRange::positive};
const ParamSpec kR{"r", 1.0, ParamRange::cap_radius};
const ParamSpec kPoisson{"lambda", 10.0, ParamRange::positive};
const ParamSpec kRadius{"cm", 1.0, ParamRange::positive};

std::vector<CatalogEntry> build_entries() {
  return {
      {"t1r1", "simple mosaic, random half-planes, N = K_1 + ... + K_L, L Poisson",
       "exp(-(d/c1)^alpha)", {kAlpha, kC1, kRadius}},
      {"t1r2", "simple mosaic, random half-planes, N = K_1 + ... + K_L, L binomial",
       "(1 - (d/c2)^alpha)^n", {kAlpha, kC2, kN, kRadius}},
      {"t1r3", "simple mosaic, random half-planes, N = K_1 + ... + K_L, L negative binomial",
       "(1 + (d/c1)^alpha)^(-beta/alpha)", {kAlpha, kBeta, kC1, kRadius}},
      {"t1r4", "random token, random half-planes, geometric N",
       "lambda1 (1 - d/(pi cm)) + 1 - lambda1", {kLambda1, kRadius}},
      {"t1r5", "mixture, random half-planes, Poisson N",
       "lambda2 (1 - d/(pi cm)) exp(-d/c1) + (1 - lambda2)(1 - d/(pi cm))", {kLambda2, kC1, kRadius}},
      {"t1r6", "dead leaves, random half-planes, N = K",
       "1 - 2^(1-alpha) (d/(pi cm)) / (1 + d/(pi cm))^(1-alpha)", {kAlpha, kRadius}},
      {"t1r7", "random token, discs of diameter a",
       "(2/pi) acos(d/a) - 2 d sqrt(a^2 - d^2)/(pi a^2) for d <= a", {kA, kPoisson, kRadius}},
      {"t1r8", "random token, discs with the spherical-model diameter law",
       "1 - 3d/(2a) + d^3/(2a^3) for d <= a", {kA, kPoisson, kRadius}},
      {"t1r9", "random token, discs of diameter uniform on [0, a]",
       "(2/pi) acos(d/a) - 4 d sqrt(a^2 - d^2)/(pi a^2) + 2 d^3 atanh(sqrt(1 - d^2/a^2))/(pi a^3) for d <= a",
       {kA, kPoisson, kRadius}},
      {"t1r10", "random token, rectangles with half-widths a1, a2",
       "(2 a1 - |x1 - y1|)_+ (2 a2 - |x2 - y2|)_+ / (4 a1 a2)", {kA1, kA2, kPoisson, kRadius}},
      {"t2r1", "simple mosaic, hemispheres, N = K_1 + ... + K_L, L Poisson",
       "exp(-(d/c)^alpha)", {kAlpha, kC}},
      {"t2r2", "simple mosaic, hemispheres, N = K_1 + ... + K_L, L negative binomial",
       "(1 + (d/c)^alpha)^(-beta/alpha)", {kAlpha, kBeta, kC}},
      {"t2r3", "random token, hemispheres, geometric N", "lambda1 (1 - d/pi) + 1 - lambda1", {kLambda1}},
      {"t2r4", "mixture, hemispheres, Poisson N",
       "lambda2 (1 - d/pi) exp(-d/c) + (1 - lambda2)(1 - d/pi)", {kLambda2, kC}},
      {"t2r5", "dead leaves, hemispheres, N = K", "1 - 2^(1-alpha) (d/pi) / (1 + d/pi)^(1-alpha)", {kAlpha}},
      {"t2r6", "random token, caps of radius r",
       "1{d=0} + (acos((cos^2 r - cos d)/sin^2 r) - 2 cos r acos(cos r (1 - cos d)/(sin r sin d)))"
       " / (pi (1 - cos r)) for 0 < d <= 2r",
       {kR, kPoisson}},
      {"t2r7", "simple mosaic, caps with cos R uniform, N = K_1 + ... + K_L, L Poisson",
       "exp(-(sin(d/2)/c)^alpha)", {kAlpha, kC}},
      {"t2r8", "simple mosaic, caps with cos R uniform, N = K_1 + ... + K_L, L negative binomial",
       "(1 + (sin(d/2)/c)^alpha)^(-beta/alpha)", {kAlpha, kBeta, kC}},
      {"t2r9", "random token, caps with cos R uniform, geometric N",
       "lambda1 (1 - sin(d/2)/2) + 1 - lambda1", {kLambda1}},
      {"t2r10", "random token, caps with the cos-polynomial radius law p = (0, 1/2)",
       "1 - sin^3(d/2)/4 - 3 sin(d/2) cos^2(d/2)/8", {kPoisson}},
      {"t2r11", "simple mosaic, caps with cos R uniform, N = K", "1 - (sin(d/2)/2)^alpha", {kAlpha}},
  };
}

void check_range(const ParamSpec& spec, double value, double cm) {
  bool ok = std::isfinite(value);
  switch (spec.range) {
    case ParamRange::positive: ok = ok && value > 0.0; break;
    case ParamRange::unit_closed: ok = ok && value > 0.0 && value <= 1.0; break;
    case ParamRange::unit_open: ok = ok && value > 0.0 && value < 1.0; break;
    case ParamRange::natural: ok = ok && value >= 1.0 && value == std::floor(value) && value <= 1e9; break;
    case ParamRange::cap_radius: ok = ok && value > 0.0 && value <= kPi / 2.0; break;
    case ParamRange::at_least_pi_radius: ok = ok && value >= kPi * cm; break;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "parameter " << spec.name << " = " << value << " outside " << range_text(spec.range);
    if (spec.range == ParamRange::at_least_pi_radius) msg << " (pi cm = " << kPi * cm << ")";
    throw ConfigError(msg.str());
  }
}

double power(double x, double alpha) { return x <= 0.0 ? 0.0 : std::pow(x, alpha); }

double disc_rho(double d, double a) {
  if (d >= a) return 0.0;
  const double t = d / a;
  return 2.0 / kPi * std::acos(t) - 2.0 / kPi * t * std::sqrt(1.0 - t * t);
}

double spherical_rho(double d, double a) {
  if (d >= a) return 0.0;
  const double t = d / a;
  return 1.0 - 1.5 * t + 0.5 * t * t * t;
}

double uniform_disc_rho(double d, double a) {
  if (d <= 0.0) return 1.0;
  if (d >= a) return 0.0;
  const double t = d / a;
  return 2.0 / kPi * std::acos(t) - 4.0 / kPi * t * std::sqrt(1.0 - t * t) +
         2.0 / kPi * t * t * t * std::atanh(std::sqrt(1.0 - t * t));
}

double cap_rho(double d, double r) {
  if (d <= 0.0) return 1.0;
  if (d > 2.0 * r) return 0.0;
  const double cr = std::cos(r), sr = std::sin(r);
  const double first = std::acos(std::clamp((cr * cr - std::cos(d)) / (sr * sr), -1.0, 1.0));
  const double second = std::acos(std::clamp(cr * (1.0 - std::cos(d)) / (sr * std::sin(d)), -1.0, 1.0));
  return (first - 2.0 * cr * second) / (kPi * (1.0 - cr));
}

}  // namespace

std::string range_text(ParamRange range) {
  switch (range) {
    case ParamRange::positive: return "(0, inf)";
    case ParamRange::unit_closed: return "(0,1]";
    case ParamRange::unit_open: return "(0,1)";
    case ParamRange::natural: return "{1, 2, ...}";
    case ParamRange::cap_radius: return "(0, pi/2]";
    case ParamRange::at_least_pi_radius: return "[pi cm, inf)";
  }
  return "";
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = build_entries();
  return entries;
}

const CatalogEntry& catalog_entry(std::string_view id) {
  for (const auto& e : catalog_entries())
    if (e.id == id) return e;
  throw ConfigError("unknown catalog id '" + std::string(id) + "' (expected t1r1..t1r10 or t2r1..t2r11)");
}

double CorrelationModel::rho(double d) const {
  const auto [x, y] = pair_at_distance(model.space, d);
  return rho_points(x, y);
}

std::pair<Point, Point> pair_at_distance(const Space& space, double d) {
  const double ds[] = {d};
  auto design = line_design(space, ds);
  return {design.anchor, design.probes[0]};
}

CorrelationModel catalog(std::string_view id, const ParamValues& overrides) {
  const CatalogEntry& entry = catalog_entry(id);
  ParamValues p;
  for (const auto& spec : entry.params) p[spec.name] = spec.fallback;
  for (const auto& [name, value] : overrides) {
    if (!p.contains(name)) {
      std::string known;
      for (const auto& spec : entry.params) known += (known.empty() ? "" : ", ") + spec.name;
      throw ConfigError("catalog " + entry.id + " has no parameter '" + name + "' (parameters: " + known + ")");
    }
    p[name] = value;
  }
  const double cm = p.contains("cm") ? p["cm"] : 1.0;
  for (const auto& spec : entry.params) check_range(spec, p[spec.name], cm);

  const auto get = [&](const char* name) { return p.at(name); };
  const bool sphere = entry.id[1] == '2';
  const Space space = entry.id == "t1r10" ? Space::euclid_rect({cm, cm})
                      : sphere             ? Space::sphere(2)
                                           : Space::euclid_ball(2, cm);
  const ValueDistribution standard = ValueDistribution::gaussian(1.0, 1.0);
  const ValueDistribution token = ValueDistribution::gaussian(1.0 / std::numbers::sqrt2, 0.5);
  const auto k = [&] { return CountDistribution::power_alpha(get("alpha")); };
  const auto geometric = [&] {
    const double l1 = get("lambda1");
    return CountDistribution::geometric(l1 / (2.0 * (2.0 - l1)));
  };
  const auto mixture_value = [&] {
    const double l2 = get("lambda2");
    return ValueDistribution::gaussian(1.0, l2 / (1.0 - l2));
  };
  // Half-planes on R^2 and hemispheres on S^2 share the law of the cut position:
  // the chance a set separates two points is d / (pi scale).
  const double scale = sphere ? 1.0 : cm;
  const SetFamily halves = sphere ? SetFamily::sphere_cap(2, RadiusLaw::hemisphere()) : SetFamily::halfspace(2, cm);
  const SetFamily cos_uniform = SetFamily::sphere_cap(2, RadiusLaw::cos_polynomial({0.5}));

  const auto make = [&](SetFamily sets, CountDistribution count, ValueDistribution value, Submodel submodel) {
    return FieldModel{space, std::move(sets), std::move(count), std::move(value), submodel};
  };

  std::function<double(double)> of_distance;
  std::optional<FieldModel> model;
  const std::string& row = entry.id;
  if (row == "t1r1" || row == "t2r1") {
    const double c = get(sphere ? "c" : "c1"), alpha = get("alpha");
    model = make(halves, CountDistribution::compound(CountDistribution::poisson(std::pow(kPi * scale / c, alpha)), k()),
                 standard, SimpleMosaic{});
    of_distance = [=](double d) { return std::exp(-power(d / c, alpha)); };
  } else if (row == "t1r2") {
    const double c2 = get("c2"), alpha = get("alpha");
    const auto n = static_cast<std::uint64_t>(get("n"));
    model = make(halves,
                 CountDistribution::compound(CountDistribution::binomial(n, std::pow(kPi * cm / c2, alpha)), k()),
                 standard, SimpleMosaic{});
    of_distance = [=](double d) { return std::pow(1.0 - power(d / c2, alpha), static_cast<double>(n)); };
  } else if (row == "t1r3" || row == "t2r2") {
    const double c = get(sphere ? "c" : "c1"), alpha = get("alpha"), beta = get("beta");
    const double q = 1.0 / (1.0 + std::pow(kPi * scale / c, alpha));
    model = make(halves, CountDistribution::compound(CountDistribution::negative_binomial(beta / alpha, q), k()),
                 standard, SimpleMosaic{});
    of_distance = [=](double d) { return std::pow(1.0 + power(d / c, alpha), -beta / alpha); };
  } else if (row == "t1r4" || row == "t2r3") {
    const double l1 = get("lambda1");
    model = make(halves, geometric(), token, RandomToken{});
    of_distance = [=](double d) { return l1 * (1.0 - d / (kPi * scale)) + 1.0 - l1; };
  } else if (row == "t1r5" || row == "t2r4") {
    const double l2 = get("lambda2"), c = get(sphere ? "c" : "c1");
    model = make(halves, CountDistribution::poisson(kPi * scale / c), mixture_value(), Mixture{});
    of_distance = [=](double d) {
      const double line = 1.0 - d / (kPi * scale);
      return l2 * line * std::exp(-d / c) + (1.0 - l2) * line;
    };
  } else if (row == "t1r6" || row == "t2r5") {
    const double alpha = get("alpha");
    model = make(halves, k(), standard, DeadLeaves{});
    of_distance = [=](double d) {
      const double t = d / (kPi * scale);
      return 1.0 - std::pow(2.0, 1.0 - alpha) * t / std::pow(1.0 + t, 1.0 - alpha);
    };
  } else if (row == "t1r7" || row == "t1r8" || row == "t1r9") {
    const double a = get("a");
    const RadiusLaw law = row == "t1r7"   ? RadiusLaw::deterministic(a)
                          : row == "t1r8" ? RadiusLaw::spherical(a)
                                          : RadiusLaw::uniform_diameter(a);
    model = make(SetFamily::euclid_ball(2, cm, law), CountDistribution::poisson(get("lambda")), standard,
                 RandomToken{});
    if (row == "t1r7") of_distance = [=](double d) { return disc_rho(d, a); };
    else if (row == "t1r8") of_distance = [=](double d) { return spherical_rho(d, a); };
    else of_distance = [=](double d) { return uniform_disc_rho(d, a); };
  } else if (row == "t1r10") {
    const double a1 = get("a1"), a2 = get("a2");
    model = make(SetFamily::hyperrect({a1, a2}, {cm, cm}), CountDistribution::poisson(get("lambda")), standard,
                 RandomToken{});
    CorrelationModel out{entry.id, entry.title, entry.formula, p, std::move(*model), {}, 2.0 * cm};
    out.rho_points = [=](const Point& x, const Point& y) {
      return std::max(0.0, 2.0 * a1 - std::abs(x[0] - y[0])) * std::max(0.0, 2.0 * a2 - std::abs(x[1] - y[1])) /
             (4.0 * a1 * a2);
    };
    return out;
  } else if (row == "t2r6") {
    const double r = get("r");
    model = make(SetFamily::sphere_cap(2, RadiusLaw::deterministic(r)), CountDistribution::poisson(get("lambda")),
                 standard, RandomToken{});
    of_distance = [=](double d) { return cap_rho(d, r); };
  } else if (row == "t2r7" || row == "t2r8") {
    const double c = get("c"), alpha = get("alpha");
    if (row == "t2r7") {
      model = make(cos_uniform, CountDistribution::compound(CountDistribution::poisson(std::pow(2.0 / c, alpha)), k()),
                   standard, SimpleMosaic{});
      of_distance = [=](double d) { return std::exp(-power(std::sin(0.5 * d) / c, alpha)); };
    } else {
      const double beta = get("beta");
      const double q = 1.0 / (1.0 + std::pow(2.0 / c, alpha));
      model = make(cos_uniform, CountDistribution::compound(CountDistribution::negative_binomial(beta / alpha, q), k()),
                   standard, SimpleMosaic{});
      of_distance = [=](double d) { return std::pow(1.0 + power(std::sin(0.5 * d) / c, alpha), -beta / alpha); };
    }
  } else if (row == "t2r9") {
    const double l1 = get("lambda1");
    model = make(cos_uniform, geometric(), token, RandomToken{});
    of_distance = [=](double d) { return l1 * (1.0 - 0.5 * std::sin(0.5 * d)) + 1.0 - l1; };
  } else if (row == "t2r10") {
    model = make(SetFamily::sphere_cap(2, RadiusLaw::cos_polynomial({0.0, 0.5})),
                 CountDistribution::poisson(get("lambda")), standard, RandomToken{});
    of_distance = [](double d) {
      const double s = std::sin(0.5 * d), c = std::cos(0.5 * d);
      return 1.0 - 0.25 * s * s * s - 0.375 * s * c * c;
    };
  } else {
    const double alpha = get("alpha");
    model = make(cos_uniform, k(), standard, SimpleMosaic{});
    of_distance = [=](double d) { return 1.0 - power(0.5 * std::sin(0.5 * d), alpha); };
  }

  CorrelationModel out{entry.id, entry.title, entry.formula, p, std::move(*model), {}, sphere ? kPi : 2.0 * cm};
  const Space metric = out.model.space;
  out.rho_points = [of_distance, metric](const Point& x, const Point& y) {
    return of_distance(distance(metric, x, y));
  };
  return out;
}

}  // namespace mosaic
