#include "mosaic/random_sets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "mosaic/errors.hpp"
#include "mosaic/quadrature.hpp"

namespace mosaic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_diameter_law(const RadiusLaw& law, const char* family) {
  if (std::holds_alternative<RadiusLaw::CosPolynomial>(law.kind()) ||
      std::holds_alternative<RadiusLaw::Hemisphere>(law.kind()))
    throw ConfigError(std::string(family) + ": diameter law must be deterministic, spherical or uniform");
  if (!(law.upper_bound() > 0.0)) throw ConfigError(std::string(family) + ": diameter must be positive");
}

Point random_direction(std::size_t dim, Generator& g) {
  std::normal_distribution<double> normal;
  Point p;
  p.size = dim;
  double norm = 0.0;
  do {
    norm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      p[i] = normal(g);
      norm += p[i] * p[i];
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (std::size_t i = 0; i < dim; ++i) p[i] /= norm;
  return p;
}

double euclid_distance(const Point& a, const Point& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size; ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum);
}

double sphere_distance(const Point& a, const Point& b) {
  double diff = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < a.size; ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    sum += (a[i] + b[i]) * (a[i] + b[i]);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

// E[D^d] for the diameter laws of Euclidean balls.
double diameter_moment(const RadiusLaw& law, int d) {
  return std::visit(Overloaded{
                        [&](const RadiusLaw::Deterministic& l) { return std::pow(l.value, d); },
                        [&](const RadiusLaw::UniformDiameter& l) { return std::pow(l.a, d) / (d + 1); },
                        [&](const RadiusLaw::Spherical& l) {
                          if (d != 2) throw UnsupportedError("spherical diameters are supported for d = 2 only");
                          return 2.0 * l.a * l.a / 3.0;
                        },
                        [&](const auto&) -> double { throw ConfigError("not a diameter law"); },
                    },
                    law.kind());
}

double spherical_model(double a, double dist) {
  if (dist >= a) return 0.0;
  const double u = dist / a;
  return 1.0 - 1.5 * u + 0.5 * u * u * u;
}

// Ratio of the ball covariogram, averaged over D, to the volume of B_(C_M + a/2).
double euclid_ball_pair(const SetFamily::EuclidBall& f, double dist) {
  const int d = f.d;
  const double a = f.diameter.upper_bound();
  const double span = 2.0 * f.radius + a;
  const double hd = 0.5 * (d + 1);
  return std::visit(
      Overloaded{
          [&](const RadiusLaw::Deterministic& l) {
            const double t = l.value;
            if (!(dist <= t) || t == 0.0) return 0.0;
            const double x = 1.0 - std::min(1.0, dist * dist / (t * t));
            const double k = std::exp(std::lgamma(0.5 * d + 1.0) - std::lgamma(hd)) /
                             (std::sqrt(kPi) * std::pow(span, d));
            return k * std::pow(t, d) * incomplete_beta(x, hd, 0.5);
          },
          [&](const RadiusLaw::UniformDiameter&) {
            if (!(dist <= a)) return 0.0;
            const double x = 1.0 - std::min(1.0, dist * dist / (a * a));
            const double omega2 = (d + 1) * std::sqrt(kPi) * std::pow(span, d) *
                                  std::exp(std::lgamma(hd) - std::lgamma(0.5 * d + 1.0));
            const double first = std::pow(a, d) * incomplete_beta(x, hd, 0.5);
            const double second =
                (dist == 0.0 || x == 0.0) ? 0.0 : std::pow(dist, d + 1) / a * incomplete_beta(x, hd, -0.5 * d);
            return std::max(0.0, (first - second) / omega2);
          },
          [&](const RadiusLaw::Spherical& l) {
            const double px = diameter_moment(f.diameter, d) / std::pow(span, d);
            return px * spherical_model(l.a, dist);
          },
          [&](const auto&) -> double { throw ConfigError("not a diameter law"); },
      },
      f.diameter.kind());
}

// E[lens area] of two discs with a random diameter D at distance dist.
double expected_lens(const RadiusLaw& law, double dist) {
  return std::visit(
      Overloaded{
          [&](const RadiusLaw::Deterministic& l) { return disc_lens_area(l.value, dist); },
          [&](const RadiusLaw::UniformDiameter& l) {
            const double a = l.a;
            if (dist >= a) return 0.0;
            if (dist == 0.0) return kPi * a * a / 12.0;
            const double root = std::sqrt(a * a - dist * dist);
            return (a * a * std::acos(dist / a) - 2.0 * dist * root +
                    dist * dist * dist / a * std::atanh(root / a)) /
                   6.0;
          },
          [&](const RadiusLaw::Spherical& l) { return kPi * l.a * l.a / 6.0 * spherical_model(l.a, dist); },
          [&](const auto&) -> double { throw ConfigError("not a diameter law"); },
      },
      law.kind());
}

double cylinder_area(const SetFamily::CylinderBall& f) { return kTwoPi * (f.h + f.diameter.upper_bound()); }
constexpr double kTorusArea = 4.0 * kPi * kPi;

}  // namespace

// ---------------------------------------------------------------- families

SetFamily SetFamily::halfspace(int d, double radius) {
  if (d < 1 || d > static_cast<int>(kMaxAmbient)) throw ConfigError("halfspace: d must lie in [1, 8]");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("halfspace: C_M must be positive");
  return SetFamily(Halfspace{d, radius});
}

SetFamily SetFamily::euclid_ball(int d, double radius, RadiusLaw diameter) {
  if (d < 1 || d > static_cast<int>(kMaxAmbient)) throw ConfigError("euclid-ball: d must lie in [1, 8]");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("euclid-ball: C_M must be positive");
  require_diameter_law(diameter, "euclid-ball");
  if (std::holds_alternative<RadiusLaw::Spherical>(diameter.kind()) && d != 2)
    throw UnsupportedError("euclid-ball: spherical diameters are supported for d = 2 only");
  return SetFamily(EuclidBall{d, radius, std::move(diameter)});
}

SetFamily SetFamily::hyperrect(std::vector<double> a, std::vector<double> bounds) {
  if (a.empty() || a.size() > kMaxAmbient || a.size() != bounds.size())
    throw ConfigError("hyperrect: need matching half-widths a and bounds R of length 1 to 8");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!(a[k] > 0.0) || !(bounds[k] > 0.0) || !std::isfinite(a[k]) || !std::isfinite(bounds[k]))
      throw ConfigError("hyperrect: a_k and R_k must be positive");
  return SetFamily(Hyperrect{std::move(a), std::move(bounds)});
}

SetFamily SetFamily::sphere_cap(int d, RadiusLaw radius) {
  if (d < 1 || d + 1 > static_cast<int>(kMaxAmbient)) throw ConfigError("sphere-cap: d must lie in [1, 7]");
  if (std::holds_alternative<RadiusLaw::Spherical>(radius.kind()) ||
      std::holds_alternative<RadiusLaw::UniformDiameter>(radius.kind()))
    throw ConfigError("sphere-cap: radius law must be deterministic, hemisphere or cos-polynomial");
  if (const auto* r = std::get_if<RadiusLaw::Deterministic>(&radius.kind()); r && r->value > kPi)
    throw ConfigError("sphere-cap: radius must lie in [0, pi]");
  return SetFamily(SphereCap{d, std::move(radius)});
}

SetFamily SetFamily::cylinder_ball(double h, RadiusLaw diameter) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("cylinder-ball: h must be positive");
  require_diameter_law(diameter, "cylinder-ball");
  if (diameter.upper_bound() > kPi) throw ConfigError("cylinder-ball: a must lie in (0, pi]");
  return SetFamily(CylinderBall{h, std::move(diameter)});
}

SetFamily SetFamily::torus_ball(RadiusLaw diameter) {
  require_diameter_law(diameter, "torus-ball");
  if (diameter.upper_bound() > kPi) throw ConfigError("torus-ball: a must lie in (0, pi]");
  return SetFamily(TorusBall{std::move(diameter)});
}

void SetFamily::check_compatible(const Space& space) const {
  const auto fail = [&](const std::string& why) { throw ConfigError(describe() + " on " + space.describe() + ": " + why); };
  std::visit(Overloaded{
                 [&](const Halfspace& f) {
                   if (!space.is_euclidean() || space.dimension() != f.d) fail("needs a Euclidean space of equal dimension");
                   if (space.enclosing_radius() > f.radius * (1.0 + 1e-12)) fail("C_M must enclose the space");
                 },
                 [&](const EuclidBall& f) {
                   if (!space.is_euclidean() || space.dimension() != f.d) fail("needs a Euclidean space of equal dimension");
                   if (space.enclosing_radius() > f.radius * (1.0 + 1e-12)) fail("C_M must enclose the space");
                 },
                 [&](const Hyperrect& f) {
                   if (!space.is_euclidean() || space.dimension() != static_cast<int>(f.a.size()))
                     fail("needs a Euclidean space of equal dimension");
                   for (std::size_t k = 0; k < f.bounds.size(); ++k) {
                     double extent = 0.0;
                     if (const auto* b = std::get_if<Space::EuclidBall>(&space.kind())) extent = b->radius;
                     if (const auto* r = std::get_if<Space::EuclidRect>(&space.kind())) extent = r->half_widths[k];
                     if (extent > f.bounds[k] * (1.0 + 1e-12)) fail("the box prod [-R_k, R_k] must contain the space");
                   }
                 },
                 [&](const SphereCap& f) {
                   const auto* s = std::get_if<Space::Sphere>(&space.kind());
                   if (!s || s->d != f.d) fail("needs a sphere of equal dimension");
                 },
                 [&](const CylinderBall& f) {
                   const auto* c = std::get_if<Space::Cylinder>(&space.kind());
                   if (!c || std::abs(c->h - f.h) > 1e-12 * f.h) fail("needs a cylinder of equal height");
                 },
                 [&](const TorusBall&) {
                   if (!std::holds_alternative<Space::Torus>(space.kind())) fail("needs the torus");
                 },
             },
             kind_);
}

bool SetFamily::isotropic() const { return !std::holds_alternative<Hyperrect>(kind_); }

std::string SetFamily::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Halfspace& f) { os << "halfspace(d=" << f.d << ", C_M=" << f.radius << ")"; },
                 [&](const EuclidBall& f) {
                   os << "euclid-ball(d=" << f.d << ", C_M=" << f.radius << ", D~" << f.diameter.describe() << ")";
                 },
                 [&](const Hyperrect& f) {
                   os << "hyperrect(a=[";
                   for (std::size_t k = 0; k < f.a.size(); ++k) os << (k ? ", " : "") << f.a[k];
                   os << "], R=[";
                   for (std::size_t k = 0; k < f.bounds.size(); ++k) os << (k ? ", " : "") << f.bounds[k];
                   os << "])";
                 },
                 [&](const SphereCap& f) { os << "sphere-cap(d=" << f.d << ", R~" << f.radius.describe() << ")"; },
                 [&](const CylinderBall& f) { os << "cylinder-ball(h=" << f.h << ", D~" << f.diameter.describe() << ")"; },
                 [&](const TorusBall& f) { os << "torus-ball(D~" << f.diameter.describe() << ")"; },
             },
             kind_);
  return os.str();
}

// ---------------------------------------------------------------- instances

SetInstance sample_set(const SetFamily& family, Generator& g) {
  return std::visit(
      Overloaded{
          [&](const SetFamily::Halfspace& f) -> SetInstance {
            Point normal = random_direction(static_cast<std::size_t>(f.d), g);
            const double offset = f.radius * (2.0 * g.uniform01() - 1.0);
            return HalfspaceSet{normal, offset};
          },
          [&](const SetFamily::EuclidBall& f) -> SetInstance {
            Point center = random_direction(static_cast<std::size_t>(f.d), g);
            const double reach = f.radius + 0.5 * f.diameter.upper_bound();
            const double r = reach * std::pow(g.uniform01(), 1.0 / f.d);
            for (std::size_t i = 0; i < center.size; ++i) center[i] *= r;
            return BallSet{center, 0.5 * f.diameter.sample(g)};
          },
          [&](const SetFamily::Hyperrect& f) -> SetInstance {
            BoxSet box;
            box.center.size = box.half_widths.size = f.a.size();
            for (std::size_t k = 0; k < f.a.size(); ++k) {
              const double reach = f.bounds[k] + f.a[k];
              box.center[k] = reach * (2.0 * g.uniform01() - 1.0);
              box.half_widths[k] = f.a[k];
            }
            return box;
          },
          [&](const SetFamily::SphereCap& f) -> SetInstance {
            Point center = random_direction(static_cast<std::size_t>(f.d + 1), g);
            return CapSet{center, f.radius.sample(g)};
          },
          [&](const SetFamily::CylinderBall& f) -> SetInstance {
            const double a = f.diameter.upper_bound();
            const double angle = kTwoPi * g.uniform01();
            const double height = -0.5 * a + (f.h + a) * g.uniform01();
            return CylinderSet{angle, height, 0.5 * f.diameter.sample(g)};
          },
          [&](const SetFamily::TorusBall& f) -> SetInstance {
            const double u = kTwoPi * g.uniform01();
            const double v = kTwoPi * g.uniform01();
            return TorusSet{u, v, 0.5 * f.diameter.sample(g)};
          },
      },
      family.kind());
}

bool contains(const SetInstance& set, const Point& x) {
  return std::visit(Overloaded{
                        [&](const HalfspaceSet& s) {
                          double dot = 0.0;
                          for (std::size_t i = 0; i < s.normal.size; ++i) dot += s.normal[i] * x[i];
                          return dot >= s.offset;
                        },
                        [&](const BallSet& s) { return euclid_distance(s.center, x) <= s.radius; },
                        [&](const BoxSet& s) {
                          for (std::size_t i = 0; i < s.center.size; ++i)
                            if (!(std::abs(x[i] - s.center[i]) <= s.half_widths[i])) return false;
                          return true;
                        },
                        [&](const CapSet& s) { return sphere_distance(s.center, x) <= s.radius; },
                        [&](const CylinderSet& s) {
                          return std::hypot(circle_distance(x[0], s.angle), x[1] - s.height) <= s.radius;
                        },
                        [&](const TorusSet& s) {
                          return std::hypot(circle_distance(x[0], s.u), circle_distance(x[1], s.v)) <= s.radius;
                        },
                    },
                    set);
}

// ---------------------------------------------------------------- hit probabilities

double disc_lens_area(double t, double dist) {
  if (!(dist < t)) return 0.0;
  return 0.5 * (t * t * std::acos(dist / t) - dist * std::sqrt(t * t - dist * dist));
}

double cap_fraction(int d, double r) {
  if (d < 1) throw DomainError("cap_fraction: d must be >= 1");
  if (!(r >= 0.0 && r <= kPi)) throw DomainError("cap_fraction: radius must lie in [0, pi]");
  if (r > 0.5 * kPi) return 1.0 - cap_fraction(d, kPi - r);
  if (r == 0.0) return 0.0;
  const double s = std::sin(r);
  return 0.5 * boost::math::ibeta(0.5 * d, 0.5, s * s);
}

namespace {

// Two caps of radius r in (0, pi/2] on S^2 at distance 0 < dist < 2r, as a fraction of the sphere.
double two_sphere_pair(double r, double dist) {
  const double sr = std::sin(r);
  const double sh = std::sin(0.5 * dist);
  const double arg1 = std::clamp((2.0 * sh * sh - sr * sr) / (sr * sr), -1.0, 1.0);
  const double arg2 = std::clamp(std::tan(0.5 * dist) * std::cos(r) / sr, -1.0, 1.0);
  return std::max(0.0, std::acos(arg1) / kTwoPi - std::cos(r) / kPi * std::acos(arg2));
}

double slice_area(int d, double r, double dist) {
  if (d != 2) return cap_intersection_area(d, r, dist);
  if (dist >= 2.0 * r || r == 0.0) return 0.0;
  if (dist == 0.0) return kTwoPi * (1.0 - std::cos(r));
  return 2.0 * kTwoPi * two_sphere_pair(r, dist);
}

}  // namespace

double cap_intersection_area(int d, double r, double dist) {
  if (d < 1) throw DomainError("cap_intersection_area: d must be >= 1");
  if (!(r >= 0.0 && r <= 0.5 * kPi)) throw DomainError("cap_intersection_area: r must lie in [0, pi/2]");
  if (!(dist >= 0.0 && dist <= kPi)) throw DomainError("cap_intersection_area: distance must lie in [0, pi]");
  if (d == 1) return std::max(0.0, 2.0 * r - dist);
  if (dist >= 2.0 * r) return 0.0;
  // Slices at height s carry caps of radius r(s) on S^(d-1); they meet only
  // for |s| < s_max. Substituting s = s_max sin(theta) smooths the cutoff.
  const double cr = std::cos(r);
  const double ratio = cr / std::cos(0.5 * dist);
  const double s_max = std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
  const double weight_power = 0.5 * (d - 2);
  const auto slice = [&](double theta) {
    const double s = s_max * std::sin(theta);
    const double w = 1.0 - s * s;
    const double rs = std::acos(std::min(1.0, cr / std::sqrt(w)));
    return std::pow(w, weight_power) * slice_area(d - 1, std::min(rs, 0.5 * kPi), dist) * s_max *
           std::cos(theta);
  };
  return 2.0 * integrate(slice, 0.0, 0.5 * kPi, 1e-11);
}

double cap_pair_prob(int d, double r, double dist) {
  if (d < 1) throw DomainError("cap_pair_prob: d must be >= 1");
  if (!(r >= 0.0 && r <= kPi)) throw DomainError("cap_pair_prob: radius must lie in [0, pi]");
  dist = std::clamp(dist, 0.0, kPi);
  // The complement of a cap of radius r is an open cap of radius pi - r.
  if (r > 0.5 * kPi) return std::max(0.0, 2.0 * cap_fraction(d, r) - 1.0 + cap_pair_prob(d, kPi - r, dist));
  if (dist == 0.0) return cap_fraction(d, r);
  if (r == 0.0 || dist >= 2.0 * r) return 0.0;
  if (d == 1) return std::max(0.0, r / kPi - dist / kTwoPi);
  if (d == 2) return two_sphere_pair(r, dist);
  return cap_intersection_area(d, r, dist) / sphere_surface_total(d);
}

double cos_polynomial_constant(int q, int l, int d) {
  if (q < 0 || l < 1 || l > q + 1 || d < 1) throw DomainError("cos_polynomial_constant: need 1 <= l <= q + 1, d >= 1");
  const double lg = std::lgamma(2.0 * q + 2.0) + std::lgamma(0.5 * (d + 1)) - std::lgamma(l + 0.5) -
                    std::lgamma(q - l + 2.0) - std::lgamma(q + 1.0 + 0.5 * d);
  return std::exp(lg - (2 * q + 1) * std::numbers::ln2);
}

double cos_polynomial_pair_prob(const std::vector<double>& p, int d, double dist) {
  const double s = std::sin(0.5 * dist);
  const double c = std::cos(0.5 * dist);
  double sum = 0.0;
  for (std::size_t q = 0; q < p.size(); ++q) {
    if (p[q] == 0.0) continue;
    const int qi = static_cast<int>(q);
    for (int l = 1; l <= qi + 1; ++l)
      sum += p[q] * cos_polynomial_constant(qi, l, d) * std::pow(s, 2 * l - 1) * std::pow(c, 2 * (qi - l + 1));
  }
  return 0.5 - sum;
}

double hit_prob_single(const SetFamily& family, [[maybe_unused]] const Point& x) {
  return std::visit(
      Overloaded{
          [](const SetFamily::Halfspace&) { return 0.5; },
          [](const SetFamily::EuclidBall& f) {
            return diameter_moment(f.diameter, f.d) / std::pow(2.0 * f.radius + f.diameter.upper_bound(), f.d);
          },
          [](const SetFamily::Hyperrect& f) {
            double p = 1.0;
            for (std::size_t k = 0; k < f.a.size(); ++k) p *= f.a[k] / (f.bounds[k] + f.a[k]);
            return p;
          },
          [](const SetFamily::SphereCap& f) {
            if (const auto* r = std::get_if<RadiusLaw::Deterministic>(&f.radius.kind())) return cap_fraction(f.d, r->value);
            return 0.5;
          },
          [](const SetFamily::CylinderBall& f) { return expected_lens(f.diameter, 0.0) / cylinder_area(f); },
          [](const SetFamily::TorusBall& f) { return expected_lens(f.diameter, 0.0) / kTorusArea; },
      },
      family.kind());
}

double hit_prob_at_distance(const SetFamily& family, double dist) {
  if (!(dist >= 0.0)) throw DomainError("hit probability: distance must be >= 0");
  return std::visit(
      Overloaded{
          [&](const SetFamily::Halfspace& f) {
            const double omega1 = 4.0 * std::sqrt(kPi) * f.radius *
                                  std::exp(std::lgamma(0.5 * (f.d + 1)) - std::lgamma(0.5 * f.d));
            return std::max(0.0, 0.5 - dist / omega1);
          },
          [&](const SetFamily::EuclidBall& f) { return euclid_ball_pair(f, dist); },
          [&](const SetFamily::Hyperrect&) -> double {
            throw UnsupportedError("hyperrect hit probabilities depend on the coordinates, not only the distance");
          },
          [&](const SetFamily::SphereCap& f) {
            return std::visit(Overloaded{
                                  [&](const RadiusLaw::Deterministic& r) { return cap_pair_prob(f.d, r.value, dist); },
                                  [&](const RadiusLaw::Hemisphere&) { return std::max(0.0, 0.5 - dist / kTwoPi); },
                                  [&](const RadiusLaw::CosPolynomial& r) {
                                    return cos_polynomial_pair_prob(r.p, f.d, std::min(dist, kPi));
                                  },
                                  [&](const auto&) -> double { throw ConfigError("not a cap radius law"); },
                              },
                              f.radius.kind());
          },
          [&](const SetFamily::CylinderBall& f) { return expected_lens(f.diameter, dist) / cylinder_area(f); },
          [&](const SetFamily::TorusBall& f) { return expected_lens(f.diameter, dist) / kTorusArea; },
      },
      family.kind());
}

double hit_prob_pair(const SetFamily& family, const Space& space, const Point& x, const Point& y) {
  if (const auto* f = std::get_if<SetFamily::Hyperrect>(&family.kind())) {
    double p = 1.0;
    for (std::size_t k = 0; k < f->a.size(); ++k)
      p *= std::max(0.0, 2.0 * f->a[k] - std::abs(x[k] - y[k])) / (2.0 * (f->bounds[k] + f->a[k]));
    return p;
  }
  return hit_prob_at_distance(family, distance_unchecked(space, x, y));
}

}  // namespace mosaic
