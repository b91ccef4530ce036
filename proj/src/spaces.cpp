#include "mosaic/spaces.hpp"

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

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

bool angle_ok(double a) { return a >= 0.0 && a <= kTwoPi; }

}  // namespace

Point::Point(std::initializer_list<double> coords) : Point(std::span<const double>(coords.begin(), coords.size())) {}

Point::Point(std::span<const double> coords) {
  if (coords.size() > kMaxAmbient) throw DomainError("point has too many coordinates");
  std::copy(coords.begin(), coords.end(), x.begin());
  size = coords.size();
}

Space Space::euclid_ball(int d, double radius) {
  if (d < 1 || d > static_cast<int>(kMaxAmbient)) throw ConfigError("euclid-ball: d must lie in [1, 8]");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("euclid-ball: C_M must be positive");
  return Space(EuclidBall{d, radius});
}

Space Space::euclid_rect(std::vector<double> half_widths) {
  if (half_widths.empty() || half_widths.size() > kMaxAmbient) throw ConfigError("euclid-rect: need 1 to 8 half-widths");
  for (double r : half_widths)
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("euclid-rect: half-widths must be positive");
  return Space(EuclidRect{std::move(half_widths)});
}

Space Space::sphere(int d) {
  if (d < 1 || d + 1 > static_cast<int>(kMaxAmbient)) throw ConfigError("sphere: d must lie in [1, 7]");
  return Space(Sphere{d});
}

Space Space::cylinder(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("cylinder: h must be positive");
  return Space(Cylinder{h});
}

Space Space::torus() { return Space(Torus{}); }

bool Space::is_euclidean() const {
  return std::holds_alternative<EuclidBall>(kind_) || std::holds_alternative<EuclidRect>(kind_);
}

int Space::dimension() const {
  return std::visit(Overloaded{
                        [](const EuclidBall& s) { return s.d; },
                        [](const EuclidRect& s) { return static_cast<int>(s.half_widths.size()); },
                        [](const Sphere& s) { return s.d; },
                        [](const Cylinder&) { return 2; },
                        [](const Torus&) { return 2; },
                    },
                    kind_);
}

std::size_t Space::coordinate_count() const {
  if (const auto* s = std::get_if<Sphere>(&kind_)) return static_cast<std::size_t>(s->d + 1);
  return static_cast<std::size_t>(dimension());
}

double Space::enclosing_radius() const {
  if (const auto* s = std::get_if<EuclidBall>(&kind_)) return s->radius;
  if (const auto* s = std::get_if<EuclidRect>(&kind_)) {
    double sum = 0.0;
    for (double r : s->half_widths) sum += r * r;
    return std::sqrt(sum);
  }
  throw ConfigError("enclosing radius is defined for Euclidean spaces only");
}

double Space::diameter() const {
  return std::visit(Overloaded{
                        [](const EuclidBall& s) { return 2.0 * s.radius; },
                        [this](const EuclidRect&) { return 2.0 * enclosing_radius(); },
                        [](const Sphere&) { return std::numbers::pi; },
                        [](const Cylinder& s) { return std::hypot(std::numbers::pi, s.h); },
                        [](const Torus&) { return std::numbers::pi * std::numbers::sqrt2; },
                    },
                    kind_);
}

bool Space::contains(const Point& p) const {
  if (p.size != coordinate_count()) return false;
  for (std::size_t i = 0; i < p.size; ++i)
    if (!std::isfinite(p[i])) return false;
  return std::visit(Overloaded{
                        [&](const EuclidBall& s) {
                          double sum = 0.0;
                          for (std::size_t i = 0; i < p.size; ++i) sum += p[i] * p[i];
                          return std::sqrt(sum) <= s.radius * (1.0 + kSlack);
                        },
                        [&](const EuclidRect& s) {
                          for (std::size_t i = 0; i < p.size; ++i)
                            if (std::abs(p[i]) > s.half_widths[i] * (1.0 + kSlack)) return false;
                          return true;
                        },
                        [&](const Sphere&) {
                          double sum = 0.0;
                          for (std::size_t i = 0; i < p.size; ++i) sum += p[i] * p[i];
                          return std::abs(std::sqrt(sum) - 1.0) <= kSlack;
                        },
                        [&](const Cylinder& s) { return angle_ok(p[0]) && p[1] >= 0.0 && p[1] <= s.h; },
                        [&](const Torus&) { return angle_ok(p[0]) && angle_ok(p[1]); },
                    },
                    kind_);
}

void Space::require(const Point& p) const {
  if (!contains(p)) throw DomainError("point does not lie in " + describe());
}

std::string Space::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const EuclidBall& s) { os << "euclid-ball(d=" << s.d << ", C_M=" << s.radius << ")"; },
                 [&](const EuclidRect& s) {
                   os << "euclid-rect(R=[";
                   for (std::size_t i = 0; i < s.half_widths.size(); ++i) os << (i ? ", " : "") << s.half_widths[i];
                   os << "])";
                 },
                 [&](const Sphere& s) { os << "sphere(d=" << s.d << ")"; },
                 [&](const Cylinder& s) { os << "cylinder(h=" << s.h << ")"; },
                 [&](const Torus&) { os << "torus"; },
             },
             kind_);
  return os.str();
}

double circle_distance(double a, double b) {
  const double delta = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(delta, kTwoPi - delta);
}

double distance_unchecked(const Space& space, const Point& x, const Point& y) {
  return std::visit(Overloaded{
                        [&](const Space::Sphere&) {
                          double diff = 0.0, sum = 0.0;
                          for (std::size_t i = 0; i < x.size; ++i) {
                            diff += (x[i] - y[i]) * (x[i] - y[i]);
                            sum += (x[i] + y[i]) * (x[i] + y[i]);
                          }
                          return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
                        },
                        [&](const Space::Cylinder&) { return std::hypot(circle_distance(x[0], y[0]), x[1] - y[1]); },
                        [&](const Space::Torus&) {
                          return std::hypot(circle_distance(x[0], y[0]), circle_distance(x[1], y[1]));
                        },
                        [&](const auto&) {
                          double sum = 0.0;
                          for (std::size_t i = 0; i < x.size; ++i) sum += (x[i] - y[i]) * (x[i] - y[i]);
                          return std::sqrt(sum);
                        },
                    },
                    space.kind());
}

double distance(const Space& space, const Point& x, const Point& y) {
  space.require(x);
  space.require(y);
  return distance_unchecked(space, x, y);
}

Point sample_uniform_point(const Space& space, Generator& g) {
  std::normal_distribution<double> normal;
  Point p;
  p.size = space.coordinate_count();
  std::visit(Overloaded{
                 [&](const Space::EuclidBall& s) {
                   double norm = 0.0;
                   do {
                     norm = 0.0;
                     for (std::size_t i = 0; i < p.size; ++i) {
                       p[i] = normal(g);
                       norm += p[i] * p[i];
                     }
                   } while (norm == 0.0);
                   const double r = s.radius * std::pow(g.uniform01(), 1.0 / s.d) / std::sqrt(norm);
                   for (std::size_t i = 0; i < p.size; ++i) p[i] *= r;
                 },
                 [&](const Space::EuclidRect& s) {
                   for (std::size_t i = 0; i < p.size; ++i) p[i] = s.half_widths[i] * (2.0 * g.uniform01() - 1.0);
                 },
                 [&](const Space::Sphere&) {
                   double norm = 0.0;
                   do {
                     norm = 0.0;
                     for (std::size_t i = 0; i < p.size; ++i) {
                       p[i] = normal(g);
                       norm += p[i] * p[i];
                     }
                   } while (norm == 0.0);
                   norm = std::sqrt(norm);
                   for (std::size_t i = 0; i < p.size; ++i) p[i] /= norm;
                 },
                 [&](const Space::Cylinder& s) {
                   p[0] = kTwoPi * g.uniform01();
                   p[1] = s.h * g.uniform01();
                 },
                 [&](const Space::Torus&) {
                   p[0] = kTwoPi * g.uniform01();
                   p[1] = kTwoPi * g.uniform01();
                 },
             },
             space.kind());
  return p;
}

double incomplete_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta: x must lie in [0, 1]");
  if (!(a > 0.0)) throw DomainError("incomplete_beta: a must be positive");
  if (!std::isfinite(b)) throw DomainError("incomplete_beta: b must be finite");
  if (x == 0.0) return 0.0;
  if (b > 0.0) return boost::math::beta(a, b, x);
  if (x == 1.0) throw DomainError("incomplete_beta: b <= 0 requires x < 1");
  const auto lower = [=](double t) { return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0); };
  if (x <= 0.5) return integrate_endpoint_singular(lower, 0.0, x);
  // On [1/2, x] integrate in s = 1 - t so the steep end near t = x keeps full precision.
  const auto upper = [=](double s) { return std::pow(1.0 - s, a - 1.0) * std::pow(s, b - 1.0); };
  return integrate_endpoint_singular(lower, 0.0, 0.5) + integrate_endpoint_singular(upper, 1.0 - x, 0.5);
}

double sphere_surface_total(int d) {
  if (d < 1) throw DomainError("sphere_surface_total: d must be >= 1");
  const double h = 0.5 * (d + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double unit_ball_volume(int d) {
  if (d < 1) throw DomainError("unit_ball_volume: d must be >= 1");
  const double h = 0.5 * d;
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

}  // namespace mosaic
