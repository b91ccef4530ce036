#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mosaic/random.hpp"

namespace mosaic {

inline constexpr std::size_t kMaxAmbient = 8;

/// Coordinates of a point. Euclidean points use d coordinates, sphere points
/// are unit vectors in R^(d+1), cylinder points are (angle, height) and torus
/// points are (angle, angle).
struct Point {
  std::array<double, kMaxAmbient> x{};
  std::size_t size = 0;

  Point() = default;
  Point(std::initializer_list<double> coords);
  explicit Point(std::span<const double> coords);

  double operator[](std::size_t i) const { return x[i]; }
  double& operator[](std::size_t i) { return x[i]; }
  std::span<const double> coords() const { return {x.data(), size}; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.size != b.size) return false;
    for (std::size_t i = 0; i < a.size; ++i)
      if (a.x[i] != b.x[i]) return false;
    return true;
  }
};

class Space {
public:
  struct EuclidBall {
    int d;
    double radius;  // C_M
  };
  struct EuclidRect {
    std::vector<double> half_widths;  // M = prod [-R_k, R_k]
  };
  struct Sphere {
    int d;
  };
  /// S^1 x [0, h].
  struct Cylinder {
    double h;
  };
  /// S^1 x S^1.
  struct Torus {};
  using Kind = std::variant<EuclidBall, EuclidRect, Sphere, Cylinder, Torus>;

  static Space euclid_ball(int d, double radius);
  static Space euclid_rect(std::vector<double> half_widths);
  static Space sphere(int d);
  static Space cylinder(double h);
  static Space torus();

  const Kind& kind() const { return kind_; }
  bool is_euclidean() const;
  /// Intrinsic dimension d.
  int dimension() const;
  /// Number of stored coordinates per point.
  std::size_t coordinate_count() const;
  /// Radius of a centered ball containing M (Euclidean spaces only).
  double enclosing_radius() const;
  /// Largest distance between two points of M.
  double diameter() const;

  bool contains(const Point& p) const;
  /// Throws DomainError unless contains(p).
  void require(const Point& p) const;

  std::string describe() const;

private:
  explicit Space(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Geodesic distance on S^1, inputs in radians.
double circle_distance(double a, double b);

double distance(const Space& space, const Point& x, const Point& y);
/// Same as distance() without membership checks.
double distance_unchecked(const Space& space, const Point& x, const Point& y);

Point sample_uniform_point(const Space& space, Generator& g);

/// Unnormalized incomplete beta integral of t^(a-1) (1-t)^(b-1) over [0, x].
/// b may be <= 0 provided x < 1.
double incomplete_beta(double x, double a, double b);

/// Surface measure of the unit sphere S^d in R^(d+1).
double sphere_surface_total(int d);
/// Lebesgue measure of the unit ball in R^d.
double unit_ball_volume(int d);

}  // namespace mosaic
