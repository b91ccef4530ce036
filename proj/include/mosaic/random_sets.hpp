#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mosaic/distributions.hpp"
#include "mosaic/random.hpp"
#include "mosaic/spaces.hpp"

namespace mosaic {

/// Law of one random closed set B.
class SetFamily {
public:
  /// H(X, R) = {z : <z, X> >= R}, X uniform on S^(d-1), R uniform on [-C_M, C_M].
  struct Halfspace {
    int d;
    double radius;
  };
  /// Ball of diameter D around Y, Y uniform on the ball of radius C_M + a/2,
  /// a = the largest diameter.
  struct EuclidBall {
    int d;
    double radius;
    RadiusLaw diameter;
  };
  /// {z : |z_k - Z_k| <= a_k}, Z uniform on prod [-(R_k + a_k), R_k + a_k].
  struct Hyperrect {
    std::vector<double> a;
    std::vector<double> bounds;
  };
  /// Geodesic cap B_R(X) on S^d, X uniform.
  struct SphereCap {
    int d;
    RadiusLaw radius;
  };
  /// Ball of diameter D on S^1 x [0, h]; centre angle uniform, height uniform
  /// on [-a/2, h + a/2].
  struct CylinderBall {
    double h;
    RadiusLaw diameter;
  };
  struct TorusBall {
    RadiusLaw diameter;
  };
  using Kind = std::variant<Halfspace, EuclidBall, Hyperrect, SphereCap, CylinderBall, TorusBall>;

  static SetFamily halfspace(int d, double radius);
  static SetFamily euclid_ball(int d, double radius, RadiusLaw diameter);
  static SetFamily hyperrect(std::vector<double> a, std::vector<double> bounds);
  static SetFamily sphere_cap(int d, RadiusLaw radius);
  static SetFamily cylinder_ball(double h, RadiusLaw diameter);
  static SetFamily torus_ball(RadiusLaw diameter);

  const Kind& kind() const { return kind_; }

  /// Throws ConfigError unless the family is built for this space.
  void check_compatible(const Space& space) const;
  /// True when p_xy depends on x, y only through their distance.
  bool isotropic() const;
  std::string describe() const;

private:
  explicit SetFamily(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

struct HalfspaceSet {
  Point normal;
  double offset;
};
struct BallSet {
  Point center;
  double radius;
};
struct BoxSet {
  Point center;
  Point half_widths;
};
struct CapSet {
  Point center;
  double radius;
};
struct CylinderSet {
  double angle;
  double height;
  double radius;
};
struct TorusSet {
  double u;
  double v;
  double radius;
};
using SetInstance = std::variant<HalfspaceSet, BallSet, BoxSet, CapSet, CylinderSet, TorusSet>;

SetInstance sample_set(const SetFamily& family, Generator& g);
/// Closed-set membership. The point must belong to the family's space.
bool contains(const SetInstance& set, const Point& x);

/// p_x = P(x in B).
double hit_prob_single(const SetFamily& family, const Point& x);
/// p_xy = P(x, y in B).
double hit_prob_pair(const SetFamily& family, const Space& space, const Point& x, const Point& y);
/// p_xy as a function of distance, for isotropic families.
double hit_prob_at_distance(const SetFamily& family, double distance);

/// sigma_d(B_r(x) cap B_r(y)) for caps of radius r <= pi/2 at geodesic distance dist.
double cap_intersection_area(int d, double r, double dist);
/// Fraction of S^d covered by a cap of radius r in [0, pi].
double cap_fraction(int d, double r);
/// P(x, y in B_r(X)) on S^d for a fixed radius r in [0, pi].
double cap_pair_prob(int d, double r, double dist);
/// Constant multiplying p_q sin^(2l-1) cos^(2(q-l+1)) in the cos-polynomial formula.
double cos_polynomial_constant(int q, int l, int d);
double cos_polynomial_pair_prob(const std::vector<double>& p, int d, double dist);
/// Area of the intersection of two planar discs of diameter t at distance dist.
double disc_lens_area(double t, double dist);

}  // namespace mosaic
