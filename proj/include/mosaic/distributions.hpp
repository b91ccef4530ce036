#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mosaic/random.hpp"

namespace mosaic {

/// Counts saturate here; no simulation can visit this many sets.
inline constexpr std::uint64_t kCountSaturation = std::uint64_t{1} << 62;

/// Law of the number N of random sets.
class CountDistribution {
public:
  struct Poisson {
    double lambda;
  };
  /// Trials until first success, support {1, 2, ...}.
  struct Geometric {
    double p;
  };
  struct Binomial {
    std::uint64_t n;
    double p;
  };
  /// pgf (p / (1 - (1-p) t))^r on {0, 1, ...}; r need not be an integer.
  struct NegativeBinomial {
    double r;
    double p;
  };
  /// pgf 1 - (1-t)^alpha on {1, 2, ...}.
  struct PowerAlpha {
    double alpha;
  };
  /// N = K_1 + ... + K_L with L = outer, K_i i.i.d. ~ inner.
  struct Compound {
    std::shared_ptr<const CountDistribution> outer;
    std::shared_ptr<const CountDistribution> inner;
  };
  struct Deterministic {
    std::uint64_t n;
  };
  struct Table {
    std::vector<double> pmf;
    std::vector<double> cdf;
  };
  using Kind = std::variant<Poisson, Geometric, Binomial, NegativeBinomial, PowerAlpha, Compound,
                            Deterministic, Table>;

  static CountDistribution poisson(double lambda);
  static CountDistribution geometric(double p);
  static CountDistribution binomial(std::uint64_t n, double p);
  static CountDistribution negative_binomial(double r, double p);
  static CountDistribution power_alpha(double alpha);
  static CountDistribution compound(CountDistribution outer, CountDistribution inner);
  static CountDistribution deterministic(std::uint64_t n);
  /// pmf over {0, ..., size-1}; normalized if the mass is within 1e-9 of one.
  static CountDistribution table(std::vector<double> pmf);

  const Kind& kind() const { return kind_; }

  double pgf(double t) const;
  double pgf_derivative(double t) const;
  /// +inf when the mean is infinite (power-alpha with alpha < 1).
  double mean() const;
  double variance() const;
  double pmf(std::uint64_t k) const;
  /// pmf(0), ..., pmf(max_n).
  std::vector<double> pmf_table(std::uint64_t max_n) const;
  /// The law conditioned on N <= max_n, as a table.
  CountDistribution truncated(std::uint64_t max_n) const;
  std::uint64_t sample(Generator& g) const;

  std::string describe() const;

private:
  explicit CountDistribution(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Law of the cell values U.
class ValueDistribution {
public:
  struct Gaussian {
    double mean;
    double variance;
  };
  struct Uniform {
    double lo;
    double hi;
  };
  /// low with probability p_low, else high.
  struct TwoPoint {
    double low;
    double high;
    double p_low;
  };
  struct Deterministic {
    double value;
  };
  using Kind = std::variant<Gaussian, Uniform, TwoPoint, Deterministic>;

  static ValueDistribution gaussian(double mean, double variance);
  static ValueDistribution uniform(double lo, double hi);
  static ValueDistribution two_point(double low, double high, double p_low);
  static ValueDistribution deterministic(double value);

  const Kind& kind() const { return kind_; }
  double mean() const;
  double variance() const;
  double second_moment() const { return variance() + mean() * mean(); }
  double sample(Generator& g) const;
  std::string describe() const;

private:
  explicit ValueDistribution(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Law of a ball diameter (Euclidean, cylinder, torus families) or of a cap
/// radius (sphere families).
class RadiusLaw {
public:
  struct Deterministic {
    double value;
  };
  /// Diameter CDF (a - sqrt(a^2 - x^2)) / a on [0, a].
  struct Spherical {
    double a;
  };
  /// Diameter uniform on [0, a].
  struct UniformDiameter {
    double a;
  };
  /// cos R has CDF 1/2 + sum_q p_q t^(2q+1) on [-1, 1]; coefficients sum to 1/2.
  struct CosPolynomial {
    std::vector<double> p;
  };
  struct Hemisphere {};
  using Kind = std::variant<Deterministic, Spherical, UniformDiameter, CosPolynomial, Hemisphere>;

  static RadiusLaw deterministic(double value);
  static RadiusLaw spherical(double a);
  static RadiusLaw uniform_diameter(double a);
  static RadiusLaw cos_polynomial(std::vector<double> p);
  static RadiusLaw hemisphere();

  const Kind& kind() const { return kind_; }

  double sample(Generator& g) const;
  /// Largest value in the support.
  double upper_bound() const;
  double mean() const;
  std::string describe() const;

  /// F_Q(t), the CDF of cos R for the CosPolynomial law.
  static double cos_cdf(const std::vector<double>& p, double t);
  static double cos_density(const std::vector<double>& p, double t);
  /// Solves F_Q(t) = u on [-1, 1] by safeguarded Newton (tol 1e-12).
  static double cos_quantile(const std::vector<double>& p, double u);

private:
  explicit RadiusLaw(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

std::uint64_t sample_count(const CountDistribution& dist, Generator& g);
double sample_value(const ValueDistribution& dist, Generator& g);
double sample_radius(const RadiusLaw& law, Generator& g);

/// log(P(K > k)) for the power-alpha law, k >= 0.
double power_alpha_log_survival(double alpha, double k);

}  // namespace mosaic
