#pragma once

#include <cstdint>

#include "mosaic/distributions.hpp"
#include "mosaic/fields.hpp"

namespace mosaic {

/// f_n(i, j) = a i - b j + c_n with c_n = max(c, n b).
struct LinearF {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 1;

  std::int64_t c_for(std::uint64_t n) const;
  void validate() const;
};

struct HitProbs {
  double px;
  double py;
  double pxy;

  /// Throws DomainError unless max(0, px + py - 1) <= pxy <= min(px, py) (slack 1e-12).
  void validate() const;
  /// 1 + 2 pxy - px - py: probability that a set covers both points or neither.
  double agree() const { return 1.0 + 2.0 * pxy - px - py; }
  /// 1 - px - py + pxy: probability that a set covers neither point.
  double neither() const { return 1.0 - px - py + pxy; }
};

struct MomentReport {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double mixed_moment = 0.0;
  double covariance = 0.0;
  double correlation = 0.0;
};

/// Raw moments of (Z(x), Z(y)); second_x = E Z(x)^2.
struct Moments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double mixed = 0.0;
  double second_x = 0.0;
  double second_y = 0.0;

  MomentReport report() const;
};

LinearF submodel_f(const Submodel& s);
GKind submodel_g(const Submodel& s);

/// Conditional on N = n.
double conditional_mean(const LinearF& f, std::uint64_t n, double px, const ValueDistribution& value);
double conditional_mixed_moment(const LinearF& f, GKind g, std::uint64_t n, const HitProbs& p,
                                const ValueDistribution& value);
Moments conditional_moments(const LinearF& f, GKind g, std::uint64_t n, const HitProbs& p,
                            const ValueDistribution& value);

double mean_general(const LinearF& f, const CountDistribution& count, double px, const ValueDistribution& value);
/// E Z(x) Z(y) mixed over N: by pgf where a closed form exists, else by a
/// truncated series over the pmf of N.
double mixed_moment_general(const LinearF& f, GKind g, const CountDistribution& count, const HitProbs& p,
                            const ValueDistribution& value);
MomentReport moment_report(const LinearF& f, GKind g, const CountDistribution& count, const HitProbs& p,
                           const ValueDistribution& value);

double corr_simple(const HitProbs& p, const CountDistribution& count);
double corr_token(const HitProbs& p, const CountDistribution& count, const ValueDistribution& value);
double corr_mixture(const HitProbs& p, const CountDistribution& count, const ValueDistribution& value);
double corr_deadleaves(const HitProbs& p, const CountDistribution& count);

/// Exact conditional moments for N = n (n <= 14) by summing over all pairs of
/// cells, with the index families built explicitly.
Moments enumerate_oracle(std::uint64_t n, const LinearF& f, GKind g, const HitProbs& p, const ValueDistribution& value);

HitProbs model_hit_probs(const FieldModel& model, const Point& x, const Point& y);
MomentReport model_moments(const FieldModel& model, const Point& x, const Point& y);
/// Correlation from the submodel's closed form.
double model_correlation(const FieldModel& model, const Point& x, const Point& y);
double model_mean(const FieldModel& model, const Point& x);
double model_variance(const FieldModel& model, const Point& x);

}  // namespace mosaic
