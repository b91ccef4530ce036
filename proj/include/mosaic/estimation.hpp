#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mosaic/fields.hpp"

namespace mosaic {

/// An anchor x0 and probes y_k with distance(x0, y_k) = d_k.
struct PairDesign {
  Point anchor;
  std::vector<Point> probes;
  std::vector<double> distances;
};

/// Probes along a straight line (Euclidean: the first axis, centred so the
/// largest distance fits), a meridian from the north pole (sphere), or the
/// angular direction (cylinder, torus; distances up to pi).
PairDesign line_design(const Space& space, std::span<const double> distances);
/// `count` evenly spaced distances from 0 to the largest usable distance.
std::vector<double> even_distances(const Space& space, std::size_t count, double max_distance = 0.0);

struct EstimateRow {
  double d = 0.0;
  double rho_hat = 0.0;
  double se = 0.0;
  double rho_analytic = 0.0;
  double z = 0.0;
  bool degenerate = false;  // zero sample variance at the anchor or the probe
};

struct EstimateOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Correlation across m independent replicates at fixed point pairs. The
/// standard error is the delta-method one built from the empirical fourth
/// moments, which stays valid for the heavy-tailed, non-Gaussian marginals of
/// mosaic fields.
std::vector<EstimateRow> estimate_correlation(const FieldModel& model, const PairDesign& design, std::uint64_t m,
                                              const Generator& g, EstimateOptions options = {});

/// Number of rows with |z| > limit (degenerate rows are skipped).
std::size_t count_outliers(std::span<const EstimateRow> rows, double limit = 4.0);
/// Validation fails when two or more rows have |z| > 4.
bool calibration_failed(std::span<const EstimateRow> rows);

struct HitEstimate {
  double px_hat = 0.0;
  double px_se = 0.0;
  double pxy_hat = 0.0;
  double pxy_se = 0.0;
};

std::vector<HitEstimate> estimate_hit_probs(const SetFamily& family, std::span<const std::pair<Point, Point>> pairs,
                                            std::uint64_t m, const Generator& g);

/// CSV with header d,rho_hat,se,rho_analytic,z and 17 significant digits.
std::string compare_report(std::span<const EstimateRow> rows);

/// sup |F_n - F| of the sample against a continuous CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
/// Asymptotic Kolmogorov p-value with a small-sample correction.
double ks_pvalue(double statistic, std::size_t n);
double chi_square_pvalue(double statistic, double dof);
double standard_normal_cdf(double x);

struct SampleStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
};
SampleStats sample_stats(std::span<const double> xs);

}  // namespace mosaic
