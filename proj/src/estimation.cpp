#include "mosaic/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "mosaic/analytics.hpp"
#include "mosaic/errors.hpp"

namespace mosaic {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double usable_distance(const Space& space) {
  return std::visit(Overloaded{
                        [&](const Space::EuclidRect& s) { return 2.0 * s.half_widths[0]; },
                        [&](const auto&) { return space.is_euclidean() ? space.diameter() : kPi; },
                    },
                    space.kind());
}

unsigned worker_count(unsigned requested, std::uint64_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(n, std::max<std::uint64_t>(jobs, 1)));
}

template <class Job>
void parallel_for(std::uint64_t jobs, unsigned threads, Job job) {
  const unsigned workers = worker_count(threads, jobs);
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < jobs; ++i) job(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t i = next++; i < jobs && !failed; i = next++) job(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
      (void)w;
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

PairDesign line_design(const Space& space, std::span<const double> distances) {
  PairDesign design;
  const double reach = usable_distance(space);
  double longest = 0.0;
  for (double d : distances) {
    if (!(d >= 0.0) || d > reach * (1.0 + 1e-12))
      throw ConfigError("design distance " + std::to_string(d) + " does not fit in " + space.describe());
    longest = std::max(longest, d);
  }
  const auto along = [&](double offset) {
    return std::visit(Overloaded{
                          [&](const Space::Sphere& s) {
                            Point p;
                            p.size = static_cast<std::size_t>(s.d + 1);
                            p[0] = std::sin(offset);
                            p[p.size - 1] = std::cos(offset);
                            return p;
                          },
                          [&](const Space::Cylinder& s) { return Point{offset, 0.5 * s.h}; },
                          [&](const Space::Torus&) { return Point{offset, 0.0}; },
                          [&](const auto&) {
                            Point p;
                            p.size = space.coordinate_count();
                            p[0] = std::min(offset - 0.5 * longest, 0.5 * reach);
                            return p;
                          },
                      },
                      space.kind());
  };
  design.anchor = along(0.0);
  for (double d : distances) {
    design.probes.push_back(along(d));
    design.distances.push_back(d);
  }
  return design;
}

std::vector<double> even_distances(const Space& space, std::size_t count, double max_distance) {
  if (count == 0) return {};
  const double top = max_distance > 0.0 ? std::min(max_distance, usable_distance(space)) : usable_distance(space);
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = count == 1 ? 0.0 : top * static_cast<double>(k) / static_cast<double>(count - 1);
  return out;
}

std::vector<EstimateRow> estimate_correlation(const FieldModel& model, const PairDesign& design, std::uint64_t m,
                                              const Generator& g, EstimateOptions options) {
  if (m < 2) throw DomainError("estimate_correlation: need at least 2 replicates");
  model.validate();
  const auto shared = std::make_shared<const FieldModel>(model);
  std::vector<Point> points;
  points.push_back(design.anchor);
  points.insert(points.end(), design.probes.begin(), design.probes.end());
  const std::size_t width = points.size();

  std::vector<double> values(m * width);
  parallel_for(m, options.threads, [&](std::uint64_t r) {
    const Realization real(shared, g.derive("replicate", r));
    const auto z = real.evaluate_many(points);
    std::copy(z.begin(), z.end(), values.begin() + static_cast<std::ptrdiff_t>(r * width));
  });

  const double mm = static_cast<double>(m);
  std::vector<double> mean(width, 0.0);
  for (std::uint64_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k < width; ++k) mean[k] += values[r * width + k];
  for (auto& v : mean) v /= mm;

  std::vector<EstimateRow> rows;
  for (std::size_t k = 1; k < width; ++k) {
    EstimateRow row;
    row.d = design.distances[k - 1];
    row.rho_analytic = model_correlation(model, design.anchor, design.probes[k - 1]);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::uint64_t r = 0; r < m; ++r) {
      const double dx = values[r * width] - mean[0], dy = values[r * width + k] - mean[k];
      sxx += dx * dx;
      syy += dy * dy;
      sxy += dx * dy;
    }
    if (!(sxx > 0.0 && syy > 0.0)) {
      row.degenerate = true;
      row.rho_hat = std::numeric_limits<double>::quiet_NaN();
      row.se = std::numeric_limits<double>::quiet_NaN();
      row.z = 0.0;
      rows.push_back(row);
      continue;
    }
    const double sx = std::sqrt(sxx / mm), sy = std::sqrt(syy / mm);
    const double rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    double m40 = 0.0, m04 = 0.0, m22 = 0.0, m31 = 0.0, m13 = 0.0;
    for (std::uint64_t r = 0; r < m; ++r) {
      const double u = (values[r * width] - mean[0]) / sx, v = (values[r * width + k] - mean[k]) / sy;
      const double u2 = u * u, v2 = v * v;
      m40 += u2 * u2;
      m04 += v2 * v2;
      m22 += u2 * v2;
      m31 += u2 * u * v;
      m13 += u * v2 * v;
    }
    m40 /= mm, m04 /= mm, m22 /= mm, m31 /= mm, m13 /= mm;
    const double spread =
        (1.0 + 0.5 * rho * rho) * m22 - rho * (m31 + m13) + 0.25 * rho * rho * (m40 + m04);
    row.rho_hat = rho;
    row.se = std::max(std::sqrt(std::max(spread, 0.0) / mm), 1e-12);
    row.z = (row.rho_hat - row.rho_analytic) / row.se;
    rows.push_back(row);
  }
  return rows;
}

std::size_t count_outliers(std::span<const EstimateRow> rows, double limit) {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [&](const EstimateRow& r) { return !r.degenerate && std::abs(r.z) > limit; }));
}

bool calibration_failed(std::span<const EstimateRow> rows) { return count_outliers(rows, 4.0) >= 2; }

std::vector<HitEstimate> estimate_hit_probs(const SetFamily& family, std::span<const std::pair<Point, Point>> pairs,
                                            std::uint64_t m, const Generator& g) {
  if (m == 0) throw DomainError("estimate_hit_probs: need at least one set");
  std::vector<std::uint64_t> in_x(pairs.size(), 0), in_both(pairs.size(), 0);
  for (std::uint64_t j = 0; j < m; ++j) {
    Generator stream = g.derive("set", j);
    const auto set = sample_set(family, stream);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const bool x = contains(set, pairs[k].first);
      if (!x) continue;
      ++in_x[k];
      if (contains(set, pairs[k].second)) ++in_both[k];
    }
  }
  const double mm = static_cast<double>(m);
  const auto se = [&](double p) { return std::sqrt(std::max(p * (1.0 - p), 1.0 / mm) / mm); };
  std::vector<HitEstimate> out(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out[k].px_hat = static_cast<double>(in_x[k]) / mm;
    out[k].pxy_hat = static_cast<double>(in_both[k]) / mm;
    out[k].px_se = se(out[k].px_hat);
    out[k].pxy_se = se(out[k].pxy_hat);
  }
  return out;
}

std::string compare_report(std::span<const EstimateRow> rows) {
  std::string out = "d,rho_hat,se,rho_analytic,z\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.d, r.rho_hat, r.se, r.rho_analytic, r.z);
    out += buf;
  }
  return out;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_pvalue(double statistic, std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double lambda = (rn + 0.12 + 0.11 / rn) * statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double chi_square_pvalue(double statistic, double dof) {
  if (!(dof > 0.0) || !(statistic >= 0.0)) throw DomainError("chi_square_pvalue: need dof > 0 and statistic >= 0");
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

SampleStats sample_stats(std::span<const double> xs) {
  SampleStats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return s;
  for (double x : xs) s.variance += (x - s.mean) * (x - s.mean);
  s.variance /= static_cast<double>(xs.size() - 1);
  return s;
}

}  // namespace mosaic
