#include "mosaic/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "mosaic/errors.hpp"
#include "mosaic/quadrature.hpp"

namespace mosaic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void check_t(double t) {
  if (!(t >= -1.0 && t <= 1.0)) throw DomainError("pgf argument must lie in [-1, 1]");
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return (a > kCountSaturation - std::min(b, kCountSaturation)) ? kCountSaturation : a + b;
}

std::uint64_t to_count(double x) {
  if (!(x < static_cast<double>(kCountSaturation))) return kCountSaturation;
  return static_cast<std::uint64_t>(x);
}

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double table_pgf(const std::vector<double>& pmf, double t) {
  double acc = 0.0;
  for (auto it = pmf.rbegin(); it != pmf.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double table_pgf_derivative(const std::vector<double>& pmf, double t) {
  double acc = 0.0;
  for (std::size_t k = pmf.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * pmf[k];
  return acc;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b, std::size_t len) {
  std::vector<double> out(len, 0.0);
  for (std::size_t i = 0; i < len && i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; i + j < len && j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// Smallest k >= 1 with S(k) <= v, S decreasing, by doubling then bisection.
template <class LogSurvival>
std::uint64_t invert_survival(LogSurvival log_s, double v) {
  const double log_v = std::log(v);
  if (log_s(1) <= log_v) return 1;
  std::uint64_t lo = 1, hi = 2;
  while (log_s(hi) > log_v) {
    if (hi >= kCountSaturation) return kCountSaturation;
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (log_s(mid) > log_v ? lo : hi) = mid;
  }
  return hi;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

double power_alpha_log_survival(double alpha, double k) {
  if (k < 1.0) return 0.0;
  if (alpha >= 1.0) return -kInf;
  const double x = k + 1.0;
  if (x <= 1e4) return std::lgamma(x - alpha) - std::lgamma(1.0 - alpha) - std::lgamma(x);
  // Stirling expansion of lgamma(x - alpha) - lgamma(x) avoids cancellation.
  const double y = x - alpha;
  const double diff = (x - 0.5) * std::log1p(-alpha / x) - alpha * std::log(y) + alpha +
                      1.0 / (12.0 * y) - 1.0 / (12.0 * x) - 1.0 / (360.0 * y * y * y) +
                      1.0 / (360.0 * x * x * x);
  return diff - std::lgamma(1.0 - alpha);
}

// ---------------------------------------------------------------- counts

CountDistribution CountDistribution::poisson(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("poisson: lambda must be positive and finite");
  return CountDistribution(Poisson{lambda});
}

CountDistribution CountDistribution::geometric(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("geometric: p must lie in (0, 1]");
  return CountDistribution(Geometric{p});
}

CountDistribution CountDistribution::binomial(std::uint64_t n, double p) {
  if (n == 0 || !(p > 0.0 && p <= 1.0)) throw DomainError("binomial: need n >= 1 and p in (0, 1]");
  return CountDistribution(Binomial{n, p});
}

CountDistribution CountDistribution::negative_binomial(double r, double p) {
  if (!(r > 0.0) || !std::isfinite(r) || !(p > 0.0 && p < 1.0))
    throw DomainError("negative-binomial: need r > 0 and p in (0, 1)");
  return CountDistribution(NegativeBinomial{r, p});
}

CountDistribution CountDistribution::power_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("power-alpha: alpha must lie in (0, 1]");
  return CountDistribution(PowerAlpha{alpha});
}

CountDistribution CountDistribution::compound(CountDistribution outer, CountDistribution inner) {
  CountDistribution out(Compound{std::make_shared<const CountDistribution>(std::move(outer)),
                                 std::make_shared<const CountDistribution>(std::move(inner))});
  if (!(out.pgf(0.0) < 1.0)) throw DomainError("compound: the count is almost surely zero");
  return out;
}

CountDistribution CountDistribution::deterministic(std::uint64_t n) { return CountDistribution(Deterministic{n}); }

CountDistribution CountDistribution::table(std::vector<double> pmf) {
  if (pmf.empty()) throw DomainError("table: empty pmf");
  double total = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("table: probabilities must be finite and nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("table: probabilities must sum to 1");
  for (double& p : pmf) p /= total;
  Table t{std::move(pmf), {}};
  t.cdf.resize(t.pmf.size());
  std::partial_sum(t.pmf.begin(), t.pmf.end(), t.cdf.begin());
  t.cdf.back() = 1.0;
  return CountDistribution(std::move(t));
}

double CountDistribution::pgf(double t) const {
  check_t(t);
  return std::visit(
      Overloaded{
          [&](const Poisson& d) { return std::exp(d.lambda * (t - 1.0)); },
          [&](const Geometric& d) { return d.p * t / (1.0 - (1.0 - d.p) * t); },
          [&](const Binomial& d) { return std::pow(1.0 - d.p + d.p * t, static_cast<double>(d.n)); },
          [&](const NegativeBinomial& d) { return std::pow(d.p / (1.0 - (1.0 - d.p) * t), d.r); },
          [&](const PowerAlpha& d) { return 1.0 - std::pow(1.0 - t, d.alpha); },
          [&](const Compound& d) { return d.outer->pgf(std::clamp(d.inner->pgf(t), -1.0, 1.0)); },
          [&](const Deterministic& d) { return d.n == 0 ? 1.0 : std::pow(t, static_cast<double>(d.n)); },
          [&](const Table& d) { return table_pgf(d.pmf, t); },
      },
      kind_);
}

double CountDistribution::pgf_derivative(double t) const {
  check_t(t);
  return std::visit(
      Overloaded{
          [&](const Poisson& d) { return d.lambda * std::exp(d.lambda * (t - 1.0)); },
          [&](const Geometric& d) {
            const double den = 1.0 - (1.0 - d.p) * t;
            return d.p / (den * den);
          },
          [&](const Binomial& d) {
            return static_cast<double>(d.n) * d.p * std::pow(1.0 - d.p + d.p * t, static_cast<double>(d.n - 1));
          },
          [&](const NegativeBinomial& d) {
            const double q = 1.0 - d.p;
            const double den = 1.0 - q * t;
            return d.r * q / den * std::pow(d.p / den, d.r);
          },
          [&](const PowerAlpha& d) { return d.alpha == 1.0 ? 1.0 : d.alpha * std::pow(1.0 - t, d.alpha - 1.0); },
          [&](const Compound& d) {
            const double inner = std::clamp(d.inner->pgf(t), -1.0, 1.0);
            return d.outer->pgf_derivative(inner) * d.inner->pgf_derivative(t);
          },
          [&](const Deterministic& d) {
            return d.n == 0 ? 0.0 : static_cast<double>(d.n) * std::pow(t, static_cast<double>(d.n - 1));
          },
          [&](const Table& d) { return table_pgf_derivative(d.pmf, t); },
      },
      kind_);
}

double CountDistribution::mean() const {
  return std::visit(Overloaded{
                        [](const Poisson& d) { return d.lambda; },
                        [](const Geometric& d) { return 1.0 / d.p; },
                        [](const Binomial& d) { return static_cast<double>(d.n) * d.p; },
                        [](const NegativeBinomial& d) { return d.r * (1.0 - d.p) / d.p; },
                        [](const PowerAlpha& d) { return d.alpha == 1.0 ? 1.0 : kInf; },
                        [](const Compound& d) { return d.outer->mean() * d.inner->mean(); },
                        [](const Deterministic& d) { return static_cast<double>(d.n); },
                        [](const Table& d) { return table_pgf_derivative(d.pmf, 1.0); },
                    },
                    kind_);
}

double CountDistribution::variance() const {
  return std::visit(Overloaded{
                        [](const Poisson& d) { return d.lambda; },
                        [](const Geometric& d) { return (1.0 - d.p) / (d.p * d.p); },
                        [](const Binomial& d) { return static_cast<double>(d.n) * d.p * (1.0 - d.p); },
                        [](const NegativeBinomial& d) { return d.r * (1.0 - d.p) / (d.p * d.p); },
                        [](const PowerAlpha& d) { return d.alpha == 1.0 ? 0.0 : kInf; },
                        [](const Compound& d) {
                          const double ek = d.inner->mean();
                          return d.outer->mean() * d.inner->variance() + d.outer->variance() * ek * ek;
                        },
                        [](const Deterministic&) { return 0.0; },
                        [](const Table& d) {
                          double m = 0.0, m2 = 0.0;
                          for (std::size_t k = 0; k < d.pmf.size(); ++k) {
                            const double x = static_cast<double>(k);
                            m += x * d.pmf[k];
                            m2 += x * x * d.pmf[k];
                          }
                          return std::max(0.0, m2 - m * m);
                        },
                    },
                    kind_);
}

double CountDistribution::pmf(std::uint64_t k) const {
  return std::visit(
      Overloaded{
          [&](const Poisson& d) {
            const double x = static_cast<double>(k);
            return std::exp(x * std::log(d.lambda) - d.lambda - std::lgamma(x + 1.0));
          },
          [&](const Geometric& d) {
            if (k == 0) return 0.0;
            return d.p * std::pow(1.0 - d.p, static_cast<double>(k - 1));
          },
          [&](const Binomial& d) {
            if (k > d.n) return 0.0;
            if (d.p == 1.0) return k == d.n ? 1.0 : 0.0;
            const double n = static_cast<double>(d.n), x = static_cast<double>(k);
            return std::exp(log_choose(n, x) + x * std::log(d.p) + (n - x) * std::log1p(-d.p));
          },
          [&](const NegativeBinomial& d) {
            const double x = static_cast<double>(k);
            return std::exp(std::lgamma(d.r + x) - std::lgamma(d.r) - std::lgamma(x + 1.0) + d.r * std::log(d.p) +
                            x * std::log1p(-d.p));
          },
          [&](const PowerAlpha& d) {
            if (k == 0) return 0.0;
            if (d.alpha == 1.0) return k == 1 ? 1.0 : 0.0;
            // p_k = S(k-1) - S(k) = S(k-1) * alpha / k
            return std::exp(power_alpha_log_survival(d.alpha, static_cast<double>(k - 1))) * d.alpha /
                   static_cast<double>(k);
          },
          [&](const Compound&) { return pmf_table(k)[k]; },
          [&](const Deterministic& d) { return k == d.n ? 1.0 : 0.0; },
          [&](const Table& d) { return k < d.pmf.size() ? d.pmf[k] : 0.0; },
      },
      kind_);
}

std::vector<double> CountDistribution::pmf_table(std::uint64_t max_n) const {
  const std::size_t len = static_cast<std::size_t>(max_n) + 1;
  std::vector<double> out(len, 0.0);
  if (const auto* d = std::get_if<PowerAlpha>(&kind_)) {
    if (len > 1) out[1] = d->alpha;
    for (std::size_t k = 1; k + 1 < len; ++k)
      out[k + 1] = out[k] * (static_cast<double>(k) - d->alpha) / static_cast<double>(k + 1);
    return out;
  }
  if (const auto* d = std::get_if<Compound>(&kind_)) {
    // P(N = k) = sum_l P(L = l) P(K_1 + ... + K_l = k)
    const auto inner = d->inner->pmf_table(max_n);
    std::vector<double> power(len, 0.0);
    power[0] = 1.0;
    double outer_mass = 0.0;
    for (std::uint64_t l = 0;; ++l) {
      const double pl = d->outer->pmf(l);
      outer_mass += pl;
      for (std::size_t k = 0; k < len; ++k) out[k] += pl * power[k];
      if (outer_mass >= 1.0 - 1e-16 || l >= 1000000) break;
      power = convolve(power, inner, len);
      // Once K_1 + ... + K_l almost surely exceeds max_n, later terms vanish.
      if (std::accumulate(power.begin(), power.end(), 0.0) < 1e-18) break;
    }
    return out;
  }
  for (std::size_t k = 0; k < len; ++k) out[k] = pmf(k);
  return out;
}

CountDistribution CountDistribution::truncated(std::uint64_t max_n) const {
  auto pmf = pmf_table(max_n);
  double total = 0.0;
  for (double p : pmf) total += p;
  if (!(total > 0.0)) throw DegenerateError("truncation keeps no probability mass");
  for (double& p : pmf) p /= total;
  if (!(pmf[0] < 1.0)) throw DegenerateError("truncated count is almost surely zero");
  return table(std::move(pmf));
}

std::uint64_t CountDistribution::sample(Generator& g) const {
  return std::visit(
      Overloaded{
          [&](const Poisson& d) -> std::uint64_t {
            std::poisson_distribution<std::uint64_t> dist(d.lambda);
            return dist(g);
          },
          [&](const Geometric& d) -> std::uint64_t {
            if (d.p == 1.0) return 1;
            std::geometric_distribution<std::uint64_t> dist(d.p);
            return saturating_add(dist(g), 1);
          },
          [&](const Binomial& d) -> std::uint64_t {
            std::binomial_distribution<std::uint64_t> dist(d.n, d.p);
            return dist(g);
          },
          [&](const NegativeBinomial& d) -> std::uint64_t {
            std::gamma_distribution<double> mix(d.r, (1.0 - d.p) / d.p);
            const double rate = mix(g);
            if (!(rate > 0.0)) return 0;
            if (rate > 1e17) return to_count(rate);
            std::poisson_distribution<std::uint64_t> dist(rate);
            return dist(g);
          },
          [&](const PowerAlpha& d) -> std::uint64_t {
            if (d.alpha == 1.0) return 1;
            const double v = g.uniform_open01();
            return invert_survival(
                [&](std::uint64_t k) { return power_alpha_log_survival(d.alpha, static_cast<double>(k)); }, v);
          },
          [&](const Compound& d) -> std::uint64_t {
            const std::uint64_t l = d.outer->sample(g);
            std::uint64_t total = 0;
            for (std::uint64_t i = 0; i < l && total < kCountSaturation; ++i)
              total = saturating_add(total, d.inner->sample(g));
            return total;
          },
          [&](const Deterministic& d) -> std::uint64_t { return d.n; },
          [&](const Table& d) -> std::uint64_t {
            const double u = g.uniform01();
            const auto it = std::upper_bound(d.cdf.begin(), d.cdf.end(), u);
            return static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - d.cdf.begin(), d.cdf.size() - 1));
          },
      },
      kind_);
}

std::string CountDistribution::describe() const {
  return std::visit(Overloaded{
                        [](const Poisson& d) { return "poisson(lambda=" + fmt(d.lambda) + ")"; },
                        [](const Geometric& d) { return "geometric(p=" + fmt(d.p) + ")"; },
                        [](const Binomial& d) {
                          return "binomial(n=" + std::to_string(d.n) + ", p=" + fmt(d.p) + ")";
                        },
                        [](const NegativeBinomial& d) {
                          return "negative-binomial(r=" + fmt(d.r) + ", p=" + fmt(d.p) + ")";
                        },
                        [](const PowerAlpha& d) { return "power-alpha(alpha=" + fmt(d.alpha) + ")"; },
                        [](const Compound& d) {
                          return "compound(" + d.outer->describe() + ", " + d.inner->describe() + ")";
                        },
                        [](const Deterministic& d) { return "deterministic(" + std::to_string(d.n) + ")"; },
                        [](const Table& d) { return "table(" + std::to_string(d.pmf.size()) + " entries)"; },
                    },
                    kind_);
}

// ---------------------------------------------------------------- values

ValueDistribution ValueDistribution::gaussian(double mean, double variance) {
  if (!std::isfinite(mean) || !(variance >= 0.0) || !std::isfinite(variance))
    throw DomainError("gaussian: need finite mean and variance >= 0");
  return ValueDistribution(Gaussian{mean, variance});
}

ValueDistribution ValueDistribution::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo <= hi)) throw DomainError("uniform: need lo <= hi");
  return ValueDistribution(Uniform{lo, hi});
}

ValueDistribution ValueDistribution::two_point(double low, double high, double p_low) {
  if (!std::isfinite(low) || !std::isfinite(high) || !(p_low >= 0.0 && p_low <= 1.0))
    throw DomainError("two-point: need finite values and p_low in [0, 1]");
  return ValueDistribution(TwoPoint{low, high, p_low});
}

ValueDistribution ValueDistribution::deterministic(double value) {
  if (!std::isfinite(value)) throw DomainError("deterministic value must be finite");
  return ValueDistribution(Deterministic{value});
}

double ValueDistribution::mean() const {
  return std::visit(Overloaded{
                        [](const Gaussian& d) { return d.mean; },
                        [](const Uniform& d) { return 0.5 * (d.lo + d.hi); },
                        [](const TwoPoint& d) { return d.p_low * d.low + (1.0 - d.p_low) * d.high; },
                        [](const Deterministic& d) { return d.value; },
                    },
                    kind_);
}

double ValueDistribution::variance() const {
  return std::visit(Overloaded{
                        [](const Gaussian& d) { return d.variance; },
                        [](const Uniform& d) { return (d.hi - d.lo) * (d.hi - d.lo) / 12.0; },
                        [](const TwoPoint& d) {
                          return d.p_low * (1.0 - d.p_low) * (d.high - d.low) * (d.high - d.low);
                        },
                        [](const Deterministic&) { return 0.0; },
                    },
                    kind_);
}

double ValueDistribution::sample(Generator& g) const {
  return std::visit(Overloaded{
                        [&](const Gaussian& d) {
                          if (d.variance == 0.0) return d.mean;
                          std::normal_distribution<double> dist(d.mean, std::sqrt(d.variance));
                          return dist(g);
                        },
                        [&](const Uniform& d) { return d.lo + (d.hi - d.lo) * g.uniform01(); },
                        [&](const TwoPoint& d) { return g.uniform01() < d.p_low ? d.low : d.high; },
                        [&](const Deterministic& d) { return d.value; },
                    },
                    kind_);
}

std::string ValueDistribution::describe() const {
  return std::visit(Overloaded{
                        [](const Gaussian& d) { return "gaussian(mean=" + fmt(d.mean) + ", var=" + fmt(d.variance) + ")"; },
                        [](const Uniform& d) { return "uniform(" + fmt(d.lo) + ", " + fmt(d.hi) + ")"; },
                        [](const TwoPoint& d) {
                          return "two-point(" + fmt(d.low) + ", " + fmt(d.high) + ", p_low=" + fmt(d.p_low) + ")";
                        },
                        [](const Deterministic& d) { return "deterministic(" + fmt(d.value) + ")"; },
                    },
                    kind_);
}

// ---------------------------------------------------------------- radii

RadiusLaw RadiusLaw::deterministic(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) throw DomainError("deterministic radius must be >= 0");
  return RadiusLaw(Deterministic{value});
}

RadiusLaw RadiusLaw::spherical(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("spherical: a must be positive");
  return RadiusLaw(Spherical{a});
}

RadiusLaw RadiusLaw::uniform_diameter(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("uniform diameter: a must be positive");
  return RadiusLaw(UniformDiameter{a});
}

RadiusLaw RadiusLaw::cos_polynomial(std::vector<double> p) {
  if (p.empty()) throw DomainError("cos-polynomial: need at least one coefficient");
  double total = 0.0;
  for (double c : p) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("cos-polynomial: coefficients must be >= 0");
    total += c;
  }
  if (std::abs(total - 0.5) > 1e-12) throw DomainError("cos-polynomial: coefficients must sum to 1/2");
  return RadiusLaw(CosPolynomial{std::move(p)});
}

RadiusLaw RadiusLaw::hemisphere() { return RadiusLaw(Hemisphere{}); }

double RadiusLaw::cos_cdf(const std::vector<double>& p, double t) {
  const double t2 = t * t;
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t2 + *it;
  return std::clamp(0.5 + t * acc, 0.0, 1.0);
}

double RadiusLaw::cos_density(const std::vector<double>& p, double t) {
  const double t2 = t * t;
  double acc = 0.0;
  for (std::size_t q = p.size(); q-- > 0;) acc = acc * t2 + static_cast<double>(2 * q + 1) * p[q];
  return acc;
}

double RadiusLaw::cos_quantile(const std::vector<double>& p, double u) {
  double lo = -1.0, hi = 1.0;
  double t = 2.0 * u - 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = cos_cdf(p, t) - u;
    if (f > 0.0)
      hi = t;
    else
      lo = t;
    if (hi - lo < 1e-12) break;
    const double dens = cos_density(p, t);
    double next = dens > 0.0 ? t - f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) < 1e-12) {
      t = next;
      break;
    }
    t = next;
  }
  return std::clamp(t, -1.0, 1.0);
}

double RadiusLaw::sample(Generator& g) const {
  return std::visit(Overloaded{
                        [&](const Deterministic& d) { return d.value; },
                        [&](const Spherical& d) {
                          const double u = g.uniform01();
                          return d.a * std::sqrt(u * (2.0 - u));
                        },
                        [&](const UniformDiameter& d) { return d.a * g.uniform01(); },
                        [&](const CosPolynomial& d) {
                          const double u = g.uniform01();
                          const double t = d.p.size() == 1 ? 2.0 * u - 1.0 : cos_quantile(d.p, u);
                          return std::acos(t);
                        },
                        [&](const Hemisphere&) { return std::numbers::pi / 2.0; },
                    },
                    kind_);
}

double RadiusLaw::upper_bound() const {
  return std::visit(Overloaded{
                        [](const Deterministic& d) { return d.value; },
                        [](const Spherical& d) { return d.a; },
                        [](const UniformDiameter& d) { return d.a; },
                        [](const CosPolynomial&) { return std::numbers::pi; },
                        [](const Hemisphere&) { return std::numbers::pi / 2.0; },
                    },
                    kind_);
}

double RadiusLaw::mean() const {
  return std::visit(Overloaded{
                        [](const Deterministic& d) { return d.value; },
                        [](const Spherical& d) { return d.a * std::numbers::pi / 4.0; },
                        [](const UniformDiameter& d) { return d.a / 2.0; },
                        [](const CosPolynomial& d) {
                          return integrate([&](double t) { return std::acos(t) * cos_density(d.p, t); }, -1.0, 1.0);
                        },
                        [](const Hemisphere&) { return std::numbers::pi / 2.0; },
                    },
                    kind_);
}

std::string RadiusLaw::describe() const {
  return std::visit(Overloaded{
                        [](const Deterministic& d) { return "deterministic(" + fmt(d.value) + ")"; },
                        [](const Spherical& d) { return "spherical(a=" + fmt(d.a) + ")"; },
                        [](const UniformDiameter& d) { return "uniform-diameter(a=" + fmt(d.a) + ")"; },
                        [](const CosPolynomial& d) {
                          std::string s = "cos-polynomial(p=[";
                          for (std::size_t i = 0; i < d.p.size(); ++i) s += (i ? ", " : "") + fmt(d.p[i]);
                          return s + "])";
                        },
                        [](const Hemisphere&) { return std::string("hemisphere"); },
                    },
                    kind_);
}

std::uint64_t sample_count(const CountDistribution& dist, Generator& g) { return dist.sample(g); }
double sample_value(const ValueDistribution& dist, Generator& g) { return dist.sample(g); }
double sample_radius(const RadiusLaw& law, Generator& g) { return law.sample(g); }

}  // namespace mosaic
