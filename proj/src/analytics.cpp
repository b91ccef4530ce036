#include "mosaic/analytics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>
#include <type_traits>

#include "mosaic/errors.hpp"

namespace mosaic {

namespace {

constexpr double kMassTarget = 1.0 - 1e-12;
constexpr std::uint64_t kSeriesCap = 1000000;

double same_cell_sum(const LinearF& f, GKind g, std::uint64_t n, const HitProbs& p) {
  // sum over pairs of cells with g(I) = g(J) of P(x in C_I, y in C_J) |I_I cap I_J|
  const double a = static_cast<double>(f.a), b = static_cast<double>(f.b);
  const double cn = static_cast<double>(f.c_for(n));
  const double nn = static_cast<double>(n);
  const double split = p.px + p.py - 2.0 * p.pxy;
  switch (g) {
    case GKind::constant:
      return a * nn * p.pxy - b * nn * split + cn;
    case GKind::injective: {
      const double s = p.agree();
      return cn * std::pow(s, nn) + (n == 0 ? 0.0 : a * nn * p.pxy * std::pow(s, nn - 1.0));
    }
    case GKind::max_index: {
      // The latest set covering either point covers both; earlier sets are unrestricted.
      const double q = p.neither();
      double sum = 0.0;
      double qpow = 1.0;
      for (std::uint64_t m = n; m >= 1; --m) {
        const double prior = static_cast<double>(m - 1);
        sum += qpow * (a * (1.0 + prior * p.pxy) - b * prior * split + cn);
        qpow *= q;
      }
      return qpow * cn + p.pxy * sum;
    }
  }
  return 0.0;
}

double product_moment(const LinearF& f, std::uint64_t n, const HitProbs& p) {
  // E[(a X + c)(a Y + c)] with X ~ Bin(n, px), Y ~ Bin(n, py), E XY = n pxy + n(n-1) px py
  const double a = static_cast<double>(f.a);
  const double cn = static_cast<double>(f.c_for(n));
  const double nn = static_cast<double>(n);
  return a * a * (nn * p.pxy + nn * (nn - 1.0) * p.px * p.py) + a * cn * nn * (p.px + p.py) + cn * cn;
}

// Sum over n of P(N = n) term(n), exact for finite tables, otherwise truncated
// once the accumulated mass reaches 1 - 1e-12.
template <class Term>
double mix_over_count(const CountDistribution& count, Term term) {
  if (const auto* d = std::get_if<CountDistribution::Deterministic>(&count.kind())) return term(d->n);
  if (const auto* t = std::get_if<CountDistribution::Table>(&count.kind())) {
    double sum = 0.0;
    for (std::size_t n = 0; n < t->pmf.size(); ++n)
      if (t->pmf[n] > 0.0) sum += t->pmf[n] * term(n);
    return sum;
  }
  std::uint64_t len = 64;
  while (true) {
    const auto pmf = count.pmf_table(len - 1);
    double mass = 0.0;
    for (std::uint64_t n = 0; n < len; ++n) {
      mass += pmf[n];
      if (mass >= kMassTarget) {
        double sum = 0.0;
        for (std::uint64_t k = 0; k <= n; ++k)
          if (pmf[k] > 0.0) sum += pmf[k] * term(k);
        return sum;
      }
    }
    const std::uint64_t limit = std::holds_alternative<CountDistribution::Compound>(count.kind()) ? 4096 : kSeriesCap;
    if (len >= limit) throw BudgetError("count law keeps more than 1e-12 mass beyond the series cap");
    len = std::min(len * 4, limit);
  }
}

double require_finite_mean(const CountDistribution& count) {
  const double mean = count.mean();
  if (!std::isfinite(mean)) throw DegenerateError("the count has an infinite mean: " + count.describe());
  return mean;
}

}  // namespace

std::int64_t LinearF::c_for(std::uint64_t n) const {
  return std::max<std::int64_t>(c, static_cast<std::int64_t>(n) * b);
}

void LinearF::validate() const {
  if (b < 0 || c < 0) throw DomainError("index family: b and c must be >= 0");
  if (a < -b) throw DomainError("index family: need a >= -b");
}

void HitProbs::validate() const {
  constexpr double tol = 1e-12;
  if (!(px >= -tol && px <= 1.0 + tol && py >= -tol && py <= 1.0 + tol))
    throw DomainError("hit probabilities must lie in [0, 1]");
  if (!(pxy <= std::min(px, py) + tol && pxy >= std::max(0.0, px + py - 1.0) - tol))
    throw DomainError("inconsistent hit probabilities: need max(0, px + py - 1) <= pxy <= min(px, py)");
}

MomentReport Moments::report() const {
  MomentReport r;
  r.mean_x = mean_x;
  r.mean_y = mean_y;
  r.mixed_moment = mixed;
  r.covariance = mixed - mean_x * mean_y;
  const double vx = second_x - mean_x * mean_x;
  const double vy = second_y - mean_y * mean_y;
  if (!(vx > 0.0 && vy > 0.0)) throw DegenerateError("field has zero variance");
  r.correlation = r.covariance / std::sqrt(vx * vy);
  return r;
}

LinearF submodel_f(const Submodel& s) {
  return std::visit(
      [](const auto& m) -> LinearF {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RandomToken> || std::is_same_v<T, Mixture>) return {1, 0, 0};
        else if constexpr (std::is_same_v<T, GeneralLinear>) return {m.a, m.b, m.c_min};
        else return {0, 0, 1};
      },
      s);
}

GKind submodel_g(const Submodel& s) {
  return std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RandomToken>) return GKind::constant;
        else if constexpr (std::is_same_v<T, DeadLeaves>) return GKind::max_index;
        else if constexpr (std::is_same_v<T, GeneralLinear>) return m.g;
        else return GKind::injective;
      },
      s);
}

double conditional_mean(const LinearF& f, std::uint64_t n, double px, const ValueDistribution& value) {
  return value.mean() * (static_cast<double>(f.a) * static_cast<double>(n) * px + static_cast<double>(f.c_for(n)));
}

double conditional_mixed_moment(const LinearF& f, GKind g, std::uint64_t n, const HitProbs& p,
                                const ValueDistribution& value) {
  const double mu = value.mean();
  return value.variance() * same_cell_sum(f, g, n, p) + mu * mu * product_moment(f, n, p);
}

Moments conditional_moments(const LinearF& f, GKind g, std::uint64_t n, const HitProbs& p,
                            const ValueDistribution& value) {
  f.validate();
  p.validate();
  Moments m;
  m.mean_x = conditional_mean(f, n, p.px, value);
  m.mean_y = conditional_mean(f, n, p.py, value);
  m.mixed = conditional_mixed_moment(f, g, n, p, value);
  m.second_x = conditional_mixed_moment(f, g, n, {p.px, p.px, p.px}, value);
  m.second_y = conditional_mixed_moment(f, g, n, {p.py, p.py, p.py}, value);
  return m;
}

double mean_general(const LinearF& f, const CountDistribution& count, double px, const ValueDistribution& value) {
  f.validate();
  if (f.b == 0) {
    const double token = f.a == 0 ? 0.0 : static_cast<double>(f.a) * require_finite_mean(count) * px;
    return value.mean() * (token + static_cast<double>(f.c));
  }
  return mix_over_count(count, [&](std::uint64_t n) { return conditional_mean(f, n, px, value); });
}

double mixed_moment_general(const LinearF& f, GKind g, const CountDistribution& count, const HitProbs& p,
                            const ValueDistribution& value) {
  f.validate();
  p.validate();
  const double mu = value.mean();
  const double var = value.variance();
  const double a = static_cast<double>(f.a), c = static_cast<double>(f.c);

  if (f.b == 0 && g != GKind::max_index) {
    double e1 = c, e2 = c * c, en = 0.0;
    if (f.a != 0) {
      en = require_finite_mean(count);
      const double falling = count.variance() + en * en - en;  // E N(N-1)
      if (!std::isfinite(falling)) throw DegenerateError("the count has an infinite variance: " + count.describe());
      e1 += a * en * p.pxy;
      e2 = a * a * (en * p.pxy + falling * p.px * p.py) + a * c * en * (p.px + p.py) + c * c;
    }
    double same = e1;
    if (g == GKind::injective) {
      const double s = std::clamp(p.agree(), -1.0, 1.0);
      same = c * count.pgf(s) + (f.a == 0 ? 0.0 : a * p.pxy * count.pgf_derivative(s));
    }
    return var * same + mu * mu * e2;
  }
  if (f.a == 0 && f.b == 0 && g == GKind::max_index) {
    const double q = std::clamp(p.neither(), -1.0, 1.0);
    const double covered = 1.0 - q;
    const double same = covered > 0.0 ? c * (count.pgf(q) + p.pxy * (1.0 - count.pgf(q)) / covered) : c;
    return var * same + mu * mu * c * c;
  }
  return mix_over_count(count, [&](std::uint64_t n) { return conditional_mixed_moment(f, g, n, p, value); });
}

MomentReport moment_report(const LinearF& f, GKind g, const CountDistribution& count, const HitProbs& p,
                           const ValueDistribution& value) {
  Moments m;
  m.mean_x = mean_general(f, count, p.px, value);
  m.mean_y = mean_general(f, count, p.py, value);
  m.mixed = mixed_moment_general(f, g, count, p, value);
  m.second_x = mixed_moment_general(f, g, count, {p.px, p.px, p.px}, value);
  m.second_y = mixed_moment_general(f, g, count, {p.py, p.py, p.py}, value);
  return m.report();
}

double corr_simple(const HitProbs& p, const CountDistribution& count) {
  p.validate();
  return count.pgf(std::clamp(p.agree(), -1.0, 1.0));
}

namespace {

struct TokenTerms {
  double a;
  double b;
  double denominator;
};

TokenTerms token_terms(const HitProbs& p, const CountDistribution& count, const ValueDistribution& value) {
  p.validate();
  const double en = require_finite_mean(count);
  const double vn = count.variance();
  if (!std::isfinite(vn)) throw DegenerateError("the count has an infinite variance: " + count.describe());
  if (!(en > 0.0)) throw DegenerateError("the count has zero mean");
  const double mu = value.mean();
  TokenTerms t{value.second_moment() * en, mu * mu * (vn - en), 0.0};
  t.denominator = std::sqrt((t.a + t.b * p.px) * (t.a + t.b * p.py) * p.px * p.py);
  if (!(t.denominator > 0.0)) throw DegenerateError("token correlation: zero variance");
  return t;
}

}  // namespace

double corr_token(const HitProbs& p, const CountDistribution& count, const ValueDistribution& value) {
  const auto t = token_terms(p, count, value);
  return (t.a * p.pxy + t.b * p.px * p.py) / t.denominator;
}

double corr_mixture(const HitProbs& p, const CountDistribution& count, const ValueDistribution& value) {
  const auto t = token_terms(p, count, value);
  const double c = value.variance();
  const double d = c * count.mean();
  const double s = std::clamp(p.agree(), -1.0, 1.0);
  return p.pxy * (c * count.pgf_derivative(s) - d) / t.denominator + (t.a * p.pxy + t.b * p.px * p.py) / t.denominator;
}

double corr_deadleaves(const HitProbs& p, const CountDistribution& count) {
  p.validate();
  const double covered = p.px + p.py - p.pxy;
  if (!(covered > 0.0)) throw DegenerateError("dead leaves correlation: neither point can be covered");
  const double q = std::clamp(p.neither(), -1.0, 1.0);
  return (p.pxy + (p.px + p.py - 2.0 * p.pxy) * count.pgf(q)) / covered;
}

// ---------------------------------------------------------------- enumeration

namespace {

std::vector<double> powers(double base, std::uint64_t n) {
  std::vector<double> out(n + 1, 1.0);
  for (std::uint64_t k = 1; k <= n; ++k) out[k] = out[k - 1] * base;
  return out;
}

std::uint64_t intersection_size(const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y) {
  std::uint64_t count = 0;
  auto i = x.begin(), j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

bool same_g(GKind g, std::uint32_t i, std::uint32_t j) {
  switch (g) {
    case GKind::injective: return i == j;
    case GKind::constant: return true;
    case GKind::max_index: return std::bit_width(i) == std::bit_width(j);
  }
  return false;
}

struct Enumerator {
  std::uint64_t n;
  GKind g;
  std::vector<std::vector<std::uint64_t>> members;  // indexed by cell bitmask

  long double mixed(const HitProbs& p, double mu, double var) const {
    const std::uint32_t cells = std::uint32_t{1} << n;
    const auto both = powers(p.pxy, n), only_x = powers(p.px - p.pxy, n), only_y = powers(p.py - p.pxy, n),
               none = powers(p.neither(), n);
    const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), cells >= 256 ? 8u : 1u));
    std::vector<long double> partial(workers, 0.0L);
    const auto run = [&](unsigned w) {
      long double acc = 0.0L;
      for (std::uint32_t i = w; i < cells; i += workers) {
        const double size_i = static_cast<double>(members[i].size());
        for (std::uint32_t j = 0; j < cells; ++j) {
          const int k_both = std::popcount(i & j), k_x = std::popcount(i & ~j), k_y = std::popcount(j & ~i);
          const int k_none = static_cast<int>(n) - std::popcount(i | j);
          const double prob = both[k_both] * only_x[k_x] * only_y[k_y] * none[k_none];
          if (prob == 0.0) continue;
          double value = mu * mu * size_i * static_cast<double>(members[j].size());
          if (same_g(g, i, j)) value += var * static_cast<double>(intersection_size(members[i], members[j]));
          acc += static_cast<long double>(prob) * value;
        }
      }
      partial[w] = acc;
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
      for (auto& t : pool) t.join();
    }
    long double total = 0.0L;
    for (auto v : partial) total += v;
    return total;
  }

  long double mean(double px, double mu) const {
    const auto in = powers(px, n), out = powers(1.0 - px, n);
    long double acc = 0.0L;
    for (std::uint32_t i = 0; i < (std::uint32_t{1} << n); ++i) {
      const int k = std::popcount(i);
      acc += static_cast<long double>(in[k] * out[n - k]) * mu * static_cast<double>(members[i].size());
    }
    return acc;
  }
};

}  // namespace

Moments enumerate_oracle(std::uint64_t n, const LinearF& f, GKind g, const HitProbs& p, const ValueDistribution& value) {
  if (n > 14) throw BudgetError("enumeration oracle supports n <= 14");
  f.validate();
  p.validate();
  const IndexFamily family(n, f.a, f.b, f.c_for(n));
  Enumerator e{n, g, {}};
  e.members.resize(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    IndexSet cell;
    for (std::uint64_t i = 0; i < n; ++i)
      if (mask >> i & 1u) cell.push_back(i + 1);
    e.members[mask] = family.members(cell);
  }
  const double mu = value.mean(), var = value.variance();
  Moments m;
  m.mean_x = static_cast<double>(e.mean(p.px, mu));
  m.mean_y = static_cast<double>(e.mean(p.py, mu));
  m.mixed = static_cast<double>(e.mixed(p, mu, var));
  m.second_x = static_cast<double>(e.mixed({p.px, p.px, p.px}, mu, var));
  m.second_y = static_cast<double>(e.mixed({p.py, p.py, p.py}, mu, var));
  return m;
}

// ---------------------------------------------------------------- models

HitProbs model_hit_probs(const FieldModel& model, const Point& x, const Point& y) {
  return {hit_prob_single(model.sets, x), hit_prob_single(model.sets, y),
          hit_prob_pair(model.sets, model.space, x, y)};
}

MomentReport model_moments(const FieldModel& model, const Point& x, const Point& y) {
  return moment_report(submodel_f(model.submodel), submodel_g(model.submodel), model.count,
                       model_hit_probs(model, x, y), model.value);
}

double model_correlation(const FieldModel& model, const Point& x, const Point& y) {
  const auto p = model_hit_probs(model, x, y);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SimpleMosaic>) return corr_simple(p, model.count);
        else if constexpr (std::is_same_v<T, RandomToken>) return corr_token(p, model.count, model.value);
        else if constexpr (std::is_same_v<T, Mixture>) return corr_mixture(p, model.count, model.value);
        else if constexpr (std::is_same_v<T, DeadLeaves>) return corr_deadleaves(p, model.count);
        else return moment_report(submodel_f(s), s.g, model.count, p, model.value).correlation;
      },
      model.submodel);
}

double model_mean(const FieldModel& model, const Point& x) {
  return mean_general(submodel_f(model.submodel), model.count, hit_prob_single(model.sets, x), model.value);
}

double model_variance(const FieldModel& model, const Point& x) {
  const double px = hit_prob_single(model.sets, x);
  const double mean = mean_general(submodel_f(model.submodel), model.count, px, model.value);
  const double second =
      mixed_moment_general(submodel_f(model.submodel), submodel_g(model.submodel), model.count, {px, px, px}, model.value);
  return second - mean * mean;
}

}  // namespace mosaic
