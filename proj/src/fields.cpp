#include "mosaic/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "mosaic/analytics.hpp"
#include "mosaic/errors.hpp"

namespace mosaic {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

Generator member_stream(const Generator& cell, std::uint64_t member) { return cell.derive("member", member); }

}  // namespace

std::int64_t GeneralLinear::c_for(std::uint64_t n) const {
  return std::max<std::int64_t>(c_min, static_cast<std::int64_t>(n) * b);
}

std::string gkind_name(GKind g) {
  switch (g) {
    case GKind::injective: return "injective";
    case GKind::constant: return "constant";
    case GKind::max_index: return "max-index";
  }
  return "?";
}

std::string submodel_name(const Submodel& s) {
  return std::visit(Overloaded{
                        [](const SimpleMosaic&) { return std::string("simple-mosaic"); },
                        [](const RandomToken&) { return std::string("random-token"); },
                        [](const Mixture&) { return std::string("mixture"); },
                        [](const DeadLeaves&) { return std::string("dead-leaves"); },
                        [](const GeneralLinear& g) {
                          return "general-linear(a=" + std::to_string(g.a) + ", b=" + std::to_string(g.b) +
                                 ", c=" + std::to_string(g.c_min) + ", g=" + gkind_name(g.g) + ")";
                        },
                    },
                    s);
}

void FieldModel::validate() const {
  sets.check_compatible(space);
  if (const auto* gl = std::get_if<GeneralLinear>(&submodel)) {
    if (gl->b < 0 || gl->c_min < 0) throw ConfigError("general-linear: b and c must be >= 0");
    if (gl->a < -gl->b) throw ConfigError("general-linear: need a >= -b");
  }
}

std::string FieldModel::describe() const {
  return submodel_name(submodel) + " on " + space.describe() + ", sets " + sets.describe() + ", N ~ " +
         count.describe() + ", U ~ " + value.describe();
}

// ---------------------------------------------------------------- index families

IndexFamily::IndexFamily(std::uint64_t n, std::int64_t a, std::int64_t b, std::int64_t c) : n_(n) {
  if (b < 0 || c < 0) throw DomainError("index family: b and c must be >= 0");
  if (a < -b) throw DomainError("index family: need a >= -b");
  if (static_cast<double>(c) < static_cast<double>(n) * static_cast<double>(b))
    throw DomainError("index family: need c >= n b");
  a_plus_b_ = static_cast<std::uint64_t>(a + b);
  b_ = static_cast<std::uint64_t>(b);
  c_ = static_cast<std::uint64_t>(c);
}

IndexFamily::Block IndexFamily::shared_block() const { return {0, c_ - n_ * b_}; }

IndexFamily::Block IndexFamily::outside_block(std::uint64_t i) const {
  return {c_ - n_ * b_ + (i - 1) * b_, b_};
}

IndexFamily::Block IndexFamily::inside_block(std::uint64_t i) const { return {c_ + (i - 1) * a_plus_b_, a_plus_b_}; }

std::vector<std::uint64_t> IndexFamily::members(const IndexSet& cell) const {
  std::vector<std::uint64_t> out;
  const auto add = [&](Block blk) {
    for (std::uint64_t k = 0; k < blk.count; ++k) out.push_back(blk.first + k);
  };
  add(shared_block());
  auto it = cell.begin();
  for (std::uint64_t i = 1; i <= n_; ++i) {
    const bool inside = it != cell.end() && *it == i;
    if (inside) ++it;
    else add(outside_block(i));
  }
  for (auto i : cell) add(inside_block(i));
  return out;
}

std::uint64_t IndexFamily::size(std::uint64_t cell_size) const {
  return c_ - n_ * b_ + (n_ - cell_size) * b_ + cell_size * a_plus_b_;
}

IndexFamily index_family(std::uint64_t n, std::int64_t a, std::int64_t b, std::int64_t c) {
  return IndexFamily(n, a, b, c);
}

// ---------------------------------------------------------------- realizations

Realization::Realization(std::shared_ptr<const FieldModel> model, const Generator& g)
    : model_(std::move(model)), sets_root_(g.derive("sets", 0)), cells_root_(g.derive("cells", 0)) {
  Generator count_stream = g.derive("count", 0);
  n_ = model_->count.sample(count_stream);
  if (n_ <= kCacheLimit) {
    instances_.reserve(n_);
    if (needs_index_values()) index_values_.assign(n_ + 1, 0.0);
    for (std::uint64_t i = 1; i <= n_; ++i) {
      auto drawn = draw(i);
      instances_.push_back(std::move(drawn.set));
      if (needs_index_values()) index_values_[i] = drawn.value;
    }
  }
}

bool Realization::needs_index_values() const {
  return std::holds_alternative<RandomToken>(model_->submodel) || std::holds_alternative<DeadLeaves>(model_->submodel);
}

Realization::Drawn Realization::draw(std::uint64_t i) const {
  Generator stream = sets_root_.derive("set", i);
  Drawn d{sample_set(model_->sets, stream), 0.0};
  if (needs_index_values()) d.value = model_->value.sample(stream);
  return d;
}

SetInstance Realization::instance(std::uint64_t i) const {
  if (i == 0 || i > n_) throw DomainError("set index out of range");
  return i <= instances_.size() ? instances_[i - 1] : draw(i).set;
}

double Realization::index_value(std::uint64_t i) const {
  if (i > n_) throw DomainError("set index out of range");
  if (!needs_index_values()) throw UnsupportedError("this submodel keeps no per-set values");
  if (i == 0) {
    Generator background = cells_root_.derive("background", 0);
    return model_->value.sample(background);
  }
  return i < index_values_.size() ? index_values_[i] : draw(i).value;
}

void Realization::require_scan() const {
  if (n_ > kScanLimit) throw BudgetError("realization has too many sets to scan: " + std::to_string(n_));
}

template <class Visit>
void Realization::for_each_set(Visit&& visit) const {
  if (!instances_.empty() || n_ == 0) {
    for (std::uint64_t i = 1; i <= n_; ++i)
      visit(i, instances_[i - 1], index_values_.empty() ? 0.0 : index_values_[i]);
    return;
  }
  require_scan();
  for (std::uint64_t i = 1; i <= n_; ++i) {
    const auto drawn = draw(i);
    visit(i, drawn.set, drawn.value);
  }
}

IndexSet Realization::membership_set(const Point& x) const {
  model_->space.require(x);
  IndexSet out;
  for_each_set([&](std::uint64_t i, const SetInstance& s, double) {
    if (contains(s, x)) out.push_back(i);
  });
  return out;
}

double Realization::evaluate(const Point& x) const { return evaluate_many(std::span<const Point>(&x, 1))[0]; }

std::vector<double> Realization::evaluate_many(std::span<const Point> points) const {
  for (const auto& p : points) model_->space.require(p);
  return std::visit(Overloaded{
                        [&](const SimpleMosaic&) { return eval_simple(points); },
                        [&](const RandomToken&) { return eval_token(points); },
                        [&](const Mixture&) { return eval_mixture(points); },
                        [&](const DeadLeaves&) { return eval_dead_leaves(points); },
                        [&](const GeneralLinear& gl) { return eval_general(gl, points); },
                    },
                    model_->submodel);
}

namespace {

// Streams the canonical encoding of each point's index set into a key absorber.
std::vector<KeyAbsorber> open_cells(const Generator& root, std::size_t count) {
  std::vector<KeyAbsorber> cells(count, KeyAbsorber(root));
  for (auto& c : cells) c.tag("cell").begin_set();
  return cells;
}

}  // namespace

std::vector<double> Realization::eval_simple(std::span<const Point> points) const {
  auto cells = open_cells(cells_root_, points.size());
  for_each_set([&](std::uint64_t i, const SetInstance& s, double) {
    for (std::size_t k = 0; k < points.size(); ++k)
      if (contains(s, points[k])) cells[k].set_item(i);
  });
  std::vector<double> out(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    Generator cell = cells[k].end_set().finish();
    out[k] = model_->value.sample(cell);
  }
  return out;
}

std::vector<double> Realization::eval_token(std::span<const Point> points) const {
  std::vector<double> out(points.size(), 0.0);
  for_each_set([&](std::uint64_t, const SetInstance& s, double value) {
    for (std::size_t k = 0; k < points.size(); ++k)
      if (contains(s, points[k])) out[k] += value;
  });
  return out;
}

std::vector<double> Realization::eval_mixture(std::span<const Point> points) const {
  auto cells = open_cells(cells_root_, points.size());
  for_each_set([&](std::uint64_t i, const SetInstance& s, double) {
    for (std::size_t k = 0; k < points.size(); ++k)
      if (contains(s, points[k])) cells[k].set_item(i);
  });
  std::vector<Generator> roots;
  roots.reserve(points.size());
  for (auto& c : cells) roots.push_back(c.end_set().finish());
  // Second pass: the values of a cell are keyed by the full index set.
  std::vector<double> out(points.size(), 0.0);
  for_each_set([&](std::uint64_t i, const SetInstance& s, double) {
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (!contains(s, points[k])) continue;
      Generator member = member_stream(roots[k], i);
      out[k] += model_->value.sample(member);
    }
  });
  return out;
}

std::vector<double> Realization::eval_dead_leaves(std::span<const Point> points) const {
  std::vector<double> out(points.size(), 0.0);
  std::vector<std::size_t> open(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) open[k] = k;
  // Walk from the latest set down; each point takes the first set covering it.
  for (std::uint64_t i = n_; i >= 1 && !open.empty(); --i) {
    const bool cached = i <= instances_.size();
    std::optional<Drawn> drawn;
    if (!cached) drawn = draw(i);
    const SetInstance& s = cached ? instances_[i - 1] : drawn->set;
    const double value = cached ? index_values_[i] : drawn->value;
    std::erase_if(open, [&](std::size_t k) {
      if (!contains(s, points[k])) return false;
      out[k] = value;
      return true;
    });
  }
  if (!open.empty()) {
    const double background = index_value(0);
    for (auto k : open) out[k] = background;
  }
  return out;
}

std::vector<double> Realization::eval_general(const GeneralLinear& gl, std::span<const Point> points) const {
  const std::int64_t c = gl.c_for(n_);
  const IndexFamily family(n_, gl.a, gl.b, c);
  const std::size_t m = points.size();

  std::vector<std::vector<std::uint64_t>> inside(m);
  for_each_set([&](std::uint64_t i, const SetInstance& s, double) {
    for (std::size_t k = 0; k < m; ++k)
      if (contains(s, points[k])) inside[k].push_back(i);
  });

  std::vector<double> out(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    Generator key = cells_root_;
    switch (gl.g) {
      case GKind::injective: {
        KeyAbsorber cell(cells_root_);
        cell.tag("cell").index_set(inside[k]);
        key = cell.finish();
        break;
      }
      case GKind::constant:
        key = cells_root_.derive("constant", 0);
        break;
      case GKind::max_index:
        key = cells_root_.derive("latest", inside[k].empty() ? 0 : inside[k].back());
        break;
    }
    const auto add_block = [&](IndexFamily::Block blk) {
      for (std::uint64_t id = blk.first; id < blk.first + blk.count; ++id) {
        Generator member = member_stream(key, id);
        out[k] += model_->value.sample(member);
      }
    };
    add_block(family.shared_block());
    auto it = inside[k].begin();
    for (std::uint64_t i = 1; i <= n_; ++i) {
      if (it != inside[k].end() && *it == i) {
        add_block(family.inside_block(i));
        ++it;
      } else {
        add_block(family.outside_block(i));
      }
    }
  }
  return out;
}

Realization realize(std::shared_ptr<const FieldModel> model, const Generator& g) {
  model->validate();
  return Realization(std::move(model), g);
}

Realization realize(const FieldModel& model, const Generator& g) {
  return realize(std::make_shared<const FieldModel>(model), g);
}

// ---------------------------------------------------------------- derived outputs

std::vector<double> normalized_sum(const FieldModel& model, std::uint64_t m, std::span<const Point> points,
                                   const Generator& g) {
  if (m == 0) throw DomainError("normalized_sum: m must be >= 1");
  model.validate();
  std::vector<double> mean(points.size()), scale(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    mean[k] = model_mean(model, points[k]);
    const double var = model_variance(model, points[k]);
    if (!(var > 0.0)) throw DegenerateError("normalized_sum: the field has zero variance");
    scale[k] = 1.0 / std::sqrt(var);
  }
  const auto shared = std::make_shared<const FieldModel>(model);
  std::vector<double> sum(points.size(), 0.0);
  for (std::uint64_t r = 0; r < m; ++r) {
    const Realization real(shared, g.derive("replicate", r));
    const auto z = real.evaluate_many(points);
    for (std::size_t k = 0; k < points.size(); ++k) sum[k] += (z[k] - mean[k]) * scale[k];
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  for (auto& s : sum) s *= norm;
  return sum;
}

std::vector<Point> grid_points(const Space& space, const GridSpec& grid) {
  if (grid.rows == 0 || grid.cols == 0) throw ConfigError("grid must have at least one row and one column");
  if (space.dimension() != 2) throw ConfigError("rasters need a two-dimensional space");
  std::vector<Point> out;
  out.reserve(grid.rows * grid.cols);
  const auto u = [&](std::size_t c) { return (static_cast<double>(c) + 0.5) / static_cast<double>(grid.cols); };
  const auto v = [&](std::size_t r) { return (static_cast<double>(r) + 0.5) / static_cast<double>(grid.rows); };
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      std::visit(Overloaded{
                     [&](const Space::EuclidRect& s) {
                       out.push_back({s.half_widths[0] * (2.0 * u(c) - 1.0), s.half_widths[1] * (1.0 - 2.0 * v(r))});
                     },
                     [&](const Space::EuclidBall& s) {
                       const double half = s.radius / std::numbers::sqrt2;
                       out.push_back({half * (2.0 * u(c) - 1.0), half * (1.0 - 2.0 * v(r))});
                     },
                     [&](const Space::Sphere&) {
                       const double lon = 2.0 * kPi * u(c);
                       const double lat = 0.5 * kPi - kPi * v(r);
                       out.push_back({std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)});
                     },
                     [&](const Space::Cylinder& s) { out.push_back({2.0 * kPi * u(c), s.h * (1.0 - v(r))}); },
                     [&](const Space::Torus&) { out.push_back({2.0 * kPi * u(c), 2.0 * kPi * v(r)}); },
                 },
                 space.kind());
    }
  }
  return out;
}

Raster raster(const FieldModel& model, const GridSpec& grid, const Generator& g) {
  const auto points = grid_points(model.space, grid);
  for (const auto& p : points) model.space.require(p);
  const auto real = realize(model, g);
  return Raster{grid.rows, grid.cols, real.evaluate_many(points)};
}

}  // namespace mosaic
