#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mosaic/distributions.hpp"
#include "mosaic/random.hpp"
#include "mosaic/random_sets.hpp"
#include "mosaic/spaces.hpp"

namespace mosaic {

/// Sorted, duplicate-free set indices in {1, ..., n}.
using IndexSet = std::vector<std::uint64_t>;

enum class GKind { injective, constant, max_index };

struct SimpleMosaic {};
struct RandomToken {};
struct Mixture {};
struct DeadLeaves {};
/// Value at x is the sum over the index family I_I of the cell containing x,
/// with |I_I cap I_J| = a |I cap J| - b |I sym J| + c_n and c_n = max(c_min, n b).
struct GeneralLinear {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c_min = 1;
  GKind g = GKind::injective;

  std::int64_t c_for(std::uint64_t n) const;
};
using Submodel = std::variant<SimpleMosaic, RandomToken, Mixture, DeadLeaves, GeneralLinear>;

std::string submodel_name(const Submodel& s);
std::string gkind_name(GKind g);

struct FieldModel {
  Space space;
  SetFamily sets;
  CountDistribution count;
  ValueDistribution value;
  Submodel submodel;

  /// Checks family/space compatibility and the index-family hypotheses.
  void validate() const;
  std::string describe() const;
};

/// Explicit index families: A = [0, c - nb), B_i = [c - nb + (i-1) b, ...),
/// C_i = [c + (i-1)(a+b), ...). I_I = A + sum_{i not in I} B_i + sum_{i in I} C_i.
class IndexFamily {
public:
  struct Block {
    std::uint64_t first;
    std::uint64_t count;
  };

  IndexFamily(std::uint64_t n, std::int64_t a, std::int64_t b, std::int64_t c);

  std::uint64_t n() const { return n_; }
  Block shared_block() const;
  Block outside_block(std::uint64_t i) const;
  Block inside_block(std::uint64_t i) const;
  /// Member ids of I_I in increasing order.
  std::vector<std::uint64_t> members(const IndexSet& cell) const;
  /// Number of member ids of I_I.
  std::uint64_t size(std::uint64_t cell_size) const;

private:
  std::uint64_t n_;
  std::uint64_t a_plus_b_;
  std::uint64_t b_;
  std::uint64_t c_;
};

IndexFamily index_family(std::uint64_t n, std::int64_t a, std::int64_t b, std::int64_t c);

/// One joint draw of (N, B_1..B_N, value streams). Sets are regenerated on
/// demand from their keyed substreams when N is too large to cache.
class Realization {
public:
  static constexpr std::uint64_t kCacheLimit = std::uint64_t{1} << 16;
  /// Submodels that inspect every set refuse realizations larger than this.
  static constexpr std::uint64_t kScanLimit = std::uint64_t{1} << 28;

  Realization(std::shared_ptr<const FieldModel> model, const Generator& g);

  const FieldModel& model() const { return *model_; }
  std::uint64_t n() const { return n_; }

  /// Set i, 1 <= i <= n.
  SetInstance instance(std::uint64_t i) const;
  /// Token value (random token) or leaf value (dead leaves) of set i; leaf 0 is the background.
  double index_value(std::uint64_t i) const;

  IndexSet membership_set(const Point& x) const;
  double evaluate(const Point& x) const;
  std::vector<double> evaluate_many(std::span<const Point> points) const;

private:
  struct Drawn {
    SetInstance set;
    double value;
  };
  Drawn draw(std::uint64_t i) const;
  bool needs_index_values() const;
  void require_scan() const;

  template <class Visit>
  void for_each_set(Visit&& visit) const;

  std::vector<double> eval_simple(std::span<const Point> points) const;
  std::vector<double> eval_token(std::span<const Point> points) const;
  std::vector<double> eval_mixture(std::span<const Point> points) const;
  std::vector<double> eval_dead_leaves(std::span<const Point> points) const;
  std::vector<double> eval_general(const GeneralLinear& gl, std::span<const Point> points) const;

  std::shared_ptr<const FieldModel> model_;
  std::uint64_t n_ = 0;
  Generator sets_root_;
  Generator cells_root_;
  std::vector<SetInstance> instances_;
  std::vector<double> index_values_;  // index 0 unused except for dead leaves
};

Realization realize(std::shared_ptr<const FieldModel> model, const Generator& g);
Realization realize(const FieldModel& model, const Generator& g);

/// (1/sqrt(m)) sum_k (Z_k(x) - mu) / sigma over m independent realizations.
std::vector<double> normalized_sum(const FieldModel& model, std::uint64_t m, std::span<const Point> points,
                                   const Generator& g);

struct GridSpec {
  std::size_t cols = 0;
  std::size_t rows = 0;
};

struct Raster {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// Cell-centre points of the grid: Cartesian on euclid-rect, the inscribed
/// square of euclid-ball, lon/lat on S^2, (angle, height) on the cylinder,
/// (angle, angle) on the torus. Two-dimensional spaces only.
std::vector<Point> grid_points(const Space& space, const GridSpec& grid);
Raster raster(const FieldModel& model, const GridSpec& grid, const Generator& g);

}  // namespace mosaic
