#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mosaic/analytics.hpp"
#include "mosaic/catalog.hpp"
#include "mosaic/config.hpp"
#include "mosaic/errors.hpp"
#include "mosaic/estimation.hpp"

namespace mosaic {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kValidation = 2;

const char* const kParamNames[] = {"alpha", "beta", "c",  "c1", "c2", "n",      "lambda1",
                                   "lambda2", "a",  "a1", "a2", "r",  "lambda", "cm"};

struct Common {
  std::string config;
  std::string catalog_id;
  std::map<std::string, double> params;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<unsigned> threads;
  std::string format;
};

void add_model_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON run config");
  cmd->add_option("--catalog", c.catalog_id, "catalog row id instead of a config model");
  cmd->add_option("--seed", c.seed, "root seed");
  cmd->add_option("--out", c.out, "output file (default: standard output)");
  cmd->add_option("--threads", c.threads, "worker threads (default: all cores)");
}

void add_param_options(CLI::App* cmd, Common& c, std::string_view skip = {}) {
  for (const char* name : kParamNames) {
    if (name == skip) continue;
    cmd->add_option_function<double>(std::string("--") + name, [&c, name](double v) { c.params[name] = v; },
                                     "catalog parameter");
  }
}

ParamValues as_params(const std::map<std::string, double>& in) { return {in.begin(), in.end()}; }

struct Resolved {
  RunConfig config;
  FieldModel model;
  std::optional<CorrelationModel> named;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

Resolved resolve(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  if (!c.catalog_id.empty() && cfg.model && !cfg.catalog_id) throw ConfigError("--catalog conflicts with the config model");
  std::optional<CorrelationModel> named;
  if (!c.catalog_id.empty() || cfg.catalog_id) {
    ParamValues params = cfg.params;
    for (const auto& [k, v] : c.params) params[k] = v;
    named = catalog(c.catalog_id.empty() ? *cfg.catalog_id : c.catalog_id, params);
    cfg.model = named->model;
  } else if (!c.params.empty()) {
    throw ConfigError("catalog parameters need --catalog or a config with /catalog");
  }
  FieldModel model = resolve_model(cfg);
  Resolved r{std::move(cfg), std::move(model), std::move(named)};
  r.seed = c.seed ? *c.seed : r.config.seed.value_or(0);
  r.threads = c.threads ? *c.threads : r.config.threads.value_or(0);
  return r;
}

std::string output_path(const Common& c, const RunConfig& cfg) { return !c.out.empty() ? c.out : cfg.out.value_or(""); }

void emit(const std::string& path, const std::string& body, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << body;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write " + path);
  file << body;
  if (!file) throw ConfigError("write failed for " + path);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_pgm(const Raster& r) {
  double lo = INFINITY, hi = -INFINITY;
  for (double v : r.values) lo = std::min(lo, v), hi = std::max(hi, v);
  std::string s = "P2\n" + std::to_string(r.cols) + " " + std::to_string(r.rows) + "\n65535\n";
  std::string line;
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    const double scaled = hi > lo ? (r.values[i] - lo) / (hi - lo) : 0.0;
    const std::string token = std::to_string(static_cast<unsigned>(std::lround(scaled * 65535.0)));
    const bool row_start = i % r.cols == 0;
    if (!line.empty() && (row_start || line.size() + 1 + token.size() > 70)) {
      s += line + "\n";
      line.clear();
    }
    line += (line.empty() ? "" : " ") + token;
  }
  if (!line.empty()) s += line + "\n";
  return s;
}

std::string to_csv(const Raster& r) {
  std::string s = "# " + std::to_string(r.rows) + "," + std::to_string(r.cols) + "\n";
  for (std::size_t i = 0; i < r.rows; ++i) {
    for (std::size_t j = 0; j < r.cols; ++j) s += (j ? "," : "") + fmt(r.at(i, j));
    s += "\n";
  }
  return s;
}

std::vector<double> design_distances(const Resolved& r) {
  if (!r.config.distances.empty()) return r.config.distances;
  const std::size_t count = r.config.distance_count.value_or(10);
  return even_distances(r.model.space, count, r.named ? r.named->max_distance : 0.0);
}

int cmd_catalog_list(std::ostream& out) {
  for (const auto& e : catalog_entries()) {
    out << e.id << "  " << e.title << "\n    rho(d) = " << e.formula << "\n    parameters:";
    for (const auto& p : e.params) out << " " << p.name << " in " << range_text(p.range) << " (default " << p.fallback << ")";
    out << "\n";
  }
  return kOk;
}

int cmd_catalog_show(const std::string& id, const Common& c, std::ostream& out) {
  const CorrelationModel m = catalog(id, as_params(c.params));
  out << m.id << "  " << m.title << "\nrho(d) = " << m.formula << "\nparameters:";
  for (const auto& [k, v] : m.params) out << " " << k << "=" << v;
  out << "\nmodel: " << m.model.describe() << "\nd,rho\n";
  for (int k = 0; k < 20; ++k) {
    const double d = m.max_distance * k / 19.0;
    out << fmt(d) << "," << fmt(m.rho(d)) << "\n";
  }
  return kOk;
}

int cmd_simulate(const Common& c, const std::string& grid_text, std::ostream& out) {
  const Resolved r = resolve(c);
  const GridSpec grid = !grid_text.empty() ? parse_grid(grid_text) : r.config.grid.value_or(GridSpec{256, 256});
  const std::string format = !c.format.empty() ? c.format : r.config.format.value_or("pgm");
  if (format != "pgm" && format != "csv") throw ConfigError("--format must be pgm or csv");
  const Raster image = raster(r.model, grid, make_root_generator(r.seed));
  emit(output_path(c, r.config), format == "pgm" ? to_pgm(image) : to_csv(image), out);
  return kOk;
}

int cmd_correlate(const Common& c, std::optional<std::uint64_t> replicates, std::ostream& out, std::ostream& err) {
  const Resolved r = resolve(c);
  const std::uint64_t m = replicates ? *replicates : r.config.replicates.value_or(200000);
  const auto distances = design_distances(r);
  const PairDesign design = line_design(r.model.space, distances);
  const auto rows = estimate_correlation(r.model, design, m, make_root_generator(r.seed), {r.threads});
  emit(output_path(c, r.config), compare_report(rows), out);
  const std::size_t outliers = count_outliers(rows);
  if (calibration_failed(rows)) {
    err << "calibration failed: " << outliers << " of " << rows.size() << " points have |z| > 4\n";
    return kValidation;
  }
  return kOk;
}

int cmd_oracle(const Common& c, std::optional<std::uint64_t> n_flag, std::ostream& out) {
  const Resolved r = resolve(c);
  const std::uint64_t n = n_flag ? *n_flag : r.config.oracle_n.value_or(6);
  const LinearF f = submodel_f(r.model.submodel);
  const GKind g = submodel_g(r.model.submodel);
  const PairDesign design = line_design(r.model.space, design_distances(r));
  std::string s = "d,px,py,pxy,mean_closed,mean_oracle,mixed_closed,mixed_oracle,max_abs_diff\n";
  for (std::size_t k = 0; k < design.probes.size(); ++k) {
    const HitProbs p = model_hit_probs(r.model, design.anchor, design.probes[k]);
    const Moments closed = conditional_moments(f, g, n, p, r.model.value);
    const Moments exact = enumerate_oracle(n, f, g, p, r.model.value);
    const double diff = std::max({std::abs(closed.mean_x - exact.mean_x), std::abs(closed.mixed - exact.mixed),
                                  std::abs(closed.second_x - exact.second_x)});
    s += fmt(design.distances[k]) + "," + fmt(p.px) + "," + fmt(p.py) + "," + fmt(p.pxy) + "," + fmt(closed.mean_x) +
         "," + fmt(exact.mean_x) + "," + fmt(closed.mixed) + "," + fmt(exact.mixed) + "," + fmt(diff) + "\n";
  }
  emit(output_path(c, r.config), s, out);
  return kOk;
}

int cmd_sum(const Common& c, std::optional<std::uint64_t> m_flag, std::optional<std::uint64_t> runs_flag,
            std::ostream& out) {
  const Resolved r = resolve(c);
  const std::uint64_t m = m_flag ? *m_flag : r.config.sum_m.value_or(200);
  const std::uint64_t runs = runs_flag ? *runs_flag : r.config.runs.value_or(1000);
  if (m == 0 || runs < 2) throw ConfigError("sum needs m >= 1 and runs >= 2");
  std::vector<Point> points = r.config.points;
  if (points.empty()) points.push_back(line_design(r.model.space, std::vector<double>{0.0}).anchor);
  const Generator root = make_root_generator(r.seed);
  std::vector<std::vector<double>> columns(points.size(), std::vector<double>(runs));
  for (std::uint64_t k = 0; k < runs; ++k) {
    const auto z = normalized_sum(r.model, m, points, root.derive("run", k));
    for (std::size_t j = 0; j < points.size(); ++j) columns[j][k] = z[j];
  }
  std::string s = "point,mean,variance,ks_pvalue\n";
  for (std::size_t j = 0; j < points.size(); ++j) {
    const SampleStats st = sample_stats(columns[j]);
    const double p = ks_pvalue(ks_statistic(columns[j], standard_normal_cdf), runs);
    s += std::to_string(j) + "," + fmt(st.mean) + "," + fmt(st.variance) + "," + fmt(p) + "\n";
  }
  emit(output_path(c, r.config), s, out);
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact simulation of mosaic random fields and validation against closed forms", "mosaic"};
  app.require_subcommand(1);

  Common common;
  auto* catalog_cmd = app.add_subcommand("catalog", "list or show the named correlation models");
  catalog_cmd->require_subcommand(1);
  catalog_cmd->add_subcommand("list", "list row ids, titles and parameter ranges");
  auto* show = catalog_cmd->add_subcommand("show", "show one row with a 20-point rho(d) table");
  std::string show_id;
  show->add_option("id", show_id, "row id")->required();
  add_param_options(show, common);

  std::string grid_text;
  auto* simulate = app.add_subcommand("simulate", "rasterize one realization");
  add_model_options(simulate, common);
  add_param_options(simulate, common);
  simulate->add_option("--grid", grid_text, "WxH (default 256x256)");
  simulate->add_option("--format", common.format, "pgm or csv");

  std::optional<std::uint64_t> replicates;
  auto* correlate = app.add_subcommand("correlate", "estimate correlations and compare with the closed form");
  add_model_options(correlate, common);
  add_param_options(correlate, common);
  correlate->add_option("--replicates", replicates, "independent realizations (default 200000)");

  std::optional<std::uint64_t> oracle_n;
  auto* oracle = app.add_subcommand("oracle", "closed-form conditional moments against exact enumeration");
  add_model_options(oracle, common);
  add_param_options(oracle, common, "n");
  oracle->add_option("--n", oracle_n, "number of sets (at most 14)");

  std::optional<std::uint64_t> sum_m, runs;
  auto* sum = app.add_subcommand("sum", "normalized sums of independent copies");
  add_model_options(sum, common);
  add_param_options(sum, common);
  sum->add_option("--m", sum_m, "copies per sum (default 200)");
  sum->add_option("--runs", runs, "independent sums (default 1000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (catalog_cmd->parsed()) {
      if (show->parsed()) return cmd_catalog_show(show_id, common, out);
      return cmd_catalog_list(out);
    }
    if (simulate->parsed()) return cmd_simulate(common, grid_text, out);
    if (correlate->parsed()) return cmd_correlate(common, replicates, out, err);
    if (oracle->parsed()) return cmd_oracle(common, oracle_n, out);
    if (sum->parsed()) return cmd_sum(common, sum_m, runs, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace mosaic
