#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"

using namespace mosaic;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<const char*> args) {
  args.insert(args.begin(), "mosaic");
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(args.size()), args.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "mosaic_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("catalog listing and rows") {
  const auto list = run({"catalog", "list"});
  CHECK(list.code == 0);
  CHECK(list.out.find("t1r1") != std::string::npos);
  CHECK(list.out.find("t2r11") != std::string::npos);

  const auto show = run({"catalog", "show", "t2r5", "--alpha", "0.5"});
  CHECK(show.code == 0);
  CHECK(show.out.find("d,rho\n0,1\n") != std::string::npos);

  const auto bad = run({"catalog", "show", "t2r5", "--alpha", "1.5"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("error:") == 0);
  CHECK(bad.err.find("alpha") != std::string::npos);
  CHECK(run({"catalog", "show", "nope"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
}

TEST_CASE("simulate is reproducible") {
  const auto a = scratch("a.pgm"), b = scratch("b.pgm");
  CHECK(run({"simulate", "--catalog", "t1r6", "--seed", "5", "--grid", "40x30", "--out", a.c_str()}).code == 0);
  CHECK(run({"simulate", "--catalog", "t1r6", "--seed", "5", "--grid", "40x30", "--out", b.c_str()}).code == 0);
  const auto pa = slurp(a);
  CHECK(pa == slurp(b));
  CHECK(pa.rfind("P2\n40 30\n65535\n", 0) == 0);
  std::istringstream lines(pa);
  std::string line;
  while (std::getline(lines, line)) CHECK(line.size() <= 70);

  const auto other = run({"simulate", "--catalog", "t1r6", "--seed", "6", "--grid", "40x30"});
  CHECK(other.code == 0);
  CHECK(other.out != pa);

  const auto csv = run({"simulate", "--catalog", "t2r1", "--grid", "8x4", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("# 4,8\n", 0) == 0);
  CHECK(count_lines(csv.out) == 5);
  CHECK(run({"simulate", "--catalog", "t2r1", "--format", "png"}).code == 1);
  CHECK(run({"simulate", "--catalog", "t2r1", "--grid", "0x3"}).code == 1);
}

TEST_CASE("config files and flag overrides") {
  const auto cfg = scratch("run.json");
  std::ofstream(cfg) << R"({"catalog": "t2r3", "params": {"lambda1": 0.4}, "seed": 3, "grid": "6x6",
    "distance_count": 4, "replicates": 2000})";
  const auto from_file = run({"simulate", "--config", cfg.c_str()});
  CHECK(from_file.code == 0);
  CHECK(from_file.out == run({"simulate", "--catalog", "t2r3", "--lambda1", "0.4", "--seed", "3", "--grid", "6x6"}).out);
  CHECK(from_file.out != run({"simulate", "--config", cfg.c_str(), "--seed", "4"}).out);

  const auto corr = run({"correlate", "--config", cfg.c_str(), "--threads", "2"});
  CHECK(corr.code == 0);
  CHECK(corr.out.rfind("d,rho_hat,se,rho_analytic,z\n", 0) == 0);
  CHECK(count_lines(corr.out) == 5);

  const auto broken = scratch("broken.json");
  std::ofstream(broken) << "{\"catalog\": \"t2r3\",\n \"seed\": }";
  const auto r = run({"simulate", "--config", broken.c_str()});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(run({"simulate", "--alpha", "0.5"}).code == 1);
}

TEST_CASE("oracle and sum") {
  const auto oracle = run({"oracle", "--catalog", "t2r4", "--n", "4"});
  CHECK(oracle.code == 0);
  CHECK(oracle.out.rfind("d,px,py,pxy,mean_closed,mean_oracle,mixed_closed,mixed_oracle,max_abs_diff\n", 0) == 0);
  CHECK(count_lines(oracle.out) == 11);

  const auto sum = run({"sum", "--catalog", "t2r1", "--m", "5", "--runs", "50"});
  CHECK(sum.code == 0);
  CHECK(sum.out.rfind("point,mean,variance,ks_pvalue\n0,", 0) == 0);
  CHECK(run({"sum", "--catalog", "t2r1", "--runs", "1"}).code == 1);
}

}
