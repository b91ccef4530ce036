#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "mosaic/estimation.hpp"
#include "mosaic/random.hpp"

using namespace mosaic;

TEST_SUITE("random") {

TEST_CASE("philox known-answer vectors") {
  using Block = std::array<std::uint64_t, 4>;
  CHECK(philox4x64({0, 0, 0, 0}, {0, 0}) ==
        Block{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL, 0x7e68b68aec7ba23bULL});
  const std::uint64_t ones = ~std::uint64_t{0};
  CHECK(philox4x64({ones, ones, ones, ones}, {ones, ones}) ==
        Block{0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL, 0x9cc7d7c69cd777b6ULL, 0xa09caebf594f0ba0ULL});
  CHECK(philox4x64({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL, 0x082efa98ec4e6c89ULL},
                   {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL}) ==
        Block{0xa528f45403e61d95ULL, 0x38c72dbd566e9788ULL, 0xa5a1610e72fd18b5ULL, 0x57bd43b5e52b7fe6ULL});
}

TEST_CASE("generator output is block k of the keyed permutation") {
  Generator g({7, 9});
  const auto b0 = philox4x64({0, 0, 0, 0}, {7, 9});
  const auto b1 = philox4x64({1, 0, 0, 0}, {7, 9});
  for (int i = 0; i < 4; ++i) CHECK(g() == b0[i]);
  CHECK(g() == b1[0]);
  CHECK(g.blocks_consumed() == 2);
}

TEST_CASE("same seed, same stream; different seeds differ") {
  auto a = make_root_generator(42), b = make_root_generator(42), c = make_root_generator(43);
  bool differs = false;
  for (int i = 0; i < 64; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs = differs || x != c();
  }
  CHECK(differs);
}

TEST_CASE("derived substreams are distinct and independent of parent position") {
  auto root = make_root_generator(1);
  std::set<Key128> keys;
  for (std::uint64_t i = 0; i < 1000; ++i) keys.insert(root.derive("set", i).key());
  for (std::uint64_t i = 0; i < 1000; ++i) keys.insert(root.derive("sets", i).key());
  CHECK(keys.size() == 2000);

  const auto before = root.derive("x", 3).key();
  for (int i = 0; i < 10; ++i) root();
  CHECK(root.derive("x", 3).key() == before);
}

TEST_CASE("streamed key building matches a StreamKey") {
  const auto root = make_root_generator(5);
  StreamKey key;
  key.tag("cell").index_set(std::vector<std::uint64_t>{1, 4, 9});
  KeyAbsorber absorber(root);
  absorber.tag("cell").begin_set().set_item(1).set_item(4).set_item(9).end_set();
  CHECK(absorber.finish().key() == root.derive(key).key());

  StreamKey other;
  other.tag("cell").index_set(std::vector<std::uint64_t>{1, 49});
  CHECK(root.derive(other).key() != root.derive(key).key());
  StreamKey empty;
  empty.tag("cell").index_set(std::vector<std::uint64_t>{});
  CHECK(root.derive(empty).key() != root.derive(key).key());
}

TEST_CASE("long keys cross the absorber block boundary consistently") {
  const auto root = make_root_generator(11);
  std::vector<std::uint64_t> big(500);
  for (std::size_t i = 0; i < big.size(); ++i) big[i] = i * 1000003;
  StreamKey key;
  key.index_set(big);
  KeyAbsorber a(root);
  a.index_set(big);
  CHECK(a.finish().key() == root.derive(key).key());
  big.back() += 1;
  StreamKey changed;
  changed.index_set(big);
  CHECK(root.derive(changed).key() != root.derive(key).key());
}

TEST_CASE("uniforms are in range and pass KS and chi-square checks") {
  auto g = make_root_generator(0);
  std::vector<double> xs(100000);
  std::vector<double> bins(16, 0.0);
  for (auto& x : xs) {
    x = g.uniform01();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    bins[static_cast<std::size_t>(x * 16)] += 1;
  }
  const double d = ks_statistic(xs, [](double t) { return t; });
  CHECK(ks_pvalue(d, xs.size()) > 1e-3);
  double chi = 0.0;
  const double expect = xs.size() / 16.0;
  for (double b : bins) chi += (b - expect) * (b - expect) / expect;
  CHECK(chi_square_pvalue(chi, 15) > 1e-3);

  for (int i = 0; i < 10000; ++i) {
    const double u = g.uniform_open01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

}
