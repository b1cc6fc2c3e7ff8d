#include <catch2/catch.hpp>

#include <set>
#include <vector>

#include "netalign/partition.hpp"
#include "netalign/rng.hpp"

using namespace netalign;

TEST_CASE("random_partition covers the space with near-equal blocks",
          "[partition]") {
  Rng rng(3);

  SECTION("N=9 n=3") {
    const auto part = random_partition(9, 3, rng);
    REQUIRE(part.block_count() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(part.block_size(i) == 3);
  }

  SECTION("N=10 n=3 splits 4,3,3") {
    const auto part = random_partition(10, 3, rng);
    CHECK(part.block_size(0) == 4);
    CHECK(part.block_size(1) == 3);
    CHECK(part.block_size(2) == 3);
  }

  SECTION("N=9732 n=2 gives two blocks of 4866") {
    const auto part = random_partition(9732, 2, rng);
    CHECK(part.block_size(0) == 4866);
    CHECK(part.block_size(1) == 4866);
  }

  SECTION("blocks form a permutation and are sorted ascending") {
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t dim = 17 + 13 * trial;
      const std::size_t blocks = 1 + rng.index(dim);
      auto part = random_partition(dim, blocks, rng);
      std::set<std::uint32_t> seen;
      for (std::size_t i = 0; i < part.block_count(); ++i) {
        const auto idx = part.block(i);
        for (std::size_t t = 0; t < idx.size(); ++t) {
          if (t > 0) CHECK(idx[t - 1] < idx[t]);
          seen.insert(idx[t]);
        }
      }
      CHECK(seen.size() == dim);
      part.reshuffle(rng);
      std::set<std::uint32_t> again;
      for (std::size_t i = 0; i < part.block_count(); ++i) {
        const auto idx = part.block(i);
        for (std::size_t t = 0; t < idx.size(); ++t) {
          if (t > 0) CHECK(idx[t - 1] < idx[t]);
          again.insert(idx[t]);
        }
      }
      CHECK(again.size() == dim);
    }
  }

  SECTION("n outside [1, N] is a configuration error") {
    CHECK_THROWS_AS(random_partition(5, 6, rng), config_error);
    CHECK_THROWS_AS(random_partition(5, 0, rng), config_error);
  }

  SECTION("same seed, same partition") {
    Rng a(99), b(99);
    const auto p1 = random_partition(50, 7, a);
    const auto p2 = random_partition(50, 7, b);
    for (std::size_t i = 0; i < 7; ++i) {
      const auto x = p1.block(i);
      const auto y = p2.block(i);
      REQUIRE(x.size() == y.size());
      for (std::size_t t = 0; t < x.size(); ++t) CHECK(x[t] == y[t]);
    }
  }
}
