#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "momtour/mom.hpp"

using namespace momtour;

TEST_CASE("partition_blocks: exact divisibility") {
  const auto p = partition_blocks(12, 4);
  CHECK(p.n == 4);
  CHECK(p.m == 3);
  CHECK(p.dropped == 0);
  CHECK(p.index_sets[0] == std::vector<std::size_t>{0, 1, 2});
  CHECK(p.index_sets[3] == std::vector<std::size_t>{9, 10, 11});
}

TEST_CASE("partition_blocks: remainder is dropped") {
  const auto p = partition_blocks(10, 4);
  CHECK(p.n == 4);
  CHECK(p.m == 2);
  CHECK(p.dropped == 2);
  CHECK(p.sample_count() == 10);
}

TEST_CASE("partition_blocks: n equals N") {
  const auto p = partition_blocks(5, 5);
  CHECK(p.n == 5);
  CHECK(p.m == 1);
  CHECK(p.dropped == 0);
}

TEST_CASE("partition_blocks: invalid block counts") {
  CHECK_THROWS_AS(partition_blocks(5, 0), std::invalid_argument);
  CHECK_THROWS_AS(partition_blocks(5, 6), std::invalid_argument);
}

TEST_CASE("partition invariants on random sizes") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t N = 1 + rng() % 200;
    const std::size_t n = 1 + rng() % N;
    const auto p = partition_blocks(N, n);
    CHECK(p.n * p.m + p.dropped == N);
    std::vector<bool> seen(N, false);
    for (const auto& block : p.index_sets) {
      CHECK(block.size() == p.m);
      for (auto i : block) {
        CHECK(!seen[i]);
        seen[i] = true;
      }
    }
  }
}

TEST_CASE("median_of_block_means: odd count") {
  const std::vector<double> values{1.0, 5.0, 3.0};
  CHECK(median_of_block_means(values, partition_blocks(3, 3)) == 3.0);
}

TEST_CASE("median_of_block_means: one block is the sample mean") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> values(37);
  for (auto& v : values) v = u(rng);
  const double mom = median_of_block_means(values, partition_blocks(37, 1));
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / 37.0;
  CHECK(mom == mean);
}

TEST_CASE("median_of_block_means: even count uses the lower middle") {
  const std::vector<double> values{1.0, 2.0, 3.0, 100.0};
  CHECK(median_of_block_means(values, partition_blocks(4, 4)) == 2.0);
}

TEST_CASE("median_of_block_means: empty partition rejected") {
  const std::vector<double> values{1.0};
  BlockPartition p;  // n = 0
  CHECK_THROWS_AS(median_of_block_means(values, p), std::invalid_argument);
}

TEST_CASE("strict_majority basics") {
  CHECK(strict_majority(std::vector<bool>{true, true, false}));
  CHECK_FALSE(strict_majority(std::vector<bool>{true, false}));
  CHECK(strict_majority(std::vector<bool>(9, true)));
  CHECK_THROWS_AS(strict_majority(std::vector<bool>{}), std::invalid_argument);
}

TEST_CASE("strict_majority never holds for both a vote and its negation") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<bool> votes(n), negated(n);
    for (std::size_t i = 0; i < n; ++i) {
      votes[i] = (rng() & 1) != 0;
      negated[i] = !votes[i];
    }
    const bool both = strict_majority(votes) && strict_majority(negated);
    CHECK_FALSE(both);
  }
}

TEST_CASE("MOM is robust to corrupting a minority of blocks") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 3 + rng() % 10;
    const std::size_t m = 1 + rng() % 6;
    const std::size_t N = n * m;
    std::vector<double> values(N);
    for (auto& v : values) v = u(rng);
    const auto part = partition_blocks(N, n);

    // corrupt strictly fewer than ceil(n/2) blocks with huge junk
    const std::size_t corrupt = rng() % ((n + 1) / 2);
    std::vector<std::size_t> blocks(n);
    std::iota(blocks.begin(), blocks.end(), 0);
    std::shuffle(blocks.begin(), blocks.end(), rng);
    std::vector<double> corrupted = values;
    for (std::size_t k = 0; k < corrupt; ++k) {
      for (auto i : part.index_sets[blocks[k]]) {
        corrupted[i] = (rng() & 1) ? 1e12 : -1e12;
      }
    }

    const auto clean_means = block_means(values, part);
    double lo = clean_means[0], hi = clean_means[0];
    for (std::size_t j = 0; j < n; ++j) {
      bool untouched = true;
      for (std::size_t k = 0; k < corrupt; ++k) {
        if (blocks[k] == j) untouched = false;
      }
      if (untouched) {
        lo = std::min(lo, clean_means[j]);
        hi = std::max(hi, clean_means[j]);
      }
    }
    const double out = median_of_block_means(corrupted, part);
    CHECK(out >= lo);
    CHECK(out <= hi);
  }
}

TEST_CASE("block means are invariant to within-block permutations") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 2 + rng() % 6;
    const std::size_t m = 2 + rng() % 6;
    const std::size_t N = n * m;
    // integer-valued doubles make the block sums exact
    std::vector<double> values(N);
    for (auto& v : values) v = static_cast<double>(rng() % 41) - 20.0;
    const auto part = partition_blocks(N, n);
    std::vector<double> permuted = values;
    for (std::size_t j = 0; j < n; ++j) {
      auto idx = part.index_sets[j];
      std::vector<double> vals;
      for (auto i : idx) vals.push_back(permuted[i]);
      std::shuffle(vals.begin(), vals.end(), rng);
      for (std::size_t k = 0; k < idx.size(); ++k) permuted[idx[k]] = vals[k];
    }
    CHECK(median_of_block_means(values, part) ==
          median_of_block_means(permuted, part));
  }
}
