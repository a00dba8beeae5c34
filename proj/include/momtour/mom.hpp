#ifndef MOMTOUR_MOM_HPP
#define MOMTOUR_MOM_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace momtour {

/// A split of sample indices {0,...,N-1} into n disjoint blocks of equal
/// size m. Trailing indices that do not fill a block are dropped.
struct BlockPartition {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::vector<std::size_t>> index_sets;
  std::size_t dropped = 0;

  std::size_t sample_count() const { return n * m + dropped; }
};

/// Contiguous blocks I_j = {j*m, ..., (j+1)*m - 1} with m = floor(N/n).
/// Throws std::invalid_argument unless 1 <= n <= N.
BlockPartition partition_blocks(std::size_t N, std::size_t n);

/// Per-block means (1/m) sum_{i in I_j} values[i], in block order.
std::vector<double> block_means(std::span<const double> values,
                                const BlockPartition& partition);

/// Median of the block means; even n uses the lower-middle order statistic
/// (rank floor((n-1)/2) of the sorted means).
double median_of_block_means(std::span<const double> values,
                             const BlockPartition& partition);

/// Median of an already-computed list of block means (same convention).
double lower_median(std::vector<double> means);

/// True iff strictly more than half of the votes are true.
bool strict_majority(std::span<const bool> votes);
bool strict_majority(const std::vector<bool>& votes);

}  // namespace momtour

#endif  // MOMTOUR_MOM_HPP
