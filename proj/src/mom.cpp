#include "momtour/mom.hpp"

#include <algorithm>
#include <stdexcept>

namespace momtour {

BlockPartition partition_blocks(std::size_t N, std::size_t n) {
  if (n < 1 || n > N) {
    throw std::invalid_argument("partition_blocks: need 1 <= n <= N");
  }
  BlockPartition p;
  p.n = n;
  p.m = N / n;
  p.dropped = N - p.n * p.m;
  p.index_sets.resize(n);
  std::size_t next = 0;
  for (std::size_t j = 0; j < n; ++j) {
    p.index_sets[j].resize(p.m);
    for (std::size_t k = 0; k < p.m; ++k) p.index_sets[j][k] = next++;
  }
  return p;
}

std::vector<double> block_means(std::span<const double> values,
                                const BlockPartition& partition) {
  if (partition.n == 0) {
    throw std::invalid_argument("block_means: empty partition");
  }
  std::vector<double> means(partition.n);
  for (std::size_t j = 0; j < partition.n; ++j) {
    const auto& idx = partition.index_sets[j];
    double sum = 0.0;
    for (std::size_t i : idx) {
      if (i >= values.size()) {
        throw std::invalid_argument("block_means: partition index out of range");
      }
      sum += values[i];
    }
    means[j] = sum / static_cast<double>(partition.m);
  }
  return means;
}

double lower_median(std::vector<double> means) {
  if (means.empty()) {
    throw std::invalid_argument("lower_median: empty input");
  }
  const std::size_t rank = (means.size() - 1) / 2;
  std::nth_element(means.begin(), means.begin() + static_cast<std::ptrdiff_t>(rank),
                   means.end());
  return means[rank];
}

double median_of_block_means(std::span<const double> values,
                             const BlockPartition& partition) {
  return lower_median(block_means(values, partition));
}

bool strict_majority(std::span<const bool> votes) {
  if (votes.empty()) {
    throw std::invalid_argument("strict_majority: no votes");
  }
  std::size_t yes = 0;
  for (bool v : votes) yes += v ? 1 : 0;
  return 2 * yes > votes.size();
}

bool strict_majority(const std::vector<bool>& votes) {
  if (votes.empty()) {
    throw std::invalid_argument("strict_majority: no votes");
  }
  std::size_t yes = 0;
  for (bool v : votes) yes += v ? 1 : 0;
  return 2 * yes > votes.size();
}

}  // namespace momtour
