#include "momtour/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace momtour {

RegNorm RegNorm::sorted_l1(Eigen::VectorXd beta) {
  if (beta.size() == 0) {
    throw std::invalid_argument("sorted_l1: empty weight vector");
  }
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    if (!(beta[i] > 0.0)) {
      throw std::invalid_argument("sorted_l1: weights must be positive");
    }
    if (i > 0 && beta[i] > beta[i - 1]) {
      throw std::invalid_argument("sorted_l1: weights must be non-increasing");
    }
  }
  return RegNorm{NormKind::SortedL1, std::move(beta)};
}

double norm_eval(const RegNorm& norm, const Eigen::VectorXd& z) {
  if (norm.kind == NormKind::L1) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) s += std::abs(z[i]);
    return s;
  }
  if (z.size() != norm.weights.size()) {
    throw std::invalid_argument("norm_eval: dimension mismatch");
  }
  std::vector<double> mags(static_cast<std::size_t>(z.size()));
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    mags[static_cast<std::size_t>(i)] = std::abs(z[i]);
  }
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double s = 0.0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    s += norm.weights[static_cast<Eigen::Index>(i)] * mags[i];
  }
  return s;
}

Eigen::VectorXd slope_weights(int d, double c0) {
  if (d < 1 || !(c0 > 0.0)) {
    throw std::invalid_argument("slope_weights: need d >= 1 and c0 > 0");
  }
  Eigen::VectorXd beta(d);
  for (int i = 1; i <= d; ++i) {
    beta[i - 1] = c0 * std::sqrt(std::log(std::exp(1.0) * d / i));
  }
  return beta;
}

double best_sparse_residual(const RegNorm& norm, const Eigen::VectorXd& z, int s) {
  const int d = static_cast<int>(z.size());
  if (s < 0 || s > d) {
    // The hierarchy only produces 0 <= s <= d; clamp oversized budgets.
    s = std::clamp(s, 0, d);
  }
  if (s >= d) return 0.0;
  // Sort indices by magnitude descending, lower index first on ties.
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(z[a]) > std::abs(z[b]);
  });
  Eigen::VectorXd resid = z;
  for (int k = 0; k < s; ++k) resid[order[static_cast<std::size_t>(k)]] = 0.0;
  return norm_eval(norm, resid);
}

int SparsityHierarchy::level_count(int d) {
  if (d < 1) throw std::invalid_argument("level_count: d >= 1 required");
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(d)))) + 1;
}

int SparsityHierarchy::level_sparsity(int d, int level) {
  const int K = level_count(d);
  if (level < 1 || level > K) {
    throw std::invalid_argument("level_sparsity: level out of range");
  }
  double denom = std::ldexp(1.0, level - 1);  // 2^(level-1)
  return static_cast<int>(std::ceil(static_cast<double>(d) / denom));
}

SparsityHierarchy SparsityHierarchy::make(int d, std::vector<double> rho) {
  SparsityHierarchy h;
  h.d = d;
  h.K = level_count(d);
  if (static_cast<int>(rho.size()) != h.K) {
    throw std::invalid_argument("SparsityHierarchy: rho size must equal K");
  }
  // infinite radii may only form a prefix; the finite tail must be
  // non-increasing
  bool seen_finite = false;
  double prev = std::numeric_limits<double>::infinity();
  for (double r : rho) {
    if (std::isinf(r)) {
      if (seen_finite) {
        throw std::invalid_argument(
            "SparsityHierarchy: infinite rho after a finite level");
      }
      continue;
    }
    if (!(r >= 0.0)) {
      throw std::invalid_argument("SparsityHierarchy: rho must be >= 0");
    }
    if (seen_finite && r > prev) {
      throw std::invalid_argument("SparsityHierarchy: rho must be non-increasing");
    }
    seen_finite = true;
    prev = r;
  }
  h.sparsity.resize(static_cast<std::size_t>(h.K));
  for (int l = 1; l <= h.K; ++l) {
    h.sparsity[static_cast<std::size_t>(l - 1)] = level_sparsity(d, l);
  }
  h.rho = std::move(rho);
  return h;
}

bool hierarchy_membership(const SparsityHierarchy& h, const RegNorm& norm,
                          const Eigen::VectorXd& t, int level) {
  if (level < 1 || level > h.K) {
    throw std::invalid_argument("hierarchy_membership: level out of range");
  }
  const double rho = h.rho[static_cast<std::size_t>(level - 1)];
  if (std::isinf(rho)) return true;
  const int s = h.sparsity[static_cast<std::size_t>(level - 1)];
  return best_sparse_residual(norm, t, s) <= rho;
}

double delta_condition_complexity(const RegNorm& norm, int s) {
  if (norm.kind == NormKind::L1) return std::sqrt(static_cast<double>(s));
  double b = 0.0;
  const int cap = std::min<int>(s, static_cast<int>(norm.weights.size()));
  for (int i = 1; i <= cap; ++i) {
    b += norm.weights[i - 1] / std::sqrt(static_cast<double>(i));
  }
  return b;
}

bool delta_condition(const RegNorm& norm, int s, double rho, double r,
                     double c_delta) {
  if (!(rho > 0.0) || !(r > 0.0)) {
    throw std::invalid_argument("delta_condition: rho and r must be positive");
  }
  return delta_condition_complexity(norm, s) <= c_delta * (rho / r);
}

}  // namespace momtour
