#include "momtour/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "momtour/norms.hpp"
#include "momtour/rng.hpp"

namespace momtour {

void SolverConfig::validate() const {
  if (max_iters < 1 || !(tol > 0.0)) {
    throw std::invalid_argument("SolverConfig: max_iters >= 1 and tol > 0 required");
  }
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > 0.0)) {
      throw std::invalid_argument("SolverConfig: lambda_grid must be positive");
    }
    if (i > 0 && !(lambda_grid[i] < lambda_grid[i - 1])) {
      throw std::invalid_argument("SolverConfig: lambda_grid must be strictly decreasing");
    }
  }
  if (subsample_count < 0 || !(subsample_fraction > 0.0) ||
      subsample_fraction > 1.0) {
    throw std::invalid_argument("SolverConfig: need 0 < subsample_fraction <= 1");
  }
  if (dedup_tol < 0.0) {
    throw std::invalid_argument("SolverConfig: dedup_tol >= 0 required");
  }
}

namespace {

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

double lasso_kkt_residual(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y,
                          const Eigen::VectorXd& t, double lambda) {
  const double n = static_cast<double>(X.rows());
  Eigen::VectorXd grad = (2.0 / n) * (X.transpose() * (X * t - Y));
  double worst = 0.0;
  for (Eigen::Index j = 0; j < t.size(); ++j) {
    double v;
    if (t[j] != 0.0) {
      v = std::abs(grad[j] + lambda * (t[j] > 0 ? 1.0 : -1.0));
    } else {
      v = std::max(0.0, std::abs(grad[j]) - lambda);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace

FitResult lasso_cd(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y,
                   double lambda, const SolverConfig& config,
                   const std::optional<Eigen::VectorXd>& warm_start) {
  const Eigen::Index N = X.rows();
  const Eigen::Index d = X.cols();
  if (N < 1 || d < 1 || Y.size() != N) {
    throw std::invalid_argument("lasso_cd: dimension mismatch");
  }
  if (!X.allFinite() || !Y.allFinite() || !(lambda >= 0.0)) {
    throw std::invalid_argument("lasso_cd: non-finite input");
  }
  const double n = static_cast<double>(N);

  FitResult res;
  res.t = warm_start ? *warm_start : Eigen::VectorXd::Zero(d);
  if (res.t.size() != d) {
    throw std::invalid_argument("lasso_cd: warm start dimension mismatch");
  }
  Eigen::VectorXd curvature(d);  // a_j = (2/N) ||X_j||^2
  for (Eigen::Index j = 0; j < d; ++j) {
    curvature[j] = (2.0 / n) * X.col(j).squaredNorm();
  }
  Eigen::VectorXd residual = Y - X * res.t;

  for (res.iters = 0; res.iters < config.max_iters; ++res.iters) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (curvature[j] == 0.0) continue;
      const double old = res.t[j];
      const double c = (2.0 / n) * X.col(j).dot(residual) + curvature[j] * old;
      const double next = soft_threshold(c, lambda) / curvature[j];
      if (next != old) {
        residual.noalias() -= X.col(j) * (next - old);
        res.t[j] = next;
        max_change = std::max(max_change, std::abs(next - old));
      }
    }
    if (max_change < config.tol) {
      res.converged = true;
      break;
    }
  }
  res.kkt_residual = lasso_kkt_residual(X, Y, res.t, lambda);
  return res;
}

Eigen::VectorXd sorted_l1_prox(const Eigen::VectorXd& z,
                               const Eigen::VectorXd& weights, double step) {
  const Eigen::Index d = z.size();
  if (weights.size() != d) {
    throw std::invalid_argument("sorted_l1_prox: dimension mismatch");
  }
  if (!(step >= 0.0)) {
    throw std::invalid_argument("sorted_l1_prox: step must be >= 0");
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(weights[i] >= 0.0)) {
      throw std::invalid_argument("sorted_l1_prox: weights must be nonnegative");
    }
    if (i > 0 && weights[i] > weights[i - 1]) {
      throw std::invalid_argument("sorted_l1_prox: weights must be non-increasing");
    }
  }
  if (d == 0) return z;

  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(z[a]) > std::abs(z[b]);
  });

  // Pool adjacent violators on y_i - step*w_i so the result is
  // non-increasing, then clip at zero.
  std::vector<double> sums(static_cast<std::size_t>(d));
  std::vector<double> vals(static_cast<std::size_t>(d));
  std::vector<Eigen::Index> lo(static_cast<std::size_t>(d));
  std::vector<Eigen::Index> hi(static_cast<std::size_t>(d));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    lo[k] = i;
    hi[k] = i;
    sums[k] = std::abs(z[order[static_cast<std::size_t>(i)]]) - step * weights[i];
    vals[k] = sums[k];
    while (k > 0 && vals[k - 1] <= vals[k]) {
      --k;
      hi[k] = i;
      sums[k] += sums[k + 1];
      vals[k] = sums[k] / static_cast<double>(i - lo[k] + 1);
    }
    ++k;
  }

  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (std::size_t b = 0; b < k; ++b) {
    const double v = std::max(vals[b], 0.0);
    for (Eigen::Index i = lo[b]; i <= hi[b]; ++i) {
      const int coord = order[static_cast<std::size_t>(i)];
      out[coord] = (z[coord] < 0 ? -v : v);
    }
  }
  return out;
}

FitResult slope_pg(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y,
                   const Eigen::VectorXd& weights, StepRule step_rule,
                   const SolverConfig& config,
                   const std::optional<Eigen::VectorXd>& warm_start) {
  const Eigen::Index N = X.rows();
  const Eigen::Index d = X.cols();
  if (N < 1 || d < 1 || Y.size() != N || weights.size() != d) {
    throw std::invalid_argument("slope_pg: dimension mismatch");
  }
  if (!X.allFinite() || !Y.allFinite()) {
    throw std::invalid_argument("slope_pg: non-finite input");
  }
  const double n = static_cast<double>(N);

  auto smooth = [&](const Eigen::VectorXd& t) {
    return (X * t - Y).squaredNorm() / n;
  };
  auto penalty = [&](const Eigen::VectorXd& t) {
    double acc = 0.0;
    std::vector<double> mags(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) mags[static_cast<std::size_t>(i)] = std::abs(t[i]);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    for (Eigen::Index i = 0; i < d; ++i) acc += weights[i] * mags[static_cast<std::size_t>(i)];
    return acc;
  };

  FitResult res;
  res.t = warm_start ? *warm_start : Eigen::VectorXd::Zero(d);
  if (res.t.size() != d) {
    throw std::invalid_argument("slope_pg: warm start dimension mismatch");
  }

  // Lipschitz constant of the gradient is 2 lambda_max(X^T X) / N; the
  // squared Frobenius norm gives a cheap upper bound for the fixed rule.
  double step = n / (2.0 * X.squaredNorm());
  double g_curr = smooth(res.t);

  for (res.iters = 0; res.iters < config.max_iters; ++res.iters) {
    Eigen::VectorXd grad = (2.0 / n) * (X.transpose() * (X * res.t - Y));
    Eigen::VectorXd next;
    if (step_rule == StepRule::Fixed) {
      next = sorted_l1_prox(res.t - step * grad, weights, step);
    } else {
      // backtracking on the smooth part
      double trial = std::max(step * 4.0, 1e-16);
      for (int bt = 0; bt < 60; ++bt) {
        next = sorted_l1_prox(res.t - trial * grad, weights, trial);
        const Eigen::VectorXd diff = next - res.t;
        const double quad =
            g_curr + grad.dot(diff) + diff.squaredNorm() / (2.0 * trial);
        if (smooth(next) <= quad + 1e-15) break;
        trial *= 0.5;
      }
      step = trial;
    }
    const double change = (next - res.t).lpNorm<Eigen::Infinity>();
    res.t = next;
    g_curr = smooth(res.t);
    if (change < config.tol) {
      res.converged = true;
      break;
    }
  }
  res.kkt_residual = 0.0;
  return res;
}

std::vector<Candidate> build_pool(const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& Y, Penalty penalty,
                                  const SolverConfig& config,
                                  const std::optional<Eigen::VectorXd>& truth,
                                  double slope_c0) {
  config.validate();
  const Eigen::Index N = X.rows();
  const Eigen::Index d = X.cols();

  std::vector<Candidate> pool;
  int next_id = 0;
  if (truth) {
    pool.push_back({next_id++, *truth, "truth"});
  }
  pool.push_back({next_id++, Eigen::VectorXd::Zero(d), "zero"});

  const Eigen::VectorXd slope_base =
      penalty == Penalty::Slope ? slope_weights(static_cast<int>(d), slope_c0)
                                : Eigen::VectorXd();

  const auto rows_per_sub = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(config.subsample_fraction *
                                   static_cast<double>(N)));
  std::vector<int> all_rows(static_cast<std::size_t>(N));
  std::iota(all_rows.begin(), all_rows.end(), 0);

  for (int sub = 0; sub < config.subsample_count; ++sub) {
    std::vector<int> rows = all_rows;
    if (rows_per_sub < N) {
      SplitMix64 rng(child_seed(config.seed, static_cast<std::uint64_t>(sub)));
      // partial Fisher-Yates: first rows_per_sub entries form the subsample
      for (Eigen::Index i = 0; i < rows_per_sub; ++i) {
        const std::size_t j = static_cast<std::size_t>(i) +
                              rng.bounded(static_cast<std::uint64_t>(N - i));
        std::swap(rows[static_cast<std::size_t>(i)], rows[j]);
      }
      rows.resize(static_cast<std::size_t>(rows_per_sub));
      std::sort(rows.begin(), rows.end());
    }
    Eigen::MatrixXd Xs(static_cast<Eigen::Index>(rows.size()), d);
    Eigen::VectorXd Ys(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Xs.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
      Ys[static_cast<Eigen::Index>(i)] = Y[rows[i]];
    }
    std::optional<Eigen::VectorXd> warm;
    for (double lambda : config.lambda_grid) {
      FitResult fit;
      char tag[64];
      if (penalty == Penalty::Lasso) {
        fit = lasso_cd(Xs, Ys, lambda, config, warm);
        std::snprintf(tag, sizeof(tag), "lasso sub=%d lam=%g", sub, lambda);
      } else {
        fit = slope_pg(Xs, Ys, lambda * slope_base, StepRule::Backtracking,
                       config, warm);
        std::snprintf(tag, sizeof(tag), "slope sub=%d lam=%g", sub, lambda);
      }
      warm = fit.t;
      pool.push_back({next_id++, fit.t, tag});
    }
  }

  // dedup by l2 radius, keeping the lowest id
  std::vector<Candidate> kept;
  for (auto& cand : pool) {
    bool dup = false;
    for (const auto& k : kept) {
      if ((k.t - cand.t).norm() <= config.dedup_tol) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(std::move(cand));
  }
  return kept;
}

}  // namespace momtour
