#include "momtour/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "momtour/norms.hpp"

namespace momtour {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void ProcedureConstants::validate() const {
  const bool positive = sigma4 > 0 && alpha > 0 && beta > 0 && m1 > 0 &&
                        theta1 > 0 && theta2 > 0 && kappa > 0 && eta > 0 &&
                        c_cl > 0 && c_delta > 0 && c_active > 0 &&
                        c_width > 0 && c1_r > 0 && c3_rho > 0 &&
                        slope_c0 > 0 && r_hat_factor > 0;
  if (!positive) {
    throw std::invalid_argument("ProcedureConstants: all constants must be positive");
  }
  if (!(alpha < 1.0 && beta > 1.0)) {
    throw std::invalid_argument("ProcedureConstants: need alpha < 1 < beta");
  }
  if (theta1 > 1.0) {
    throw std::invalid_argument("ProcedureConstants: theta1 <= 1 required");
  }
}

double champions_margin(const ProcedureConstants& consts, double r_hat) {
  const double c = consts.beta / consts.alpha;
  const double x = 2.0 * c * r_hat;
  return consts.c_cl * x * x / 10.0;
}

namespace {

LevelParams level_params_impl(const ProcedureConstants& consts, int d,
                              std::size_t N, int level,
                              std::optional<double> r_hat_override,
                              bool slope_rho) {
  if (d < 1 || N < 1) {
    throw std::invalid_argument("level_params: need d >= 1 and N >= 1");
  }
  const int K = SparsityHierarchy::level_count(d);
  if (level < 1 || level > K) {
    throw std::invalid_argument("level_params: level out of range");
  }
  LevelParams p;
  p.level = level;
  p.sparsity = SparsityHierarchy::level_sparsity(d, level);
  const double dn = static_cast<double>(N);
  const double s = static_cast<double>(p.sparsity);
  p.n1 = std::clamp<std::size_t>(
      static_cast<std::size_t>(dn / consts.m1), 1, N);

  // A level is usable only when the class is small enough for the sample:
  // s < c_active * N / log(ed/N). With N >= ed the constraint is vacuous.
  const double log_edN = std::log(std::exp(1.0) * d / dn);
  if (log_edN > 0.0 && s >= consts.c_active * dn / log_edN) {
    p.active = false;
    p.rho = p.r_star = p.r_hat = p.r1 = p.r3 = p.r3_sq = p.lambda = kInf;
    p.n2 = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(consts.theta1 * dn)), 1, N);
    p.m2 = N / p.n2;
    return p;
  }

  const double sigma = consts.sigma4;
  const double log_eds = std::log(std::exp(1.0) * d / s);
  p.r_star = consts.c1_r * sigma * std::sqrt((s / dn) * log_eds);
  p.rho = consts.c3_rho * sigma * (s / std::sqrt(dn)) *
          (slope_rho ? log_eds : std::sqrt(log_eds));
  p.r_hat = std::max(p.r_star, consts.r_hat_factor * p.r_star);
  if (r_hat_override && *r_hat_override > p.r_hat) p.r_hat = *r_hat_override;
  p.r1 = consts.beta * p.r_hat;
  p.lambda = consts.theta2 * p.r_hat * p.r_hat / p.rho;
  p.r3_sq = champions_margin(consts, p.r_hat);
  p.r3 = std::sqrt(p.r3_sq);
  const double ratio = std::min(1.0, p.r_hat * p.r_hat / (sigma * sigma));
  p.n2 = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(consts.theta1 * dn * ratio)), 1, N);
  p.m2 = N / p.n2;
  return p;
}

}  // namespace

LevelParams lasso_level_params(const ProcedureConstants& consts, int d,
                               std::size_t N, int level,
                               std::optional<double> r_hat_override) {
  return level_params_impl(consts, d, N, level, r_hat_override, false);
}

LevelParams slope_level_params(const ProcedureConstants& consts, int d,
                               std::size_t N, int level,
                               std::optional<double> r_hat_override) {
  return level_params_impl(consts, d, N, level, r_hat_override, true);
}

LevelParams level_params(Penalty penalty, const ProcedureConstants& consts,
                         int d, std::size_t N, int level,
                         std::optional<double> r_hat_override) {
  return penalty == Penalty::Lasso
             ? lasso_level_params(consts, d, N, level, r_hat_override)
             : slope_level_params(consts, d, N, level, r_hat_override);
}

double l1l2_support(const std::vector<double>& g, double rho, double r) {
  const std::size_t d = g.size();
  if (d == 0) return 0.0;
  std::vector<double> a(d);
  for (std::size_t i = 0; i < d; ++i) a[i] = std::abs(g[i]);
  std::sort(a.begin(), a.end(), std::greater<double>());
  const double amax = a[0];
  if (amax == 0.0) return 0.0;

  // rho*B1 inside r*B2: optimum sits on a vertex of the l1 ball.
  if (rho <= r) return rho * amax;

  double l1 = 0.0, l2sq = 0.0;
  std::vector<double> pref1(d + 1, 0.0), pref2(d + 1, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    l1 += a[i];
    l2sq += a[i] * a[i];
    pref1[i + 1] = l1;
    pref2[i + 1] = l2sq;
  }
  const double l2 = std::sqrt(l2sq);
  // r*B2 inside rho*B1: optimum is the scaled gradient direction.
  if (rho >= r * l1 / l2) return r * l2;

  // Both constraints bind: v is proportional to (|g| - mu)_+ with mu chosen
  // so that ||v||_1 / ||v||_2 = rho / r, then scaled to ||v||_2 = r.
  const double target = rho / r;
  auto ratio_and_value = [&](double mu, double* value) {
    // count of entries strictly above mu
    std::size_t k = static_cast<std::size_t>(
        std::upper_bound(a.begin(), a.end(), mu, std::greater<double>()) -
        a.begin());
    if (k == 0) {
      if (value) *value = 0.0;
      return 1.0;
    }
    const double s1 = pref1[k] - static_cast<double>(k) * mu;
    const double s2sq = pref2[k] - 2.0 * mu * pref1[k] +
                        static_cast<double>(k) * mu * mu;
    const double s2 = std::sqrt(std::max(s2sq, 0.0));
    if (value) {
      // <a, (a - mu)_+> = sum_{i<=k} a_i (a_i - mu)
      const double ip = pref2[k] - mu * pref1[k];
      *value = (s2 > 0.0) ? r * ip / s2 : 0.0;
    }
    return (s2 > 0.0) ? s1 / s2 : 1.0;
  };

  double lo = 0.0, hi = amax;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ratio_and_value(mid, nullptr) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double value = 0.0;
  ratio_and_value(0.5 * (lo + hi), &value);
  return value;
}

double gaussian_mean_width_mc(double rho, double r, int d,
                              std::size_t samples, std::uint64_t seed) {
  if (!(rho > 0.0) || !(r > 0.0) || d < 1 || samples < 1) {
    throw std::invalid_argument("gaussian_mean_width_mc: bad arguments");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> g(static_cast<std::size_t>(d));
  double acc = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    for (auto& gi : g) gi = gauss(rng);
    acc += l1l2_support(g, rho, r);
  }
  return acc / static_cast<double>(samples);
}

double width_bound(double rho, double r, int d) {
  const double sqd = std::sqrt(static_cast<double>(d));
  if (r <= 0.0) return 0.0;
  if (r * sqd <= rho) return r * sqd;                         // k >= d
  if (r >= rho) return rho * std::sqrt(std::log(std::exp(1.0) * d));  // k <= 1
  const double arg = std::exp(1.0) * d * (r / rho) * (r / rho);
  return rho * std::sqrt(std::log(arg));
}

double fixed_point_radius(double rho, int d, std::size_t N, double sigma,
                          double kappa, FixedPointKind kind, double c_width) {
  if (!(rho > 0.0) || d < 1 || N < 1 || !(sigma > 0.0) || !(kappa > 0.0)) {
    throw std::invalid_argument("fixed_point_radius: bad arguments");
  }
  const double sqrtN = std::sqrt(static_cast<double>(N));
  auto holds = [&](double r) {
    const double w = c_width * width_bound(rho, r, d);
    if (kind == FixedPointKind::Quadratic) return w <= kappa * sqrtN * r;
    return sigma * w <= kappa * sqrtN * r * r;
  };
  double lo = 1e-12;
  double hi = rho * std::sqrt(static_cast<double>(d));
  if (holds(lo)) return lo;
  if (!holds(hi)) {
    std::ostringstream msg;
    msg << "fixed_point_radius: no crossing on bracket [" << lo << ", " << hi
        << "] (rho=" << rho << ", d=" << d << ", N=" << N
        << ", sigma=" << sigma << ", kappa=" << kappa << ", kind="
        << (kind == FixedPointKind::Quadratic ? "quadratic" : "multiplier")
        << ")";
    throw std::runtime_error(msg.str());
  }
  while ((hi - lo) / hi > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (holds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<double> radius_grid(double r0, int depth) {
  if (!(r0 > 0.0) || depth < 1) {
    throw std::invalid_argument("radius_grid: need r0 > 0 and depth >= 1");
  }
  std::vector<double> grid(static_cast<std::size_t>(depth));
  double r = r0;
  for (int j = 0; j < depth; ++j) {
    grid[static_cast<std::size_t>(j)] = r;
    r *= 0.5;
  }
  return grid;
}

}  // namespace momtour
