#ifndef MOMTOUR_COMPLEXITY_HPP
#define MOMTOUR_COMPLEXITY_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace momtour {

/// Tunable constants of the tournament procedure. The theory pins only
/// their existence; the defaults below were calibrated empirically on
/// Gaussian-design synthetic scenarios (the formula shapes are fixed, the
/// leading constants are free).
struct ProcedureConstants {
  double L = 2.0;          // moment-equivalence constant (informational)
  double sigma4 = 1.0;     // sigma_4, or sigma = ||W||_{L2} for additive noise
  double alpha = 0.7;      // distance-oracle lower constant, 0 < alpha < 1
  double beta = 1.1;       // distance-oracle upper constant, beta > 1
  double m1 = 8.0;         // first-phase block size (n1 = N / m1)
  double theta1 = 0.25;    // elimination block-count factor, <= 1
  double theta2 = 0.5;     // lambda scale: lambda = theta2 * r_hat^2 / rho
  double kappa = 1.0;      // fixed-point constant
  double eta = 1.0;        // fixed-point constant
  double c_cl = 0.1;       // champions-league margin scale
  double c_delta = 0.5;    // Delta-condition constant
  double c_active = 1.0;   // hierarchy activation constant
  double c_width = 1.0;    // mean-width closed-form constant
  double c1_r = 1.0;       // scale of r_l
  double c3_rho = 4.0;     // scale of rho_l
  double slope_c0 = 1.0;   // SLOPE weight scale
  double r_hat_factor = 1.0;  // r_hat_l = max(r_hat_factor * r_l, override)
  bool use_deterministic_do = false;  // isotropic shortcut for the oracle

  void validate() const;  // throws std::invalid_argument on violations
};

/// All per-level tournament parameters. active == false encodes
/// rho_l = r_l = +inf (the level is too rich for the sample).
struct LevelParams {
  int level = 0;
  int sparsity = 0;
  double rho = 0.0;     // rho_l
  double r_star = 0.0;  // r_l
  double r_hat = 0.0;   // r_hat_l >= r_l
  double r1 = 0.0;      // r_{l,1} = beta * r_hat_l
  double r3 = 0.0;      // r_{l,3}
  double r3_sq = 0.0;   // (2 (beta/alpha) r_hat)^2 / 10
  double lambda = 0.0;  // lambda_l = theta2 * r_hat^2 / rho
  std::size_t n1 = 0;   // first-phase block count
  std::size_t n2 = 0;   // n_{l,2}
  std::size_t m2 = 0;   // m_{l,2} = floor(N / n2)
  bool active = true;
};

/// Threshold used in the champions-league comparison: (2 (beta/alpha) r_hat)^2 / 10.
double champions_margin(const ProcedureConstants& consts, double r_hat);

/// Per-level parameters for tournament LASSO:
///   r_l   = c1_r  * sigma * sqrt((s/N) log(ed/s))
///   rho_l = c3_rho * sigma * (s/sqrt(N)) sqrt(log(ed/s))
LevelParams lasso_level_params(const ProcedureConstants& consts, int d,
                               std::size_t N, int level,
                               std::optional<double> r_hat_override = {});

/// Same as lasso_level_params but rho_l carries log(ed/s) instead of its
/// square root.
LevelParams slope_level_params(const ProcedureConstants& consts, int d,
                               std::size_t N, int level,
                               std::optional<double> r_hat_override = {});

enum class Penalty { Lasso, Slope };

LevelParams level_params(Penalty penalty, const ProcedureConstants& consts,
                         int d, std::size_t N, int level,
                         std::optional<double> r_hat_override = {});

/// Monte-Carlo estimate of the Gaussian mean width
/// E sup_{v in rho*B1 cap r*B2} <g, v>, with the inner supremum computed
/// in closed form per draw.
double gaussian_mean_width_mc(double rho, double r, int d,
                              std::size_t samples, std::uint64_t seed);

/// Exact inner supremum sup_{v in rho*B1 cap r*B2} <g, v> for one vector g.
double l1l2_support(const std::vector<double>& g, double rho, double r);

enum class FixedPointKind { Quadratic, Multiplier };

/// Smallest r on [1e-12, rho*sqrt(d)] with
///   c_width * width(rho, r, d) <= kappa sqrt(N) r      (quadratic), or
///   sigma * c_width * width(rho, r, d) <= kappa sqrt(N) r^2  (multiplier),
/// where width(rho, r, d) = min(rho sqrt(log(e d r^2/rho^2)), r sqrt(d))
/// clipped to the k = (rho/r)^2 in [1, d] regime. Bisection to relative
/// tolerance 1e-6; throws std::runtime_error if the bound never crosses.
double fixed_point_radius(double rho, int d, std::size_t N, double sigma,
                          double kappa, FixedPointKind kind,
                          double c_width = 1.0);

/// Closed-form width bound used by fixed_point_radius.
double width_bound(double rho, double r, int d);

/// (r0 / 2^j) for j = 0..depth-1.
std::vector<double> radius_grid(double r0, int depth);

}  // namespace momtour

#endif  // MOMTOUR_COMPLEXITY_HPP
