#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gcruin/measures.hpp"
#include "gcruin/risk.hpp"
#include "gcruin/rng.hpp"

namespace gcruin {

enum class RuinMethod { volterra, ode, closed_form, monte_carlo };

std::string to_string(RuinMethod m);

/// Invariants: ruin + survival = 1; ci_low <= survival <= ci_high.
struct RuinEstimate {
  double survival = 1.0;
  double ruin = 0.0;
  double ci_low = 1.0;
  double ci_high = 1.0;
  RuinMethod method = RuinMethod::closed_form;
  std::optional<long> horizon;  // claims examined; empty for infinite horizon
  std::size_t paths = 0;
  double confidence = 0.0;
  /// True when some path was still undecided at a finite horizon, so the
  /// survival estimate is biased upwards.
  bool upper_bound = false;
  /// Mean calendar time of ruin among ruined paths (claim instants Poisson(lambda)).
  std::optional<stats::MeanSe> mean_ruin_time;
};

/// Survival on an increasing grid; delta is nondecreasing.
struct SurvivalGrid {
  std::vector<double> z;
  std::vector<double> delta;

  /// Linear interpolation; 1 beyond the grid when the last value is 1,
  /// otherwise the last value.
  double at(double z) const;
};

/// rho = gamma mu_alpha / beta^alpha for the alpha-stable model with claims F
/// given on the z = U^alpha scale.
double alpha_rho(const Distribution& f_of_u_alpha, double gamma, double beta_alpha);

/// delta(z) = 1 - rho + (gamma / beta^alpha) int_0^z delta(z - x)(1 - F(x)) dx on a
/// uniform grid over [0, z_max], by product integration against the
/// piecewise-linear interpolant of delta. Throws CertainRuinError when rho >= 1.
SurvivalGrid alpha_ruin_volterra(const Distribution& f_of_u_alpha, double gamma, double beta_alpha, double z_max,
                                 int steps);

/// |L delta(s) - (beta^alpha - gamma mu_alpha) / ((beta^alpha - gamma G(s)) s)| for each s,
/// where G(s) is the Laplace transform of 1 - F.
std::vector<double> alpha_ruin_laplace_check(const SurvivalGrid& grid, const Distribution& f_of_u_alpha,
                                             double gamma, double beta_alpha, const std::vector<double>& s_values);

/// Max renewal-equation residual at up to `samples` grid nodes, re-evaluating
/// the convolution integral by adaptive quadrature of the interpolant.
double volterra_residual(const SurvivalGrid& grid, const Distribution& f_of_u_alpha, double gamma, double beta_alpha,
                         int samples = 40);

/// Premiums must be lom_alpha(gamma, alpha) with the algebra's alpha.
/// z_max <= 0 selects max(10, 5 u^alpha).
RuinEstimate alpha_ruin(const RiskModel& m, int steps = 2000, double z_max = 0.0);

/// Survival of the max model at u: exp(-int_u^{u*} G f / (1 - F G) dy) with
/// u* = sup supp F; 0 when that integral diverges.
double max_survival(double u, const Distribution& F, const Distribution& G);

/// max_survival on a grid (any order; returned sorted ascending).
SurvivalGrid max_ruin_ode(const Distribution& F, const Distribution& G, std::vector<double> u_grid);

/// max |delta(u)(1 - F(u)G(u)) - int_u^inf delta(y) F(y) dG(y)| over the grid.
double max_integral_residual(const SurvivalGrid& grid, const Distribution& F, const Distribution& G);

/// sqrt((1 - a/b) / (1 - u^2/(ab))) for claims U(0, a), premiums U(0, b), 0 < a < b.
double max_uniform_closed_form(double u, double a, double b);

/// Premiums lom_max(a): survival 1 iff P(X < u v a) = 1.
RuinEstimate max_ruin_lom(double u, double a, const Distribution& F);

struct McOptions {
  long horizon = 10000;
  std::size_t paths = 100000;
  std::uint64_t seed = rng::kDefaultSeed;
  double confidence = 0.99;
  unsigned workers = 0;
};

/// Paired walks: claims from 0 (child key 1), premiums from u (child key 2);
/// survival requires u (+) Y_k > X_k for k = 1..horizon. Max walks stop
/// once the outcome can no longer change.
RuinEstimate mc_ruin(const RiskModel& m, const McOptions& opt = {});

/// Survival over the first N(t) ~ Poisson(lambda t) claims. N(t) is a quantile
/// of one uniform per path, so runs at several t share random numbers.
RuinEstimate mc_ruin_finite_t(const RiskModel& m, double t, const McOptions& opt = {});

struct LambdaCheck {
  stats::MeanSe direct;     // Lambda(v, u) from (v, u)
  stats::MeanSe recursive;  // E[1{y1 > x1} Lambda(x1, y1)]
  double residual;          // direct - recursive
  double ci_low;
  double ci_high;
  bool contains_zero;
};

/// Two estimators of Lambda(v, u) = P(u (+) Y_k > v (+) X_k, k = 1..horizon) for the
/// Kendall model. The recursive side draws (x1, y1) by inverting the one-step
/// transition cdfs of delta_v <> mu and delta_u <> nu.
LambdaCheck kendall_lambda_recursion_check(double v, double u, const RiskModel& m, std::size_t outer,
                                           std::size_t inner, long horizon, std::size_t direct_paths,
                                           std::uint64_t seed = rng::kDefaultSeed, double confidence = 0.99,
                                           unsigned workers = 0);

}  // namespace gcruin
