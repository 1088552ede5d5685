#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gcruin/convolutions.hpp"
#include "gcruin/measures.hpp"
#include "gcruin/stats.hpp"
#include "gcruin/williamson.hpp"

namespace gcruin {

/// Claims X_n = mu-walk from 0, premiums u (+) Y_n = nu-walk from u, claim
/// instants Poisson(lambda). beta scales premiums in the alpha-stable model.
struct RiskModel {
  ConvolutionAlgebra algebra;
  Distribution claims;
  Distribution premiums;
  double u = 0.0;
  double lambda = 1.0;
  double beta = 1.0;
};

/// Validates ranges of u, lambda and beta.
void validate(const RiskModel& m);

/// First safety condition E(premium side) - E(claim side) at time t. The
/// formula fields carry the closed-form expressions as printed in the source
/// model where those differ from the definition-level expectations.
struct SafetyReport {
  double margin = 0.0;
  bool condition_holds = false;
  double t = 0.0;
  double premium_side = 0.0;
  double claim_side = 0.0;
  std::optional<double> formula_premium_side;
  std::optional<double> formula_margin;
};

/// Arrival times S_1 < S_2 < ... <= t_max of a Poisson(lambda) process.
std::vector<double> sample_claim_times(double lambda, double t_max, std::uint64_t seed);

/// E X_t = lambda t int x e^{-lambda t (1 - F(x))} dF(x) for continuous claims.
double expected_claim_side_max(const RiskModel& m, double t);

struct MaxPremiumSide {
  double definition;  // sum_n Poisson(lambda t; n) E(u v max(V_1..V_n))
  double formula;     // the same expression with lambda t multiplying the atom term and integral
};

/// E(u (+) Y_t) for the max algebra.
MaxPremiumSide expected_premium_side_max(const RiskModel& m, double t);

SafetyReport safety_condition_max(const RiskModel& m, double t);

/// Result of a numeric x -> infinity limit.
struct LimitValue {
  double value;
  bool finite;
  bool closed_form;
};

/// E X_t^alpha = lim_x x^alpha (1 - e^{-lambda t (1 - H(x))}) on the grid x^alpha = 10^k.
LimitValue expected_alpha_moment_kendall_claims(const KendallLawPair& pair, double lambda, double t);
/// Closed form lambda t c^{-alpha} / 2 for lom_kendall(c, alpha) claims, numeric limit otherwise.
LimitValue expected_alpha_moment_kendall_claims(const Distribution& mu, double alpha, double lambda, double t);

struct KendallPremiumMoment {
  LimitValue definition;  // u^alpha + E Y_t^alpha
  LimitValue formula;     // u^alpha e^{-lambda t (1 - J(u))} + lim [x^alpha - (x^alpha - u^alpha) e^{-lambda t (1 - J(x))}]
};

KendallPremiumMoment expected_alpha_moment_kendall_premiums(double u, const KendallLawPair& pair, double lambda,
                                                            double t);
/// Uses the lack-of-memory closed forms when nu = lom_kendall(c, alpha).
KendallPremiumMoment expected_alpha_moment_kendall_premiums(double u, const Distribution& nu, double alpha,
                                                            double lambda, double t);

/// Kendall model with lom_kendall claims and premiums sharing c and alpha.
SafetyReport safety_condition_kendall(const RiskModel& m, double t);

/// rho = gamma mu_alpha / beta^alpha for premiums lom_alpha(gamma, alpha); infinity if mu_alpha is.
double net_profit_alpha(const RiskModel& m);

/// Monte Carlo of the premium side, claim side and their difference at time t,
/// using the statistic x for max models and x^alpha for Kendall models.
struct McSafety {
  stats::MeanSe premium_side;
  stats::MeanSe claim_side;
  stats::MeanSe margin;
};
McSafety mc_safety(const RiskModel& m, double t, std::size_t paths, std::uint64_t seed, unsigned workers = 0);

}  // namespace gcruin
