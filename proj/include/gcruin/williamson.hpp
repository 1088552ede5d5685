#pragma once

#include <functional>
#include <optional>

#include "gcruin/convolutions.hpp"
#include "gcruin/measures.hpp"

namespace gcruin {

using RealFn = std::function<double(double)>;

/// Step cdf F of a Kendall walk together with H(t) = Phi(1/t).
/// Invariant: 0 <= H <= F <= 1 and F = H + t H' / alpha.
struct KendallLawPair {
  RealFn F;
  RealFn H;
  RealFn H_tail;   // 1 - H, evaluated without cancellation
  RealFn density;  // density of the continuous part of F
  double alpha = 1.0;
};

/// Builds the pair for a law; closed forms for point masses, lom_kendall(c, alpha)
/// and pareto_2alpha(alpha), quadrature otherwise.
KendallLawPair kendall_pair(const Distribution& law, double alpha);

/// Pair whose F is recovered from H by numerical inversion.
KendallLawPair kendall_pair_from_transform(RealFn H, double alpha);

/// Psi(s) = (1 - s^alpha)_+.
double psi(double s, double alpha);

enum class WilliamsonForm {
  kernel,        // int (1 - (ts)^alpha)_+ dF(s)
  by_parts,      // F(1/t) - t^alpha int_[0,1/t] s^alpha dF(s)
  cdf_integral,  // alpha t^alpha int_0^{1/t} s^{alpha-1} F(s) ds
};

/// Phi(t) from a cdf; uses the cdf-integral form.
double williamson_transform(const RealFn& F, double alpha, double t);
double williamson_transform(const Distribution& law, double alpha, double t,
                            WilliamsonForm form = WilliamsonForm::cdf_integral);

/// F(t) = H(t) + t H'(t) / alpha. Without dH, H' comes from adaptive
/// Richardson-extrapolated central differences.
double williamson_invert(const RealFn& H, double alpha, double t, const RealFn& dH = {});

/// Derivative by Ridders' extrapolation; falls back to one-sided stencils
/// when the central estimate does not settle.
struct Derivative {
  double value;
  double error;
};
Derivative ridders_derivative(const RealFn& f, double x, double h0);

/// P(X_n <= t) for the walk started at 0.
double n_step_cdf(const KendallLawPair& pair, int n, double t);

/// P(X_{N_t} <= x) with N_t ~ Poisson(lambda t).
double compound_cdf(const KendallLawPair& pair, double lambda, double t, double x);

/// P(u (+) Y_n <= t); the atom at u has mass J(u)^n.
double shifted_n_step_cdf(double u, const KendallLawPair& pair, int n, double t);
/// Same law written as Psi(u/t) G_n(t) + (1 - Psi(u/t)) J(t)^n.
double shifted_n_step_cdf_mixture(double u, const KendallLawPair& pair, int n, double t);
/// Density of shifted_n_step_cdf on (u, inf).
double shifted_n_step_density(double u, const KendallLawPair& pair, int n, double t);

/// P(u (+) Y_{N_t} <= x).
double shifted_compound_cdf(double u, const KendallLawPair& pair, double lambda, double t, double x);

/// delta_x <> delta_y ([0, t]) for the Kendall algebra.
double transition_cdf_points(const ConvolutionAlgebra& alg, double x, double y, double t);

/// delta_v <> mu ([0, t]).
double one_step_from_point_cdf(double v, const KendallLawPair& pair, double t);

/// sum_n Poisson(mean; n) f(n), truncated once the remaining tail is below `tail`.
double poisson_mixture(const std::function<double(int)>& f, double mean, double tail = 1e-12);

}  // namespace gcruin
