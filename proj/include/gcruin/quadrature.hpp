#pragma once

#include <functional>
#include <span>

namespace gcruin::quad {

using Integrand = std::function<double(double)>;

/// Relative tolerance handed to the Gauss-Kronrod driver. Integrands in this
/// library are O(1), so this keeps absolute errors well below 1e-10.
inline constexpr double kTolerance = 1e-12;

/// Adaptive Gauss-Kronrod on [a, b], split at every breakpoint inside (a, b).
/// Long ranges (b/a > 100, a > 0) are further cut into geometric decades.
double integrate(const Integrand& f, double a, double b, std::span<const double> breaks = {},
                 double tol = kTolerance);

struct TailIntegral {
  double value = 0.0;
  double last_chunk = 0.0;  // contribution of the final decade examined
  double reached = 0.0;     // right end of the last decade
  bool converged = false;
};

/// Integral over [a, inf) accumulated decade by decade until a decade adds
/// less than `rel_stop` of the running total, or `bound` is reached.
TailIntegral integrate_to_infinity(const Integrand& f, double a, std::span<const double> breaks = {},
                                   double bound = 1e100, double rel_stop = 1e-14);

/// Tanh-sinh on [a, b]; tolerates integrable endpoint singularities.
double integrate_singular(const Integrand& f, double a, double b, double tol = 1e-12);

}  // namespace gcruin::quad
