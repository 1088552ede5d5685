#include "gcruin/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gcruin/errors.hpp"

namespace gcruin::quad {
namespace {

constexpr unsigned kMaxDepth = 18;

double gk(const Integrand& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, kMaxDepth, tol, &err);
}

// Cuts [a, b] into pieces no wider than one decade once away from zero.
void geometric_pieces(double a, double b, std::vector<double>& cuts) {
  double x = a > 0.0 ? a : 1.0;
  if (a <= 0.0 && b > 1.0) cuts.push_back(1.0);
  while (x * 10.0 < b) {
    x *= 10.0;
    cuts.push_back(x);
  }
}

}  // namespace

double integrate(const Integrand& f, double a, double b, std::span<const double> breaks, double tol) {
  if (!(b > a)) return 0.0;
  if (!std::isfinite(a) || !std::isfinite(b)) throw NumericError("integrate: infinite limits");
  std::vector<double> cuts;
  cuts.push_back(a);
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  if (b > 100.0 * std::max(a, 1.0)) geometric_pieces(a, b, cuts);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += gk(f, cuts[i], cuts[i + 1], tol);
  return total;
}

TailIntegral integrate_to_infinity(const Integrand& f, double a, std::span<const double> breaks,
                                   double bound, double rel_stop) {
  TailIntegral out;
  double left = a;
  double right = a > 0.0 ? a * 10.0 : 1.0;
  // Finite breakpoints beyond `a` are swallowed into the first chunk.
  for (double x : breaks)
    if (x > left && std::isfinite(x)) right = std::max(right, x);
  int chunks = 0;
  while (true) {
    const double piece = integrate(f, left, right, breaks);
    out.value += piece;
    out.last_chunk = piece;
    out.reached = right;
    ++chunks;
    if (chunks >= 2 && std::abs(piece) <= rel_stop * std::abs(out.value)) {
      out.converged = true;
      break;
    }
    if (piece == 0.0 && chunks >= 2) {
      out.converged = true;
      break;
    }
    if (right >= bound) break;
    left = right;
    right *= 10.0;
  }
  return out;
}

double integrate_singular(const Integrand& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  // Abscissae collapse onto the endpoints on relatively tiny intervals.
  if (b - a <= 1e-9 * std::max(std::abs(a), std::abs(b))) return gk(f, a, b, tol);
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  // Integrate over y in [-1/4, 1/4]: the library's complement-based endpoint
  // handling only engages for endpoints of magnitude below 1/2.
  const double width = 2.0 * (b - a);
  auto g = [&](double y) { return f(a + (y + 0.25) * width); };
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  return width * integrator.integrate(g, -0.25, 0.25, tol, &err, &l1, &levels);
}

}  // namespace gcruin::quad
