#include "gcruin/williamson.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gcruin/errors.hpp"
#include "gcruin/quadrature.hpp"

namespace gcruin {

namespace {

// int_0^{top^alpha} g(v^{1/alpha}) dv, integrated in whichever variable keeps
// the integrand free of endpoint singularities: s for alpha >= 1, v = s^alpha otherwise.
double power_integral(const RealFn& g, double alpha, double top, const std::vector<double>& s_breaks) {
  std::vector<double> breaks;
  if (alpha >= 1.0) {
    for (double b : s_breaks)
      if (b > 0.0 && b < top) breaks.push_back(b);
    auto f = [&](double x) { return alpha * std::pow(x, alpha - 1.0) * g(x); };
    return quad::integrate(f, 0.0, top, breaks);
  }
  for (double b : s_breaks)
    if (b > 0.0 && b < top) breaks.push_back(std::pow(b, alpha));
  auto f = [&](double v) { return g(std::pow(v, 1.0 / alpha)); };
  return quad::integrate(f, 0.0, std::pow(top, alpha), breaks);
}

}  // namespace

double psi(double s, double alpha) { return s < 1.0 ? 1.0 - std::pow(s, alpha) : 0.0; }

KendallLawPair kendall_pair(const Distribution& law, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("kendall_pair: alpha must be positive");
  KendallLawPair pair;
  pair.alpha = alpha;
  pair.F = [law](double t) { return law.cdf(t); };
  pair.density = [law](double t) { return law.density(t); };
  const auto& fam = law.family();

  if (law.is_point()) {
    const double a = law.atoms()[0].location;
    pair.H = [a, alpha](double t) { return t > a ? 1.0 - std::pow(a / t, alpha) : 0.0; };
    pair.H_tail = [a, alpha](double t) { return t > a ? std::pow(a / t, alpha) : 1.0; };
    return pair;
  }
  if (fam.is("lom_kendall") && fam.params[1] == alpha) {
    const double c = fam.params[0];
    pair.H = [c, alpha](double t) {
      const double w = std::pow(c * t, alpha);
      return c * t >= 1.0 ? 1.0 - 0.5 / w : 0.5 * w;
    };
    pair.H_tail = [c, alpha](double t) {
      const double w = std::pow(c * t, alpha);
      return c * t >= 1.0 ? 0.5 / w : 1.0 - 0.5 * w;
    };
    return pair;
  }
  if (fam.is("pareto2a") && fam.params[0] == alpha) {
    pair.H = [alpha](double t) {
      if (t <= 1.0) return 0.0;
      const double w = 1.0 - std::pow(t, -alpha);
      return w * w;
    };
    pair.H_tail = [alpha](double t) {
      if (t <= 1.0) return 1.0;
      const double w = std::pow(t, -alpha);
      return w * (2.0 - w);
    };
    return pair;
  }
  if (fam.is("uniform")) {
    const double a = fam.params[0], b = fam.params[1];
    // Beyond b, 1 - H(t) = E X^alpha t^-alpha.
    const double m = (std::pow(b, alpha + 1.0) - std::pow(a, alpha + 1.0)) / ((alpha + 1.0) * (b - a));
    auto inside = [a, b, alpha](double t) {
      const double j = (std::pow(t, alpha + 1.0) - std::pow(a, alpha + 1.0)) / (alpha + 1.0) -
                       a * (std::pow(t, alpha) - std::pow(a, alpha)) / alpha;
      return alpha * j / ((b - a) * std::pow(t, alpha));
    };
    pair.H = [a, b, alpha, m, inside](double t) {
      if (t <= a) return 0.0;
      return t <= b ? inside(t) : 1.0 - m * std::pow(t, -alpha);
    };
    pair.H_tail = [a, b, alpha, m, inside](double t) {
      if (t <= a) return 1.0;
      return t <= b ? 1.0 - inside(t) : m * std::pow(t, -alpha);
    };
    return pair;
  }

  // H(t) = t^-alpha int_0^{t^alpha} F(v^{1/alpha}) dv and 1 - H likewise with the survival function.
  auto tail = [law, alpha](double t) {
    if (t <= 0.0) return 1.0;
    auto s = [&](double x) { return law.survival(x); };
    return power_integral(s, alpha, t, law.breakpoints()) / std::pow(t, alpha);
  };
  pair.H_tail = tail;
  pair.H = [law, alpha, tail](double t) {
    if (t <= 0.0) return 0.0;
    const double q = tail(t);
    if (q < 0.5) return 1.0 - q;
    auto f = [&](double x) { return law.cdf(x); };
    return power_integral(f, alpha, t, law.breakpoints()) / std::pow(t, alpha);
  };
  return pair;
}

KendallLawPair kendall_pair_from_transform(RealFn H, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("kendall_pair_from_transform: alpha must be positive");
  KendallLawPair pair;
  pair.alpha = alpha;
  pair.H = H;
  pair.H_tail = [H](double t) { return 1.0 - H(t); };
  pair.F = [H, alpha](double t) { return std::clamp(williamson_invert(H, alpha, t), 0.0, 1.0); };
  pair.density = [F = pair.F](double t) { return ridders_derivative(F, t, 0.05 * t).value; };
  return pair;
}

double williamson_transform(const RealFn& F, double alpha, double t) {
  if (t < 0.0) throw ParameterError("williamson_transform: t must be >= 0");
  if (t == 0.0) return 1.0;
  return power_integral(F, alpha, 1.0 / t, {}) * std::pow(t, alpha);
}

double williamson_transform(const Distribution& law, double alpha, double t, WilliamsonForm form) {
  if (t < 0.0) throw ParameterError("williamson_transform: t must be >= 0");
  if (t == 0.0) return 1.0;
  switch (form) {
    case WilliamsonForm::kernel: return char_fn(ConvolutionAlgebra::kendall(alpha), law, t);
    case WilliamsonForm::cdf_integral: {
      auto f = [&](double x) { return law.cdf(x); };
      return power_integral(f, alpha, 1.0 / t, law.breakpoints()) * std::pow(t, alpha);
    }
    case WilliamsonForm::by_parts: {
      const double top = 1.0 / t;
      double m = 0.0;
      for (const auto& a : law.atoms())
        if (a.location <= top) m += a.mass * std::pow(a.location, alpha);
      for (const auto& c : law.components()) {
        const auto& l = *c.law;
        const double end = std::min(l.upper(), top / c.scale);
        if (end <= l.lower()) continue;
        std::vector<double> cuts{l.lower()};
        for (double k : l.kinks())
          if (k > l.lower() && k < end) cuts.push_back(k);
        cuts.push_back(end);
        auto g = [&](double x) { return std::pow(x, alpha) * l.density(x); };
        double part = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) part += quad::integrate_singular(g, cuts[i], cuts[i + 1]);
        m += c.weight * std::pow(c.scale, alpha) * part;
      }
      return law.cdf(top) - std::pow(t, alpha) * m;
    }
  }
  throw UnsupportedError("williamson_transform: unknown form");
}

namespace {

// Ridders' extrapolation of one difference stencil: side 0 is central
// (error even in h), side +1/-1 one-sided (error in all powers of h).
Derivative ridders(const RealFn& f, double x, double h0, int side) {
  constexpr int kTab = 12;
  constexpr double kCon = 1.4;
  constexpr double kSafe = 2.0;
  const double step = side == 0 ? kCon * kCon : kCon;
  const double fx = side == 0 ? 0.0 : f(x);
  auto diff = [&](double h) {
    if (side == 0) return (f(x + h) - f(x - h)) / (2.0 * h);
    return side > 0 ? (f(x + h) - fx) / h : (fx - f(x - h)) / h;
  };
  std::array<std::array<double, kTab>, kTab> a{};
  double h = h0;
  a[0][0] = diff(h);
  Derivative best{a[0][0], kInf};
  for (int i = 1; i < kTab; ++i) {
    h /= kCon;
    a[0][i] = diff(h);
    double fac = step;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= step;
      const double err = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
      if (err <= best.error) best = {a[j][i], err};
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= kSafe * best.error) break;
  }
  return best;
}

}  // namespace

Derivative ridders_derivative(const RealFn& f, double x, double h0) {
  Derivative best = ridders(f, x, h0, 0);
  // Near a kink of f' the central stencil straddles it; a one-sided one does not.
  if (best.error > 1e-10 * std::max(1.0, std::abs(best.value))) {
    for (int side : {-1, 1}) {
      const Derivative d = ridders(f, x, h0, side);
      if (d.error < best.error) best = d;
    }
  }
  return best;
}

double williamson_invert(const RealFn& H, double alpha, double t, const RealFn& dH) {
  if (!(t > 0.0)) throw ParameterError("williamson_invert: t must be positive");
  const double d = dH ? dH(t) : ridders_derivative(H, t, 0.05 * t).value;
  if (!std::isfinite(d)) throw NumericError("williamson_invert: non-finite derivative at t = " + std::to_string(t));
  return H(t) + t * d / alpha;
}

double n_step_cdf(const KendallLawPair& pair, int n, double t) {
  if (n < 0) throw ParameterError("n_step_cdf: n must be >= 0");
  if (n == 0) return t >= 0.0 ? 1.0 : 0.0;
  if (t <= 0.0) return pair.F(t);
  const double h = pair.H(t);
  const double f = pair.F(t);
  return std::clamp(std::pow(h, n - 1) * (h + n * (f - h)), 0.0, 1.0);
}

double compound_cdf(const KendallLawPair& pair, double lambda, double t, double x) {
  if (lambda < 0.0 || t < 0.0) throw ParameterError("compound_cdf: lambda and t must be >= 0");
  const double lt = lambda * t;
  if (x < 0.0) return 0.0;
  if (x == 0.0) return std::exp(-lt) * (1.0 + lt * pair.F(0.0));
  const double h = pair.H(x);
  return std::clamp((1.0 + lt * (pair.F(x) - h)) * std::exp(-lt * pair.H_tail(x)), 0.0, 1.0);
}

double shifted_n_step_cdf(double u, const KendallLawPair& pair, int n, double t) {
  if (n < 0) throw ParameterError("shifted_n_step_cdf: n must be >= 0");
  if (t < u) return 0.0;
  if (n == 0) return 1.0;
  if (u == 0.0) return n_step_cdf(pair, n, t);
  const double j = pair.H(t);
  const double g = pair.F(t);
  return std::clamp(std::pow(j, n - 1) * (j + n * psi(u / t, pair.alpha) * (g - j)), 0.0, 1.0);
}

double shifted_n_step_cdf_mixture(double u, const KendallLawPair& pair, int n, double t) {
  if (t < u) return 0.0;
  if (n == 0) return 1.0;
  const double p = psi(u / t, pair.alpha);
  const double j = pair.H(t);
  const double gn = std::pow(j, n - 1) * (j + n * (pair.F(t) - j));
  return p * gn + (1.0 - p) * std::pow(j, n);
}

double shifted_n_step_density(double u, const KendallLawPair& pair, int n, double t) {
  if (n < 1 || t <= u || t <= 0.0) return 0.0;
  const double a = pair.alpha;
  const double j = pair.H(t);
  const double d = pair.F(t) - j;
  const double dj = a * d / t;
  const double p = psi(u / t, a);
  const double dp = u > 0.0 ? a * std::pow(u / t, a) / t : 0.0;
  const double bracket = j + n * p * d;
  const double dbracket = dj + n * dp * d + n * p * (pair.density(t) - dj);
  const double lead = n >= 2 ? (n - 1) * std::pow(j, n - 2) * dj * bracket : 0.0;
  return lead + std::pow(j, n - 1) * dbracket;
}

double shifted_compound_cdf(double u, const KendallLawPair& pair, double lambda, double t, double x) {
  if (x < u) return 0.0;
  const double lt = lambda * t;
  if (x <= 0.0) return compound_cdf(pair, lambda, t, x);
  const double j = pair.H(x);
  const double p = psi(u / x, pair.alpha);
  return std::clamp((1.0 + lt * p * (pair.F(x) - j)) * std::exp(-lt * pair.H_tail(x)), 0.0, 1.0);
}

double transition_cdf_points(const ConvolutionAlgebra& alg, double x, double y, double t) {
  if (alg.kind() != AlgebraKind::kendall) throw UnsupportedError("transition_cdf_points: Kendall algebra only");
  if (!(t > 0.0)) throw ParameterError("transition_cdf_points: t must be positive");
  if (x > t || y > t) return 0.0;
  return 1.0 - std::pow(x * y / (t * t), alg.alpha());
}

double one_step_from_point_cdf(double v, const KendallLawPair& pair, double t) {
  if (!(t > 0.0)) throw ParameterError("one_step_from_point_cdf: t must be positive");
  if (v > t) return 0.0;
  const double p = psi(v / t, pair.alpha);
  return p * pair.F(t) + (1.0 - p) * pair.H(t);
}

double poisson_mixture(const std::function<double(int)>& f, double mean, double tail) {
  if (mean < 0.0) throw ParameterError("poisson_mixture: mean must be >= 0");
  if (mean == 0.0) return f(0);
  const double log_mean = std::log(mean);
  const int cap = static_cast<int>(mean + 60.0 * std::sqrt(mean) + 200.0);
  double sum = 0.0;
  double cum = 0.0;
  for (int n = 0; n <= cap; ++n) {
    const double w = std::exp(n * log_mean - mean - std::lgamma(n + 1.0));
    cum += w;
    if (w > 0.0) sum += w * f(n);
    if (n >= mean && 1.0 - cum < tail) break;
  }
  return sum;
}

}  // namespace gcruin
