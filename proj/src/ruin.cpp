#include "gcruin/ruin.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gcruin/errors.hpp"
#include "gcruin/parallel.hpp"
#include "gcruin/quadrature.hpp"
#include "gcruin/walks.hpp"
#include "gcruin/williamson.hpp"

namespace gcruin {

std::string to_string(RuinMethod m) {
  switch (m) {
    case RuinMethod::volterra: return "volterra";
    case RuinMethod::ode: return "ode";
    case RuinMethod::closed_form: return "closed_form";
    case RuinMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

double SurvivalGrid::at(double x) const {
  if (z.empty()) throw ParameterError("SurvivalGrid: empty grid");
  if (x <= z.front()) return delta.front();
  if (x >= z.back()) return delta.back();
  const auto it = std::upper_bound(z.begin(), z.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - z.begin()) - 1;
  const double w = (x - z[i]) / (z[i + 1] - z[i]);
  return delta[i] + w * (delta[i + 1] - delta[i]);
}

namespace {

RuinEstimate exact(double survival, RuinMethod method) {
  RuinEstimate r;
  r.survival = std::clamp(survival, 0.0, 1.0);
  r.ruin = 1.0 - r.survival;
  r.ci_low = r.ci_high = r.survival;
  r.method = method;
  return r;
}

void check_alpha_inputs(double gamma, double beta_alpha) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("alpha ruin: gamma must be positive");
  if (!(beta_alpha > 0.0) || !std::isfinite(beta_alpha)) throw ParameterError("alpha ruin: beta^alpha must be positive");
}

}  // namespace

double alpha_rho(const Distribution& f, double gamma, double beta_alpha) {
  check_alpha_inputs(gamma, beta_alpha);
  return gamma * moment_alpha(f, 1.0) / beta_alpha;
}

SurvivalGrid alpha_ruin_volterra(const Distribution& f, double gamma, double beta_alpha, double z_max, int steps) {
  check_alpha_inputs(gamma, beta_alpha);
  if (!(z_max > 0.0) || !std::isfinite(z_max)) throw ParameterError("alpha_ruin_volterra: z_max must be positive");
  if (steps < 1) throw ParameterError("alpha_ruin_volterra: steps must be >= 1");
  const double rho = alpha_rho(f, gamma, beta_alpha);
  if (!(rho < 1.0)) throw CertainRuinError(rho);
  const double kappa = gamma / beta_alpha;
  const auto n = static_cast<std::size_t>(steps);
  const double h = z_max / steps;
  const auto breaks = f.breakpoints();

  // Cell m: A_m = int S (1 - theta), B_m = int S theta, theta = (x - x_m) / h.
  std::vector<double> a(n), b(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double x0 = static_cast<double>(m) * h;
    const double x1 = static_cast<double>(m + 1) * h;
    auto lin = [&](double x) { return f.survival(x) * (x - x0) / h; };
    auto flat = [&](double x) { return f.survival(x); };
    b[m] = quad::integrate(lin, x0, x1, breaks);
    a[m] = quad::integrate(flat, x0, x1, breaks) - b[m];
  }

  SurvivalGrid g;
  g.z.resize(n + 1);
  g.delta.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g.z[i] = static_cast<double>(i) * h;
  g.delta[0] = 1.0 - rho;
  const double lead = 1.0 - kappa * a[0];
  for (std::size_t i = 1; i <= n; ++i) {
    double acc = 0.0;
    for (std::size_t m = 1; m < i; ++m) acc += a[m] * g.delta[i - m];
    for (std::size_t m = 0; m < i; ++m) acc += b[m] * g.delta[i - m - 1];
    g.delta[i] = std::min(1.0, ((1.0 - rho) + kappa * acc) / lead);
  }
  return g;
}

std::vector<double> alpha_ruin_laplace_check(const SurvivalGrid& grid, const Distribution& f, double gamma,
                                             double beta_alpha, const std::vector<double>& s_values) {
  check_alpha_inputs(gamma, beta_alpha);
  const double mu = moment_alpha(f, 1.0);
  const auto breaks = f.breakpoints();
  std::vector<double> out;
  for (double s : s_values) {
    if (!(s > 0.0)) throw ParameterError("alpha_ruin_laplace_check: s must be positive");
    // Exact transform of the piecewise-linear interpolant, constant beyond the grid.
    double lhs = 0.0;
    for (std::size_t i = 0; i + 1 < grid.z.size(); ++i) {
      const double h = grid.z[i + 1] - grid.z[i];
      const double e = std::exp(-s * grid.z[i]);
      const double e0 = -e * std::expm1(-s * h) / s;
      const double e1 = e * (1.0 - std::exp(-s * h) * (1.0 + s * h)) / (s * s);
      lhs += grid.delta[i] * e0 + (grid.delta[i + 1] - grid.delta[i]) / h * e1;
    }
    lhs += grid.delta.back() * std::exp(-s * grid.z.back()) / s;
    auto tail = [&](double z) { return std::exp(-s * z) * f.survival(z); };
    const double g_hat = quad::integrate_to_infinity(tail, 0.0, breaks).value;
    const double rhs = (beta_alpha - gamma * mu) / ((beta_alpha - gamma * g_hat) * s);
    out.push_back(std::abs(lhs - rhs));
  }
  return out;
}

double volterra_residual(const SurvivalGrid& grid, const Distribution& f, double gamma, double beta_alpha,
                         int samples) {
  check_alpha_inputs(gamma, beta_alpha);
  const double rho = alpha_rho(f, gamma, beta_alpha);
  const double kappa = gamma / beta_alpha;
  const std::size_t n = grid.z.size();
  const std::size_t stride = std::max<std::size_t>(1, n / static_cast<std::size_t>(std::max(samples, 1)));
  const auto fb = f.breakpoints();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; i += stride) {
    const double z = grid.z[i];
    // Substituted w = z - x so the interpolant's kinks sit exactly on breakpoints.
    std::vector<double> breaks;
    for (std::size_t j = 1; j < i; ++j) breaks.push_back(grid.z[j]);
    for (double b : fb)
      if (b > 0.0 && b < z) breaks.push_back(z - b);
    std::sort(breaks.begin(), breaks.end());
    auto integrand = [&](double w) { return grid.at(w) * f.survival(z - w); };
    const double conv = quad::integrate(integrand, 0.0, z, breaks);
    worst = std::max(worst, std::abs(grid.delta[i] - (1.0 - rho) - kappa * conv));
  }
  return worst;
}

RuinEstimate alpha_ruin(const RiskModel& m, int steps, double z_max) {
  validate(m);
  if (m.algebra.kind() != AlgebraKind::alpha_stable) throw UnsupportedError("alpha_ruin: requires the alpha_stable algebra");
  const double a = m.algebra.alpha();
  const auto& tag = m.premiums.family();
  if (!tag.is("lom_alpha") || std::abs(tag.params[1] - a) > 1e-15)
    throw UnsupportedError("alpha_ruin: premiums must be lom_alpha(gamma, alpha) with the algebra's alpha");
  const double z = std::pow(m.u, a);
  if (!(z_max > 0.0)) z_max = std::max(10.0, 5.0 * z);
  if (z > z_max) throw ParameterError("alpha_ruin: u^alpha beyond z_max");
  const auto grid = alpha_ruin_volterra(pushforward_power(m.claims, a), tag.params[0], std::pow(m.beta, a), z_max, steps);
  return exact(grid.at(z), RuinMethod::volterra);
}

namespace {

// G f / (1 - F G), with 1 - F G from the survivals.
double max_rate(const Distribution& F, const Distribution& G, double y) {
  const double sf = F.survival(y);
  const double sg = G.survival(y);
  const double den = sf + sg - sf * sg;
  const double num = (1.0 - sg) * F.density(y);
  if (num == 0.0) return 0.0;
  return num / den;
}

std::vector<double> joint_breaks(const Distribution& F, const Distribution& G) {
  auto b = F.breakpoints();
  const auto g = G.breakpoints();
  b.insert(b.end(), g.begin(), g.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

void require_continuous(const Distribution& F, const Distribution& G, const char* op) {
  if (F.has_atoms() || G.has_atoms())
    throw UnsupportedError(std::string(op) + ": claim and premium laws must be absolutely continuous");
}

}  // namespace

double max_survival(double u, const Distribution& F, const Distribution& G) {
  require_continuous(F, G, "max_survival");
  const double top = F.support_upper();
  if (u >= top) return 1.0;
  auto rate = [&](double y) { return max_rate(F, G, y); };
  const auto breaks = joint_breaks(F, G);
  if (!std::isfinite(top)) {
    const auto r = quad::integrate_to_infinity(rate, u, breaks);
    // Past ~745 the exponential underflows; the integral is treated as divergent.
    return r.converged && r.value < 745.0 ? std::exp(-r.value) : 0.0;
  }
  // A non-integrable singularity at top shows up as growth between two truncations.
  const double w = top - u;
  // Fixed rule in s = log((top - y) / w), so the cost does not grow as u -> top.
  auto log_rate = [&](double s) {
    const double d = w * std::exp(s);
    return rate(top - d) * d;
  };
  const double probe = boost::math::quadrature::gauss<double, 30>::integrate(log_rate, std::log(1e-12), std::log(1e-6));
  if (probe > 0.5) return 0.0;
  std::vector<double> cuts{u};
  for (double b : breaks)
    if (b > u && b < top) cuts.push_back(b);
  cuts.push_back(top);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += quad::integrate_singular(rate, cuts[i], cuts[i + 1]);
  return std::exp(-total);
}

SurvivalGrid max_ruin_ode(const Distribution& F, const Distribution& G, std::vector<double> u_grid) {
  require_continuous(F, G, "max_ruin_ode");
  std::sort(u_grid.begin(), u_grid.end());
  SurvivalGrid g;
  for (double u : u_grid) {
    if (!(u >= 0.0) || !std::isfinite(u)) throw ParameterError("max_ruin_ode: grid points must be finite and >= 0");
    g.z.push_back(u);
    g.delta.push_back(max_survival(u, F, G));
  }
  return g;
}

double max_integral_residual(const SurvivalGrid& grid, const Distribution& F, const Distribution& G) {
  require_continuous(F, G, "max_integral_residual");
  const double top = F.support_upper();
  const auto breaks = joint_breaks(F, G);
  auto integrand = [&](double y) { return max_survival(y, F, G) * F.cdf(y) * G.density(y); };
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.z.size(); ++i) {
    const double u = grid.z[i];
    const double lhs = grid.delta[i] * (F.survival(u) + G.survival(u) - F.survival(u) * G.survival(u));
    double rhs;
    if (std::isfinite(top)) {
      // delta = F = 1 beyond top.
      rhs = quad::integrate(integrand, u, std::max(u, top), breaks, 1e-10) + G.survival(std::max(u, top));
    } else {
      rhs = quad::integrate_to_infinity(integrand, u, breaks).value;
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double max_uniform_closed_form(double u, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("max_uniform_closed_form: a and b must be positive");
  if (u < 0.0) throw ParameterError("max_uniform_closed_form: u must be >= 0");
  if (u >= a) return 1.0;
  if (a >= b) return 0.0;
  return std::sqrt((1.0 - a / b) / (1.0 - u * u / (a * b)));
}

RuinEstimate max_ruin_lom(double u, double a, const Distribution& F) {
  if (!(a > 0.0)) throw ParameterError("max_ruin_lom: a must be positive");
  if (u < 0.0) throw ParameterError("max_ruin_lom: u must be >= 0");
  // Premium side is u v a forever; claim records eventually exceed any level F charges.
  return exact(F.cdf_left(std::max(u, a)) >= 1.0 ? 1.0 : 0.0, RuinMethod::closed_form);
}

namespace {

struct Outcome {
  long ruin_step;  // first k >= 1 with u (+) Y_k <= X_k; 0 if none
  bool decided;    // the outcome cannot change after the examined steps
};

// Draws of U^alpha for the z-scale recursion.
class PowerSampler {
 public:
  PowerSampler(const Distribution& d, double alpha) : d_(d), alpha_(alpha) {
    const auto& t = d.family();
    if (t.is("lom_alpha") && std::abs(t.params[1] - alpha) < 1e-15) rate_ = t.params[0];
  }
  double operator()(double q) const {
    if (rate_ > 0.0) return -std::log1p(-q) / rate_;
    const double x = d_.draw(q);
    return alpha_ == 1.0 ? x : std::pow(x, alpha_);
  }

 private:
  const Distribution& d_;
  double alpha_;
  double rate_ = 0.0;
};

class PairSimulator {
 public:
  explicit PairSimulator(const RiskModel& m)
      : kind_(m.algebra.kind()),
        alpha_(kind_ == AlgebraKind::alpha_stable ? m.algebra.alpha() : 1.0),
        beta_alpha_(std::pow(m.beta, alpha_)),
        claims_(m.algebra, m.claims),
        premiums_(m.algebra, m.premiums),
        zx_(m.claims, alpha_),
        zy_(m.premiums, alpha_),
        claim_top_(m.claims.support_upper()),
        top_is_strict_(std::isfinite(claim_top_) && m.claims.cdf_left(claim_top_) >= 1.0) {
    const bool monotone = kind_ == AlgebraKind::alpha_stable || kind_ == AlgebraKind::max ||
                          kind_ == AlgebraKind::kendall;
    null_claims_ = monotone && m.claims.is_point() && m.claims.atoms()[0].location == 0.0;
  }

  Outcome run(double x0, double y0, long n, const rng::CounterStream& s) const {
    if (n <= 0) return {0, false};
    if (null_claims_) return {y0 > x0 ? 0 : 1, true};
    const PathRandom rx(s.child(1));
    const PathRandom ry(s.child(2));
    if (kind_ == AlgebraKind::alpha_stable) {
      double zx = std::pow(x0, alpha_);
      double zy = std::pow(y0, alpha_);
      for (long k = 0; k < n; ++k) {
        const auto i = static_cast<std::uint64_t>(k);
        zx += zx_(rx.step.uniform(i));
        zy += beta_alpha_ * zy_(ry.step.uniform(i));
        if (!(zy > zx)) return {k + 1, true};
      }
      return {0, false};
    }
    double x = x0;
    double y = y0;
    const bool is_max = kind_ == AlgebraKind::max;
    if (is_max && saturated(y)) return {0, true};
    for (long k = 0; k < n; ++k) {
      const auto i = static_cast<std::uint64_t>(k);
      x = claims_.step(x, rx, i);
      y = premiums_.step(y, ry, i);
      if (!(y > x)) return {k + 1, true};
      if (is_max && saturated(y)) return {0, true};
    }
    return {0, false};
  }

 private:
  // Max claims never reach y once y passes the claim support.
  bool saturated(double y) const { return y > claim_top_ || (y >= claim_top_ && top_is_strict_); }

  AlgebraKind kind_;
  double alpha_;
  double beta_alpha_;
  WalkStepper claims_;
  WalkStepper premiums_;
  PowerSampler zx_;
  PowerSampler zy_;
  double claim_top_;
  bool top_is_strict_;
  bool null_claims_ = false;
};

void check_options(const McOptions& opt) {
  if (opt.paths < 1) throw ParameterError("mc_ruin: paths must be >= 1");
  if (!(opt.confidence > 0.0 && opt.confidence < 1.0)) throw ParameterError("mc_ruin: confidence must lie in (0, 1)");
}

RuinEstimate summarize(const std::vector<Outcome>& out, const std::vector<double>& times, const McOptions& opt) {
  std::size_t alive = 0;
  bool undecided = false;
  std::vector<double> ruined;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].ruin_step == 0) {
      ++alive;
      undecided = undecided || !out[i].decided;
    } else {
      ruined.push_back(times[i]);
    }
  }
  const auto ci = stats::wilson(alive, out.size(), opt.confidence);
  RuinEstimate r;
  r.survival = ci.estimate;
  r.ruin = 1.0 - ci.estimate;
  r.ci_low = ci.low;
  r.ci_high = ci.high;
  r.method = RuinMethod::monte_carlo;
  r.paths = out.size();
  r.confidence = opt.confidence;
  r.upper_bound = undecided;
  if (ruined.size() >= 2) r.mean_ruin_time = stats::mean_se(ruined);
  return r;
}

}  // namespace

RuinEstimate mc_ruin(const RiskModel& m, const McOptions& opt) {
  validate(m);
  check_options(opt);
  if (opt.horizon < 1) throw ParameterError("mc_ruin: horizon must be >= 1");
  const PairSimulator sim(m);
  std::vector<Outcome> out(opt.paths);
  std::vector<double> times(opt.paths, 0.0);
  parallel_for(
      opt.paths,
      [&](std::size_t i) {
        const rng::CounterStream s(rng::mix(opt.seed, i));
        out[i] = sim.run(0.0, m.u, opt.horizon, s);
        if (out[i].ruin_step > 0) {
          // Ruin happens at the k-th claim instant, a Gamma(k, lambda) time.
          const double q = s.uniform(rng::Stream::time, 0);
          times[i] = boost::math::gamma_p_inv(static_cast<double>(out[i].ruin_step), q) / m.lambda;
        }
      },
      opt.workers);
  auto r = summarize(out, times, opt);
  r.horizon = opt.horizon;
  return r;
}

RuinEstimate mc_ruin_finite_t(const RiskModel& m, double t, const McOptions& opt) {
  validate(m);
  check_options(opt);
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("mc_ruin_finite_t: t must be positive");
  const PairSimulator sim(m);
  const double lt = m.lambda * t;
  std::vector<Outcome> out(opt.paths);
  std::vector<double> times(opt.paths, 0.0);
  parallel_for(
      opt.paths,
      [&](std::size_t i) {
        const rng::CounterStream s(rng::mix(opt.seed, i));
        const long n = stats::poisson_quantile(lt, s.uniform(rng::Stream::count, 0));
        out[i] = n == 0 ? Outcome{0, true} : sim.run(0.0, m.u, n, s);
        out[i].decided = true;
        if (out[i].ruin_step > 0) {
          // Given N(t) = n, the k-th arrival is t times the k-th of n uniform order statistics.
          const double q = s.uniform(rng::Stream::time, 0);
          times[i] = t * boost::math::ibeta_inv(static_cast<double>(out[i].ruin_step),
                                                static_cast<double>(n - out[i].ruin_step + 1), q);
        }
      },
      opt.workers);
  return summarize(out, times, opt);
}

namespace {

// Generalized inverse of t -> P(delta_v <> mu <= t), which has an atom at v.
double invert_one_step(double v, const KendallLawPair& pair, double q) {
  if (v > 0.0 && q <= pair.H(v)) return v;
  double lo = v;
  double hi = std::max(2.0 * v, 1.0);
  while (one_step_from_point_cdf(v, pair, hi) < q) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericError("kendall_lambda_recursion_check: transition quantile not bracketed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (one_step_from_point_cdf(v, pair, mid) >= q)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

LambdaCheck kendall_lambda_recursion_check(double v, double u, const RiskModel& m, std::size_t outer,
                                           std::size_t inner, long horizon, std::size_t direct_paths,
                                           std::uint64_t seed, double confidence, unsigned workers) {
  validate(m);
  if (m.algebra.kind() != AlgebraKind::kendall)
    throw UnsupportedError("kendall_lambda_recursion_check: requires the kendall algebra");
  if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("kendall_lambda_recursion_check: v must be >= 0");
  if (horizon < 1 || outer < 2 || inner < 1 || direct_paths < 2)
    throw ParameterError("kendall_lambda_recursion_check: need horizon >= 1, outer >= 2, inner >= 1, direct_paths >= 2");
  const PairSimulator sim(m);
  const double a = m.algebra.alpha();
  const auto claims = kendall_pair(m.claims, a);
  const auto premiums = kendall_pair(m.premiums, a);

  std::vector<double> direct(direct_paths);
  const std::uint64_t seed_direct = rng::mix(seed, 1);
  parallel_for(
      direct_paths,
      [&](std::size_t i) {
        direct[i] = sim.run(v, u, horizon, rng::CounterStream(rng::mix(seed_direct, i))).ruin_step == 0 ? 1.0 : 0.0;
      },
      workers);

  std::vector<double> recursive(outer);
  const std::uint64_t seed_rec = rng::mix(seed, 2);
  parallel_for(
      outer,
      [&](std::size_t i) {
        const rng::CounterStream s(rng::mix(seed_rec, i));
        const double x1 = invert_one_step(v, claims, s.uniform(rng::Stream::step, 0));
        const double y1 = invert_one_step(u, premiums, s.uniform(rng::Stream::jump, 0));
        if (!(y1 > x1)) {
          recursive[i] = 0.0;
          return;
        }
        if (horizon == 1) {
          recursive[i] = 1.0;
          return;
        }
        std::size_t alive = 0;
        for (std::size_t j = 0; j < inner; ++j)
          if (sim.run(x1, y1, horizon - 1, s.child(1000 + j)).ruin_step == 0) ++alive;
        recursive[i] = static_cast<double>(alive) / static_cast<double>(inner);
      },
      workers);

  LambdaCheck r;
  r.direct = stats::mean_se(direct);
  r.recursive = stats::mean_se(recursive);
  r.residual = r.direct.mean - r.recursive.mean;
  const double se = std::hypot(r.direct.se, r.recursive.se);
  const double z = stats::z_value(confidence);
  r.ci_low = r.residual - z * se;
  r.ci_high = r.residual + z * se;
  r.contains_zero = r.ci_low <= 0.0 && 0.0 <= r.ci_high;
  return r;
}

}  // namespace gcruin
