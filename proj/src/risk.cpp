#include "gcruin/risk.hpp"

#include <cmath>

#include "gcruin/errors.hpp"
#include "gcruin/parallel.hpp"
#include "gcruin/quadrature.hpp"
#include "gcruin/rng.hpp"
#include "gcruin/walks.hpp"

namespace gcruin {

namespace {

// int_a^upper f over the support of d, split at its breakpoints.
double integrate_over(const Distribution& d, const quad::Integrand& f, double a, bool* finite = nullptr) {
  const auto breaks = d.breakpoints();
  const double hi = d.support_upper();
  if (finite) *finite = true;
  if (std::isfinite(hi)) {
    if (hi <= a) return 0.0;
    std::vector<double> cuts{a};
    for (double b : breaks)
      if (b > a && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += quad::integrate_singular(f, cuts[i], cuts[i + 1]);
    return total;
  }
  const auto r = quad::integrate_to_infinity(f, a, breaks);
  if (finite) *finite = r.converged;
  return r.value;
}

void require_kind(const RiskModel& m, AlgebraKind k, const char* op) {
  if (m.algebra.kind() != k) throw UnsupportedError(std::string(op) + ": requires the " + to_string(k) + " algebra");
}

struct GridLimit {
  double value;
  bool converged;
};

// Limit of g(X) over X = 10^k, k = 0..12: three successive values within 1e-8 relative.
template <class G>
GridLimit grid_limit(G&& g) {
  std::vector<double> v;
  for (int k = 0; k <= 12; ++k) {
    v.push_back(g(std::pow(10.0, k)));
    const std::size_t n = v.size();
    if (n >= 3) {
      auto close = [](double a, double b) { return std::abs(a - b) <= 1e-8 * std::max(std::abs(a), std::abs(b)); };
      if (close(v[n - 1], v[n - 2]) && close(v[n - 2], v[n - 3])) return {v.back(), true};
    }
  }
  return {kInf, false};
}

}  // namespace

void validate(const RiskModel& m) {
  if (!(m.u >= 0.0) || !std::isfinite(m.u)) throw ParameterError("model: u must be finite and >= 0");
  if (!(m.lambda > 0.0) || !std::isfinite(m.lambda)) throw ParameterError("model: lambda must be positive");
  if (!(m.beta > 0.0) || !std::isfinite(m.beta)) throw ParameterError("model: beta must be positive");
}

std::vector<double> sample_claim_times(double lambda, double t_max, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw ParameterError("sample_claim_times: lambda must be positive");
  std::vector<double> out;
  if (!(t_max > 0.0)) return out;
  const rng::CounterStream s(seed);
  double time = 0.0;
  for (std::uint64_t k = 0;; ++k) {
    time += -std::log1p(-s.uniform(rng::Stream::time, k)) / lambda;
    if (time > t_max) break;
    out.push_back(time);
  }
  return out;
}

double expected_claim_side_max(const RiskModel& m, double t) {
  require_kind(m, AlgebraKind::max, "expected_claim_side_max");
  if (m.claims.has_atoms()) throw UnsupportedError("expected_claim_side_max: claim law must be absolutely continuous");
  const double lt = m.lambda * t;
  if (lt == 0.0) return 0.0;
  const auto& f = m.claims;
  auto integrand = [&](double x) { return x * f.density(x) * std::exp(-lt * f.survival(x)); };
  return lt * integrate_over(f, integrand, f.support_lower());
}

MaxPremiumSide expected_premium_side_max(const RiskModel& m, double t) {
  require_kind(m, AlgebraKind::max, "expected_premium_side_max");
  const double lt = m.lambda * t;
  const double u = m.u;
  const auto& g = m.premiums;
  if (lt == 0.0) return {u, 0.0};
  // E(u v M) = u + int_u^inf P(M > x) dx with P(M <= x) = exp(-lt (1 - G(x))).
  auto tail = [&](double x) { return -std::expm1(-lt * g.survival(x)); };
  bool finite = true;
  const double definition = u + integrate_over(g, tail, u, &finite);
  double formula = u * std::exp(-lt * g.survival(u));
  for (const auto& a : g.atoms())
    if (a.location > u) formula += a.mass * a.location * std::exp(-lt * g.survival(a.location));
  auto dens = [&](double x) { return x * g.density(x) * std::exp(-lt * g.survival(x)); };
  formula += integrate_over(g, dens, std::max(u, g.support_lower()));
  formula *= lt;
  return {finite ? definition : kInf, formula};
}

SafetyReport safety_condition_max(const RiskModel& m, double t) {
  validate(m);
  const auto prem = expected_premium_side_max(m, t);
  SafetyReport r;
  r.t = t;
  r.premium_side = prem.definition;
  r.claim_side = expected_claim_side_max(m, t);
  r.margin = r.premium_side - r.claim_side;
  r.condition_holds = r.margin > 0.0;
  if (std::abs(prem.formula - prem.definition) > 1e-12) {
    r.formula_premium_side = prem.formula;
    r.formula_margin = prem.formula - r.claim_side;
  }
  return r;
}

LimitValue expected_alpha_moment_kendall_claims(const KendallLawPair& pair, double lambda, double t) {
  const double lt = lambda * t;
  if (lt == 0.0) return {0.0, true, false};
  const double a = pair.alpha;
  const auto lim = grid_limit([&](double big) {
    const double x = std::pow(big, 1.0 / a);
    return -big * std::expm1(-lt * pair.H_tail(x));
  });
  return {lim.value, lim.converged, false};
}

LimitValue expected_alpha_moment_kendall_claims(const Distribution& mu, double alpha, double lambda, double t) {
  const auto& f = mu.family();
  if (f.is("lom_kendall") && f.params[1] == alpha) return {0.5 * lambda * t * std::pow(f.params[0], -alpha), true, true};
  return expected_alpha_moment_kendall_claims(kendall_pair(mu, alpha), lambda, t);
}

KendallPremiumMoment expected_alpha_moment_kendall_premiums(double u, const KendallLawPair& pair, double lambda,
                                                            double t) {
  const double a = pair.alpha;
  const double ua = std::pow(u, a);
  const double lt = lambda * t;
  const auto y = expected_alpha_moment_kendall_claims(pair, lambda, t);
  KendallPremiumMoment out;
  // (u (+) y)^alpha moments add: E(u (+) Y_t)^alpha = u^alpha + E Y_t^alpha.
  out.definition = {ua + y.value, y.finite, false};
  const double atom = u > 0.0 ? ua * std::exp(-lt * pair.H_tail(u)) : 0.0;
  const auto lim = grid_limit([&](double big) {
    const double q = pair.H_tail(std::pow(big, 1.0 / a));
    return -big * std::expm1(-lt * q) + ua * std::exp(-lt * q);
  });
  out.formula = {atom + lim.value, lim.converged, false};
  return out;
}

KendallPremiumMoment expected_alpha_moment_kendall_premiums(double u, const Distribution& nu, double alpha,
                                                            double lambda, double t) {
  const auto& f = nu.family();
  if (!(f.is("lom_kendall") && f.params[1] == alpha))
    return expected_alpha_moment_kendall_premiums(u, kendall_pair(nu, alpha), lambda, t);
  const double c = f.params[0];
  const double lt = lambda * t;
  const double ua = std::pow(u, alpha);
  const double ey = 0.5 * lt * std::pow(c, -alpha);
  const double j_tail = kendall_pair(nu, alpha).H_tail(u);
  KendallPremiumMoment out;
  out.definition = {ua + ey, true, true};
  out.formula = {ua * std::exp(-lt * j_tail) + ua + ey, true, true};
  return out;
}

SafetyReport safety_condition_kendall(const RiskModel& m, double t) {
  validate(m);
  require_kind(m, AlgebraKind::kendall, "safety_condition_kendall");
  const double a = m.algebra.alpha();
  const auto& fm = m.claims.family();
  const auto& fn = m.premiums.family();
  if (!fm.is("lom_kendall") || !fn.is("lom_kendall"))
    throw UnsupportedError("safety_condition_kendall: claims and premiums must be lom_kendall laws");
  if (fm.params[0] != fn.params[0] || fm.params[1] != a || fn.params[1] != a)
    throw UnsupportedError("safety_condition_kendall: claims and premiums must share c and the algebra's alpha");
  const auto claim = expected_alpha_moment_kendall_claims(m.claims, a, m.lambda, t);
  const auto prem = expected_alpha_moment_kendall_premiums(m.u, m.premiums, a, m.lambda, t);
  SafetyReport r;
  r.t = t;
  r.claim_side = claim.value;
  r.premium_side = prem.definition.value;
  r.margin = r.premium_side - r.claim_side;
  r.condition_holds = r.margin > 0.0;
  r.formula_premium_side = prem.formula.value;
  r.formula_margin = prem.formula.value - claim.value;
  return r;
}

double net_profit_alpha(const RiskModel& m) {
  validate(m);
  require_kind(m, AlgebraKind::alpha_stable, "net_profit_alpha");
  const double a = m.algebra.alpha();
  const auto& f = m.premiums.family();
  if (!f.is("lom_alpha") || std::abs(f.params[1] - a) > 1e-15)
    throw UnsupportedError("net_profit_alpha: premiums must be lom_alpha(gamma, alpha) with the algebra's alpha");
  const double mu_a = moment_alpha(m.claims, a);
  if (!std::isfinite(mu_a)) return kInf;
  return f.params[0] * mu_a / std::pow(m.beta, a);
}

McSafety mc_safety(const RiskModel& m, double t, std::size_t paths, std::uint64_t seed, unsigned workers) {
  validate(m);
  const auto kind = m.algebra.kind();
  if (kind != AlgebraKind::max && kind != AlgebraKind::kendall)
    throw UnsupportedError("mc_safety: max and kendall models only");
  const double a = kind == AlgebraKind::kendall ? m.algebra.alpha() : 1.0;
  const double lt = m.lambda * t;
  const WalkStepper claims(m.algebra, m.claims);
  const WalkStepper premiums(m.algebra, m.premiums);
  std::vector<double> xs(paths), ys(paths), ds(paths);
  parallel_for(
      paths,
      [&](std::size_t i) {
        const rng::CounterStream s(rng::mix(seed, i));
        const int n = stats::poisson_quantile(lt, s.uniform(rng::Stream::count, 0));
        const PathRandom sx(s.child(1));
        const PathRandom sy(s.child(2));
        double x = 0.0, y = m.u;
        for (int k = 0; k < n; ++k) {
          x = claims.step(x, sx, static_cast<std::uint64_t>(k));
          y = premiums.step(y, sy, static_cast<std::uint64_t>(k));
        }
        xs[i] = std::pow(x, a);
        ys[i] = std::pow(y, a);
        ds[i] = ys[i] - xs[i];
      },
      workers);
  return {stats::mean_se(ys), stats::mean_se(xs), stats::mean_se(ds)};
}

}  // namespace gcruin
