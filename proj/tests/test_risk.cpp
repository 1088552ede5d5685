#include <doctest.h>

#include <cmath>

#include "gcruin/errors.hpp"
#include "gcruin/risk.hpp"
#include "gcruin/ruin.hpp"
#include "gcruin/stats.hpp"
#include "oracles.hpp"

using namespace gcruin;
using doctest::Approx;

namespace {

RiskModel max_model(Distribution claims, Distribution premiums, double u, double lambda = 1.0) {
  return {ConvolutionAlgebra::max(), std::move(claims), std::move(premiums), u, lambda, 1.0};
}

RiskModel kendall_model(double c, double alpha, double u, double lambda = 1.0) {
  return {ConvolutionAlgebra::kendall(alpha), lom_kendall(c, alpha), lom_kendall(c, alpha), u, lambda, 1.0};
}

bool within(const stats::MeanSe& mc, double value, double k = 3.0) { return std::abs(mc.mean - value) <= k * mc.se; }

}  // namespace

TEST_SUITE("risk") {
  TEST_CASE("claim times") {
    double total = 0.0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i) {
      const auto s = sample_claim_times(1.0, 10.0, static_cast<std::uint64_t>(i));
      for (std::size_t k = 1; k < s.size(); ++k) CHECK_FALSE(s[k] <= s[k - 1]);
      if (!s.empty()) CHECK(s.back() <= 10.0);
      total += static_cast<double>(s.size());
    }
    CHECK(std::abs(total / reps - 10.0) <= 3.0 * std::sqrt(10.0) / 100.0);
    CHECK(sample_claim_times(1.0, 1e-300, 3).empty());
    CHECK(sample_claim_times(2.0, 5.0, 9) == sample_claim_times(2.0, 5.0, 9));
    CHECK_THROWS_AS(sample_claim_times(0.0, 5.0, 9), ParameterError);
  }

  TEST_CASE("max claim side") {
    const auto m = max_model(uniform(0.0, 1.0), point_mass(1.0), 0.5);
    const double oracle = oracle::simpson([](double x) { return x * std::exp(-(1.0 - x)); }, 0.0, 1.0);
    CHECK(expected_claim_side_max(m, 1.0) == Approx(oracle).epsilon(1e-10));
    CHECK(expected_claim_side_max(m, 0.0) == 0.0);
    CHECK(expected_claim_side_max(m, 1e4) == Approx(1.0).epsilon(1e-3));
    const auto mc = mc_safety(m, 1.0, 100000, 101);
    CHECK(within(mc.claim_side, oracle));
    CHECK_THROWS_AS(expected_claim_side_max(max_model(point_mass(1.0), point_mass(1.0), 0.0), 1.0), UnsupportedError);
  }

  TEST_CASE("max premium side") {
    const double a = 2.0, u = 0.5;
    for (double lt : {0.3, 1.0, 4.0}) {
      const auto m = max_model(uniform(0.0, 1.0), lom_max(a), u);
      const auto p = expected_premium_side_max(m, lt);
      CHECK(p.definition == Approx(a * (1.0 - std::exp(-lt)) + u * std::exp(-lt)).epsilon(1e-10));
      CHECK(p.formula == Approx(lt * (u * std::exp(-lt) + a)).epsilon(1e-10));
    }
    const auto above = max_model(uniform(0.0, 1.0), uniform(0.0, 1.0), 3.0);
    CHECK(expected_premium_side_max(above, 2.0).definition == Approx(3.0));
    CHECK(expected_premium_side_max(above, 0.0).definition == 3.0);
    const auto m = max_model(uniform(0.0, 1.0), uniform(0.0, 2.0), 0.5);
    const auto mc = mc_safety(m, 1.5, 100000, 103);
    CHECK(within(mc.premium_side, expected_premium_side_max(m, 1.5).definition));
  }

  TEST_CASE("max safety condition") {
    CHECK(safety_condition_max(max_model(uniform(0.0, 1.0), uniform(0.0, 1.0), 1.5), 2.0).condition_holds);
    const auto none = safety_condition_max(max_model(uniform(0.0, 1.0), point_mass(0.0), 0.0), 1.0);
    CHECK_FALSE(none.condition_holds);
    const auto m = max_model(uniform(0.0, 1.0), point_mass(1.0), 0.5);
    const auto r = safety_condition_max(m, 1.0);
    CHECK(r.margin == Approx(r.premium_side - r.claim_side));
    CHECK(r.condition_holds == (r.margin > 0.0));
    REQUIRE(r.formula_margin.has_value());
    const auto mc = mc_safety(m, 1.0, 100000, 107);
    CHECK(within(mc.margin, r.margin));
    CHECK((mc.margin.mean > 0.0) == r.condition_holds);
  }

  TEST_CASE("max margins in lambda") {
    double prev_claim = 0.0, prev_margin = kInf;
    for (double lambda = 0.05; lambda < 20.0; lambda *= 1.25) {
      const auto r = safety_condition_max(max_model(uniform(0.0, 2.0), uniform(0.0, 1.0), 0.5, lambda), 1.0);
      CHECK(r.claim_side >= prev_claim - 1e-12);
      CHECK(r.margin <= prev_margin + 1e-12);
      prev_claim = r.claim_side;
      prev_margin = r.margin;
    }
  }

  TEST_CASE("kendall claim moment") {
    const auto c = expected_alpha_moment_kendall_claims(lom_kendall(1.0, 1.0), 1.0, 2.0, 3.0);
    CHECK(c.closed_form);
    CHECK(c.value == Approx(3.0));
    CHECK(expected_alpha_moment_kendall_claims(lom_kendall(1.0, 1.0), 1.0, 2.0, 0.0).value == 0.0);
    // The numeric limit reproduces the closed form.
    const auto pair = kendall_pair(lom_kendall(1.5, 1.7), 1.7);
    const auto lim = expected_alpha_moment_kendall_claims(pair, 2.0, 1.5);
    CHECK(lim.finite);
    CHECK(lim.value == Approx(0.5 * 3.0 * std::pow(1.5, -1.7)).epsilon(1e-6));
    // delta_1 steps: 1 - H(x) = 1/x, so the limit is lambda t.
    const auto one = expected_alpha_moment_kendall_claims(point_mass(1.0), 1.0, 1.0, 2.0);
    CHECK(one.value == Approx(2.0).epsilon(1e-6));
    const RiskModel m{ConvolutionAlgebra::kendall(1.0), point_mass(1.0), point_mass(1.0), 0.0, 1.0, 1.0};
    CHECK(within(mc_safety(m, 2.0, 100000, 109).claim_side, one.value));
  }

  TEST_CASE("kendall premium moment") {
    const auto p = expected_alpha_moment_kendall_premiums(2.0, lom_kendall(1.0, 1.0), 1.0, 1.0, 2.0);
    CHECK(p.definition.value == Approx(2.0 + 1.0));
    CHECK(p.formula.value == Approx(2.0 * std::exp(-0.5) + 2.0 + 1.0).epsilon(1e-12));
    CHECK(p.formula.value == Approx(4.21306).epsilon(1e-5));
    const auto zero = expected_alpha_moment_kendall_premiums(2.0, lom_kendall(1.0, 1.0), 1.0, 1.0, 0.0);
    CHECK(zero.definition.value == Approx(2.0));
    const auto pair = kendall_pair(lom_kendall(1.0, 1.0), 1.0);
    const auto u0 = expected_alpha_moment_kendall_premiums(0.0, pair, 1.0, 2.0);
    CHECK(u0.definition.value == Approx(expected_alpha_moment_kendall_claims(pair, 1.0, 2.0).value));
    // The generic route agrees with the lack-of-memory closed forms.
    const auto numeric = expected_alpha_moment_kendall_premiums(2.0, pair, 1.0, 2.0);
    CHECK(numeric.definition.value == Approx(p.definition.value).epsilon(1e-6));
    CHECK(numeric.formula.value == Approx(p.formula.value).epsilon(1e-6));
  }

  TEST_CASE("kendall safety condition") {
    const auto r = safety_condition_kendall(kendall_model(1.0, 1.0, 1.0), 2.0);
    CHECK(r.margin == Approx(1.0));
    REQUIRE(r.formula_margin.has_value());
    CHECK(*r.formula_margin == Approx(std::exp(-1.0) + 1.0).epsilon(1e-12));
    CHECK(*r.formula_margin == Approx(1.36788).epsilon(1e-5));
    const auto z = safety_condition_kendall(kendall_model(1.0, 1.0, 0.0), 2.0);
    CHECK(z.margin == 0.0);
    CHECK_FALSE(z.condition_holds);
    RiskModel bad = kendall_model(1.0, 1.0, 1.0);
    bad.premiums = lom_kendall(2.0, 1.0);
    CHECK_THROWS_AS(safety_condition_kendall(bad, 1.0), UnsupportedError);
    const auto mc = mc_safety(kendall_model(1.0, 1.0, 2.0), 1.0, 100000, 113);
    CHECK(within(mc.margin, safety_condition_kendall(kendall_model(1.0, 1.0, 2.0), 1.0).margin));
  }

  TEST_CASE("kendall margins: homogeneity and monotonicity in lambda") {
    for (double c : {0.5, 2.0})
      for (double a : {0.7, 1.4}) {
        const double u = 1.3;
        const auto lhs = safety_condition_kendall(kendall_model(c, a, u), 1.0);
        const auto rhs = safety_condition_kendall(kendall_model(1.0, a, u * c), 1.0);
        CHECK(lhs.margin == Approx(rhs.margin * std::pow(c, -a)).epsilon(1e-12));
        CHECK(*lhs.formula_margin == Approx(*rhs.formula_margin * std::pow(c, -a)).epsilon(1e-12));
      }
    double prev = kInf, prev_formula = kInf;
    for (double lambda = 0.1; lambda < 30.0; lambda *= 1.5) {
      const auto r = safety_condition_kendall(kendall_model(1.0, 1.0, 2.0, lambda), 1.0);
      CHECK(r.margin <= prev + 1e-12);
      CHECK(*r.formula_margin <= prev_formula + 1e-12);
      prev = r.margin;
      prev_formula = *r.formula_margin;
    }
  }

  TEST_CASE("alpha net profit") {
    const RiskModel m{ConvolutionAlgebra::alpha_stable(1.0), exponential(1.0), lom_alpha(1.0, 1.0), 0.0, 1.0, 2.0};
    CHECK(net_profit_alpha(m) == Approx(0.5));
    RiskModel heavy = m;
    heavy.claims = pareto_2alpha(0.5);
    CHECK(std::isinf(net_profit_alpha(heavy)));
    RiskModel wrong = m;
    wrong.premiums = uniform(0.0, 1.0);
    CHECK_THROWS_AS(net_profit_alpha(wrong), UnsupportedError);
    McOptions opt;
    opt.paths = 20000;
    opt.horizon = 2000;
    opt.seed = 127;
    const auto est = mc_ruin(m, opt);
    CHECK(est.ci_low <= 0.5);
    CHECK(0.5 <= est.ci_high);
  }

  TEST_CASE("model validation") {
    RiskModel m = max_model(uniform(0.0, 1.0), uniform(0.0, 1.0), -1.0);
    CHECK_THROWS_AS(validate(m), ParameterError);
    m.u = 1.0;
    m.lambda = 0.0;
    CHECK_THROWS_AS(validate(m), ParameterError);
    m.lambda = 1.0;
    CHECK_NOTHROW(validate(m));
  }
}
