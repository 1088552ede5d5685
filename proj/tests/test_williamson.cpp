#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gcruin/rng.hpp"
#include "gcruin/stats.hpp"
#include "gcruin/walks.hpp"
#include "gcruin/williamson.hpp"
#include "oracles.hpp"

using namespace gcruin;
using doctest::Approx;

namespace {

const auto kKendall1 = ConvolutionAlgebra::kendall(1.0);

// Fraction of walks from `start` whose state after n steps is <= t.
stats::Interval mc_walk_cdf(const Distribution& law, int n, double start, double t, std::size_t paths,
                            std::uint64_t seed) {
  const auto xs = simulate_terminal(kKendall1, law, n, start, paths, seed);
  const auto hits = std::count_if(xs.begin(), xs.end(), [&](double x) { return x <= t; });
  return stats::wilson(static_cast<std::size_t>(hits), paths, 0.999);
}

// Same with a Poisson(lambda t) number of steps.
stats::Interval mc_compound_cdf(const Distribution& law, double mean, double start, double x, std::size_t paths,
                                std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::poisson_distribution<int> count(mean);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < paths; ++i) {
    const auto p = simulate(kKendall1, law, count(gen), start, rng::mix(seed, i));
    if (p.states.back() <= x) ++hits;
  }
  return stats::wilson(hits, paths, 0.999);
}

std::vector<Distribution> smooth_laws() {
  return {uniform(0.0, 1.0), lom_kendall(2.0, 1.5), pareto_2alpha(1.0), exponential(1.3), uniform(0.5, 2.0)};
}

}  // namespace

TEST_SUITE("williamson") {
  TEST_CASE("transform examples") {
    const auto one = point_mass(1.0);
    CHECK(williamson_transform(one, 1.0, 0.5) == Approx(0.5).epsilon(1e-12));
    const double oracle = oracle::simpson([](double s) { return 1.0 - s; }, 0.0, 1.0);
    CHECK(williamson_transform(uniform(0.0, 1.0), 1.0, 1.0) == Approx(oracle).epsilon(1e-10));
    for (const auto& d : smooth_laws()) CHECK(williamson_transform(d, 1.0, 1e-9) == Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("three transform forms agree") {
    for (const auto& d : smooth_laws())
      for (double a : {0.5, 1.0, 2.0})
        for (double t : {0.2, 0.7, 1.0, 1.9, 5.0}) {
          const double k = williamson_transform(d, a, t, WilliamsonForm::kernel);
          const double b = williamson_transform(d, a, t, WilliamsonForm::by_parts);
          const double c = williamson_transform(d, a, t, WilliamsonForm::cdf_integral);
          CHECK(std::abs(k - c) <= 1e-8);
          CHECK(std::abs(b - c) <= 1e-8);
        }
  }

  TEST_CASE("closed-form pairs match quadrature") {
    for (const auto& [d, a] : {std::pair{lom_kendall(2.0, 1.5), 1.5}, std::pair{pareto_2alpha(0.8), 0.8},
                               std::pair{point_mass(1.7), 1.2}, std::pair{uniform(0.0, 1.0), 1.0},
                               std::pair{uniform(0.5, 2.0), 0.7}}) {
      const auto pair = kendall_pair(d, a);
      for (double t : {0.1, 0.4, 0.9, 1.5, 4.0}) {
        CHECK(pair.H(t) == Approx(williamson_transform(d, a, 1.0 / t, WilliamsonForm::kernel)).epsilon(1e-9));
        CHECK(pair.H_tail(t) == Approx(1.0 - pair.H(t)).epsilon(1e-9));
        CHECK(pair.F(t) == Approx(d.cdf(t)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("pair invariants") {
    for (const auto& d : smooth_laws()) {
      const auto pair = kendall_pair(d, 1.3);
      double prev = 0.0;
      for (double t = 0.01; t < 20.0; t *= 1.1) {
        const double h = pair.H(t);
        CHECK(h >= prev - 1e-14);
        CHECK(h >= 0.0);
        CHECK(h <= pair.F(t) + 1e-12);
        CHECK(pair.F(t) <= 1.0);
        prev = h;
      }
      CHECK(pair.H(1e8) == Approx(1.0).epsilon(1e-3));
    }
  }

  TEST_CASE("inversion examples") {
    const RealFn h = [](double t) { return t > 1.0 ? 1.0 - 1.0 / t : 0.0; };
    const RealFn dh = [](double t) { return t > 1.0 ? 1.0 / (t * t) : 0.0; };
    for (double t : {1.5, 2.0, 10.0}) {
      CHECK(williamson_invert(h, 1.0, t, dh) == Approx(1.0).epsilon(1e-15));
      CHECK(williamson_invert(h, 1.0, t) == Approx(1.0).epsilon(1e-8));
    }
    const RealFn ones = [](double) { return 1.0; };
    for (double t : {0.1, 1.0, 3.0}) CHECK(williamson_invert(ones, 2.0, t) == Approx(1.0));
  }

  TEST_CASE("inversion round-trip") {
    for (const auto& [d, a] : {std::pair{lom_kendall(1.0, 1.0), 1.0}, std::pair{uniform(0.0, 1.0), 1.0},
                               std::pair{lom_kendall(2.0, 1.5), 1.5}, std::pair{uniform(0.5, 2.0), 0.7}}) {
      const RealFn H = [&](double t) { return williamson_transform(d, a, 1.0 / t); };
      const auto pair = kendall_pair_from_transform(H, a);
      double worst = 0.0;
      for (double t : oracle::grid(0.05, 3.0, 60)) worst = std::max(worst, std::abs(pair.F(t) - d.cdf(t)));
      CHECK(worst <= 1e-6);
    }
  }

  TEST_CASE("ridders derivative") {
    const auto d = ridders_derivative([](double x) { return std::sin(x); }, 0.7, 0.1);
    CHECK(d.value == Approx(std::cos(0.7)).epsilon(1e-10));
    const auto k = ridders_derivative([](double x) { return x < 1.0 ? x : 1.0; }, 1.0, 0.1);
    CHECK(std::isfinite(k.value));
  }

  TEST_CASE("n-step cdf") {
    const auto one = kendall_pair(point_mass(1.0), 1.0);
    CHECK(one.H(3.0) == Approx(2.0 / 3.0));
    CHECK(n_step_cdf(one, 2, 3.0) == Approx(8.0 / 9.0).epsilon(1e-14));
    const auto mc = mc_walk_cdf(point_mass(1.0), 2, 0.0, 3.0, 100000, 41);
    CHECK(mc.low <= 8.0 / 9.0);
    CHECK(8.0 / 9.0 <= mc.high);
    const auto u = kendall_pair(uniform(0.0, 1.0), 1.0);
    for (double t : {0.3, 0.9, 2.0}) CHECK(n_step_cdf(u, 1, t) == Approx(u.F(t)));
    CHECK(n_step_cdf(u, 7, 1e9) == Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("compound cdf") {
    const auto one = kendall_pair(point_mass(1.0), 1.0);
    CHECK(compound_cdf(one, 1.0, 1.0, 2.0) == Approx(1.5 * std::exp(-0.5)).epsilon(1e-14));
    CHECK(compound_cdf(one, 1.0, 1.0, 2.0) == Approx(0.90980).epsilon(1e-5));
    const auto mc = mc_compound_cdf(point_mass(1.0), 1.0, 0.0, 2.0, 50000, 43);
    CHECK(mc.low <= 1.5 * std::exp(-0.5));
    CHECK(1.5 * std::exp(-0.5) <= mc.high);
    CHECK(compound_cdf(one, 1e-12, 1.0, 0.5) == Approx(1.0).epsilon(1e-10));
    CHECK(compound_cdf(one, 1.0, 1.0, 1e12) == Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("compound equals the Poisson mixture of n-step laws") {
    for (const auto& d : smooth_laws()) {
      const auto pair = kendall_pair(d, 1.0);
      for (double mean : {0.3, 2.0, 15.0})
        for (double x : {0.4, 1.1, 3.0}) {
          const double series = poisson_mixture([&](int n) { return n == 0 ? 1.0 : n_step_cdf(pair, n, x); }, mean);
          CHECK(std::abs(compound_cdf(pair, mean, 1.0, x) - series) <= 1e-8);
        }
    }
  }

  TEST_CASE("semigroup: transform of the n-step law") {
    for (const auto& d : {uniform(0.0, 1.0), lom_kendall(2.0, 1.5)}) {
      const double a = d.family().is("uniform") ? 1.0 : 1.5;
      const auto pair = kendall_pair(d, a);
      for (int n : {2, 3, 6})
        for (double t : {0.5, 1.0, 2.5}) {
          const RealFn Fn = [&](double x) { return n_step_cdf(pair, n, x); };
          CHECK(std::abs(williamson_transform(Fn, a, t) - std::pow(pair.H(1.0 / t), n)) <= 1e-7);
        }
    }
  }

  TEST_CASE("shifted n-step cdf") {
    const auto one = kendall_pair(point_mass(1.0), 1.0);
    CHECK(shifted_n_step_cdf(1.0, one, 1, 2.0) == Approx(0.75).epsilon(1e-14));
    const auto mc = mc_walk_cdf(point_mass(1.0), 1, 1.0, 2.0, 100000, 47);
    CHECK(mc.low <= 0.75);
    CHECK(0.75 <= mc.high);
    CHECK(shifted_n_step_cdf(2.0, one, 0, 3.0) == 1.0);
    CHECK(shifted_n_step_cdf(2.0, one, 0, 1.9) == 0.0);
    const auto u = kendall_pair(uniform(0.0, 1.0), 1.0);
    for (int n : {1, 3})
      for (double t : {0.3, 1.2}) CHECK(shifted_n_step_cdf(0.0, u, n, t) == Approx(n_step_cdf(u, n, t)).epsilon(1e-14));
    // Atom at u of mass J(u)^n.
    const double au = shifted_n_step_cdf(0.6, u, 3, 0.6) - shifted_n_step_cdf(0.6, u, 3, 0.6 - 1e-12);
    CHECK(au == Approx(std::pow(u.H(0.6), 3)).epsilon(1e-9));
  }

  TEST_CASE("shifted law: direct and mixture forms agree on random points") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<KendallLawPair> pairs{kendall_pair(uniform(0.0, 1.0), 1.0), kendall_pair(lom_kendall(1.5, 2.0), 2.0),
                                            kendall_pair(pareto_2alpha(0.6), 0.6)};
    for (int i = 0; i < 100; ++i) {
      const auto& pair = pairs[i % pairs.size()];
      const double u = 3.0 * unit(gen);
      const double t = u + 4.0 * unit(gen) + 1e-3;
      const int n = 1 + static_cast<int>(8.0 * unit(gen));
      CHECK(std::abs(shifted_n_step_cdf(u, pair, n, t) - shifted_n_step_cdf_mixture(u, pair, n, t)) <= 1e-12);
    }
  }

  TEST_CASE("shifted density is the derivative of the cdf") {
    const auto pair = kendall_pair(lom_kendall(1.0, 1.5), 1.5);
    for (double t : {0.9, 1.3, 2.0}) {
      const auto d = ridders_derivative([&](double x) { return shifted_n_step_cdf(0.8, pair, 3, x); }, t, 0.05);
      CHECK(shifted_n_step_density(0.8, pair, 3, t) == Approx(d.value).epsilon(1e-6));
    }
  }

  TEST_CASE("shifted compound cdf") {
    const auto nu = lom_kendall(1.0, 1.0);
    const auto pair = kendall_pair(nu, 1.0);
    CHECK(pair.H(3.0) == Approx(1.0 - 1.0 / 6.0));
    CHECK(shifted_compound_cdf(2.0, pair, 1.0, 1.0, 1.5) == 0.0);
    const double v = shifted_compound_cdf(2.0, pair, 1.0, 1.0, 3.0);
    // 1_{x >= u} [1 + lambda t (1 - u/x)(G - J)] exp(-lambda t (1 - J)) with G(3) = 1.
    CHECK(v == Approx((1.0 + (1.0 / 3.0) * (1.0 / 6.0)) * std::exp(-1.0 / 6.0)).epsilon(1e-12));
    const auto mc = mc_compound_cdf(nu, 1.0, 2.0, 3.0, 50000, 53);
    CHECK(mc.low <= v);
    CHECK(v <= mc.high);
    const auto u = kendall_pair(uniform(0.0, 1.0), 1.0);
    for (double x : {0.4, 1.7}) CHECK(shifted_compound_cdf(0.0, u, 2.0, 0.5, x) == Approx(compound_cdf(u, 2.0, 0.5, x)));
    CHECK(shifted_compound_cdf(2.0, pair, 1.0, 1.0, 2.0) == Approx(std::exp(-(1.0 - pair.H(2.0)))).epsilon(1e-12));
  }

  TEST_CASE("transition cdfs") {
    CHECK(transition_cdf_points(kKendall1, 1.0, 1.0, 2.0) == Approx(0.75));
    CHECK(transition_cdf_points(kKendall1, 1.5, 0.0, 2.0) == 1.0);
    CHECK(transition_cdf_points(kKendall1, 2.5, 0.0, 2.0) == 0.0);
    CHECK(transition_cdf_points(kKendall1, 1.0, 1.5, 1.2) == 0.0);
    const auto one = kendall_pair(point_mass(1.0), 1.0);
    CHECK(one_step_from_point_cdf(0.5, one, 2.0) == Approx(0.875));
    CHECK(one_step_from_point_cdf(0.5, one, 2.0) == Approx(transition_cdf_points(kKendall1, 0.5, 1.0, 2.0)));
    CHECK(one_step_from_point_cdf(3.0, one, 2.0) == 0.0);
    const auto u = kendall_pair(uniform(0.0, 1.0), 1.0);
    for (double t : {0.3, 2.0}) CHECK(one_step_from_point_cdf(0.0, u, t) == Approx(u.F(t)));
    // Agreement with the convolution of point masses.
    for (double x : {0.3, 0.8})
      for (double t : {1.0, 1.7}) {
        const auto d = convolve_points(ConvolutionAlgebra::kendall(1.4), x, 0.9);
        CHECK(transition_cdf_points(ConvolutionAlgebra::kendall(1.4), x, 0.9, t) == Approx(d.cdf(t)).epsilon(1e-12));
      }
  }

  TEST_CASE("psi identity") {
    for (double a : {0.5, 1.0, 3.0})
      for (double x : {0.0, 0.2, 0.7, 1.0})
        for (double y : {0.0, 0.4, 1.0}) {
          const double l = psi(x, a) + psi(y, a) - psi(x, a) * psi(y, a);
          CHECK(l == Approx(1.0 - std::pow(x * y, a)).epsilon(1e-14));
        }
    CHECK(psi(0.0, 2.0) == 1.0);
    CHECK(psi(1.0, 2.0) == 0.0);
    CHECK(psi(1.5, 2.0) == 0.0);
  }

  TEST_CASE("returned cdfs are monotone and bounded") {
    const auto pair = kendall_pair(pareto_2alpha(0.9), 0.9);
    double p1 = 0, p2 = 0, p3 = 0, p4 = 0;
    for (double t = 0.05; t < 30.0; t *= 1.07) {
      const double a = n_step_cdf(pair, 4, t);
      const double b = compound_cdf(pair, 1.5, 2.0, t);
      const double c = shifted_n_step_cdf(1.2, pair, 3, t);
      const double d = shifted_compound_cdf(1.2, pair, 1.5, 2.0, t);
      for (double v : {a, b, c, d}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
      CHECK(a >= p1 - 1e-14);
      CHECK(b >= p2 - 1e-14);
      CHECK(c >= p3 - 1e-14);
      CHECK(d >= p4 - 1e-14);
      p1 = a, p2 = b, p3 = c, p4 = d;
    }
  }
}
