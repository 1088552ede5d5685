#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gcruin/convolutions.hpp"
#include "gcruin/errors.hpp"
#include "oracles.hpp"

using namespace gcruin;
using doctest::Approx;

namespace {

std::vector<ConvolutionAlgebra> all_algebras() {
  return {ConvolutionAlgebra::classical(),     ConvolutionAlgebra::symmetric(), ConvolutionAlgebra::alpha_stable(1.5),
          ConvolutionAlgebra::max(),           ConvolutionAlgebra::kendall(0.7), ConvolutionAlgebra::kingman(0.8),
          ConvolutionAlgebra::kendall_type(3.0)};
}

// sup |F - G| on a dense grid plus points 1e-9 (relative) either side of
// every breakpoint; points closer than that to a breakpoint are skipped, so
// atoms whose locations differ by rounding compare equal.
double cdf_distance(const Distribution& a, const Distribution& b) {
  std::vector<double> bps = a.breakpoints();
  const auto bb = b.breakpoints();
  bps.insert(bps.end(), bb.begin(), bb.end());
  double hi = 1.0;
  for (double x : bps) hi = std::max(hi, x);
  std::vector<double> xs = oracle::grid(0.0, 3.0 * hi, 3000);
  for (double x : bps) {
    const double h = 1e-9 * std::max(1.0, x);
    xs.push_back(x - h);
    xs.push_back(x + h);
  }
  double d = 0.0;
  for (double x : xs) {
    const bool near = std::any_of(bps.begin(), bps.end(), [&](double p) { return std::abs(x - p) < 1e-10 * std::max(1.0, p); });
    if (near) continue;
    d = std::max(d, std::abs(a.cdf(x) - b.cdf(x)));
  }
  return d;
}

}  // namespace

TEST_SUITE("convolutions") {
  TEST_CASE("kernels") {
    CHECK(kernel(ConvolutionAlgebra::kendall(1.0), 0.5) == Approx(0.5));
    CHECK(kernel(ConvolutionAlgebra::kendall(2.0), 0.5) == Approx(0.75));
    CHECK(kernel(ConvolutionAlgebra::kendall(1.0), 1.5) == 0.0);
    CHECK(kernel(ConvolutionAlgebra::alpha_stable(2.0), 1.0) == Approx(std::exp(-1.0)));
    CHECK(kernel(ConvolutionAlgebra::classical(), 0.7) == Approx(std::exp(-0.7)));
    CHECK(kernel(ConvolutionAlgebra::symmetric(), 0.7) == Approx(std::cos(0.7)));
    CHECK(kernel(ConvolutionAlgebra::max(), 1.0) == 1.0);
    CHECK(kernel(ConvolutionAlgebra::max(), 1.0001) == 0.0);
    // Order 1/2: Gamma(3/2) sqrt(2/t) J_{1/2}(t) = sin(t)/t.
    for (double t : {0.1, 1.0, 2.5, 7.0}) CHECK(kernel(ConvolutionAlgebra::kingman(0.5), t) == Approx(std::sin(t) / t).epsilon(1e-12));
    // p = 2, c = 1: (1 - t)^2 on [0, 1].
    CHECK(kernel(ConvolutionAlgebra::kendall_type(2.0), 0.25) == Approx(0.5625));
    for (const auto& alg : all_algebras()) CHECK(kernel(alg, 0.0) == 1.0);
  }

  TEST_CASE("point convolutions") {
    const auto k = convolve_points(ConvolutionAlgebra::kendall(1.0), 0.5, 1.0);
    REQUIRE(k.atoms().size() == 1);
    CHECK(k.atoms()[0].location == 1.0);
    CHECK(k.atoms()[0].mass == Approx(0.5));
    CHECK(k.cdf(2.0) == Approx(0.5 + 0.5 * 0.75));
    const auto s = convolve_points(ConvolutionAlgebra::alpha_stable(2.0), 3.0, 4.0);
    CHECK(s.is_point());
    CHECK(s.atoms()[0].location == Approx(5.0));
    const auto m = convolve_points(ConvolutionAlgebra::max(), 2.0, 7.0);
    CHECK(m.is_point());
    CHECK(m.atoms()[0].location == 7.0);
    const auto sym = convolve_points(ConvolutionAlgebra::symmetric(), 1.0, 3.0);
    CHECK(sym.cdf(2.0) == Approx(0.5));
    CHECK(sym.cdf(4.0) == Approx(1.0));
    const auto cl = convolve_points(ConvolutionAlgebra::classical(), 1.0, 3.0);
    CHECK(cl.is_point());
    CHECK(cl.atoms()[0].location == 4.0);
  }

  TEST_CASE("kendall total mass") {
    for (double a : {0.5, 1.0, 2.0})
      for (double x : {0.1, 0.5, 0.9}) {
        const auto d = convolve_points(ConvolutionAlgebra::kendall(a), x, 1.0);
        double mass = d.atom_mass();
        for (const auto& c : d.components()) mass += c.weight;
        CHECK(mass == Approx(1.0).epsilon(1e-15));
        CHECK(d.atom_mass() == Approx(1.0 - std::pow(x, a)));
      }
  }

  TEST_CASE("dilate") {
    const auto d = dilate(point_mass(3.0), 2.0);
    CHECK(d.is_point());
    CHECK(d.atoms()[0].location == 6.0);
    const auto p = dilate(pareto_2alpha(1.0), 2.0);
    CHECK(p.cdf(1.9) == 0.0);
    CHECK(p.cdf(5.0) == Approx(1.0 - std::pow(2.5, -2.0)));
    const auto z = dilate(uniform(0.0, 1.0), 0.0);
    CHECK(z.is_point());
    CHECK(z.atoms()[0].location == 0.0);
  }

  TEST_CASE("char_fn") {
    for (const auto& alg : all_algebras())
      for (double t : {0.0, 0.5, 3.0}) CHECK(char_fn(alg, point_mass(0.0), t) == 1.0);
    const double oracle = oracle::simpson([](double x) { return 1.0 - x; }, 0.0, 1.0);
    CHECK(char_fn(ConvolutionAlgebra::kendall(1.0), uniform(0.0, 1.0), 1.0) == Approx(oracle).epsilon(1e-10));
    // Laplace transform of exponential(2) at t = 1.5.
    CHECK(char_fn(ConvolutionAlgebra::classical(), exponential(2.0), 1.5) == Approx(2.0 / 3.5).epsilon(1e-10));
  }

  TEST_CASE("multiplicativity on the grid") {
    const double g[] = {0.25, 0.5, 1.0, 2.0};
    for (const auto& alg : all_algebras()) {
      double worst = 0.0;
      for (double x : g)
        for (double y : g)
          for (double t : g) {
            const double lhs = char_fn(alg, convolve_points(alg, x, y), t);
            worst = std::max(worst, std::abs(lhs - kernel(alg, x * t) * kernel(alg, y * t)));
          }
      INFO(alg.name());
      CHECK(worst <= 1e-7);
    }
  }

  TEST_CASE("neutral element and commutativity") {
    for (const auto& alg : all_algebras())
      for (double x : {0.0, 0.3, 2.0}) {
        const auto d = convolve_points(alg, x, 0.0);
        CHECK(d.is_point());
        CHECK(d.atoms()[0].location == x);
        const auto e = convolve_points(alg, 0.0, x);
        CHECK(e.is_point());
        CHECK(e.atoms()[0].location == x);
        INFO(alg.name());
        CHECK(cdf_distance(convolve_points(alg, x, 1.3), convolve_points(alg, 1.3, x)) == 0.0);
      }
  }

  TEST_CASE("dilation homogeneity") {
    for (const auto& alg : all_algebras())
      for (double a : {0.5, 3.0})
        for (auto [x, y] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.7}}) {
          INFO(alg.name() << " a=" << a << " x=" << x << " y=" << y);
          CHECK(cdf_distance(convolve_points(alg, a * x, a * y), dilate(convolve_points(alg, x, y), a)) <= 1e-10);
        }
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ConvolutionAlgebra::alpha_stable(0.0), ParameterError);
    CHECK_THROWS_AS(ConvolutionAlgebra::kendall(-1.0), ParameterError);
    CHECK_THROWS_AS(ConvolutionAlgebra::kingman(-0.5), ParameterError);
    CHECK_THROWS_AS(ConvolutionAlgebra::kendall_type(1.5), ParameterError);
    CHECK_THROWS_AS(ConvolutionAlgebra::kendall_type(2.0, 3.0), ParameterError);
    CHECK_NOTHROW(ConvolutionAlgebra::kendall_type(0.5, 3.0));
  }

  TEST_CASE("kendall_type auxiliary laws are probability laws") {
    for (double p : {2.0, 3.0, 5.5}) {
      const auto l1 = laws::kendall_type_lambda1(p);
      const auto l2 = laws::kendall_type_lambda2(p);
      CHECK(l1->cdf(l1->upper()) == Approx(1.0).epsilon(1e-8));
      CHECK(l2->cdf(l2->upper()) == Approx(1.0).epsilon(1e-8));
      CHECK(l1->cdf(1.0) == 0.0);
    }
  }

  TEST_CASE("names") {
    CHECK(ConvolutionAlgebra::kendall(1.0).name() == "kendall(1)");
    CHECK(to_string(AlgebraKind::kendall_type) == "kendall_type");
  }
}
