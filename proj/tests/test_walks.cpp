#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gcruin/rng.hpp"
#include "gcruin/stats.hpp"
#include "gcruin/walks.hpp"
#include "gcruin/williamson.hpp"

using namespace gcruin;
using doctest::Approx;

TEST_SUITE("walks") {
  TEST_CASE("kendall_step") {
    CHECK(kendall_step(0.0, 5.0, 0.3, 2.0, 1.0) == 5.0);
    CHECK(kendall_step(0.0, 0.0, 0.3, 2.0, 1.0) == 0.0);
    for (double a : {0.5, 1.0, 2.0}) CHECK(kendall_step(1.0, 1.0, 0.999, 1.7, a) == 1.7);
    CHECK(kendall_step(0.5, 1.0, 0.7, 3.0, 1.0) == 1.0);
    CHECK(kendall_step(0.5, 1.0, 0.2, 3.0, 1.0) == 3.0);
    // Tie goes to the no-jump branch.
    CHECK(kendall_step(0.5, 1.0, 0.5, 3.0, 1.0) == 1.0);
  }

  TEST_CASE("kendall_step has the point-convolution law") {
    rng::SplitMix64 g(3);
    const double alpha = 1.0;
    const auto pi = pareto_2alpha(alpha);
    std::vector<double> xs(100000);
    for (double& x : xs) x = kendall_step(0.5, 1.0, g.uniform(), pi.quantile(g.uniform()), alpha);
    CHECK(stats::ks_statistic(xs, convolve_points(ConvolutionAlgebra::kendall(alpha), 0.5, 1.0)) < 0.01);
  }

  TEST_CASE("prescribed steps") {
    const auto m = simulate_steps(ConvolutionAlgebra::max(), {2.0, 1.0, 3.0}, 0.0, 1);
    CHECK(m.states == std::vector<double>{0.0, 2.0, 2.0, 3.0});
    const auto s = simulate_steps(ConvolutionAlgebra::alpha_stable(2.0), {3.0, 4.0}, 0.0, 1);
    REQUIRE(s.states.size() == 3);
    CHECK(s.states[1] == Approx(3.0));
    CHECK(s.states[2] == Approx(5.0));
    const auto c = simulate_steps(ConvolutionAlgebra::classical(), {1.0, 2.5}, 0.5, 1);
    CHECK(c.states.back() == Approx(4.0));
  }

  TEST_CASE("path invariants") {
    const auto law = uniform(0.0, 2.0);
    const auto m = simulate(ConvolutionAlgebra::max(), law, 200, 0.0, 9);
    CHECK(m.states.front() == 0.0);
    CHECK(std::is_sorted(m.states.begin(), m.states.end()));
    const double a = 1.3;
    const auto st = simulate(ConvolutionAlgebra::alpha_stable(a), law, 50, 0.0, 9);
    const PathRandom r(rng::CounterStream(9));
    const WalkStepper stepper(ConvolutionAlgebra::alpha_stable(a), law);
    for (std::size_t k = 0; k + 1 < st.states.size(); ++k) {
      const double u = stepper.step_value(r, k);
      CHECK(std::pow(st.states[k + 1], a) == Approx(std::pow(st.states[k], a) + std::pow(u, a)).epsilon(1e-12));
    }
    const auto kd = simulate(ConvolutionAlgebra::kendall(0.8), law, 200, 0.7, 9);
    CHECK(kd.states.front() == 0.7);
    const WalkStepper ks(ConvolutionAlgebra::kendall(0.8), law);
    for (std::size_t k = 0; k + 1 < kd.states.size(); ++k) {
      CHECK(kd.states[k + 1] >= std::min(kd.states[k], ks.step_value(r, k)));
      CHECK(kd.states[k + 1] >= 0.0);
    }
  }

  TEST_CASE("determinism and suffix regeneration") {
    const auto alg = ConvolutionAlgebra::kendall(1.0);
    const auto law = pareto_2alpha(1.0);
    const auto a = simulate(alg, law, 40, 0.0, 77);
    const auto b = simulate(alg, law, 40, 0.0, 77);
    CHECK(a.states == b.states);
    const auto tail = simulate(alg, law, 25, a.states[15], 77, 15);
    for (std::size_t k = 0; k < tail.states.size(); ++k) CHECK(tail.states[k] == a.states[15 + k]);
    const auto other = simulate(alg, law, 40, 0.0, 78);
    CHECK(other.states != a.states);
  }

  TEST_CASE("terminal states do not depend on the worker count") {
    const auto alg = ConvolutionAlgebra::kingman(0.8);
    const auto law = uniform(0.0, 1.0);
    const auto one = simulate_terminal(alg, law, 5, 0.0, 2000, 5, false, 1);
    const auto four = simulate_terminal(alg, law, 5, 0.0, 2000, 5, false, 4);
    CHECK(one == four);
    const auto p3 = simulate(alg, law, 5, 0.0, rng::mix(5, 3));
    CHECK(one[3] == p3.states.back());
  }

  TEST_CASE("kendall terminal law matches the n-step cdf") {
    for (const auto& [law, a] : {std::pair{point_mass(1.0), 1.0}, std::pair{uniform(0.0, 1.0), 1.0},
                                 std::pair{pareto_2alpha(1.0), 1.0}}) {
      const auto xs = simulate_terminal(ConvolutionAlgebra::kendall(a), law, 5, 0.0, 100000, 17);
      const auto pair = kendall_pair(law, a);
      CHECK(stats::ks_statistic(xs, [&](double t) { return n_step_cdf(pair, 5, t); }) <= 0.01);
    }
  }

  TEST_CASE("generic sampler agrees with the specialized recursions") {
    CHECK(simulate_generic_vs_specialized(ConvolutionAlgebra::kendall(1.0), uniform(0.0, 1.0), 3, 100000, 21) <= 0.01);
    CHECK(simulate_generic_vs_specialized(ConvolutionAlgebra::max(), exponential(1.0), 4, 100000, 22) <= 0.01);
    CHECK(simulate_generic_vs_specialized(ConvolutionAlgebra::alpha_stable(1.5), uniform(0.0, 1.0), 3, 100000, 23) <=
          0.01);
    CHECK(simulate_generic_vs_specialized(ConvolutionAlgebra::kendall(1.0), uniform(0.0, 1.0), 0, 100, 24) == 0.0);
  }

  TEST_CASE("empirical characteristic function is a power") {
    const auto law = uniform(0.0, 1.0);
    for (const auto& alg : {ConvolutionAlgebra::kendall(1.0), ConvolutionAlgebra::alpha_stable(1.5),
                            ConvolutionAlgebra::max(), ConvolutionAlgebra::classical(), ConvolutionAlgebra::symmetric(),
                            ConvolutionAlgebra::kingman(0.5), ConvolutionAlgebra::kendall_type(3.0)}) {
      const int n = 3;
      const auto xs = simulate_terminal(alg, law, n, 0.0, 40000, 31);
      for (double t : {0.4, 1.5}) {
        std::vector<double> w(xs.size());
        std::transform(xs.begin(), xs.end(), w.begin(), [&](double x) { return kernel(alg, t * x); });
        const auto ms = stats::mean_se(w);
        const double expect = std::pow(char_fn(alg, law, t), n);
        INFO(alg.name() << " t=" << t);
        CHECK(std::abs(ms.mean - expect) <= 3.0 * ms.se + 1e-9);
      }
    }
  }

  TEST_CASE("kingman steps follow the radial law") {
    const auto alg = ConvolutionAlgebra::kingman(1.2);
    const auto xs = simulate_terminal(alg, point_mass(1.0), 2, 0.0, 50000, 61);
    CHECK(stats::ks_statistic(xs, convolve_points(alg, 1.0, 1.0)) <= 0.01);
  }
}
