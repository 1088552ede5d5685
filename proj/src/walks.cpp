#include "gcruin/walks.hpp"

#include <algorithm>
#include <cmath>

#include "gcruin/errors.hpp"
#include "gcruin/parallel.hpp"
#include "gcruin/stats.hpp"

namespace gcruin {

double kendall_step(double x, double u, double xi, double pi, double alpha) {
  const double big = std::max(x, u);
  if (big == 0.0) return 0.0;
  const double rho = std::pow(std::min(x, u) / big, alpha);
  return xi >= rho ? big : big * pi;
}

double KendallCatalyzers::pi(std::uint64_t k) const {
  const double q = pareto_.uniform(k);
  return std::exp(-std::log1p(-q) / (2.0 * alpha_));
}

WalkStepper::WalkStepper(ConvolutionAlgebra alg, Distribution step_law, bool generic)
    : alg_(std::move(alg)), law_(std::move(step_law)) {
  const auto k = alg_.kind();
  specialized_ = !generic && (k == AlgebraKind::alpha_stable || k == AlgebraKind::max || k == AlgebraKind::kendall);
}

double WalkStepper::advance(double x, double u, const PathRandom& r, std::uint64_t k) const {
  if (specialized_) {
    switch (alg_.kind()) {
      case AlgebraKind::alpha_stable: {
        const double a = alg_.alpha();
        return a == 1.0 ? x + u : std::pow(std::pow(x, a) + std::pow(u, a), 1.0 / a);
      }
      case AlgebraKind::max: return std::max(x, u);
      case AlgebraKind::kendall: {
        const KendallCatalyzers cat(r, alg_.alpha());
        return kendall_step(x, u, cat.xi(k), cat.pi(k), alg_.alpha());
      }
      default: break;
    }
  }
  // delta_x <> mu = int delta_x <> delta_u mu(du): sample the point law.
  return convolve_points(alg_, x, u).draw(r.aux.uniform(k));
}

WalkPath simulate(const ConvolutionAlgebra& alg, const Distribution& step_law, int n, double start,
                  std::uint64_t seed, std::uint64_t first_step, bool generic) {
  if (n < 0) throw ParameterError("simulate: n must be >= 0");
  if (!(start >= 0.0) || !std::isfinite(start)) throw ParameterError("simulate: start must be finite and >= 0");
  const WalkStepper stepper(alg, step_law, generic);
  const PathRandom r(rng::CounterStream{seed});
  WalkPath path{{start}, alg, start, seed};
  path.states.reserve(static_cast<std::size_t>(n) + 1);
  double x = start;
  for (int i = 0; i < n; ++i) {
    x = stepper.step(x, r, first_step + static_cast<std::uint64_t>(i));
    path.states.push_back(x);
  }
  return path;
}

WalkPath simulate_steps(const ConvolutionAlgebra& alg, const std::vector<double>& steps, double start,
                        std::uint64_t seed) {
  const WalkStepper stepper(alg, point_mass(0.0));
  const PathRandom r(rng::CounterStream{seed});
  WalkPath path{{start}, alg, start, seed};
  double x = start;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] >= 0.0)) throw ParameterError("simulate_steps: steps must be >= 0");
    x = stepper.advance(x, steps[i], r, i);
    path.states.push_back(x);
  }
  return path;
}

std::vector<double> simulate_terminal(const ConvolutionAlgebra& alg, const Distribution& step_law, int n,
                                      double start, std::size_t paths, std::uint64_t seed, bool generic,
                                      unsigned workers) {
  if (n < 0) throw ParameterError("simulate_terminal: n must be >= 0");
  const WalkStepper stepper(alg, step_law, generic);
  std::vector<double> out(paths);
  parallel_for(
      paths,
      [&](std::size_t i) {
        const PathRandom r(rng::CounterStream{rng::mix(seed, i)});
        double x = start;
        for (int k = 0; k < n; ++k) x = stepper.step(x, r, static_cast<std::uint64_t>(k));
        out[i] = x;
      },
      workers);
  return out;
}

double simulate_generic_vs_specialized(const ConvolutionAlgebra& alg, const Distribution& step_law, int n,
                                       std::size_t paths, std::uint64_t seed, unsigned workers) {
  const auto k = alg.kind();
  if (k != AlgebraKind::alpha_stable && k != AlgebraKind::max && k != AlgebraKind::kendall)
    throw UnsupportedError("simulate_generic_vs_specialized: no exact recursion for " + alg.name());
  const auto generic = simulate_terminal(alg, step_law, n, 0.0, paths, rng::mix(seed, 1), true, workers);
  const auto exact = simulate_terminal(alg, step_law, n, 0.0, paths, rng::mix(seed, 2), false, workers);
  return stats::ks_two_sample(generic, exact);
}

}  // namespace gcruin
