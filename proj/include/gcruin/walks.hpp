#pragma once

#include <cstdint>
#include <vector>

#include "gcruin/convolutions.hpp"
#include "gcruin/measures.hpp"
#include "gcruin/rng.hpp"

namespace gcruin {

struct WalkPath {
  std::vector<double> states;  // X_0, ..., X_n
  ConvolutionAlgebra algebra;
  double start;
  std::uint64_t seed;
};

/// One Kendall addition of step u to state x driven by catalyzers (xi, pi):
/// M if xi >= (m/M)^alpha, else M * pi, with m = min(x, u), M = max(x, u).
double kendall_step(double x, double u, double xi, double pi, double alpha);

/// Sub-streams driving one path: step variables, Kendall catalyzers and
/// auxiliary draws of the generic sampler.
struct PathRandom {
  explicit PathRandom(const rng::CounterStream& s)
      : step(s.sub(rng::Stream::step)),
        jump(s.sub(rng::Stream::jump)),
        pareto(s.sub(rng::Stream::pareto)),
        aux(s.sub(rng::Stream::aux)) {}
  rng::SubStream step, jump, pareto, aux;
};

/// Catalyzer sequences of a path: xi_k uniform, pi_k Pareto pi_{2 alpha}.
/// Drawn from their own sub-streams, independent of the step variables.
class KendallCatalyzers {
 public:
  KendallCatalyzers(const PathRandom& r, double alpha) : jump_(r.jump), pareto_(r.pareto), alpha_(alpha) {}
  double xi(std::uint64_t k) const { return jump_.uniform(k); }
  double pi(std::uint64_t k) const;

 private:
  rng::SubStream jump_, pareto_;
  double alpha_;
};

/// Transition X_k -> X_{k+1} of a walk with step law mu. Step k reads only
/// draw k of each sub-stream, so any suffix can be regenerated.
class WalkStepper {
 public:
  /// `generic` forces sampling from convolve_points(X_k, U_{k+1}) even where
  /// an exact recursion exists (alpha_stable, max, kendall).
  WalkStepper(ConvolutionAlgebra alg, Distribution step_law, bool generic = false);

  double step(double x, const PathRandom& r, std::uint64_t k) const { return advance(x, step_value(r, k), r, k); }
  double step_value(const PathRandom& r, std::uint64_t k) const { return law_.draw(r.step.uniform(k)); }
  /// Transition from x given the step value u.
  double advance(double x, double u, const PathRandom& r, std::uint64_t k) const;

  const ConvolutionAlgebra& algebra() const { return alg_; }
  const Distribution& step_law() const { return law_; }
  bool specialized() const { return specialized_; }

 private:
  ConvolutionAlgebra alg_;
  Distribution law_;
  bool specialized_;
};

/// Path of n steps from `start`, using step indices first_step, ..., first_step + n - 1.
WalkPath simulate(const ConvolutionAlgebra& alg, const Distribution& step_law, int n, double start,
                  std::uint64_t seed, std::uint64_t first_step = 0, bool generic = false);

/// Path with prescribed step values (no step randomness).
WalkPath simulate_steps(const ConvolutionAlgebra& alg, const std::vector<double>& steps, double start,
                        std::uint64_t seed);

/// Terminal states X_n of `paths` independent walks; path i uses seed mix(seed, i).
std::vector<double> simulate_terminal(const ConvolutionAlgebra& alg, const Distribution& step_law, int n,
                                      double start, std::size_t paths, std::uint64_t seed, bool generic = false,
                                      unsigned workers = 0);

/// Two-sample KS distance between terminal states of the generic sampler and
/// the exact recursion, run on independent seeds.
double simulate_generic_vs_specialized(const ConvolutionAlgebra& alg, const Distribution& step_law, int n,
                                       std::size_t paths, std::uint64_t seed, unsigned workers = 0);

}  // namespace gcruin
