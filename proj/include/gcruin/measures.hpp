#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gcruin {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Absolutely continuous probability law with its own (unit) scale.
class ContinuousLaw {
 public:
  virtual ~ContinuousLaw() = default;

  virtual double cdf(double x) const = 0;
  /// 1 - cdf, overridden where the tail can be computed without cancellation.
  virtual double survival(double x) const { return 1.0 - cdf(x); }
  virtual double density(double x) const = 0;
  /// Generalized inverse of cdf on (0, 1). Default: bracketed root finding.
  virtual double quantile(double q) const;
  virtual double lower() const = 0;
  virtual double upper() const = 0;
  /// k such that survival(x) ~ x^-k; infinity for lighter tails.
  virtual double tail_index() const { return kInf; }
  /// Interior points where the density is not smooth.
  virtual std::vector<double> kinks() const { return {}; }
  virtual std::string name() const = 0;
};

using LawPtr = std::shared_ptr<const ContinuousLaw>;

struct Atom {
  double location;
  double mass;
};

/// Weighted, dilated copy of a continuous law: weight * law(. / scale).
struct Component {
  double weight;
  double scale;
  LawPtr law;
};

/// Named family and its parameters; "mixture" for derived laws.
struct FamilyTag {
  std::string name = "mixture";
  std::vector<double> params;

  bool is(std::string_view n) const { return name == n; }
};

/// Probability law on [0, inf): finitely many atoms plus a mixture of dilated
/// continuous laws. Immutable after construction.
class Distribution {
 public:
  Distribution(std::vector<Atom> atoms, std::vector<Component> parts, FamilyTag family = {});

  double cdf(double x) const;
  /// P(X < x).
  double cdf_left(double x) const;
  /// P(X > x), evaluated tail-first.
  double survival(double x) const;
  /// Density of the continuous part (atoms excluded).
  double density(double x) const;
  /// inf{x : cdf(x) >= q} for q in (0, 1).
  double quantile(double q) const;
  /// Exact sampler by composition: atoms in location order, then components.
  /// Coincides with quantile() whenever the law has a single piece.
  double draw(double q) const;

  double support_lower() const;
  double support_upper() const;
  double tail_index() const;

  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Component> components() const { return parts_; }
  double atom_mass() const;
  bool has_atoms() const { return !atoms_.empty(); }
  bool is_point() const { return atoms_.size() == 1 && parts_.empty(); }
  const FamilyTag& family() const { return family_; }

  /// Atom locations, component endpoints and kinks (finite, sorted, unique).
  std::vector<double> breakpoints() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Component> parts_;
  FamilyTag family_;
  std::vector<double> cumulative_;  // composition table for draw()
};

Distribution point_mass(double x);

/// Pareto law pi_{2 alpha}: density 2 alpha x^{-2 alpha - 1} on [1, inf).
Distribution pareto_2alpha(double alpha);
/// Lack-of-memory law of the stable algebra: cdf 1 - exp(-gamma x^alpha).
Distribution lom_alpha(double gamma, double alpha);
/// Lack-of-memory law of the max algebra: the point mass at a.
Distribution lom_max(double a);
/// Lack-of-memory law of the Kendall algebra: cdf min{(c x)^alpha, 1}.
Distribution lom_kendall(double c, double alpha);
Distribution uniform(double a, double b);
Distribution exponential(double rate);
/// Atoms plus a continuous part given by a piecewise-linear cdf through
/// `cdf_points` (x ascending, F from 0 to 1), scaled by the non-atomic mass.
Distribution table(std::vector<Atom> atoms, std::vector<std::pair<double, double>> cdf_points);

/// Law of X^p for X ~ d.
Distribution pushforward_power(const Distribution& d, double p);

/// E X^alpha; +infinity when the moment diverges.
double moment_alpha(const Distribution& d, double alpha);

/// n i.i.d. inverse-cdf draws from a SplitMix64 uniform stream.
std::vector<double> sample(const Distribution& d, std::size_t n, std::uint64_t seed);

namespace laws {

LawPtr pareto(double index);
LawPtr weibull(double gamma, double alpha);
LawPtr power(double alpha);
LawPtr uniform(double a, double b);
LawPtr piecewise_linear(std::vector<std::pair<double, double>> points);
LawPtr power_of(LawPtr base, double p);

}  // namespace laws

}  // namespace gcruin
