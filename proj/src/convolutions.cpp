#include "gcruin/convolutions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gcruin/errors.hpp"
#include "gcruin/quadrature.hpp"

namespace gcruin {

namespace laws {
namespace {

class KingmanRadial final : public ContinuousLaw {
 public:
  KingmanRadial(double r, double s) : r_(r), a_(s + 0.5) {}

  double cdf(double z) const override {
    if (z <= lower()) return 0.0;
    if (z >= upper()) return 1.0;
    return boost::math::ibeta(a_, a_, beta_arg(z));
  }
  double survival(double z) const override {
    if (z <= lower()) return 1.0;
    if (z >= upper()) return 0.0;
    return boost::math::ibetac(a_, a_, beta_arg(z));
  }
  double density(double z) const override {
    const double b = beta_arg(z);
    if (b <= 0.0 || b >= 1.0) return 0.0;
    return boost::math::ibeta_derivative(a_, a_, b) * z / (2.0 * r_);
  }
  double quantile(double q) const override {
    const double w = 2.0 * boost::math::ibeta_inv(a_, a_, q) - 1.0;
    return std::sqrt(std::max(0.0, 1.0 + r_ * r_ + 2.0 * r_ * w));
  }
  double lower() const override { return 1.0 - r_; }
  double upper() const override { return 1.0 + r_; }
  std::string name() const override { return "kingman_radial"; }

 private:
  // theta = 2 B - 1 with B ~ Beta(a, a); returns the B-value for radius z.
  double beta_arg(double z) const {
    const double w = (z * z - 1.0 - r_ * r_) / (2.0 * r_);
    return std::clamp(0.5 * (1.0 + w), 0.0, 1.0);
  }
  double r_, a_;
};

// Laws on [1, inf) with survival sum_i k_i x^{-e_i}.
class PowerSum final : public ContinuousLaw {
 public:
  PowerSum(std::vector<std::pair<double, double>> terms, std::string name)
      : terms_(std::move(terms)), name_(std::move(name)) {}

  double cdf(double x) const override { return 1.0 - survival(x); }
  double survival(double x) const override {
    if (x <= 1.0) return 1.0;
    double s = 0.0;
    for (const auto& [k, e] : terms_) s += k * std::pow(x, -e);
    return std::max(s, 0.0);
  }
  double density(double x) const override {
    if (x < 1.0) return 0.0;
    double d = 0.0;
    for (const auto& [k, e] : terms_) d += k * e * std::pow(x, -e - 1.0);
    return d;
  }
  double lower() const override { return 1.0; }
  double upper() const override { return kInf; }
  double tail_index() const override {
    double k = kInf;
    for (const auto& [c, e] : terms_)
      if (c != 0.0) k = std::min(k, e);
    return k;
  }
  std::string name() const override { return name_; }

 private:
  std::vector<std::pair<double, double>> terms_;
  std::string name_;
};

}  // namespace

LawPtr kingman_radial(double r, double s) { return std::make_shared<KingmanRadial>(r, s); }

LawPtr kendall_type_lambda1(double p) {
  const double k = 2.0 * p / ((p - 1.0) * (p - 1.0));
  return std::make_shared<PowerSum>(
      std::vector<std::pair<double, double>>{
          {k * (p - 2.0) / 2.0, 2.0}, {k, p + 1.0}, {-k * (2.0 * p - 1.0) / (2.0 * p), 2.0 * p}},
      "kendall_type_lambda1");
}

LawPtr kendall_type_lambda2(double p) {
  const double c = 1.0 / (p - 1.0);
  return std::make_shared<PowerSum>(std::vector<std::pair<double, double>>{{c * (p - 2.0), 2.0}, {c, p + 1.0}},
                                    "kendall_type_lambda2");
}

}  // namespace laws

// ---------------------------------------------------------------------------

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

double law_mass(const ContinuousLaw& law) {
  auto dens = [&](double x) { return law.density(x); };
  return quad::integrate_to_infinity(dens, law.lower()).value;
}

}  // namespace

ConvolutionAlgebra ConvolutionAlgebra::classical() { return ConvolutionAlgebra(AlgebraKind::classical); }

ConvolutionAlgebra ConvolutionAlgebra::symmetric() { return ConvolutionAlgebra(AlgebraKind::symmetric); }

ConvolutionAlgebra ConvolutionAlgebra::alpha_stable(double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha_stable: alpha must be positive");
  ConvolutionAlgebra a(AlgebraKind::alpha_stable);
  a.alpha_ = alpha;
  return a;
}

ConvolutionAlgebra ConvolutionAlgebra::max() { return ConvolutionAlgebra(AlgebraKind::max); }

ConvolutionAlgebra ConvolutionAlgebra::kendall(double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), "kendall: alpha must be positive");
  ConvolutionAlgebra a(AlgebraKind::kendall);
  a.alpha_ = alpha;
  return a;
}

ConvolutionAlgebra ConvolutionAlgebra::kingman(double s) {
  require(s > -0.5 && std::isfinite(s), "kingman: s must exceed -1/2");
  ConvolutionAlgebra a(AlgebraKind::kingman);
  a.s_ = s;
  return a;
}

ConvolutionAlgebra ConvolutionAlgebra::kendall_type(double c, double p) {
  require(p >= 2.0 && std::isfinite(p), "kendall_type: p must be >= 2");
  require(std::abs(c * (p - 1.0) - 1.0) <= 1e-9, "kendall_type: only c = 1/(p - 1) is supported");
  ConvolutionAlgebra a(AlgebraKind::kendall_type);
  a.c_ = 1.0 / (p - 1.0);
  a.p_ = p;
  a.lambda1_ = laws::kendall_type_lambda1(p);
  a.lambda2_ = laws::kendall_type_lambda2(p);
  for (const auto* law : {a.lambda1_.get(), a.lambda2_.get()}) {
    const double m = law_mass(*law);
    if (std::abs(m - 1.0) > 1e-8)
      throw ParameterError("kendall_type: " + law->name() + " has mass " + std::to_string(m));
  }
  return a;
}

ConvolutionAlgebra ConvolutionAlgebra::kendall_type(double p) {
  require(p > 1.0, "kendall_type: p must be >= 2");
  return kendall_type(1.0 / (p - 1.0), p);
}

std::string to_string(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::classical: return "classical";
    case AlgebraKind::symmetric: return "symmetric";
    case AlgebraKind::alpha_stable: return "alpha_stable";
    case AlgebraKind::max: return "max";
    case AlgebraKind::kendall: return "kendall";
    case AlgebraKind::kingman: return "kingman";
    case AlgebraKind::kendall_type: return "kendall_type";
  }
  return "unknown";
}

namespace {

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

std::string ConvolutionAlgebra::name() const {
  switch (kind_) {
    case AlgebraKind::alpha_stable:
    case AlgebraKind::kendall: return to_string(kind_) + "(" + short_num(alpha_) + ")";
    case AlgebraKind::kingman: return "kingman(" + short_num(s_) + ")";
    case AlgebraKind::kendall_type: return "kendall_type(" + short_num(c_) + "," + short_num(p_) + ")";
    default: return to_string(kind_);
  }
}

double kernel(const ConvolutionAlgebra& alg, double t) {
  if (t < 0.0) throw ParameterError("kernel: t must be >= 0");
  if (t == 0.0) return 1.0;
  switch (alg.kind()) {
    case AlgebraKind::classical: return std::exp(-t);
    case AlgebraKind::symmetric: return std::cos(t);
    case AlgebraKind::alpha_stable: return std::exp(-std::pow(t, alg.alpha()));
    case AlgebraKind::max: return t <= 1.0 ? 1.0 : 0.0;
    case AlgebraKind::kendall: return t < 1.0 ? 1.0 - std::pow(t, alg.alpha()) : 0.0;
    case AlgebraKind::kingman: {
      const double s = alg.s();
      if (t < 1e-6) return 1.0 - t * t / (4.0 * (s + 1.0));
      return boost::math::tgamma(s + 1.0) * std::pow(2.0 / t, s) * boost::math::cyl_bessel_j(s, t);
    }
    case AlgebraKind::kendall_type:
      return t <= 1.0 ? 1.0 - (alg.c() + 1.0) * t + alg.c() * std::pow(t, alg.p()) : 0.0;
  }
  return 0.0;
}

Distribution convolve_points(const ConvolutionAlgebra& alg, double x, double y) {
  if (!(x >= 0.0 && y >= 0.0) || !std::isfinite(x) || !std::isfinite(y))
    throw ParameterError("convolve_points: arguments must be finite and >= 0");
  if (y == 0.0) return point_mass(x);
  if (x == 0.0) return point_mass(y);
  const double m = std::min(x, y);
  const double big = std::max(x, y);
  const double r = m / big;
  switch (alg.kind()) {
    case AlgebraKind::classical: return point_mass(x + y);
    case AlgebraKind::symmetric:
      return Distribution({{big - m, 0.5}, {x + y, 0.5}}, {});
    case AlgebraKind::alpha_stable: {
      const double a = alg.alpha();
      return point_mass(big * std::pow(1.0 + std::pow(r, a), 1.0 / a));
    }
    case AlgebraKind::max: return point_mass(big);
    case AlgebraKind::kendall: {
      const double w = std::pow(r, alg.alpha());
      return Distribution({{big, 1.0 - w}}, {{w, big, laws::pareto(2.0 * alg.alpha())}});
    }
    case AlgebraKind::kingman:
      return Distribution({}, {{1.0, big, laws::kingman_radial(r, alg.s())}});
    case AlgebraKind::kendall_type: {
      const double p = alg.p();
      const double rp = std::pow(r, p);
      const double phi = std::max(0.0, kernel(alg, r));
      const double w2 = std::max(0.0, 1.0 - phi - rp);
      return Distribution({{big, phi}}, {{rp, big, alg.lambda1()}, {w2, big, alg.lambda2()}});
    }
  }
  throw UnsupportedError("convolve_points: unknown algebra");
}

Distribution dilate(const Distribution& d, double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw ParameterError("dilate: factor must be finite and >= 0");
  if (a == 0.0) return point_mass(0.0);
  std::vector<Atom> atoms;
  for (const auto& at : d.atoms()) atoms.push_back({at.location * a, at.mass});
  std::vector<Component> parts;
  for (const auto& c : d.components()) parts.push_back({c.weight, c.scale * a, c.law});
  const auto& f = d.family();
  FamilyTag tag;
  if (f.is("point") || f.is("lom_max"))
    tag = {f.name, {f.params[0] * a}};
  else if (f.is("lom_kendall"))
    tag = {f.name, {f.params[0] / a, f.params[1]}};
  else if (f.is("lom_alpha"))
    tag = {f.name, {f.params[0] * std::pow(a, -f.params[1]), f.params[1]}};
  else if (f.is("uniform"))
    tag = {f.name, {f.params[0] * a, f.params[1] * a}};
  return Distribution(std::move(atoms), std::move(parts), std::move(tag));
}

double char_fn(const ConvolutionAlgebra& alg, const Distribution& d, double t) {
  if (t < 0.0) throw ParameterError("char_fn: t must be >= 0");
  double phi = 0.0;
  for (const auto& a : d.atoms()) phi += a.mass * kernel(alg, a.location * t);
  for (const auto& c : d.components()) {
    const double tau = t * c.scale;
    const auto& law = *c.law;
    if (tau == 0.0) {
      phi += c.weight;
      continue;
    }
    // Compact kernels only see the mass below 1 / tau.
    double q_end = 1.0;
    switch (alg.kind()) {
      case AlgebraKind::max:
        phi += c.weight * law.cdf(1.0 / tau);
        continue;
      case AlgebraKind::kendall:
      case AlgebraKind::kendall_type:
        q_end = law.cdf(1.0 / tau);
        break;
      default: break;
    }
    if (q_end <= 0.0) continue;
    const double x_end = q_end < 1.0 ? std::min(law.upper(), 1.0 / tau) : law.upper();
    if (std::isfinite(x_end)) {
      // Bounded range: integrate against the density, piece by piece between kinks.
      std::vector<double> cuts{law.lower()};
      for (double k : law.kinks())
        if (k < x_end) cuts.push_back(k);
      cuts.push_back(x_end);
      auto integrand = [&](double x) { return kernel(alg, tau * x) * law.density(x); };
      double part = 0.0;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) part += quad::integrate_singular(integrand, cuts[i], cuts[i + 1]);
      phi += c.weight * part;
      continue;
    }
    auto integrand = [&](double q) { return kernel(alg, tau * law.quantile(q)); };
    phi += c.weight * quad::integrate(integrand, 0.0, q_end);
  }
  return phi;
}

}  // namespace gcruin
