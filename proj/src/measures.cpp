#include "gcruin/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "gcruin/errors.hpp"
#include "gcruin/quadrature.hpp"
#include "gcruin/rng.hpp"

namespace gcruin {

double ContinuousLaw::quantile(double q) const {
  const double lo0 = lower();
  double hi = upper();
  if (!std::isfinite(hi)) {
    hi = std::max(1.0, 2.0 * lo0);
    while (cdf(hi) < q) {
      hi *= 2.0;
      if (hi > 1e300) throw NumericError(name() + ": quantile bracket overflow");
    }
  }
  double lo = lo0;
  auto f = [&](double x) { return cdf(x) - q; };
  if (f(lo) >= 0.0) return lo;
  if (f(hi) <= 0.0) return hi;
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (a + b);
}

namespace laws {
namespace {

class Pareto final : public ContinuousLaw {
 public:
  explicit Pareto(double k) : k_(k) {}
  double cdf(double x) const override { return x <= 1.0 ? 0.0 : -std::expm1(-k_ * std::log(x)); }
  double survival(double x) const override { return x <= 1.0 ? 1.0 : std::pow(x, -k_); }
  double density(double x) const override { return x < 1.0 ? 0.0 : k_ * std::pow(x, -k_ - 1.0); }
  double quantile(double q) const override { return std::exp(-std::log1p(-q) / k_); }
  double lower() const override { return 1.0; }
  double upper() const override { return kInf; }
  double tail_index() const override { return k_; }
  std::string name() const override { return "pareto"; }

 private:
  double k_;
};

class Weibull final : public ContinuousLaw {
 public:
  Weibull(double gamma, double alpha) : gamma_(gamma), alpha_(alpha) {}
  double cdf(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-gamma_ * std::pow(x, alpha_)); }
  double survival(double x) const override { return x <= 0.0 ? 1.0 : std::exp(-gamma_ * std::pow(x, alpha_)); }
  double density(double x) const override {
    if (x <= 0.0) return 0.0;
    return gamma_ * alpha_ * std::pow(x, alpha_ - 1.0) * std::exp(-gamma_ * std::pow(x, alpha_));
  }
  double quantile(double q) const override {
    const double e = -std::log1p(-q) / gamma_;
    return alpha_ == 1.0 ? e : std::pow(e, 1.0 / alpha_);
  }
  double lower() const override { return 0.0; }
  double upper() const override { return kInf; }
  std::string name() const override { return "weibull"; }
  double gamma() const { return gamma_; }
  double alpha() const { return alpha_; }

 private:
  double gamma_, alpha_;
};

class Power final : public ContinuousLaw {
 public:
  explicit Power(double alpha) : alpha_(alpha) {}
  double cdf(double x) const override { return x <= 0.0 ? 0.0 : x >= 1.0 ? 1.0 : std::pow(x, alpha_); }
  double density(double x) const override {
    return (x <= 0.0 || x > 1.0) ? 0.0 : alpha_ * std::pow(x, alpha_ - 1.0);
  }
  double quantile(double q) const override { return std::pow(q, 1.0 / alpha_); }
  double lower() const override { return 0.0; }
  double upper() const override { return 1.0; }
  std::string name() const override { return "power"; }

 private:
  double alpha_;
};

class Uniform final : public ContinuousLaw {
 public:
  Uniform(double a, double b) : a_(a), b_(b) {}
  double cdf(double x) const override { return x <= a_ ? 0.0 : x >= b_ ? 1.0 : (x - a_) / (b_ - a_); }
  double survival(double x) const override { return x <= a_ ? 1.0 : x >= b_ ? 0.0 : (b_ - x) / (b_ - a_); }
  double density(double x) const override { return (x < a_ || x > b_) ? 0.0 : 1.0 / (b_ - a_); }
  double quantile(double q) const override { return a_ + q * (b_ - a_); }
  double lower() const override { return a_; }
  double upper() const override { return b_; }
  std::string name() const override { return "uniform"; }

 private:
  double a_, b_;
};

class PiecewiseLinear final : public ContinuousLaw {
 public:
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> pts) : pts_(std::move(pts)) {}

  double cdf(double x) const override {
    if (x <= pts_.front().first) return 0.0;
    if (x >= pts_.back().first) return 1.0;
    auto it = std::upper_bound(pts_.begin(), pts_.end(), x, [](double v, const auto& p) { return v < p.first; });
    const auto& [x1, f1] = *it;
    const auto& [x0, f0] = *(it - 1);
    return f0 + (f1 - f0) * (x - x0) / (x1 - x0);
  }
  double density(double x) const override {
    if (x < pts_.front().first || x >= pts_.back().first) return 0.0;
    auto it = std::upper_bound(pts_.begin(), pts_.end(), x, [](double v, const auto& p) { return v < p.first; });
    const auto& [x1, f1] = *it;
    const auto& [x0, f0] = *(it - 1);
    return (f1 - f0) / (x1 - x0);
  }
  double quantile(double q) const override {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), q, [](const auto& p, double v) { return p.second < v; });
    if (it == pts_.begin()) return pts_.front().first;
    if (it == pts_.end()) return pts_.back().first;
    const auto& [x1, f1] = *it;
    const auto& [x0, f0] = *(it - 1);
    return x0 + (x1 - x0) * (q - f0) / (f1 - f0);
  }
  double lower() const override { return pts_.front().first; }
  double upper() const override { return pts_.back().first; }
  std::vector<double> kinks() const override {
    std::vector<double> k;
    for (std::size_t i = 1; i + 1 < pts_.size(); ++i) k.push_back(pts_[i].first);
    return k;
  }
  std::string name() const override { return "piecewise_linear"; }

 private:
  std::vector<std::pair<double, double>> pts_;
};

class PowerOf final : public ContinuousLaw {
 public:
  PowerOf(LawPtr base, double p) : base_(std::move(base)), p_(p) {}
  double cdf(double x) const override { return x <= 0.0 ? 0.0 : base_->cdf(root(x)); }
  double survival(double x) const override { return x <= 0.0 ? 1.0 : base_->survival(root(x)); }
  double density(double x) const override {
    if (x <= 0.0) return 0.0;
    const double r = root(x);
    return base_->density(r) * r / (p_ * x);
  }
  double quantile(double q) const override { return std::pow(base_->quantile(q), p_); }
  double lower() const override { return std::pow(base_->lower(), p_); }
  double upper() const override { return std::pow(base_->upper(), p_); }
  double tail_index() const override { return base_->tail_index() / p_; }
  std::vector<double> kinks() const override {
    auto k = base_->kinks();
    for (double& v : k) v = std::pow(v, p_);
    return k;
  }
  std::string name() const override { return base_->name() + "^p"; }

 private:
  double root(double x) const { return std::pow(x, 1.0 / p_); }
  LawPtr base_;
  double p_;
};

}  // namespace

LawPtr pareto(double index) { return std::make_shared<Pareto>(index); }
LawPtr weibull(double gamma, double alpha) { return std::make_shared<Weibull>(gamma, alpha); }
LawPtr power(double alpha) { return std::make_shared<Power>(alpha); }
LawPtr uniform(double a, double b) { return std::make_shared<Uniform>(a, b); }
LawPtr piecewise_linear(std::vector<std::pair<double, double>> points) {
  return std::make_shared<PiecewiseLinear>(std::move(points));
}
LawPtr power_of(LawPtr base, double p) {
  if (p == 1.0) return base;
  // X ~ Weibull(gamma, alpha) => X^alpha ~ exponential(gamma).
  if (auto w = std::dynamic_pointer_cast<const Weibull>(base); w && std::abs(w->alpha() - p) < 1e-15)
    return weibull(w->gamma(), 1.0);
  return std::make_shared<PowerOf>(std::move(base), p);
}

}  // namespace laws

// ---------------------------------------------------------------------------

Distribution::Distribution(std::vector<Atom> atoms, std::vector<Component> parts, FamilyTag family)
    : family_(std::move(family)) {
  for (const auto& a : atoms) {
    if (!(a.location >= 0.0) || !std::isfinite(a.location)) throw ParameterError("atom location must be finite and >= 0");
    if (!(a.mass >= 0.0)) throw ParameterError("atom mass must be >= 0");
  }
  for (auto& c : parts) {
    if (!(c.weight >= 0.0)) throw ParameterError("component weight must be >= 0");
    if (!c.law) throw ParameterError("component without law");
    if (c.weight == 0.0) continue;
    if (c.scale == 0.0) {
      atoms.push_back({0.0, c.weight});
      continue;
    }
    if (!(c.scale > 0.0) || !std::isfinite(c.scale)) throw ParameterError("component scale must be finite and >= 0");
    parts_.push_back(c);
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (const auto& a : atoms) {
    if (a.mass == 0.0) continue;
    if (!atoms_.empty() && atoms_.back().location == a.location)
      atoms_.back().mass += a.mass;
    else
      atoms_.push_back(a);
  }
  double total = 0.0;
  for (const auto& a : atoms_) total += a.mass;
  for (const auto& c : parts_) total += c.weight;
  if (std::abs(total - 1.0) > 1e-10) throw ParameterError("total mass " + std::to_string(total) + " != 1");
  double acc = 0.0;
  for (const auto& a : atoms_) cumulative_.push_back(acc += a.mass);
  for (const auto& c : parts_) cumulative_.push_back(acc += c.weight);
}

double Distribution::cdf(double x) const {
  if (x < 0.0) return 0.0;
  double s = 0.0;
  for (const auto& a : atoms_) {
    if (a.location > x) break;
    s += a.mass;
  }
  for (const auto& c : parts_) s += c.weight * c.law->cdf(x / c.scale);
  return std::clamp(s, 0.0, 1.0);
}

double Distribution::cdf_left(double x) const {
  if (x <= 0.0) return 0.0;
  double s = 0.0;
  for (const auto& a : atoms_) {
    if (a.location >= x) break;
    s += a.mass;
  }
  for (const auto& c : parts_) s += c.weight * c.law->cdf(x / c.scale);
  return std::clamp(s, 0.0, 1.0);
}

double Distribution::survival(double x) const {
  if (x < 0.0) return 1.0;
  double s = 0.0;
  for (const auto& a : atoms_)
    if (a.location > x) s += a.mass;
  for (const auto& c : parts_) s += c.weight * c.law->survival(x / c.scale);
  return std::clamp(s, 0.0, 1.0);
}

double Distribution::density(double x) const {
  double s = 0.0;
  for (const auto& c : parts_) s += c.weight * c.law->density(x / c.scale) / c.scale;
  return s;
}

double Distribution::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw ParameterError("quantile level must lie in (0, 1)");
  if (atoms_.empty() && parts_.size() == 1) return parts_[0].scale * parts_[0].law->quantile(q);
  if (parts_.empty()) return draw(q);
  double lo = support_lower();
  double hi = support_upper();
  if (cdf(lo) >= q) return lo;
  if (!std::isfinite(hi)) {
    hi = std::max(1.0, 2.0 * lo);
    while (cdf(hi) < q) hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 4e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) >= q)
      hi = mid;
    else
      lo = mid;
  }
  for (const auto& a : atoms_)
    if (a.location >= lo && a.location <= hi && cdf(a.location) >= q) return a.location;
  return hi;
}

double Distribution::draw(double q) const {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), q);
  std::size_t k = it == cumulative_.end() ? cumulative_.size() - 1 : static_cast<std::size_t>(it - cumulative_.begin());
  if (k < atoms_.size()) return atoms_[k].location;
  const auto& c = parts_[k - atoms_.size()];
  const double start = k == 0 ? 0.0 : cumulative_[k - 1];
  const double r = std::clamp((q - start) / c.weight, 0x1.0p-54, 1.0 - 0x1.0p-54);
  return c.scale * c.law->quantile(r);
}

double Distribution::support_lower() const {
  double lo = kInf;
  if (!atoms_.empty()) lo = atoms_.front().location;
  for (const auto& c : parts_) lo = std::min(lo, c.scale * c.law->lower());
  return lo;
}

double Distribution::support_upper() const {
  double hi = 0.0;
  if (!atoms_.empty()) hi = atoms_.back().location;
  for (const auto& c : parts_) hi = std::max(hi, c.scale * c.law->upper());
  return hi;
}

double Distribution::tail_index() const {
  double k = kInf;
  for (const auto& c : parts_) k = std::min(k, c.law->tail_index());
  return k;
}

double Distribution::atom_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.mass;
  return m;
}

std::vector<double> Distribution::breakpoints() const {
  std::vector<double> b;
  for (const auto& a : atoms_) b.push_back(a.location);
  for (const auto& c : parts_) {
    b.push_back(c.scale * c.law->lower());
    b.push_back(c.scale * c.law->upper());
    for (double k : c.law->kinks()) b.push_back(c.scale * k);
  }
  std::erase_if(b, [](double v) { return !std::isfinite(v); });
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

// ---------------------------------------------------------------------------

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(what) + " must be positive and finite");
}

}  // namespace

Distribution point_mass(double x) { return Distribution({{x, 1.0}}, {}, {"point", {x}}); }

Distribution pareto_2alpha(double alpha) {
  require_positive(alpha, "alpha");
  return Distribution({}, {{1.0, 1.0, laws::pareto(2.0 * alpha)}}, {"pareto2a", {alpha}});
}

Distribution lom_alpha(double gamma, double alpha) {
  require_positive(gamma, "gamma");
  require_positive(alpha, "alpha");
  return Distribution({}, {{1.0, 1.0, laws::weibull(gamma, alpha)}}, {"lom_alpha", {gamma, alpha}});
}

Distribution lom_max(double a) {
  require_positive(a, "a");
  return Distribution({{a, 1.0}}, {}, {"lom_max", {a}});
}

Distribution lom_kendall(double c, double alpha) {
  require_positive(c, "c");
  require_positive(alpha, "alpha");
  return Distribution({}, {{1.0, 1.0 / c, laws::power(alpha)}}, {"lom_kendall", {c, alpha}});
}

Distribution uniform(double a, double b) {
  if (!(a >= 0.0 && b > a) || !std::isfinite(b)) throw ParameterError("uniform requires 0 <= a < b < inf");
  return Distribution({}, {{1.0, 1.0, laws::uniform(a, b)}}, {"uniform", {a, b}});
}

Distribution exponential(double rate) { return lom_alpha(rate, 1.0); }

Distribution table(std::vector<Atom> atoms, std::vector<std::pair<double, double>> cdf_points) {
  double atom_total = 0.0;
  for (const auto& a : atoms) atom_total += a.mass;
  const double rest = 1.0 - atom_total;
  std::vector<Component> parts;
  if (rest > 1e-12) {
    if (cdf_points.size() < 2) throw ParameterError("table: continuous mass requires at least two cdf points");
    for (std::size_t i = 0; i < cdf_points.size(); ++i) {
      const auto [x, f] = cdf_points[i];
      if (!(x >= 0.0) || !std::isfinite(x) || f < 0.0 || f > 1.0) throw ParameterError("table: cdf point out of range");
      if (i > 0 && (x <= cdf_points[i - 1].first || f < cdf_points[i - 1].second))
        throw ParameterError("table: cdf points must be strictly increasing in x and nondecreasing in F");
    }
    if (cdf_points.front().second != 0.0 || cdf_points.back().second != 1.0)
      throw ParameterError("table: cdf must run from 0 to 1");
    parts.push_back({rest, 1.0, laws::piecewise_linear(std::move(cdf_points))});
  } else if (std::abs(rest) > 1e-10) {
    throw ParameterError("table: atom masses exceed 1");
  } else if (!atoms.empty()) {
    atoms.back().mass += rest;
  }
  return Distribution(std::move(atoms), std::move(parts), {"table", {}});
}

Distribution pushforward_power(const Distribution& d, double p) {
  require_positive(p, "power");
  std::vector<Atom> atoms;
  for (const auto& a : d.atoms()) atoms.push_back({std::pow(a.location, p), a.mass});
  std::vector<Component> parts;
  for (const auto& c : d.components()) parts.push_back({c.weight, std::pow(c.scale, p), laws::power_of(c.law, p)});
  FamilyTag tag;
  if (d.family().is("lom_alpha") && std::abs(d.family().params[1] - p) < 1e-15)
    tag = {"lom_alpha", {d.family().params[0], 1.0}};
  return Distribution(std::move(atoms), std::move(parts), std::move(tag));
}

double moment_alpha(const Distribution& d, double alpha) {
  require_positive(alpha, "alpha");
  double m = 0.0;
  for (const auto& a : d.atoms()) m += a.mass * std::pow(a.location, alpha);
  for (const auto& c : d.components()) {
    const auto& law = *c.law;
    const double k = law.tail_index();
    if (k <= alpha) return kInf;
    // E Y^alpha = lower^alpha + int_lower^upper alpha y^{alpha-1} P(Y > y) dy, taken in
    // y for alpha >= 1 and in v = y^alpha otherwise so the integrand stays bounded.
    const bool in_y = alpha >= 1.0;
    auto map = [&](double y) { return in_y ? y : std::pow(y, alpha); };
    auto integrand = [&](double x) {
      return in_y ? alpha * std::pow(x, alpha - 1.0) * law.survival(x) : law.survival(std::pow(x, 1.0 / alpha));
    };
    std::vector<double> breaks;
    for (double x : law.kinks()) breaks.push_back(map(x));
    double part = std::pow(law.lower(), alpha);
    if (std::isfinite(law.upper())) {
      part += quad::integrate(integrand, map(law.lower()), map(law.upper()), breaks);
    } else {
      const auto r = quad::integrate_to_infinity(integrand, map(law.lower()), breaks);
      part += r.value;
      if (!r.converged) {
        if (!std::isfinite(k)) return kInf;
        // Power-law remainder beyond the truncation bound Y.
        const double y = in_y ? r.reached : std::pow(r.reached, 1.0 / alpha);
        part += alpha * std::pow(y, alpha) * law.survival(y) / (k - alpha);
      }
    }
    m += c.weight * std::pow(c.scale, alpha) * part;
  }
  return m;
}

std::vector<double> sample(const Distribution& d, std::size_t n, std::uint64_t seed) {
  rng::SplitMix64 gen(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = d.quantile(gen.uniform());
  return out;
}

}  // namespace gcruin
