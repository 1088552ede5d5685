#include "gcruin/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gcruin/errors.hpp"

namespace gcruin::io {

namespace {

std::string field(const std::string& path, const std::string& key) { return path + "." + key; }

const Json& require(const Json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError(field(path, key), "missing field");
  return *it;
}

double number(const Json& j, const std::string& path, const std::string& key) {
  const Json& v = require(j, path, key);
  if (!v.is_number()) throw ValidationError(field(path, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(field(path, key), "expected a finite number");
  return x;
}

double number_or(const Json& j, const std::string& path, const std::string& key, double fallback) {
  return j.contains(key) ? number(j, path, key) : fallback;
}

std::string text(const Json& j, const std::string& path, const std::string& key) {
  const Json& v = require(j, path, key);
  if (!v.is_string()) throw ValidationError(field(path, key), "expected a string");
  return v.get<std::string>();
}

// Runs a factory, attributing parameter errors to the object at `path`.
template <class F>
auto build(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParameterError& e) {
    throw ValidationError(path, e.what());
  }
}

std::vector<Atom> atoms_from_json(const Json& j, const std::string& path) {
  std::vector<Atom> out;
  if (!j.is_array()) throw ValidationError(path, "expected an array of {x, mass}");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const double x = number(j[i], p, "x");
    const double m = number(j[i], p, "mass");
    if (x < 0.0) throw ValidationError(field(p, "x"), "atom location must be >= 0");
    if (!(m > 0.0 && m <= 1.0)) throw ValidationError(field(p, "mass"), "atom mass must lie in (0, 1]");
    out.push_back({x, m});
  }
  return out;
}

std::vector<std::pair<double, double>> points_from_json(const Json& j, const std::string& path) {
  std::vector<std::pair<double, double>> out;
  if (!j.is_array()) throw ValidationError(path, "expected an array of [x, F] pairs");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const Json& e = j[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ValidationError(p, "expected [x, F]");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

}  // namespace

Json parse_json_arg(const std::string& arg) {
  std::string body = arg;
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw ValidationError("$", "cannot read file " + arg.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw ValidationError("$", std::string("malformed JSON: ") + e.what());
  }
}

Distribution law_from_json(const Json& j, const std::string& path) {
  const std::string fam = text(j, path, "family");
  if (fam == "pareto2a") {
    const double a = number(j, path, "alpha");
    return build(path, [&] { return pareto_2alpha(a); });
  }
  if (fam == "lom_alpha") {
    const double g = number(j, path, "gamma");
    const double a = number(j, path, "alpha");
    return build(path, [&] { return lom_alpha(g, a); });
  }
  if (fam == "lom_max") {
    const double a = number(j, path, "a");
    return build(path, [&] { return lom_max(a); });
  }
  if (fam == "lom_kendall") {
    const double c = number(j, path, "c");
    const double a = number(j, path, "alpha");
    return build(path, [&] { return lom_kendall(c, a); });
  }
  if (fam == "uniform") {
    const double a = number(j, path, "a");
    const double b = number(j, path, "b");
    return build(path, [&] { return uniform(a, b); });
  }
  if (fam == "exponential") {
    const double r = number(j, path, "rate");
    return build(path, [&] { return exponential(r); });
  }
  if (fam == "point") {
    const double x = number(j, path, "x");
    if (x < 0.0) throw ValidationError(field(path, "x"), "location must be >= 0");
    return point_mass(x);
  }
  if (fam == "table") {
    auto atoms = j.contains("atoms") ? atoms_from_json(j["atoms"], field(path, "atoms")) : std::vector<Atom>{};
    auto pts = j.contains("cdf") ? points_from_json(j["cdf"], field(path, "cdf"))
                                 : std::vector<std::pair<double, double>>{};
    return build(path, [&] { return table(std::move(atoms), std::move(pts)); });
  }
  throw ValidationError(field(path, "family"), "unknown family '" + fam + "'");
}

ConvolutionAlgebra algebra_from_json(const Json& j, const std::string& path) {
  const std::string kind = text(j, path, "kind");
  if (kind == "classical") return ConvolutionAlgebra::classical();
  if (kind == "symmetric") return ConvolutionAlgebra::symmetric();
  if (kind == "max") return ConvolutionAlgebra::max();
  if (kind == "alpha_stable") {
    const double a = number(j, path, "alpha");
    return build(path, [&] { return ConvolutionAlgebra::alpha_stable(a); });
  }
  if (kind == "kendall") {
    const double a = number(j, path, "alpha");
    return build(path, [&] { return ConvolutionAlgebra::kendall(a); });
  }
  if (kind == "kingman") {
    const double s = number(j, path, "s");
    return build(path, [&] { return ConvolutionAlgebra::kingman(s); });
  }
  if (kind == "kendall_type") {
    const double p = number(j, path, "p");
    if (j.contains("c")) {
      const double c = number(j, path, "c");
      return build(path, [&] { return ConvolutionAlgebra::kendall_type(c, p); });
    }
    return build(path, [&] { return ConvolutionAlgebra::kendall_type(p); });
  }
  throw ValidationError(field(path, "kind"), "unknown algebra '" + kind + "'");
}

RiskModel model_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  RiskModel m{algebra_from_json(require(j, path, "algebra"), field(path, "algebra")),
              law_from_json(require(j, path, "claims"), field(path, "claims")),
              law_from_json(require(j, path, "premiums"), field(path, "premiums")),
              number_or(j, path, "u", 0.0), number_or(j, path, "lambda", 1.0), number_or(j, path, "beta", 1.0)};
  if (m.u < 0.0) throw ValidationError(field(path, "u"), "must be >= 0");
  if (!(m.lambda > 0.0)) throw ValidationError(field(path, "lambda"), "must be positive");
  if (!(m.beta > 0.0)) throw ValidationError(field(path, "beta"), "must be positive");
  return m;
}

Json to_json(const ConvolutionAlgebra& alg) {
  Json j;
  j["kind"] = to_string(alg.kind());
  switch (alg.kind()) {
    case AlgebraKind::alpha_stable:
    case AlgebraKind::kendall: j["alpha"] = alg.alpha(); break;
    case AlgebraKind::kingman: j["s"] = alg.s(); break;
    case AlgebraKind::kendall_type:
      j["p"] = alg.p();
      j["c"] = alg.c();
      break;
    default: break;
  }
  return j;
}

Json family_json(const Distribution& d) {
  const auto& t = d.family();
  const auto& p = t.params;
  if (t.is("pareto2a")) return {{"family", "pareto2a"}, {"alpha", p[0]}};
  if (t.is("lom_alpha")) return {{"family", "lom_alpha"}, {"gamma", p[0]}, {"alpha", p[1]}};
  if (t.is("lom_max")) return {{"family", "lom_max"}, {"a", p[0]}};
  if (t.is("lom_kendall")) return {{"family", "lom_kendall"}, {"c", p[0]}, {"alpha", p[1]}};
  if (t.is("uniform")) return {{"family", "uniform"}, {"a", p[0]}, {"b", p[1]}};
  if (t.is("point")) return {{"family", "point"}, {"x", p[0]}};
  return nullptr;
}

Json distribution_json(const Distribution& d, int points) {
  Json j;
  j["family"] = family_json(d);
  Json atoms = Json::array();
  for (const auto& a : d.atoms()) atoms.push_back({{"x", a.location}, {"mass", a.mass}});
  j["atoms"] = atoms;
  const double lo = d.support_lower();
  double hi = d.support_upper();
  if (!std::isfinite(hi)) hi = d.quantile(1.0 - 1e-4);
  Json xs = Json::array();
  Json fs = Json::array();
  if (points >= 2 && hi > lo) {
    for (int i = 0; i < points; ++i) {
      const double x = lo + (hi - lo) * i / (points - 1);
      xs.push_back(x);
      fs.push_back(d.cdf(x));
    }
  } else {
    xs.push_back(lo);
    fs.push_back(d.cdf(lo));
  }
  j["cdf_table"] = {{"x", xs}, {"F", fs}};
  return j;
}

Json to_json(const SafetyReport& r) {
  Json j;
  j["t"] = r.t;
  j["premium_side"] = r.premium_side;
  j["claim_side"] = r.claim_side;
  j["margin"] = r.margin;
  j["condition_holds"] = r.condition_holds;
  if (r.formula_premium_side) j["formula_premium_side"] = *r.formula_premium_side;
  if (r.formula_margin) j["formula_margin"] = *r.formula_margin;
  return j;
}

}  // namespace gcruin::io
