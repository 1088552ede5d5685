#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gcruin/cli.hpp"
#include "gcruin/convolutions.hpp"
#include "gcruin/errors.hpp"
#include "gcruin/io.hpp"
#include "gcruin/measures.hpp"
#include "gcruin/risk.hpp"
#include "gcruin/ruin.hpp"
#include "gcruin/walks.hpp"
#include "gcruin/williamson.hpp"

namespace py = pybind11;
using namespace gcruin;

namespace {

std::tuple<int, std::string, std::string> run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"gcruin"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = GCRUIN_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  auto numeric = py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<CertainRuinError>(m, "CertainRuinError", numeric.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());

  py::class_<Distribution>(m, "Distribution")
      .def("cdf", &Distribution::cdf)
      .def("cdf_left", &Distribution::cdf_left)
      .def("survival", &Distribution::survival)
      .def("density", &Distribution::density)
      .def("quantile", &Distribution::quantile)
      .def_property_readonly("support", [](const Distribution& d) { return std::pair{d.support_lower(), d.support_upper()}; })
      .def_property_readonly("atoms", [](const Distribution& d) {
        std::vector<std::pair<double, double>> out;
        for (const auto& a : d.atoms()) out.emplace_back(a.location, a.mass);
        return out;
      })
      .def_property_readonly("family", [](const Distribution& d) { return d.family().name; })
      .def_property_readonly("params", [](const Distribution& d) { return d.family().params; })
      .def("sample", [](const Distribution& d, std::size_t n, std::uint64_t seed) { return sample(d, n, seed); },
           py::arg("n"), py::arg("seed") = rng::kDefaultSeed)
      .def("__repr__", [](const Distribution& d) { return "<Distribution " + io::family_json(d).dump() + ">"; });

  m.def("point_mass", &point_mass, py::arg("x"));
  m.def("pareto_2alpha", &pareto_2alpha, py::arg("alpha"));
  m.def("lom_alpha", &lom_alpha, py::arg("gamma"), py::arg("alpha"));
  m.def("lom_max", &lom_max, py::arg("a"));
  m.def("lom_kendall", &lom_kendall, py::arg("c"), py::arg("alpha"));
  m.def("uniform", &uniform, py::arg("a"), py::arg("b"));
  m.def("exponential", &exponential, py::arg("rate"));
  m.def("moment_alpha", &moment_alpha, py::arg("law"), py::arg("alpha"));
  m.def("law_from_json", [](const std::string& s) { return io::law_from_json(io::parse_json_arg(s)); });

  py::class_<ConvolutionAlgebra>(m, "Algebra")
      .def_static("classical", &ConvolutionAlgebra::classical)
      .def_static("symmetric", &ConvolutionAlgebra::symmetric)
      .def_static("alpha_stable", &ConvolutionAlgebra::alpha_stable, py::arg("alpha"))
      .def_static("max", &ConvolutionAlgebra::max)
      .def_static("kendall", &ConvolutionAlgebra::kendall, py::arg("alpha"))
      .def_static("kingman", &ConvolutionAlgebra::kingman, py::arg("s"))
      .def_static("kendall_type", py::overload_cast<double, double>(&ConvolutionAlgebra::kendall_type), py::arg("c"),
                  py::arg("p"))
      .def_property_readonly("name", &ConvolutionAlgebra::name)
      .def_property_readonly("alpha", &ConvolutionAlgebra::alpha)
      .def("__repr__", [](const ConvolutionAlgebra& a) { return "<Algebra " + a.name() + ">"; });

  m.def("kernel", &kernel, py::arg("algebra"), py::arg("t"));
  m.def("convolve_points", &convolve_points, py::arg("algebra"), py::arg("x"), py::arg("y"));
  m.def("dilate", &dilate, py::arg("law"), py::arg("a"));
  m.def("char_fn", &char_fn, py::arg("algebra"), py::arg("law"), py::arg("t"));

  m.def("williamson_transform",
        [](const Distribution& d, double alpha, double t) { return williamson_transform(d, alpha, t); }, py::arg("law"),
        py::arg("alpha"), py::arg("t"));
  m.def("williamson_invert", [](const RealFn& H, double alpha, double t) { return williamson_invert(H, alpha, t); },
        py::arg("H"), py::arg("alpha"), py::arg("t"));
  m.def(
      "kendall_walk_cdf",
      [](const Distribution& d, double alpha, int n, double t) { return n_step_cdf(kendall_pair(d, alpha), n, t); },
      py::arg("step_law"), py::arg("alpha"), py::arg("n"), py::arg("t"));

  m.def(
      "simulate_walk",
      [](const ConvolutionAlgebra& alg, const Distribution& law, int n, double start, std::uint64_t seed) {
        return simulate(alg, law, n, start, seed).states;
      },
      py::arg("algebra"), py::arg("step_law"), py::arg("n"), py::arg("start") = 0.0,
      py::arg("seed") = rng::kDefaultSeed);
  m.def(
      "simulate_terminal",
      [](const ConvolutionAlgebra& alg, const Distribution& law, int n, double start, std::size_t paths,
         std::uint64_t seed, unsigned workers) { return simulate_terminal(alg, law, n, start, paths, seed, false, workers); },
      py::arg("algebra"), py::arg("step_law"), py::arg("n"), py::arg("start") = 0.0, py::arg("paths") = 10000,
      py::arg("seed") = rng::kDefaultSeed, py::arg("workers") = 0);

  py::class_<RiskModel>(m, "RiskModel")
      .def(py::init([](ConvolutionAlgebra alg, Distribution claims, Distribution premiums, double u, double lambda,
                       double beta) {
             RiskModel r{std::move(alg), std::move(claims), std::move(premiums), u, lambda, beta};
             validate(r);
             return r;
           }),
           py::arg("algebra"), py::arg("claims"), py::arg("premiums"), py::arg("u") = 0.0, py::arg("lam") = 1.0,
           py::arg("beta") = 1.0)
      .def_static("from_json", [](const std::string& s) { return io::model_from_json(io::parse_json_arg(s)); })
      .def_readonly("algebra", &RiskModel::algebra)
      .def_readonly("claims", &RiskModel::claims)
      .def_readonly("premiums", &RiskModel::premiums)
      .def_readwrite("u", &RiskModel::u)
      .def_readwrite("lam", &RiskModel::lambda)
      .def_readwrite("beta", &RiskModel::beta);

  py::class_<SafetyReport>(m, "SafetyReport")
      .def_readonly("margin", &SafetyReport::margin)
      .def_readonly("condition_holds", &SafetyReport::condition_holds)
      .def_readonly("t", &SafetyReport::t)
      .def_readonly("premium_side", &SafetyReport::premium_side)
      .def_readonly("claim_side", &SafetyReport::claim_side)
      .def_readonly("formula_premium_side", &SafetyReport::formula_premium_side)
      .def_readonly("formula_margin", &SafetyReport::formula_margin);
  m.def("safety_condition_max", &safety_condition_max, py::arg("model"), py::arg("t"));
  m.def("safety_condition_kendall", &safety_condition_kendall, py::arg("model"), py::arg("t"));
  m.def("net_profit_alpha", &net_profit_alpha, py::arg("model"));

  py::class_<RuinEstimate>(m, "RuinEstimate")
      .def_readonly("survival", &RuinEstimate::survival)
      .def_readonly("ruin", &RuinEstimate::ruin)
      .def_readonly("ci_low", &RuinEstimate::ci_low)
      .def_readonly("ci_high", &RuinEstimate::ci_high)
      .def_readonly("paths", &RuinEstimate::paths)
      .def_readonly("upper_bound", &RuinEstimate::upper_bound)
      .def_property_readonly("method", [](const RuinEstimate& e) { return to_string(e.method); })
      .def("__repr__", [](const RuinEstimate& e) {
        return "<RuinEstimate method=" + to_string(e.method) + " survival=" + std::to_string(e.survival) + ">";
      });

  m.def(
      "mc_ruin",
      [](const RiskModel& model, std::size_t paths, long horizon, std::uint64_t seed, double confidence,
         unsigned workers) { return mc_ruin(model, McOptions{horizon, paths, seed, confidence, workers}); },
      py::arg("model"), py::arg("paths") = 100000, py::arg("horizon") = 10000, py::arg("seed") = rng::kDefaultSeed,
      py::arg("confidence") = 0.99, py::arg("workers") = 0);
  m.def("alpha_ruin", &alpha_ruin, py::arg("model"), py::arg("steps") = 2000, py::arg("z_max") = 0.0);
  m.def("max_survival", &max_survival, py::arg("u"), py::arg("claims"), py::arg("premiums"));
  m.def("max_uniform_closed_form", &max_uniform_closed_form, py::arg("u"), py::arg("a"), py::arg("b"));

  m.def("run_cli", &run, py::arg("args"),
        "Runs the command-line tool in-process and returns (exit_code, stdout, stderr).");
}
