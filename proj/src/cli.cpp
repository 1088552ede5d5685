#include "gcruin/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcruin/convolutions.hpp"
#include "gcruin/errors.hpp"
#include "gcruin/io.hpp"
#include "gcruin/measures.hpp"
#include "gcruin/parallel.hpp"
#include "gcruin/risk.hpp"
#include "gcruin/rng.hpp"
#include "gcruin/ruin.hpp"
#include "gcruin/walks.hpp"
#include "gcruin/williamson.hpp"

namespace gcruin {

namespace {

using io::Json;

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// "a:b:n" -> n equispaced points from a to b.
std::vector<double> parse_grid(const std::string& spec, const std::string& flag) {
  double a = 0.0, b = 0.0;
  long n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || !in.eof() || n < 1 || !(b >= a))
    throw ValidationError(flag, "expected a:b:n with a <= b and n >= 1");
  std::vector<double> out;
  for (long i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1));
  return out;
}

struct Options {
  std::string out_dir;
  unsigned workers = 0;
  std::uint64_t seed = rng::kDefaultSeed;

  std::string law, algebra, model, step_law, grid, method = "auto", u_grid;
  std::size_t n_samples = 1000;
  double x = 0.0, y = 0.0, alpha = 1.0, start = 0.0, t = 0.0, u = -1.0, confidence = 0.99;
  bool invert = false, full = false;
  int n_steps = 1;
  std::size_t paths = 100000;
  long horizon = 10000;
  int volterra_steps = 2000;
};

// Output of one subcommand: named data files plus the report.
struct Result {
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
};

ConvolutionAlgebra algebra_arg(const std::string& arg, double alpha) {
  if (!arg.empty() && arg[0] != '{' && arg[0] != '@') {
    Json j{{"kind", arg}};
    if (arg == "kendall" || arg == "alpha_stable") j["alpha"] = alpha;
    return io::algebra_from_json(j, "--algebra");
  }
  return io::algebra_from_json(io::parse_json_arg(arg), "--algebra");
}

Result cmd_sample(const Options& o) {
  const auto d = io::law_from_json(io::parse_json_arg(o.law), "--law");
  if (o.n_samples < 1) throw ValidationError("--n", "must be >= 1");
  const auto xs = sample(d, o.n_samples, o.seed);
  std::string csv = "x\n";
  double sum = 0.0;
  for (double v : xs) {
    csv += num(v) + "\n";
    sum += v;
  }
  return {{{"sample.csv", csv}},
          "sample: n=" + std::to_string(xs.size()) + " mean=" + num(sum / static_cast<double>(xs.size()))};
}

Result cmd_convolve(const Options& o) {
  const auto alg = algebra_arg(o.algebra, o.alpha);
  if (o.x < 0.0 || o.y < 0.0) throw ValidationError("--x", "points must be >= 0");
  const auto d = convolve_points(alg, o.x, o.y);
  Json j;
  j["algebra"] = io::to_json(alg);
  j["x"] = o.x;
  j["y"] = o.y;
  j["distribution"] = io::distribution_json(d);
  return {{{"convolve.json", j.dump(2) + "\n"}},
          "convolve: " + alg.name() + " atoms=" + std::to_string(d.atoms().size()) +
              " components=" + std::to_string(d.components().size())};
}

Result cmd_transform(const Options& o) {
  const auto alg = algebra_arg(o.algebra, o.alpha);
  if (alg.kind() != AlgebraKind::kendall) throw ValidationError("--algebra", "transform requires the kendall algebra");
  const auto d = io::law_from_json(io::parse_json_arg(o.law), "--law");
  const double a = alg.alpha();
  const auto ts = parse_grid(o.grid, "--grid");
  for (double t : ts)
    if (!(t > 0.0)) throw ValidationError("--grid", "points must be positive");
  std::string csv = o.invert ? "t,F\n" : "t,phi\n";
  const RealFn H = [&](double s) { return williamson_transform(d, a, 1.0 / s); };
  for (double t : ts) {
    const double v = o.invert ? williamson_invert(H, a, t) : williamson_transform(d, a, t);
    csv += num(t) + "," + num(v) + "\n";
  }
  return {{{"transform.csv", csv}},
          std::string("transform: ") + (o.invert ? "inverted " : "") + std::to_string(ts.size()) + " points"};
}

Result cmd_walk(const Options& o) {
  const auto alg = algebra_arg(o.algebra, o.alpha);
  const auto d = io::law_from_json(io::parse_json_arg(o.step_law), "--step-law");
  if (o.n_steps < 0) throw ValidationError("--n", "must be >= 0");
  if (o.start < 0.0) throw ValidationError("--start", "must be >= 0");
  std::string csv;
  if (o.full) {
    csv = "path,step,state\n";
    for (std::size_t i = 0; i < o.paths; ++i) {
      const auto p = simulate(alg, d, o.n_steps, o.start, rng::mix(o.seed, i));
      for (std::size_t k = 0; k < p.states.size(); ++k)
        csv += std::to_string(i) + "," + std::to_string(k) + "," + num(p.states[k]) + "\n";
    }
  } else {
    csv = "path,state\n";
    const auto xs = simulate_terminal(alg, d, o.n_steps, o.start, o.paths, o.seed, false, o.workers);
    for (std::size_t i = 0; i < xs.size(); ++i) csv += std::to_string(i) + "," + num(xs[i]) + "\n";
  }
  return {{{"walk.csv", csv}},
          "walk: " + alg.name() + " n=" + std::to_string(o.n_steps) + " paths=" + std::to_string(o.paths)};
}

Result cmd_safety(const Options& o) {
  const auto m = io::model_from_json(io::parse_json_arg(o.model), "--model");
  if (!(o.t >= 0.0)) throw ValidationError("--t", "must be >= 0");
  Json j;
  j["algebra"] = io::to_json(m.algebra);
  std::string line;
  switch (m.algebra.kind()) {
    case AlgebraKind::max: {
      const auto r = safety_condition_max(m, o.t);
      j["report"] = io::to_json(r);
      line = "margin=" + num(r.margin);
      break;
    }
    case AlgebraKind::kendall: {
      const auto r = safety_condition_kendall(m, o.t);
      j["report"] = io::to_json(r);
      line = "margin=" + num(r.margin);
      break;
    }
    case AlgebraKind::alpha_stable: {
      const double rho = net_profit_alpha(m);
      j["report"] = {{"rho", rho}, {"condition_holds", rho < 1.0}};
      line = "rho=" + num(rho);
      break;
    }
    default: throw UnsupportedError("safety: supported for the max, kendall and alpha_stable algebras");
  }
  return {{{"safety.json", j.dump(2) + "\n"}}, "safety: " + m.algebra.name() + " " + line};
}

std::string csv_row(double u, const RuinEstimate& r) {
  return num(u) + "," + num(r.survival) + "," + num(r.ruin) + "," + num(r.ci_low) + "," + num(r.ci_high) + "," +
         to_string(r.method) + "\n";
}

// Closed forms known for the max model.
bool max_closed_available(const RiskModel& m) {
  const auto& f = m.claims.family();
  const auto& g = m.premiums.family();
  if (g.is("lom_max")) return true;
  return f.is("uniform") && g.is("uniform") && f.params[0] == 0.0 && g.params[0] == 0.0;
}

Result cmd_ruin(const Options& o) {
  auto m = io::model_from_json(io::parse_json_arg(o.model), "--model");
  std::vector<double> us;
  if (!o.u_grid.empty()) {
    us = parse_grid(o.u_grid, "--u-grid");
  } else {
    us.push_back(o.u >= 0.0 ? o.u : m.u);
  }
  for (double u : us)
    if (u < 0.0) throw ValidationError("--u", "must be >= 0");
  if (!(o.confidence > 0.0 && o.confidence < 1.0)) throw ValidationError("--confidence", "must lie in (0, 1)");

  const auto kind = m.algebra.kind();
  std::string method = o.method;
  if (method == "auto") {
    if (o.t > 0.0)
      method = "mc";
    else if (kind == AlgebraKind::alpha_stable)
      method = "volterra";
    else if (kind == AlgebraKind::max && max_closed_available(m))
      method = "closed";
    else if (kind == AlgebraKind::max && !m.claims.has_atoms() && !m.premiums.has_atoms())
      method = "ode";
    else
      method = "mc";
  }
  Json summary;
  summary["method"] = method;
  summary["algebra"] = io::to_json(m.algebra);
  std::string csv = "u,survival,ruin,ci_low,ci_high,method\n";
  std::vector<RuinEstimate> rows;

  if (method == "volterra") {
    if (kind != AlgebraKind::alpha_stable) throw ValidationError("--method", "volterra requires the alpha_stable algebra");
    const double a = m.algebra.alpha();
    const auto& tag = m.premiums.family();
    if (!tag.is("lom_alpha") || std::abs(tag.params[1] - a) > 1e-15)
      throw ValidationError("--model.premiums", "volterra requires lom_alpha(gamma, alpha) premiums with the algebra's alpha");
    double z_top = 0.0;
    for (double u : us) z_top = std::max(z_top, std::pow(u, a));
    const double z_max = std::max(10.0, 5.0 * z_top);
    const auto f = pushforward_power(m.claims, a);
    const double gamma = tag.params[0];
    const double ba = std::pow(m.beta, a);
    const double rho = alpha_rho(f, gamma, ba);
    summary["rho"] = rho;
    const auto grid = alpha_ruin_volterra(f, gamma, ba, z_max, o.volterra_steps);
    summary["steps"] = o.volterra_steps;
    summary["z_max"] = z_max;
    summary["renewal_residual"] = volterra_residual(grid, f, gamma, ba);
    const std::vector<double> s_values{0.5, 1.0, 2.0};
    const auto lap = alpha_ruin_laplace_check(grid, f, gamma, ba, s_values);
    Json lj = Json::array();
    for (std::size_t i = 0; i < s_values.size(); ++i) lj.push_back({{"s", s_values[i]}, {"residual", lap[i]}});
    summary["laplace_residuals"] = lj;
    for (double u : us) {
      RuinEstimate r;
      r.survival = grid.at(std::pow(u, a));
      r.ruin = 1.0 - r.survival;
      r.ci_low = r.ci_high = r.survival;
      r.method = RuinMethod::volterra;
      rows.push_back(r);
    }
  } else if (method == "ode") {
    if (kind != AlgebraKind::max) throw ValidationError("--method", "ode requires the max algebra");
    const auto grid = max_ruin_ode(m.claims, m.premiums, us);
    summary["integral_residual"] = max_integral_residual(grid, m.claims, m.premiums);
    for (double u : us) {
      RuinEstimate r;
      r.survival = max_survival(u, m.claims, m.premiums);
      r.ruin = 1.0 - r.survival;
      r.ci_low = r.ci_high = r.survival;
      r.method = RuinMethod::ode;
      rows.push_back(r);
    }
  } else if (method == "closed") {
    if (kind != AlgebraKind::max || !max_closed_available(m))
      throw ValidationError("--method", "closed forms exist for max models with lom_max premiums or U(0,a)/U(0,b) laws");
    for (double u : us) {
      if (m.premiums.family().is("lom_max")) {
        rows.push_back(max_ruin_lom(u, m.premiums.family().params[0], m.claims));
      } else {
        RuinEstimate r;
        r.survival = max_uniform_closed_form(u, m.claims.family().params[1], m.premiums.family().params[1]);
        r.ruin = 1.0 - r.survival;
        r.ci_low = r.ci_high = r.survival;
        r.method = RuinMethod::closed_form;
        rows.push_back(r);
      }
    }
  } else if (method == "mc") {
    McOptions mo;
    mo.horizon = o.horizon;
    mo.paths = o.paths;
    mo.seed = o.seed;
    mo.confidence = o.confidence;
    mo.workers = o.workers;
    summary["paths"] = o.paths;
    summary["seed"] = o.seed;
    summary["confidence"] = o.confidence;
    if (o.t > 0.0)
      summary["t"] = o.t;
    else
      summary["horizon"] = o.horizon;
    bool upper = false;
    Json times = Json::array();
    for (double u : us) {
      m.u = u;
      auto r = o.t > 0.0 ? mc_ruin_finite_t(m, o.t, mo) : mc_ruin(m, mo);
      upper = upper || r.upper_bound;
      if (r.mean_ruin_time) times.push_back({{"u", u}, {"mean", r.mean_ruin_time->mean}, {"se", r.mean_ruin_time->se}});
      rows.push_back(r);
    }
    summary["truncated_upper_bound"] = upper;
    summary["mean_ruin_time"] = times;
  } else {
    throw ValidationError("--method", "expected auto, volterra, ode, closed or mc");
  }

  Json rj = Json::array();
  for (std::size_t i = 0; i < us.size(); ++i) {
    csv += csv_row(us[i], rows[i]);
    rj.push_back({{"u", us[i]}, {"survival", rows[i].survival}, {"ruin", rows[i].ruin}});
  }
  summary["results"] = rj;
  std::string line = "ruin: method=" + to_string(rows.front().method) + " u=" + num(us.front()) +
                     " survival=" + num(rows.front().survival);
  if (us.size() > 1) line += " (" + std::to_string(us.size()) + " points)";
  return {{{"ruin.csv", csv}, {"summary.json", summary.dump(2) + "\n"}}, line};
}

Json config_echo(const std::string& command, const Options& o) {
  Json j;
  j["command"] = command;
  // JSON arguments are echoed parsed, file references with their contents.
  auto put = [&](const char* k, const std::string& v) {
    if (v.empty()) return;
    if (v[0] == '{' || v[0] == '@')
      j[k] = io::parse_json_arg(v);
    else
      j[k] = v;
    if (v[0] == '@') j[std::string(k) + "_file"] = v.substr(1);
  };
  put("law", o.law);
  put("algebra", o.algebra);
  put("model", o.model);
  put("step_law", o.step_law);
  put("grid", o.grid);
  put("u_grid", o.u_grid);
  if (command == "ruin") {
    j["method"] = o.method;
    j["paths"] = o.paths;
    j["horizon"] = o.horizon;
    j["confidence"] = o.confidence;
    j["steps"] = o.volterra_steps;
    if (o.u >= 0.0) j["u"] = o.u;
    if (o.t > 0.0) j["t"] = o.t;
  }
  if (command == "sample") j["n"] = o.n_samples;
  if (command == "convolve") {
    j["x"] = o.x;
    j["y"] = o.y;
  }
  if (command == "transform") j["invert"] = o.invert;
  if (command == "walk") {
    j["n"] = o.n_steps;
    j["paths"] = o.paths;
    j["start"] = o.start;
    j["full"] = o.full;
  }
  if (command == "safety") j["t"] = o.t;
  return j;
}

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ValidationError("--out", "cannot write " + p.string());
  f << body;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random walks under generalized convolutions and ruin probabilities", "gcruin"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GCRUIN_VERSION);
  Options o;
  app.add_option("--out", o.out_dir, "Directory for data files and metadata.json");
  app.add_option("--workers", o.workers, "Worker threads (default: GCRUIN_WORKERS or hardware concurrency)");

  auto* sample_cmd = app.add_subcommand("sample", "Draw i.i.d. samples from a law");
  sample_cmd->add_option("--law", o.law, "Law JSON or @file")->required();
  sample_cmd->add_option("--n", o.n_samples, "Sample size");
  sample_cmd->add_option("--seed", o.seed, "Seed");

  auto* conv_cmd = app.add_subcommand("convolve", "delta_x <> delta_y for one algebra");
  conv_cmd->add_option("--algebra", o.algebra, "Algebra JSON, @file or kind name")->required();
  conv_cmd->add_option("--alpha", o.alpha, "alpha when --algebra is a bare kind name");
  conv_cmd->add_option("--x", o.x)->required();
  conv_cmd->add_option("--y", o.y)->required();

  auto* tr_cmd = app.add_subcommand("transform", "Williamson transform or its inversion");
  tr_cmd->add_option("--algebra", o.algebra, "kendall, or an algebra JSON")->required();
  tr_cmd->add_option("--alpha", o.alpha, "alpha when --algebra is a bare kind name");
  tr_cmd->add_option("--law", o.law, "Law JSON or @file")->required();
  tr_cmd->add_flag("--invert", o.invert, "Recover F from the transform");
  tr_cmd->add_option("--grid", o.grid, "t0:t1:n")->required();

  auto* walk_cmd = app.add_subcommand("walk", "Simulate random walks");
  walk_cmd->add_option("--algebra", o.algebra, "Algebra JSON, @file or kind name")->required();
  walk_cmd->add_option("--alpha", o.alpha, "alpha when --algebra is a bare kind name");
  walk_cmd->add_option("--step-law", o.step_law, "Step law JSON or @file")->required();
  walk_cmd->add_option("--n", o.n_steps, "Steps per path")->required();
  walk_cmd->add_option("--paths", o.paths, "Number of paths");
  walk_cmd->add_option("--seed", o.seed, "Seed");
  walk_cmd->add_option("--start", o.start, "Starting state");
  walk_cmd->add_flag("--full", o.full, "Emit whole paths instead of terminal states");

  auto* safety_cmd = app.add_subcommand("safety", "First safety condition at time t");
  safety_cmd->add_option("--model", o.model, "Model JSON or @file")->required();
  safety_cmd->add_option("--t", o.t, "Time")->required();

  auto* ruin_cmd = app.add_subcommand("ruin", "Survival and ruin probabilities");
  ruin_cmd->add_option("--model", o.model, "Model JSON or @file")->required();
  ruin_cmd->add_option("--method", o.method, "auto, volterra, ode, closed or mc");
  auto* u_opt = ruin_cmd->add_option("--u", o.u, "Initial capital (default: the model's u)");
  ruin_cmd->add_option("--u-grid", o.u_grid, "a:b:n")->excludes(u_opt);
  ruin_cmd->add_option("--t", o.t, "Finite time horizon (Monte Carlo)");
  ruin_cmd->add_option("--paths", o.paths, "Monte Carlo paths");
  ruin_cmd->add_option("--horizon", o.horizon, "Claims examined per path");
  ruin_cmd->add_option("--seed", o.seed, "Seed");
  ruin_cmd->add_option("--confidence", o.confidence, "Wilson interval confidence");
  ruin_cmd->add_option("--steps", o.volterra_steps, "Volterra grid steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << GCRUIN_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  const auto begin = std::chrono::steady_clock::now();
  Result res;
  std::string command;
  try {
    if (*sample_cmd) {
      command = "sample";
      res = cmd_sample(o);
    } else if (*conv_cmd) {
      command = "convolve";
      res = cmd_convolve(o);
    } else if (*tr_cmd) {
      command = "transform";
      res = cmd_transform(o);
    } else if (*walk_cmd) {
      command = "walk";
      res = cmd_walk(o);
    } else if (*safety_cmd) {
      command = "safety";
      res = cmd_safety(o);
    } else {
      command = "ruin";
      res = cmd_ruin(o);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    if (o.out_dir.empty()) {
      for (const auto& [name, body] : res.files) out << body;
      err << res.summary << "\n";
    } else {
      const std::filesystem::path dir(o.out_dir);
      std::filesystem::create_directories(dir);
      Json meta;
      meta["version"] = GCRUIN_VERSION;
      meta["config"] = config_echo(command, o);
      meta["seed"] = o.seed;
      meta["workers"] = resolve_workers(o.workers);
      Json files = Json::array();
      for (const auto& [name, body] : res.files) {
        write_file(dir / name, body);
        files.push_back(name);
      }
      meta["files"] = files;
      meta["timings"] = {{"total_seconds", seconds}};
      write_file(dir / "metadata.json", meta.dump(2) + "\n");
      out << res.summary << "\n";
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParameterError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const UnsupportedError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "validation error: --out: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace gcruin
