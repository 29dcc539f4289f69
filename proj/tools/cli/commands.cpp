#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>

#include "CLI11.hpp"

#include "expode/basis.hpp"
#include "expode/error.hpp"
#include "expode/genmethods.hpp"
#include "expode/integrate.hpp"
#include "expode/problems.hpp"
#include "expode/schemes.hpp"
#include "expode/stability.hpp"
#include "expode/tableau.hpp"

namespace expode::cli {
namespace {

using nlohmann::json;

bool is_fixed_tableau(const std::string& scheme) {
  return scheme == "astable2" || scheme == "lstable2";
}

// One of the four selectable methods, resolved once per command.
struct Method {
  std::string label;
  std::shared_ptr<const ExplicitScheme> explicit_scheme;
  std::shared_ptr<const ImplicitScheme> implicit_scheme;
  ButcherTableau tableau;

  Trajectory solve(const OdeProblem& problem, double h) const {
    if (explicit_scheme) return solve_fixed(problem, *explicit_scheme, h);
    if (implicit_scheme) return solve_fixed(problem, *implicit_scheme, h);
    return solve_fixed(problem, tableau, h);
  }

  StabilityFunction stability() const {
    if (explicit_scheme) return explicit_stability(*explicit_scheme);
    return irk_stability(tableau);
  }
};

Method select_method(const RunConfig& config) {
  validate_scheme(config);
  Method m;
  m.label = config.scheme;
  if (config.scheme == "explicit") {
    m.explicit_scheme = cached_explicit(*config.n);
    m.tableau = to_tableau(*m.explicit_scheme);
  } else if (config.scheme == "implicit") {
    m.implicit_scheme = cached_implicit(*config.n);
    m.tableau = to_tableau(*m.implicit_scheme);
  } else if (config.scheme == "astable2") {
    m.tableau = astable2_tableau();
  } else {
    m.tableau = lstable2_tableau();
  }
  return m;
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json vector_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(Eigen::VectorXd(m.row(r))));
  return rows;
}

// Writes to `path`, or to `fallback` when the path is empty.
void emit(const std::string& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(file);
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

void write_json(const json& j, std::string& s) {
  switch (j.type()) {
    case json::value_t::object: {
      s += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) s += ',';
        first = false;
        s += json(key).dump();
        s += ':';
        write_json(value, s);
      }
      s += '}';
      break;
    }
    case json::value_t::array: {
      s += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) s += ',';
        write_json(j[i], s);
      }
      s += ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      s += std::isfinite(v) ? format_number(v) : json(format_number(v)).dump();
      break;
    }
    default:
      s += j.dump();
  }
}

std::string csv_row(double t, const State& y) {
  std::string row = format_number(t);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    row += ',';
    row += format_number(y(i));
  }
  return row;
}

json limit_json(const LimitAtInfinity& limit) {
  switch (limit.kind) {
    case LimitAtInfinity::Kind::plus_infinity:
      return "+inf";
    case LimitAtInfinity::Kind::minus_infinity:
      return "-inf";
    default:
      return limit.value;
  }
}

void write_pbm(const StabilityRaster& raster, std::ostream& os) {
  os << "P1\n" << raster.width << ' ' << raster.height << '\n';
  for (int row = 0; row < raster.height; ++row) {
    int column_chars = 0;
    for (int col = 0; col < raster.width; ++col) {
      if (column_chars == 70) {
        os << '\n';
        column_chars = 0;
      }
      os << (raster.at(row, col) ? '1' : '0');
      ++column_chars;
    }
    os << '\n';
  }
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

std::string canonical_json(const json& document) {
  std::string s;
  write_json(document, s);
  return s;
}

void validate_scheme(const RunConfig& config) {
  const std::string& s = config.scheme;
  if (s == "explicit" || s == "implicit") {
    if (!config.n) throw UsageError("--n is required for --scheme " + s);
  } else if (is_fixed_tableau(s)) {
    if (config.n) throw UsageError("--n is not accepted for --scheme " + s);
  } else {
    throw UsageError("unknown scheme '" + s + "'");
  }
}

int cmd_tableau(const RunConfig& config, std::ostream& out) {
  validate_scheme(config);
  json doc;
  doc["scheme"] = config.scheme;
  if (config.scheme == "explicit") {
    const auto scheme = cached_explicit(*config.n);
    doc["n"] = scheme->n;
    doc["lambda_max"] = scheme->lambda_max;
    doc["nu"] = vector_json(scheme->nu);
    doc["mu"] = matrix_json(scheme->mu);
    doc["sigma"] = vector_json(scheme->sigma);
    doc["dense"] = matrix_json(scheme->dense);
  } else if (config.scheme == "implicit") {
    const auto scheme = cached_implicit(*config.n);
    doc["n"] = scheme->n;
    doc["lambda_max"] = scheme->lambda_max;
    doc["nu"] = vector_json(scheme->nu);
    doc["sigma0"] = vector_json(scheme->sigma0);
    doc["sigma"] = matrix_json(scheme->sigma);
  } else {
    const ButcherTableau t = select_method(config).tableau;
    doc["stages"] = t.stages();
    doc["c"] = vector_json(t.c);
    doc["A"] = matrix_json(t.A);
    doc["b"] = vector_json(t.b);
  }
  emit(config.output, out, [&](std::ostream& os) { os << canonical_json(doc) << '\n'; });
  return kOk;
}

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Method method = select_method(config);
  if (config.adaptive == config.h.has_value()) {
    throw UsageError("exactly one of --h and --adaptive is required");
  }
  NamedProblem named = lookup(config.problem, config.parameter);
  if (config.t_final) named.problem.t_final = *config.t_final;

  Trajectory traj;
  if (config.adaptive) {
    if (config.scheme != "explicit") throw UsageError("--adaptive requires --scheme explicit");
    AdaptiveConfig adaptive;
    adaptive.rtol = config.rtol;
    adaptive.atol = config.atol;
    traj = solve_adaptive(named.problem, *config.n, adaptive);
  } else {
    traj = method.solve(named.problem, *config.h);
  }

  emit(config.output, out, [&](std::ostream& os) {
    os << 'T';
    for (int i = 0; i < named.problem.dimension(); ++i) os << ",Y" << i;
    os << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) os << csv_row(traj.times[i], traj.states[i]) << '\n';
  });
  err << "accepted_steps=" << traj.stats.accepted_steps
      << " rejected_steps=" << traj.stats.rejected_steps
      << " rhs_evaluations=" << traj.stats.rhs_evaluations
      << " newton_iterations=" << traj.stats.newton_iterations << '\n';
  return kOk;
}

int cmd_convergence(const RunConfig& config, std::ostream& out) {
  const Method method = select_method(config);
  if (config.adaptive) throw UsageError("convergence runs use fixed steps only");
  if (config.levels < 5 || config.levels > 30) throw UsageError("--levels must lie in 5..30");
  const double h0 = config.h.value_or(0.1);
  if (!(h0 > 0.0) || !std::isfinite(h0)) throw UsageError("--h must be positive");

  NamedProblem named = lookup(config.problem, config.parameter);
  if (config.t_final) named.problem.t_final = *config.t_final;
  auto reference = [&](double t_end) -> State {
    if (named.has_closed_form()) return named.exact(t_end);
    OdeProblem p = named.problem;
    p.t_final = t_end;
    return reference_solve_at(p, {t_end}, 1e-12, 1e-14).front();
  };

  std::vector<double> steps;
  std::vector<double> errors;
  for (int level = 0; level < config.levels; ++level) {
    const double h = std::ldexp(h0, -level);
    OdeProblem p = named.problem;
    if (config.local) p.t_final = p.t_initial + h;
    const Trajectory traj = method.solve(p, h);
    steps.push_back(h);
    errors.push_back((traj.states.back() - reference(p.t_final)).cwiseAbs().maxCoeff());
  }

  emit(config.output, out, [&](std::ostream& os) {
    os << "h,error,error_over_h2,order\n";
    for (std::size_t i = 0; i < steps.size(); ++i) {
      os << format_number(steps[i]) << ',' << format_number(errors[i]) << ','
         << format_number(errors[i] / (steps[i] * steps[i])) << ',';
      if (i > 0) {
        if (errors[i] == 0.0) {
          os << "exact";
        } else {
          os << format_number(std::log2(errors[i - 1] / errors[i]));
        }
      }
      os << '\n';
    }
  });
  return kOk;
}

int cmd_stability(const RunConfig& config, std::ostream& out) {
  const Method method = select_method(config);
  if (config.output.empty()) throw UsageError("--output is required for the raster");
  if (config.width < 2 || config.width > 4096 || config.height < 2 || config.height > 4096) {
    throw UsageError("--width and --height must lie in 2..4096");
  }
  const StabilityFunction r = method.stability();
  const StabilityRaster raster = region_raster(r, config.re_min, config.re_max, config.im_min,
                                               config.im_max, config.width, config.height);
  const AStabilityReport a = a_stability_check(r);
  const LimitAtInfinity limit = limit_at_minus_infinity(r);

  json doc;
  doc["scheme"] = config.scheme;
  if (config.n) doc["n"] = *config.n;
  doc["P"] = vector_json(r.numerator);
  doc["Q"] = vector_json(r.denominator);
  doc["real_axis"] = {{"left", raster.real_axis.left},
                      {"right", raster.real_axis.right},
                      {"left_unbounded", raster.real_axis.left_unbounded}};
  doc["a_stable"] = a.a_stable;
  doc["l_stable"] = a.a_stable && limit.kind == LimitAtInfinity::Kind::finite &&
                    std::abs(limit.value) <= 1e-12;
  doc["limit"] = limit_json(limit);
  doc["max_modulus_imaginary_axis"] = a.max_modulus_imaginary_axis;
  doc["argmax_imaginary_axis"] = a.argmax_imaginary_axis;
  json poles = json::array();
  for (const auto& p : a.poles) poles.push_back({p.real(), p.imag()});
  doc["poles"] = poles;
  doc["monotonicity_threshold"] = monotonicity_threshold(r);
  doc["window"] = {{"re_min", config.re_min}, {"re_max", config.re_max},
                   {"im_min", config.im_min}, {"im_max", config.im_max},
                   {"width", config.width},   {"height", config.height}};

  emit(config.output, out, [&](std::ostream& os) { write_pbm(raster, os); });
  emit(config.doc, out, [&](std::ostream& os) { os << canonical_json(doc) << '\n'; });
  return kOk;
}

int cmd_orthocheck(const RunConfig& config, std::ostream& out) {
  if (config.n_max < 1 || config.n_max > ExpoBasis::kMaxDegree) {
    throw UsageError("--n-max must lie in 1.." + std::to_string(ExpoBasis::kMaxDegree));
  }
  json results = json::array();
  for (int n = 1; n <= config.n_max; ++n) {
    const auto basis = cached_basis(n);
    const OrthogonalityResiduals res = orthogonality_report(*basis);
    results.push_back({{"n", n},
                       {"discrete", res.discrete},
                       {"integral", res.integral},
                       {"max_zero", basis->max_zero()}});
  }
  const json doc = {{"results", results}};
  emit(config.output, out, [&](std::ostream& os) { os << canonical_json(doc) << '\n'; });
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Exponential-polynomial ODE schemes: tableaux, solving, convergence, stability", "expode"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  app.footer(
      "Exit status: 0 success, 1 usage error, 2 non-finite state, 3 Newton divergence, "
      "4 step-size underflow, 5 other runtime error.");

  const std::vector<std::string> schemes{"explicit", "implicit", "astable2", "lstable2"};
  auto add_scheme = [&](CLI::App* sub) {
    sub->add_option("--scheme", config.scheme, "explicit | implicit | astable2 | lstable2")
        ->check(CLI::IsMember(schemes))
        ->capture_default_str();
    sub->add_option("--n", config.n, "degree (explicit and implicit only)");
  };
  auto add_problem = [&](CLI::App* sub) {
    sub->add_option("--problem", config.problem,
                    "decay | decay_gamma | harmonic | vanderpol | lorenz | prothero | riccati")
        ->capture_default_str();
    sub->add_option("--param", config.parameter, "gamma, mu or L of the parametric problems");
    sub->add_option("--t-final", config.t_final, "override the end of the interval");
  };
  auto add_output = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("--output,-o", config.output, what);
  };

  CLI::App* tableau = app.add_subcommand("tableau", "print scheme coefficients as JSON");
  add_scheme(tableau);
  add_output(tableau, "output file (default: standard output)");

  CLI::App* solve = app.add_subcommand("solve", "integrate a catalog problem, CSV trajectory");
  add_scheme(solve);
  add_problem(solve);
  auto* h_opt = solve->add_option("--h", config.h, "fixed step size");
  auto* adaptive_opt =
      solve->add_flag("--adaptive", config.adaptive, "adaptive steps (explicit, n >= 2)");
  h_opt->excludes(adaptive_opt);
  solve->add_option("--rtol", config.rtol, "relative tolerance")->capture_default_str();
  solve->add_option("--atol", config.atol, "absolute tolerance")->capture_default_str();
  add_output(solve, "trajectory file (default: standard output)");

  CLI::App* convergence =
      app.add_subcommand("convergence", "endpoint errors over a halving sequence of steps");
  add_scheme(convergence);
  add_problem(convergence);
  convergence->add_option("--h", config.h, "largest step size (default 0.1)");
  convergence->add_option("--levels", config.levels, "number of step sizes (>= 5)")
      ->capture_default_str();
  convergence->add_flag("--local", config.local, "single step of each size (local error)");
  add_output(convergence, "table file (default: standard output)");

  CLI::App* stability =
      app.add_subcommand("stability", "stability region bitmap and stability-function report");
  add_scheme(stability);
  stability->add_option("--re-min", config.re_min)->capture_default_str();
  stability->add_option("--re-max", config.re_max)->capture_default_str();
  stability->add_option("--im-min", config.im_min)->capture_default_str();
  stability->add_option("--im-max", config.im_max)->capture_default_str();
  stability->add_option("--width", config.width, "columns (<= 4096)")->capture_default_str();
  stability->add_option("--height", config.height, "rows (<= 4096)")->capture_default_str();
  add_output(stability, "P1 bitmap file, 1 = stable (required)");
  stability->add_option("--doc", config.doc, "JSON report file (default: standard output)");

  CLI::App* orthocheck =
      app.add_subcommand("orthocheck", "orthogonality and quadrature residuals per degree");
  orthocheck->add_option("--n-max", config.n_max, "largest degree")->capture_default_str();
  add_output(orthocheck, "output file (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (tableau->parsed()) return cmd_tableau(config, out);
    if (solve->parsed()) return cmd_solve(config, out, err);
    if (convergence->parsed()) return cmd_convergence(config, out);
    if (stability->parsed()) return cmd_stability(config, out);
    return cmd_orthocheck(config, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidDegree& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const LookupError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const NonFiniteState& e) {
    err << "error: " << e.what() << '\n';
    return kNonFinite;
  } catch (const NewtonDivergence& e) {
    err << "error: " << e.what() << '\n';
    return kNewtonDivergence;
  } catch (const StepSizeUnderflow& e) {
    err << "error: " << e.what() << '\n';
    return kStepUnderflow;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace expode::cli
