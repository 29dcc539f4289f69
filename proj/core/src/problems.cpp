#include "expode/problems.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "expode/error.hpp"

namespace expode {
namespace {

namespace odeint = boost::numeric::odeint;
using OdeintState = std::vector<double>;

// States beyond this magnitude are treated as escaping to infinity.
constexpr double kBlowupMagnitude = 1e15;

State scalar(double v) { return State::Constant(1, v); }

OdeProblem make_problem(RhsFunction rhs, double t0, double t1, State y0) {
  OdeProblem p;
  p.rhs = std::move(rhs);
  p.t_initial = t0;
  p.t_final = t1;
  p.y_initial = std::move(y0);
  return p;
}

struct GuardedSystem {
  const OdeProblem* problem;
  long* evaluations;

  void operator()(const OdeintState& x, OdeintState& dxdt, double t) const {
    const Eigen::Map<const State> y(x.data(), static_cast<Eigen::Index>(x.size()));
    if (!y.allFinite() || y.cwiseAbs().maxCoeff() > kBlowupMagnitude) throw FiniteTimeBlowup(t);
    const State f = problem->rhs(t, y);
    ++*evaluations;
    if (f.size() != y.size()) throw InvalidArgument("rhs returned a vector of the wrong size");
    if (!f.allFinite()) throw FiniteTimeBlowup(t);
    dxdt.assign(f.data(), f.data() + f.size());
  }
};

void check_tolerances(const OdeProblem& problem, double rtol, double atol) {
  problem.validate();
  if (!(rtol >= 1e-13)) throw InvalidArgument("reference_solve: rtol must be >= 1e-13");
  if (!(atol > 0.0)) throw InvalidArgument("reference_solve: atol must be positive");
}

OdeintState to_odeint(const State& y) { return OdeintState(y.data(), y.data() + y.size()); }

State from_odeint(const OdeintState& x) {
  return Eigen::Map<const State>(x.data(), static_cast<Eigen::Index>(x.size()));
}

}  // namespace

NamedProblem decay_problem() {
  return {"decay",
          make_problem([](double, const State& y) -> State { return -y; }, 0.0, 1.0, scalar(1.0)),
          [](double t) { return scalar(std::exp(-t)); },
          std::nullopt};
}

NamedProblem decay_gamma_problem(double gamma) {
  if (!std::isfinite(gamma)) throw InvalidArgument("decay_gamma: gamma must be finite");
  return {"decay_gamma",
          make_problem([gamma](double, const State& y) -> State { return -gamma * y; }, 0.0, 1.0,
                       scalar(1.0)),
          [gamma](double t) { return scalar(std::exp(-gamma * t)); },
          gamma};
}

NamedProblem harmonic_problem() {
  return {"harmonic",
          make_problem(
              [](double, const State& y) -> State {
                State f(2);
                f << y(1), -y(0);
                return f;
              },
              0.0, 2.0 * std::numbers::pi, State::Unit(2, 0)),
          [](double t) {
            State y(2);
            y << std::cos(t), -std::sin(t);
            return y;
          },
          std::nullopt};
}

NamedProblem vanderpol_problem(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw InvalidArgument("vanderpol: mu must be finite and non-negative");
  }
  State y0(2);
  y0 << 2.0, 0.0;
  return {"vanderpol",
          make_problem(
              [mu](double, const State& y) -> State {
                State f(2);
                f << y(1), mu * (1.0 - y(0) * y(0)) * y(1) - y(0);
                return f;
              },
              0.0, 20.0, y0),
          {},
          mu};
}

NamedProblem lorenz_problem() {
  constexpr double sigma = 10.0;
  constexpr double rho = 28.0;
  constexpr double beta = 8.0 / 3.0;
  return {"lorenz",
          make_problem(
              [](double, const State& y) -> State {
                State f(3);
                f << sigma * (y(1) - y(0)), y(0) * (rho - y(2)) - y(1), y(0) * y(1) - beta * y(2);
                return f;
              },
              0.0, 2.0, State::Ones(3)),
          {},
          std::nullopt};
}

NamedProblem prothero_problem(double L) {
  if (!(L < 0.0) || !std::isfinite(L)) throw InvalidArgument("prothero: L must be finite and negative");
  return {"prothero",
          make_problem(
              [L](double t, const State& y) -> State {
                return (L * (y.array() - std::cos(t)) - std::sin(t)).matrix();
              },
              0.0, 1.0, scalar(1.0)),
          [](double t) { return scalar(std::cos(t)); },
          L};
}

NamedProblem riccati_problem() {
  return {"riccati",
          make_problem([](double, const State& y) -> State { return y.array().square().matrix(); },
                       0.0, 2.0, scalar(1.0)),
          [](double t) { return scalar(1.0 / (1.0 - t)); },
          std::nullopt};
}

const std::vector<NamedProblem>& catalog() {
  static const std::vector<NamedProblem> problems{
      decay_problem(),    decay_gamma_problem(), harmonic_problem(), vanderpol_problem(),
      lorenz_problem(),   prothero_problem(),    riccati_problem(),
  };
  return problems;
}

NamedProblem lookup(std::string_view name, std::optional<double> parameter) {
  const std::string key(name);
  if (key == "decay_gamma") return parameter ? decay_gamma_problem(*parameter) : decay_gamma_problem();
  if (key == "vanderpol") return parameter ? vanderpol_problem(*parameter) : vanderpol_problem();
  if (key == "prothero") return parameter ? prothero_problem(*parameter) : prothero_problem();
  for (const NamedProblem& p : catalog()) {
    if (p.name == key) {
      if (parameter) throw InvalidArgument("problem '" + key + "' takes no parameter");
      return p;
    }
  }
  throw LookupError("unknown problem '" + key + "'");
}

Trajectory reference_solve(const OdeProblem& problem, double rtol, double atol) {
  check_tolerances(problem, rtol, atol);
  Trajectory traj;
  GuardedSystem system{&problem, &traj.stats.rhs_evaluations};
  OdeintState x = to_odeint(problem.y_initial);
  double last_time = problem.t_initial;
  auto observer = [&](const OdeintState& state, double t) {
    last_time = t;
    traj.times.push_back(t);
    traj.states.push_back(from_odeint(state));
  };
  const double span = problem.t_final - problem.t_initial;
  try {
    traj.stats.accepted_steps = static_cast<long>(odeint::integrate_adaptive(
        odeint::make_controlled(atol, rtol, odeint::runge_kutta_dopri5<OdeintState>()), system, x,
        problem.t_initial, problem.t_final, 1e-6 * span, observer));
  } catch (const odeint::odeint_error&) {
    throw FiniteTimeBlowup(last_time);
  }
  return traj;
}

std::vector<State> reference_solve_at(const OdeProblem& problem, const std::vector<double>& times,
                                      double rtol, double atol) {
  check_tolerances(problem, rtol, atol);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < problem.t_initial || times[i] > problem.t_final ||
        (i > 0 && !(times[i] > times[i - 1]))) {
      throw InvalidArgument("reference_solve_at: times must increase inside the interval");
    }
  }
  std::vector<State> out;
  if (times.empty()) return out;
  long evaluations = 0;
  GuardedSystem system{&problem, &evaluations};
  OdeintState x = to_odeint(problem.y_initial);
  double last_time = problem.t_initial;

  // integrate_times starts at the first time point, so prepend t_initial.
  std::vector<double> grid;
  grid.reserve(times.size() + 1);
  const bool starts_at_initial = times.front() == problem.t_initial;
  if (!starts_at_initial) grid.push_back(problem.t_initial);
  grid.insert(grid.end(), times.begin(), times.end());

  bool skip = !starts_at_initial;
  auto observer = [&](const OdeintState& state, double t) {
    last_time = t;
    if (skip) {
      skip = false;
      return;
    }
    out.push_back(from_odeint(state));
  };
  const double span = problem.t_final - problem.t_initial;
  try {
    odeint::integrate_times(
        odeint::make_dense_output(atol, rtol, odeint::runge_kutta_dopri5<OdeintState>()), system,
        x, grid.begin(), grid.end(), 1e-6 * span, observer);
  } catch (const odeint::odeint_error&) {
    throw FiniteTimeBlowup(last_time);
  }
  return out;
}

}  // namespace expode
