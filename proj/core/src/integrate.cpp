#include "expode/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "expode/error.hpp"

namespace expode {
namespace {

void check_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidArgument("step size must be positive and finite");
  }
}

State evaluate(const OdeProblem& problem, int stage, double t, const State& y) {
  State f = problem.rhs(t, y);
  if (f.size() != y.size()) {
    throw InvalidArgument("rhs returned a vector of size " + std::to_string(f.size()) +
                          ", expected " + std::to_string(y.size()));
  }
  if (!f.allFinite()) throw NonFiniteState(stage, t);
  return f;
}

// K_0 may be supplied by the caller so two schemes can share it.
StepResult explicit_step_impl(const ExplicitScheme& scheme, const OdeProblem& problem,
                              double t, const State& y, double h, const State* k0) {
  check_step(h);
  const int n = scheme.n;
  StepResult out;
  out.h = h;
  out.stages.reserve(n + 1);
  if (k0 != nullptr) {
    out.stages.push_back(*k0);
  } else {
    out.stages.push_back(h * evaluate(problem, 0, t, y));
    ++out.cost.rhs_evaluations;
  }
  for (int p = 1; p <= n; ++p) {
    State arg = y;
    for (int s = 0; s < p; ++s) arg += scheme.mu(p, s) * out.stages[s];
    out.stages.push_back(h * evaluate(problem, p, t + scheme.nu(p) * h, arg));
    ++out.cost.rhs_evaluations;
  }
  out.y_end = y;
  for (int s = 0; s <= n; ++s) out.y_end += scheme.sigma(s) * out.stages[s];
  return out;
}

// Runge-Kutta step for a tableau with an explicit prefix and an implicit tail.
// When `last_stage_output` is set, y_end is the converged last stage value.
StepResult rk_step_impl(const ButcherTableau& tableau, const OdeProblem& problem, double t,
                        const State& y, double h, const NewtonOptions& newton,
                        bool last_stage_output) {
  check_step(h);
  const int s = tableau.stages();
  const int dim = static_cast<int>(y.size());
  const Eigen::MatrixXd& A = tableau.A;

  StepResult out;
  out.h = h;
  out.stages.resize(s);
  std::vector<State> stage_values(s, y);

  int first_implicit = s;
  for (int i = 0; i < s; ++i) {
    bool explicit_stage = true;
    for (int j = i; j < s; ++j) explicit_stage = explicit_stage && A(i, j) == 0.0;
    if (!explicit_stage) {
      first_implicit = i;
      break;
    }
    State arg = y;
    for (int j = 0; j < i; ++j) arg += A(i, j) * out.stages[j];
    out.stages[i] = h * evaluate(problem, i, t + tableau.c(i) * h, arg);
    ++out.cost.rhs_evaluations;
    stage_values[i] = std::move(arg);
  }

  const int m = s - first_implicit;
  if (m > 0) {
    // Unknowns: stage values Z_i, i >= first_implicit, stacked.
    std::vector<State> base(m, y);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < first_implicit; ++j) {
        base[i] += A(first_implicit + i, j) * out.stages[j];
      }
    }
    Eigen::VectorXd z(m * dim);
    for (int i = 0; i < m; ++i) z.segment(i * dim, dim) = y;

    std::vector<State> f(m);
    auto eval_stages = [&] {
      for (int i = 0; i < m; ++i) {
        const int stage = first_implicit + i;
        f[i] = evaluate(problem, stage, t + tableau.c(stage) * h, z.segment(i * dim, dim));
        ++out.cost.rhs_evaluations;
      }
    };

    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    bool have_jacobian = false;
    double previous_residual = std::numeric_limits<double>::infinity();
    double residual_norm = 0.0;
    bool converged = false;
    const double perturbation_scale = std::sqrt(std::numeric_limits<double>::epsilon());

    for (int iter = 1; iter <= newton.max_iter; ++iter) {
      eval_stages();
      Eigen::VectorXd g(m * dim);
      for (int i = 0; i < m; ++i) {
        State gi = z.segment(i * dim, dim) - base[i];
        for (int j = 0; j < m; ++j) gi -= h * A(first_implicit + i, first_implicit + j) * f[j];
        g.segment(i * dim, dim) = gi;
      }
      residual_norm = g.cwiseAbs().maxCoeff();

      if (!have_jacobian || residual_norm > 0.5 * previous_residual) {
        Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(m * dim, m * dim);
        for (int j = 0; j < m; ++j) {
          const int stage = first_implicit + j;
          const double tj = t + tableau.c(stage) * h;
          State zj = z.segment(j * dim, dim);
          Eigen::MatrixXd df(dim, dim);
          for (int col = 0; col < dim; ++col) {
            const double delta = perturbation_scale * std::max(1.0, std::abs(zj(col)));
            State shifted = zj;
            shifted(col) += delta;
            df.col(col) = (evaluate(problem, stage, tj, shifted) - f[j]) / delta;
            ++out.cost.rhs_evaluations;
          }
          for (int i = 0; i < m; ++i) {
            const double a = A(first_implicit + i, stage);
            if (a != 0.0) jac.block(i * dim, j * dim, dim, dim) -= h * a * df;
          }
        }
        lu.compute(jac);
        have_jacobian = true;
      }
      previous_residual = residual_norm;

      const Eigen::VectorXd delta = lu.solve(-g);
      if (!delta.allFinite()) throw NonFiniteState(first_implicit, t);
      z += delta;
      ++out.cost.newton_iterations;
      if (delta.cwiseAbs().maxCoeff() <= newton.tol) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NewtonDivergence(newton.max_iter, residual_norm);

    eval_stages();
    for (int i = 0; i < m; ++i) {
      out.stages[first_implicit + i] = h * f[i];
      stage_values[first_implicit + i] = z.segment(i * dim, dim);
    }
  }

  if (last_stage_output) {
    out.y_end = stage_values[s - 1];
  } else {
    out.y_end = y;
    for (int j = 0; j < s; ++j) out.y_end += tableau.b(j) * out.stages[j];
  }
  return out;
}

template <typename Stepper>
Trajectory march_fixed(const OdeProblem& problem, double h, Stepper&& step) {
  problem.validate();
  check_step(h);
  Trajectory traj;
  double t = problem.t_initial;
  State y = problem.y_initial;
  traj.times.push_back(t);
  traj.states.push_back(y);
  while (t < problem.t_final) {
    const double remaining = problem.t_final - t;
    const bool last = remaining <= h * (1.0 + 1e-10);
    const double hs = last ? remaining : h;
    StepResult r = step(t, y, hs);
    traj.stats.rhs_evaluations += r.cost.rhs_evaluations;
    traj.stats.newton_iterations += r.cost.newton_iterations;
    ++traj.stats.accepted_steps;
    t = last ? problem.t_final : t + hs;
    y = std::move(r.y_end);
    traj.times.push_back(t);
    traj.states.push_back(y);
  }
  return traj;
}

}  // namespace

void OdeProblem::validate() const {
  if (!rhs) throw InvalidArgument("problem has no right-hand side");
  if (y_initial.size() == 0) throw InvalidArgument("problem has dimension 0");
  if (!y_initial.allFinite()) throw InvalidArgument("initial state is not finite");
  if (!(t_final > t_initial)) throw InvalidArgument("t_final must exceed t_initial");
}

void AdaptiveConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw InvalidArgument("rtol and atol must be positive");
  if (!(h_min > 0.0) || !(h_min <= h_initial) || !(h_initial <= h_max)) {
    throw InvalidArgument("step bounds must satisfy 0 < h_min <= h_initial <= h_max");
  }
  if (!(safety > 0.0 && safety < 1.0)) throw InvalidArgument("safety must lie in (0, 1)");
  if (!(order_exponent > 0.0)) throw InvalidArgument("order_exponent must be positive");
}

StepResult explicit_step(const ExplicitScheme& scheme, const OdeProblem& problem, double t,
                         const State& y, double h) {
  return explicit_step_impl(scheme, problem, t, y, h, nullptr);
}

DenseValue dense_eval(const ExplicitScheme& scheme, const StepResult& step, const State& y,
                      double theta) {
  if (static_cast<int>(step.stages.size()) != scheme.n + 1) {
    throw InvalidArgument("dense_eval: step was not produced by this scheme");
  }
  DenseValue out;
  out.extrapolated = theta < 0.0 || theta > 1.0;
  const Eigen::VectorXd w = scheme.dense_weights(theta);
  out.value = y;
  for (int r = 0; r <= scheme.n; ++r) out.value += w(r) * step.stages[r];
  return out;
}

Trajectory solve_fixed(const OdeProblem& problem, const ExplicitScheme& scheme, double h) {
  return march_fixed(problem, h, [&](double t, const State& y, double hs) {
    return explicit_step(scheme, problem, t, y, hs);
  });
}

Trajectory solve_fixed(const OdeProblem& problem, const ImplicitScheme& scheme, double h,
                       const NewtonOptions& newton) {
  const ButcherTableau tableau = to_tableau(scheme);
  return march_fixed(problem, h, [&](double t, const State& y, double hs) {
    return rk_step_impl(tableau, problem, t, y, hs, newton, true);
  });
}

Trajectory solve_fixed(const OdeProblem& problem, const ButcherTableau& tableau, double h,
                       const NewtonOptions& newton) {
  tableau.validate();
  return march_fixed(problem, h, [&](double t, const State& y, double hs) {
    return irk_step(tableau, problem, t, y, hs, newton);
  });
}

Trajectory solve_adaptive(const OdeProblem& problem, int n, const AdaptiveConfig& config) {
  problem.validate();
  config.validate();
  if (n < 2) throw InvalidDegree("solve_adaptive needs n >= 2 for the error comparison");
  const auto high = cached_explicit(n);
  const auto low = cached_explicit(n - 1);

  Trajectory traj;
  double t = problem.t_initial;
  State y = problem.y_initial;
  traj.times.push_back(t);
  traj.states.push_back(y);

  double h = config.h_initial;
  while (t < problem.t_final) {
    const double remaining = problem.t_final - t;
    const bool last = remaining <= h * (1.0 + 1e-10);
    const double ht = last ? remaining : h;

    StepResult hi = explicit_step_impl(*high, problem, t, y, ht, nullptr);
    StepResult lo = explicit_step_impl(*low, problem, t, y, ht, &hi.stages[0]);
    traj.stats.rhs_evaluations += hi.cost.rhs_evaluations + lo.cost.rhs_evaluations;

    const Eigen::ArrayXd scale = config.atol + config.rtol * hi.y_end.array().abs();
    const double est = ((hi.y_end - lo.y_end).array().abs() / scale).maxCoeff();

    const double factor =
        est == 0.0 ? 5.0 : std::clamp(config.safety * std::pow(est, -config.order_exponent), 0.2, 5.0);
    if (est <= 1.0) {
      ++traj.stats.accepted_steps;
      t = last ? problem.t_final : t + ht;
      y = std::move(hi.y_end);
      traj.times.push_back(t);
      traj.states.push_back(y);
    } else {
      ++traj.stats.rejected_steps;
      if (ht <= config.h_min) throw StepSizeUnderflow(t, ht);
    }
    h = std::clamp(ht * factor, config.h_min, config.h_max);
  }
  return traj;
}

StepResult implicit_step(const ImplicitScheme& scheme, const OdeProblem& problem, double t,
                         const State& y, double h, const NewtonOptions& newton) {
  return rk_step_impl(to_tableau(scheme), problem, t, y, h, newton, true);
}

StepResult irk_step(const ButcherTableau& tableau, const OdeProblem& problem, double t,
                    const State& y, double h, const NewtonOptions& newton) {
  tableau.validate();
  return rk_step_impl(tableau, problem, t, y, h, newton, tableau.is_stiffly_accurate());
}

}  // namespace expode
