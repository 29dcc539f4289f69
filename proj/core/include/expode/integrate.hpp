#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "expode/schemes.hpp"
#include "expode/tableau.hpp"

namespace expode {

using State = Eigen::VectorXd;
using RhsFunction = std::function<State(double, const State&)>;

/// Y'(T) = F(T, Y), Y(t_initial) = y_initial, T in [t_initial, t_final].
struct OdeProblem {
  RhsFunction rhs;
  double t_initial = 0.0;
  double t_final = 1.0;
  State y_initial;

  int dimension() const noexcept { return static_cast<int>(y_initial.size()); }
  void validate() const;
};

struct StepCost {
  long rhs_evaluations = 0;
  long newton_iterations = 0;
};

struct StepResult {
  State y_end;
  /// K_s = h F(stage s); n + 1 entries for the explicit scheme.
  std::vector<State> stages;
  double h = 0.0;
  StepCost cost;
};

struct SolverStats {
  long rhs_evaluations = 0;
  long accepted_steps = 0;
  long rejected_steps = 0;
  long newton_iterations = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  SolverStats stats;
};

/// Step-size controller settings for solve_adaptive.
struct AdaptiveConfig {
  double rtol = 1e-6;
  double atol = 1e-6;
  double h_initial = 1e-3;
  double h_min = 1e-12;
  double h_max = 1.0;
  double safety = 0.9;
  double order_exponent = 0.5;

  void validate() const;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

/// One step of the explicit recurrence scheme; exactly n + 1 rhs calls.
StepResult explicit_step(const ExplicitScheme& scheme, const OdeProblem& problem, double t,
                         const State& y, double h);

struct DenseValue {
  State value;
  /// theta was outside [0, 1].
  bool extrapolated = false;
};

/// Continuous extension of a completed explicit step at T + theta h.
DenseValue dense_eval(const ExplicitScheme& scheme, const StepResult& step, const State& y,
                      double theta);

/// Fixed step size; the last step is shortened to land on t_final.
Trajectory solve_fixed(const OdeProblem& problem, const ExplicitScheme& scheme, double h);
Trajectory solve_fixed(const OdeProblem& problem, const ImplicitScheme& scheme, double h,
                       const NewtonOptions& newton = {});
Trajectory solve_fixed(const OdeProblem& problem, const ButcherTableau& tableau, double h,
                       const NewtonOptions& newton = {});

/// Adaptive stepping that compares the degree-n and degree-(n-1) results at
/// the end of each step. Requires n >= 2.
Trajectory solve_adaptive(const OdeProblem& problem, int n, const AdaptiveConfig& config);

/// Solves the implicit collocation system by Newton iteration and returns the
/// last collocation state as y_end.
StepResult implicit_step(const ImplicitScheme& scheme, const OdeProblem& problem, double t,
                         const State& y, double h, const NewtonOptions& newton = {});

/// General Runge-Kutta step. Leading explicit stages are evaluated directly;
/// the remaining stages are solved together by Newton iteration.
StepResult irk_step(const ButcherTableau& tableau, const OdeProblem& problem, double t,
                    const State& y, double h, const NewtonOptions& newton = {});

}  // namespace expode
