#pragma once

// Named test problems with closed-form references where they exist, and a
// Dormand-Prince 5(4) reference integrator for the rest.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expode/integrate.hpp"

namespace expode {

using ExactSolution = std::function<State(double)>;

struct NamedProblem {
  std::string name;
  OdeProblem problem;
  /// Empty when the reference is numerical (served by reference_solve).
  ExactSolution exact;
  /// Default value of the problem parameter, if it has one.
  std::optional<double> parameter;

  bool has_closed_form() const noexcept { return static_cast<bool>(exact); }
};

/// y' = -y on [0, 1], y(0) = 1.
NamedProblem decay_problem();
/// y' = -gamma y on [0, 1], y(0) = 1.
NamedProblem decay_gamma_problem(double gamma = 2.0);
/// y0' = y1, y1' = -y0 on [0, 2 pi], y(0) = (1, 0).
NamedProblem harmonic_problem();
/// Van der Pol oscillator on [0, 20], y(0) = (2, 0).
NamedProblem vanderpol_problem(double mu = 5.0);
/// sigma = 10, rho = 28, beta = 8/3 on [0, 2], y(0) = (1, 1, 1).
NamedProblem lorenz_problem();
/// y' = L (y - cos T) - sin T on [0, 1], y(0) = 1; exact solution cos T. L < 0.
NamedProblem prothero_problem(double L = -1e4);
/// y' = y^2 on [0, 2], y(0) = 1; blows up at T = 1.
NamedProblem riccati_problem();

/// Every problem at its default parameter.
const std::vector<NamedProblem>& catalog();

/// Looks a problem up by name. `parameter` overrides the default for the
/// parametric problems and is rejected for the others. Throws LookupError.
NamedProblem lookup(std::string_view name, std::optional<double> parameter = std::nullopt);

/// Adaptive Dormand-Prince 5(4) run over the problem interval; one entry per
/// accepted step. Requires rtol >= 1e-13. Throws FiniteTimeBlowup when the
/// solution escapes to infinity or the step size collapses.
Trajectory reference_solve(const OdeProblem& problem, double rtol, double atol);

/// Same integrator, reporting the solution at the given increasing times
/// (which must lie inside the problem interval).
std::vector<State> reference_solve_at(const OdeProblem& problem, const std::vector<double>& times,
                                      double rtol, double atol);

}  // namespace expode
