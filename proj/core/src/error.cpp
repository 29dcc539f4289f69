#include "expode/error.hpp"

#include <sstream>

namespace expode {
namespace {

template <typename... Args>
std::string concat(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace

IllConditionedBasis::IllConditionedBasis(int degree, double residual)
    : Error(concat("ill-conditioned basis of degree ", degree,
                   ": orthogonality residual ", residual, " exceeds 1e-8")),
      degree_(degree),
      residual_(residual) {}

NonFiniteState::NonFiniteState(int stage, double time)
    : Error(concat("non-finite state at stage ", stage, " (T = ", time, ")")),
      stage_(stage),
      time_(time) {}

NewtonDivergence::NewtonDivergence(int iterations, double residual_norm)
    : Error(concat("Newton iteration did not converge after ", iterations,
                   " iterations; last residual norm ", residual_norm)),
      iterations_(iterations),
      residual_norm_(residual_norm) {}

StepSizeUnderflow::StepSizeUnderflow(double time, double step)
    : Error(concat("step size underflow at T = ", time, " (h = ", step, ")")),
      time_(time),
      step_(step) {}

FiniteTimeBlowup::FiniteTimeBlowup(double time)
    : Error(concat("solution blows up near T = ", time)), time_(time) {}

}  // namespace expode
