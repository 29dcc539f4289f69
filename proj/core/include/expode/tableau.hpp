#pragma once

#include <string>

#include <Eigen/Dense>

#include "expode/schemes.hpp"

namespace expode {

/// (A, b, c) description of a one-step Runge-Kutta-type method.
struct ButcherTableau {
  std::string label;
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  int stages() const noexcept { return static_cast<int>(b.size()); }

  /// Square, matching sizes, sum(b) = 1 within 1e-12. Throws InvalidArgument.
  void validate() const;

  /// Largest |row_sum(A) - c|.
  double row_sum_defect() const;

  /// True when A is strictly lower triangular.
  bool is_explicit() const;

  /// b equals the last row of A.
  bool is_stiffly_accurate() const;
};

ButcherTableau explicit_euler_tableau();

/// The explicit recurrence scheme written as an (n + 1)-stage explicit tableau.
ButcherTableau to_tableau(const ExplicitScheme& scheme);

/// The implicit collocation scheme as an (n + 1)-stage tableau whose first
/// stage (c = 0) is explicit and whose b is the last row.
ButcherTableau to_tableau(const ImplicitScheme& scheme);

}  // namespace expode
