#pragma once

// Coefficient tables of the implicit collocation discretization and of the
// explicit recurrence algorithm built on the exponential polynomial bases.

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "expode/basis.hpp"

namespace expode {

/// Values of the level-k mixed basis {t, S_k1(beta, t), ..., S_kk(beta, t)}.
/// Degree 0 is the one-element basis {t}.
Eigen::VectorXd mixed_basis_values(int degree, double beta, double t);

/// Derivatives of the same basis: {1, E_k1(beta t), ..., E_kk(beta t)}.
Eigen::VectorXd mixed_basis_derivatives(int degree, double beta, double t);

/// A family of functions sharing one mixed basis. Row r of `coeffs` holds the
/// coefficients of function r.
struct StageLevel {
  int degree = 0;
  double beta = 1.0;
  Eigen::MatrixXd coeffs;

  Eigen::VectorXd values(double t) const;
  Eigen::VectorXd derivatives(double t) const;
};

/// Q_k0 and Q_ks expressed over the mixed basis of `basis`'s degree.
struct QFunctions {
  int degree = 0;
  double beta = 1.0;
  Eigen::VectorXd q0;  ///< coefficients of Q_k0
  Eigen::MatrixXd qs;  ///< row s holds Q_k,s+1 (node index s = 0..k-1)

  double q0_value(double t) const;
  /// Values of Q_k1..Q_kk at t.
  Eigen::VectorXd qs_values(double t) const;
};

QFunctions q_functions(const ExpoBasis& basis, double beta);

/// Implicit collocation scheme of degree n. Stage p (0-based p = 0..n-1)
/// sits at T + nu(p) h and satisfies
///   Y_p = Y + h sigma0(p) F(T, Y) + h sum_s sigma(p, s) F(T + nu(s) h, Y_s).
struct ImplicitScheme {
  int n = 0;
  double lambda_max = 0.0;
  Eigen::VectorXd nu;
  Eigen::VectorXd sigma0;
  Eigen::MatrixXd sigma;
};

ImplicitScheme build_implicit(int n);

/// Explicit recurrence scheme of degree n with n + 1 right-hand-side calls:
///   K_0 = h F(T, Y)
///   K_p = h F(T + nu(p) h, Y + sum_{s<p} mu(p, s) K_s),  p = 1..n
///   Y(T + h) = Y + sum_s sigma(s) K_s
struct ExplicitScheme {
  int n = 0;
  double lambda_max = 0.0;
  Eigen::VectorXd nu;     ///< size n + 1, nu(0) = 0, nu(n) = 1
  Eigen::MatrixXd mu;     ///< (n + 1) x (n + 1), strictly lower triangular
  Eigen::VectorXd sigma;  ///< size n + 1
  /// Row r: coefficients of the final function R_nr over {t, S_n1(1, .), ..., S_nn(1, .)},
  /// with t the scaled step variable on [0, lambda_max].
  Eigen::MatrixXd dense;
  /// Stage functions of every recurrence level k = 0..n; levels[n].coeffs == dense.
  std::vector<StageLevel> levels;

  int stages() const noexcept { return n + 1; }

  /// Weights w_r with y(T + theta h) = Y + sum_r w_r K_r.
  Eigen::VectorXd dense_weights(double theta) const;
};

ExplicitScheme build_explicit(int n);

/// Process-wide caches; the returned objects are immutable and shareable.
std::shared_ptr<const ExpoBasis> cached_basis(int n);
std::shared_ptr<const ExplicitScheme> cached_explicit(int n);
std::shared_ptr<const ImplicitScheme> cached_implicit(int n);

}  // namespace expode
