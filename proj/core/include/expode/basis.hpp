#pragma once

// Orthogonal exponential polynomials E_nj(t), polynomials in exp(-t) that are
// orthogonal on [0, inf) with unit weight, together with the Gauss-type rule
// for exponentials built on the zeros of E_n0.

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace expode {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  int n = 0;
  std::vector<double> nodes;    ///< ascending
  std::vector<double> weights;  ///< positive, sum to 2
  /// 1 - nodes[s], computed without cancellation near z = 1.
  std::vector<double> complements;
};

/// Newton iteration on P_n from the asymptotic initial guess. Valid for 1 <= n <= 64.
GaussLegendreRule gauss_legendre(int n);

/// E_nj(t), 0 <= j <= n, via the downward three-term recurrence.
double eval_E(int n, int j, double t);

/// All of E_n0(t), ..., E_nn(t) from a single recurrence sweep; element j holds E_nj.
std::vector<double> eval_E_all(int n, double t);

/// S_nj(beta, t) = integral of E_nj(beta s) ds over [0, t], for 1 <= j <= n.
double eval_S(int n, int j, double beta, double t);

/// d/dt S_nj(beta, t) = E_nj(beta t).
double eval_S_derivative(int n, int j, double beta, double t);

/// Degree-n exponential polynomial system with its quadrature.
///
/// Node indices are 0-based (s = 0..n-1 for the mathematical s = 1..n);
/// polynomial indices keep their mathematical value j = 1..n.
class ExpoBasis {
 public:
  static constexpr int kMaxDegree = 32;

  /// Builds the zeros and weights from the Gauss-Legendre rule of the same
  /// degree. Throws InvalidDegree outside 1..32 and IllConditionedBasis when
  /// the discrete orthogonality residual exceeds 1e-8.
  explicit ExpoBasis(int n);

  int degree() const noexcept { return n_; }

  /// Zeros lambda_ns of E_n0, strictly ascending.
  std::span<const double> zeros() const noexcept { return lambda_; }
  /// Quadrature weights rho_ns.
  std::span<const double> weights() const noexcept { return rho_; }
  /// Largest zero lambda_nn.
  double max_zero() const noexcept { return lambda_.back(); }

  /// E_nj(lambda_ns) for j = 1..n, s = 0..n-1.
  double nodal_value(int j, int s) const { return nodal_(j - 1, s); }
  const Eigen::MatrixXd& nodal_values() const noexcept { return nodal_; }

 private:
  int n_;
  std::vector<double> lambda_;
  std::vector<double> rho_;
  Eigen::MatrixXd nodal_;
};

inline ExpoBasis build_basis(int n) { return ExpoBasis(n); }

struct OrthogonalityResiduals {
  /// max over j, l of |sum_s rho_s E_j E_l - delta_jl / (j + l)|
  double discrete = 0.0;
  /// max over l of |sum_s rho_s E_l - 1/l|
  double integral = 0.0;
};

OrthogonalityResiduals orthogonality_report(const ExpoBasis& basis);

/// Weights from the closed form 1 / (2 sum_m m E_nm(lambda_s)^2). Only used as a
/// cross-check; loses digits as n grows.
std::vector<double> closed_form_weights(const ExpoBasis& basis);

}  // namespace expode
