#include "expode/tableau.hpp"

#include <cmath>
#include <string>

#include "expode/error.hpp"

namespace expode {

void ButcherTableau::validate() const {
  const auto s = b.size();
  if (s == 0) throw InvalidArgument("tableau '" + label + "' has no stages");
  if (A.rows() != s || A.cols() != s || c.size() != s) {
    throw InvalidArgument("tableau '" + label + "' has inconsistent dimensions");
  }
  if (!A.allFinite() || !b.allFinite() || !c.allFinite()) {
    throw InvalidArgument("tableau '" + label + "' has non-finite entries");
  }
  if (std::abs(b.sum() - 1.0) > 1e-12) {
    throw InvalidArgument("tableau '" + label + "' is not consistent: sum(b) = " +
                          std::to_string(b.sum()));
  }
}

double ButcherTableau::row_sum_defect() const {
  return (A.rowwise().sum() - c).cwiseAbs().maxCoeff();
}

bool ButcherTableau::is_explicit() const {
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = i; j < A.cols(); ++j) {
      if (A(i, j) != 0.0) return false;
    }
  }
  return true;
}

bool ButcherTableau::is_stiffly_accurate() const {
  return A.rows() > 0 && (A.row(A.rows() - 1).transpose() - b).cwiseAbs().maxCoeff() == 0.0;
}

ButcherTableau explicit_euler_tableau() {
  ButcherTableau t;
  t.label = "euler";
  t.c = Eigen::VectorXd::Zero(1);
  t.A = Eigen::MatrixXd::Zero(1, 1);
  t.b = Eigen::VectorXd::Ones(1);
  return t;
}

ButcherTableau to_tableau(const ExplicitScheme& scheme) {
  ButcherTableau t;
  t.label = "explicit" + std::to_string(scheme.n);
  t.c = scheme.nu;
  t.A = scheme.mu;
  t.b = scheme.sigma;
  return t;
}

ButcherTableau to_tableau(const ImplicitScheme& scheme) {
  const int n = scheme.n;
  ButcherTableau t;
  t.label = "implicit" + std::to_string(n);
  t.c = Eigen::VectorXd::Zero(n + 1);
  t.c.tail(n) = scheme.nu;
  t.A = Eigen::MatrixXd::Zero(n + 1, n + 1);
  t.A.block(1, 0, n, 1) = scheme.sigma0;
  t.A.block(1, 1, n, n) = scheme.sigma;
  t.b = t.A.row(n).transpose();
  return t;
}

}  // namespace expode
