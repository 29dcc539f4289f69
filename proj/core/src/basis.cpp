#include "expode/basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "expode/error.hpp"

namespace expode {
namespace {

void check_degree(int n) {
  if (n < 1) {
    throw InvalidDegree("exponential polynomial degree must be positive, got " +
                        std::to_string(n));
  }
}

void check_index(int n, int j, int lowest) {
  if (j < lowest || j > n) {
    throw IndexError("polynomial index " + std::to_string(j) + " outside " +
                     std::to_string(lowest) + ".." + std::to_string(n));
  }
}

}  // namespace

std::vector<double> eval_E_all(int n, double t) {
  check_degree(n);
  std::vector<double> e(n + 1);
  const double x = std::exp(-t);
  e[n] = std::exp(-n * t);
  e[n - 1] = (2.0 * n - 1.0) * std::exp(-(n - 1) * t) - 2.0 * n * e[n];
  const double nn = n;
  for (int j = n - 1; j >= 1; --j) {
    const double jj = j;
    const double a = (2 * jj + 1) * (nn + jj) * (nn - jj + 1);
    const double b = (2 * jj - 1) * 2 * jj * (2 * jj + 1);
    const double c = 4 * jj * (nn * nn + jj * jj + nn);
    const double d = (2 * jj - 1) * (nn - jj) * (nn + jj + 1);
    e[j - 1] = ((b / x - c) * e[j] - d * e[j + 1]) / a;
  }
  return e;
}

double eval_E(int n, int j, double t) {
  check_degree(n);
  check_index(n, j, 0);
  return eval_E_all(n, t)[j];
}

double eval_S(int n, int j, double beta, double t) {
  check_degree(n);
  check_index(n, j, 1);
  if (!(beta > 0.0)) throw InvalidArgument("eval_S: beta must be positive");
  const std::vector<double> e = eval_E_all(n, beta * t);
  double tail = 0.0;
  for (int l = j + 1; l <= n; ++l) tail += e[l];
  return (1.0 - e[j] - 2.0 * tail) / (beta * j);
}

double eval_S_derivative(int n, int j, double beta, double t) {
  check_degree(n);
  check_index(n, j, 1);
  if (!(beta > 0.0)) throw InvalidArgument("eval_S_derivative: beta must be positive");
  return eval_E_all(n, beta * t)[j];
}

ExpoBasis::ExpoBasis(int n) : n_(n) {
  if (n < 1 || n > kMaxDegree) {
    throw InvalidDegree("exponential basis degree " + std::to_string(n) +
                        " outside 1.." + std::to_string(kMaxDegree));
  }
  // z = 1 - 2 exp(-lambda), w = 2 rho exp(-lambda), inverted.
  const GaussLegendreRule rule = gauss_legendre(n);
  lambda_.resize(n);
  rho_.resize(n);
  nodal_.resize(n, n);
  for (int s = 0; s < n; ++s) {
    const double complement = rule.complements[s];
    lambda_[s] = std::log(2.0 / complement);
    rho_[s] = rule.weights[s] / complement;
    const std::vector<double> e = eval_E_all(n, lambda_[s]);
    for (int j = 1; j <= n; ++j) nodal_(j - 1, s) = e[j];
  }
  const OrthogonalityResiduals r = orthogonality_report(*this);
  const double worst = std::max(r.discrete, r.integral);
  if (!(worst <= 1e-8)) throw IllConditionedBasis(n, worst);
}

OrthogonalityResiduals orthogonality_report(const ExpoBasis& basis) {
  const int n = basis.degree();
  const auto rho = basis.weights();
  OrthogonalityResiduals r;
  for (int j = 1; j <= n; ++j) {
    double integral = 0.0;
    for (int s = 0; s < n; ++s) integral += rho[s] * basis.nodal_value(j, s);
    r.integral = std::max(r.integral, std::abs(integral - 1.0 / j));
    for (int l = 1; l <= n; ++l) {
      double sum = 0.0;
      for (int s = 0; s < n; ++s) {
        sum += rho[s] * basis.nodal_value(j, s) * basis.nodal_value(l, s);
      }
      const double expected = (j == l) ? 1.0 / (j + l) : 0.0;
      r.discrete = std::max(r.discrete, std::abs(sum - expected));
    }
  }
  return r;
}

std::vector<double> closed_form_weights(const ExpoBasis& basis) {
  const int n = basis.degree();
  std::vector<double> rho(n);
  for (int s = 0; s < n; ++s) {
    double sum = 0.0;
    for (int m = 1; m <= n; ++m) {
      const double e = basis.nodal_value(m, s);
      sum += m * e * e;
    }
    rho[s] = 1.0 / (2.0 * sum);
  }
  return rho;
}

}  // namespace expode
