#include "expode/schemes.hpp"

#include <map>
#include <mutex>
#include <string>

#include "expode/error.hpp"

namespace expode {
namespace {

// Entry (j, l) of the matrix that maps the projected right-hand side back to
// the expansion coefficients.
double inverse_gram_entry(int j, int l) {
  if (j != l) return (l % 2 == 0) ? 2.0 : -2.0;
  return (l % 2 == 0) ? 3.0 : -1.0;
}

double sign_power(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

void check_scheme_degree(int n) {
  if (n < 1 || n > ExpoBasis::kMaxDegree) {
    throw InvalidDegree("scheme degree " + std::to_string(n) + " outside 1.." +
                        std::to_string(ExpoBasis::kMaxDegree));
  }
}

template <typename T>
class DegreeCache {
 public:
  template <typename Builder>
  std::shared_ptr<const T> get(int n, Builder&& build) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = entries_.find(n); it != entries_.end()) return it->second;
    }
    auto value = std::make_shared<const T>(build(n));
    std::lock_guard lock(mutex_);
    return entries_.emplace(n, std::move(value)).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<int, std::shared_ptr<const T>> entries_;
};

}  // namespace

Eigen::VectorXd mixed_basis_values(int degree, double beta, double t) {
  Eigen::VectorXd v(degree + 1);
  v(0) = t;
  if (degree == 0) return v;
  const std::vector<double> e = eval_E_all(degree, beta * t);
  double tail = 0.0;
  for (int j = degree; j >= 1; --j) {
    v(j) = (1.0 - e[j] - 2.0 * tail) / (beta * j);
    tail += e[j];
  }
  return v;
}

Eigen::VectorXd mixed_basis_derivatives(int degree, double beta, double t) {
  Eigen::VectorXd v(degree + 1);
  v(0) = 1.0;
  if (degree == 0) return v;
  const std::vector<double> e = eval_E_all(degree, beta * t);
  for (int j = 1; j <= degree; ++j) v(j) = e[j];
  return v;
}

Eigen::VectorXd StageLevel::values(double t) const {
  return coeffs * mixed_basis_values(degree, beta, t);
}

Eigen::VectorXd StageLevel::derivatives(double t) const {
  return coeffs * mixed_basis_derivatives(degree, beta, t);
}

double QFunctions::q0_value(double t) const {
  return q0.dot(mixed_basis_values(degree, beta, t));
}

Eigen::VectorXd QFunctions::qs_values(double t) const {
  return qs * mixed_basis_values(degree, beta, t);
}

QFunctions q_functions(const ExpoBasis& basis, double beta) {
  const int k = basis.degree();
  QFunctions q;
  q.degree = k;
  q.beta = beta;

  q.q0.resize(k + 1);
  q.q0(0) = sign_power(k);
  q.q0.tail(k).setConstant(-2.0 * sign_power(k));

  q.qs = Eigen::MatrixXd::Zero(k, k + 1);
  const auto rho = basis.weights();
  for (int s = 0; s < k; ++s) {
    for (int l = 1; l <= k; ++l) {
      const double f = 2.0 * rho[s] * l * basis.nodal_value(l, s);
      q.qs(s, 0) -= f * sign_power(l);
      for (int j = 1; j <= k; ++j) q.qs(s, j) += f * inverse_gram_entry(j, l);
    }
  }
  return q;
}

ImplicitScheme build_implicit(int n) {
  check_scheme_degree(n);
  const auto basis = cached_basis(n);
  const QFunctions q = q_functions(*basis, 1.0);
  const double lambda_max = basis->max_zero();

  ImplicitScheme scheme;
  scheme.n = n;
  scheme.lambda_max = lambda_max;
  scheme.nu.resize(n);
  scheme.sigma0.resize(n);
  scheme.sigma.resize(n, n);
  for (int p = 0; p < n; ++p) {
    const double t = basis->zeros()[p];
    scheme.nu(p) = t / lambda_max;
    scheme.sigma0(p) = q.q0_value(t) / lambda_max;
    scheme.sigma.row(p) = q.qs_values(t).transpose() / lambda_max;
  }
  return scheme;
}

ExplicitScheme build_explicit(int n) {
  check_scheme_degree(n);
  const auto top = cached_basis(n);
  const auto top_zeros = top->zeros();
  const double lambda_max = top->max_zero();

  ExplicitScheme scheme;
  scheme.n = n;
  scheme.lambda_max = lambda_max;
  scheme.nu = Eigen::VectorXd::Zero(n + 1);
  scheme.mu = Eigen::MatrixXd::Zero(n + 1, n + 1);
  scheme.levels.reserve(n + 1);

  // Level 0: R_00(t) = t.
  scheme.levels.push_back(StageLevel{0, 1.0, Eigen::MatrixXd::Ones(1, 1)});

  for (int k = 1; k <= n; ++k) {
    const StageLevel& prev = scheme.levels.back();
    const auto basis = cached_basis(k);
    const auto zeros = basis->zeros();
    // The level-k interval is [0, lambda_nk]; its basis is stretched so the
    // largest level-k zero lands on the interval end.
    const double end = top_zeros[k - 1];
    const double beta = basis->max_zero() / end;

    scheme.nu(k) = end / lambda_max;
    const Eigen::VectorXd at_end = prev.values(end);
    for (int r = 0; r < k; ++r) scheme.mu(k, r) = at_end(r) / lambda_max;

    const QFunctions q = q_functions(*basis, beta);
    StageLevel level{k, beta, Eigen::MatrixXd::Zero(k + 1, k + 1)};
    for (int s = 0; s + 1 < k; ++s) {
      // gamma(r) = R'_{k-1,r}(t_ks)
      const Eigen::VectorXd gamma = prev.derivatives(zeros[s] / beta);
      for (int r = 0; r < k; ++r) level.coeffs.row(r) += gamma(r) * q.qs.row(s);
    }
    level.coeffs.row(0) += q.q0.transpose();
    level.coeffs.row(k) = q.qs.row(k - 1);
    scheme.levels.push_back(std::move(level));
  }

  scheme.dense = scheme.levels.back().coeffs;
  scheme.sigma = scheme.levels.back().values(lambda_max) / lambda_max;
  return scheme;
}

Eigen::VectorXd ExplicitScheme::dense_weights(double theta) const {
  return levels.back().values(theta * lambda_max) / lambda_max;
}

std::shared_ptr<const ExpoBasis> cached_basis(int n) {
  static DegreeCache<ExpoBasis> cache;
  return cache.get(n, [](int k) { return ExpoBasis(k); });
}

std::shared_ptr<const ExplicitScheme> cached_explicit(int n) {
  static DegreeCache<ExplicitScheme> cache;
  return cache.get(n, build_explicit);
}

std::shared_ptr<const ImplicitScheme> cached_implicit(int n) {
  static DegreeCache<ImplicitScheme> cache;
  return cache.get(n, build_implicit);
}

}  // namespace expode
