#include "expode/genmethods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "expode/error.hpp"

namespace expode {
namespace {

using boost::multiprecision::cpp_int;

cpp_int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  cpp_int result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

cpp_int falling_factorial(int p, int m) {
  cpp_int result = 1;
  for (int i = 0; i < m; ++i) result *= p - i;
  return result;
}

// P(x) = (1 - x) Q(x); fails if (1 - x) does not divide P.
std::vector<cpp_int> divide_by_one_minus_x(const std::vector<cpp_int>& p) {
  if (p.size() < 2) throw InternalConsistency("rodrigues_expand: (1 - x) does not divide");
  std::vector<cpp_int> q(p.size() - 1);
  cpp_int carry = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    carry += p[i];
    q[i] = carry;
  }
  if (p.back() + q.back() != 0) {
    throw InternalConsistency("rodrigues_expand: (1 - x) does not divide");
  }
  return q;
}

}  // namespace

double WeightedExpoPoly::at_x(double x) const {
  double v = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    v = v * x + static_cast<double>(*it);
  }
  return v;
}

double WeightedExpoPoly::operator()(double t) const { return at_x(std::exp(-t)); }

WeightedExpoPoly rodrigues_expand(int n, int k, int alpha, int beta) {
  if (n < 0 || n > 8) {
    throw InvalidDegree("rodrigues_expand: degree " + std::to_string(n) + " outside 0..8");
  }
  if (k < 0 || k > n) {
    throw IndexError("rodrigues_expand: index " + std::to_string(k) + " outside 0.." +
                     std::to_string(n));
  }
  if (alpha < 0 || beta < 0 || alpha > 256 || beta > 256) {
    throw InvalidArgument("rodrigues_expand: exponents must lie in 0..256");
  }

  // x^a (1 - x)^b, differentiated m times and divided by m!.
  const int a = alpha + n + k;
  const int b = beta + n - k;
  const int m = n - k;
  std::vector<cpp_int> poly(a + b + 1, 0);
  for (int i = 0; i <= b; ++i) {
    cpp_int term = binomial(b, i);
    if (i % 2 == 1) term = -term;
    const int power = a + i;
    if (power < m) continue;
    // d^m/dx^m x^p / m! = C(p, m) x^(p - m)
    poly[power - m] += term * falling_factorial(power, m) / falling_factorial(m, m);
  }

  // Divide by x^(alpha + k).
  const int shift = alpha + k;
  for (int i = 0; i < shift; ++i) {
    if (poly[i] != 0) throw InternalConsistency("rodrigues_expand: negative power survives");
  }
  poly.erase(poly.begin(), poly.begin() + shift);

  for (int i = 0; i < beta; ++i) poly = divide_by_one_minus_x(poly);
  while (poly.size() > 1 && poly.back() == 0) poly.pop_back();

  WeightedExpoPoly result{n, k, alpha, beta, {}};
  result.coefficients.reserve(poly.size());
  const cpp_int lo = std::numeric_limits<std::int64_t>::min();
  const cpp_int hi = std::numeric_limits<std::int64_t>::max();
  for (const cpp_int& c : poly) {
    if (c < lo || c > hi) {
      throw InvalidArgument("rodrigues_expand: coefficients exceed the 64-bit range");
    }
    result.coefficients.push_back(static_cast<std::int64_t>(c));
  }
  return result;
}

std::vector<double> gen_zeros(int n, int alpha, int beta) {
  if (n != 1 && n != 2) {
    throw InvalidDegree("gen_zeros: only n = 1 and n = 2 are supported");
  }
  const WeightedExpoPoly p = rodrigues_expand(n, 0, alpha, beta);
  std::vector<double> roots;
  const auto& c = p.coefficients;
  if (n == 1) {
    roots.push_back(-static_cast<double>(c[0]) / static_cast<double>(c[1]));
  } else {
    const double c0 = static_cast<double>(c[0]);
    const double c1 = static_cast<double>(c[1]);
    const double c2 = static_cast<double>(c[2]);
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) throw NoValidZero("gen_zeros: complex roots");
    const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
    roots.push_back(q / c2);
    roots.push_back(c0 / q);
  }
  std::vector<double> zeros;
  for (double x : roots) {
    if (!(x > 0.0 && x < 1.0)) {
      throw NoValidZero("gen_zeros: root x = " + std::to_string(x) + " outside (0, 1)");
    }
    zeros.push_back(-std::log(x));
  }
  std::sort(zeros.begin(), zeros.end());
  return zeros;
}

double ExpInterpolant::operator()(double t) const {
  const double x = std::exp(-gamma * t);
  return coeffs[0] + coeffs[1] * x + coeffs[2] * x * x;
}

double ExpInterpolant::integral(double t) const {
  return coeffs[0] * t - coeffs[1] * std::expm1(-gamma * t) / gamma -
         coeffs[2] * std::expm1(-2.0 * gamma * t) / (2.0 * gamma);
}

AStable2Constants astable2_constants() {
  const double r15 = std::sqrt(15.0);
  AStable2Constants k{};
  k.gamma2 = std::log((15.0 + r15) / 7.0);
  k.mu1 = std::log((8.0 + r15) / 7.0);
  k.nu1 = 1.0 - k.mu1 / k.gamma2;
  k.q = (8.0 + r15) / 14.0;
  k.q_hat = (8.0 - r15) / 14.0;
  k.r = r15;
  k.s = 3.0 * (1.0 + r15) / 4.0;
  k.s_hat = 3.0 * (1.0 - r15) / 4.0;
  return k;
}

LStable2Constants lstable2_constants() {
  const double r3 = std::sqrt(3.0);
  LStable2Constants k{};
  k.beta2 = std::log(3.0 + r3);
  k.mu1 = std::log(2.0 + r3);
  k.nu1 = 1.0 - k.mu1 / k.beta2;
  k.q = (3.0 - r3) / 6.0;
  k.r = r3 / 6.0;
  k.s = k.q + 2.0 * k.r;
  return k;
}

std::array<ExpInterpolant, 3> interpolants_astable2() {
  const double r15 = std::sqrt(15.0);
  const double g = astable2_constants().gamma2;
  return {{
      {g, {1.0, -30.0 / 7.0, 30.0 / 7.0}},
      {g, {-r15, (15.0 + 22.0 * r15) / 7.0, -(15.0 + 15.0 * r15) / 7.0}},
      {g, {r15, (15.0 - 22.0 * r15) / 7.0, -(15.0 - 15.0 * r15) / 7.0}},
  }};
}

ButcherTableau astable2_tableau() {
  const AStable2Constants k = astable2_constants();
  const double g = k.gamma2;
  ButcherTableau t;
  t.label = "astable2";
  t.c = Eigen::Vector3d(0.0, k.nu1, 1.0);
  t.A = Eigen::MatrixXd::Zero(3, 3);
  t.A(1, 0) = k.nu1 - k.q_hat / g;
  t.A(1, 1) = -k.r * k.nu1 - k.s_hat / g;
  t.A(1, 2) = k.r * k.nu1 + (k.q_hat + k.s_hat) / g;
  t.A(2, 0) = 1.0 - k.q / g;
  t.A(2, 1) = -k.r + (k.q + k.s) / g;
  t.A(2, 2) = k.r - k.s / g;
  t.b = t.A.row(2).transpose();
  return t;
}

ButcherTableau lstable2_tableau() {
  const LStable2Constants k = lstable2_constants();
  ButcherTableau t;
  t.label = "lstable2";
  t.c = Eigen::Vector2d(k.nu1, 1.0);
  t.A.resize(2, 2);
  t.A(0, 0) = k.q * k.nu1 + k.r / k.beta2;
  t.A(0, 1) = k.s * k.nu1 - k.r / k.beta2;
  t.A(1, 0) = k.q + k.r / k.beta2;
  t.A(1, 1) = k.s - k.r / k.beta2;
  t.b = t.A.row(1).transpose();
  return t;
}

std::vector<GammaScanEntry> scan_gamma(int n, Rational omega, std::span<const int> alphas) {
  if (n != 2) throw InvalidDegree("scan_gamma: only n = 2 is supported");
  if (omega.den <= 0 || omega.num <= 0) {
    throw InvalidArgument("scan_gamma: omega must be a positive rational");
  }
  std::vector<GammaScanEntry> out;
  out.reserve(alphas.size());
  for (int alpha : alphas) {
    const long scaled = omega.num * alpha;
    if (scaled % omega.den != 0) {
      throw InvalidArgument("scan_gamma: omega * alpha is not an integer for alpha = " +
                            std::to_string(alpha));
    }
    const int beta = static_cast<int>(scaled / omega.den);
    out.push_back({alpha, beta, gen_zeros(n, alpha, beta).back()});
  }
  return out;
}

}  // namespace expode
