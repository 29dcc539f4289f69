#pragma once

// Weighted exponential polynomials from the Rodrigues-type formula and the two
// n = 2 implicit procedures built from them (A-stable and L-stable).

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "expode/tableau.hpp"

namespace expode {

/// E^(alpha,beta)_nk as a polynomial in x = exp(-t), orthogonal on the
/// semi-axis under the weight exp(-alpha t) (1 - exp(-t))^beta.
struct WeightedExpoPoly {
  int n = 0;
  int k = 0;
  int alpha = 0;
  int beta = 0;
  /// Exact integer coefficients, ascending powers of x.
  std::vector<std::int64_t> coefficients;

  double at_x(double x) const;
  double operator()(double t) const;
};

/// Expands the Rodrigues formula with exact integer arithmetic.
/// Requires 0 <= k <= n <= 8 and nonnegative alpha, beta.
WeightedExpoPoly rodrigues_expand(int n, int k, int alpha, int beta);

/// Zeros of E^(alpha,beta)_n0 as ascending t values, for n = 1 or 2.
/// Throws NoValidZero when a root in x falls outside (0, 1).
std::vector<double> gen_zeros(int n, int alpha, int beta);

/// c0 + c1 exp(-gamma t) + c2 exp(-2 gamma t)
struct ExpInterpolant {
  double gamma = 0.0;
  std::array<double, 3> coeffs{};

  double operator()(double t) const;
  /// Integral over [0, t].
  double integral(double t) const;
};

struct AStable2Constants {
  double gamma2;  ///< ln((15 + sqrt 15) / 7)
  double mu1;     ///< ln((8 + sqrt 15) / 7)
  double nu1;     ///< 1 - mu1 / gamma2
  double q, q_hat, r, s, s_hat;
};

struct LStable2Constants {
  double beta2;  ///< ln(3 + sqrt 3)
  double mu1;    ///< ln(2 + sqrt 3)
  double nu1;    ///< 1 - mu1 / beta2
  double q, r, s;
};

AStable2Constants astable2_constants();
LStable2Constants lstable2_constants();

/// Lagrange interpolants e_20, e_21, e_22 on the nodes {0, nu1, 1}.
std::array<ExpInterpolant, 3> interpolants_astable2();

/// Three-stage, stiffly accurate, first stage explicit.
ButcherTableau astable2_tableau();

/// Two-stage, stiffly accurate.
ButcherTableau lstable2_tableau();

struct Rational {
  long num = 1;
  long den = 1;
};

struct GammaScanEntry {
  int alpha = 0;
  int beta = 0;
  double max_zero = 0.0;
};

/// Largest zero of E^(alpha, omega alpha)_n0 for each listed alpha. Only n = 2
/// is supported; omega * alpha must be an integer.
std::vector<GammaScanEntry> scan_gamma(int n, Rational omega, std::span<const int> alphas);

}  // namespace expode
