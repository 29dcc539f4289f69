#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "expode/error.hpp"
#include "expode/genmethods.hpp"
#include "expode/stability.hpp"
#include "oracles.hpp"

using namespace expode;
using cd = std::complex<double>;

namespace {

// Smallest x > 0 where 0 < P(-x) < 1 fails: first positive root of P(-x) or
// of P(-x) - 1.
double monotone_root(const std::vector<double>& p) {
  std::vector<double> q(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) q[k] = (k % 2 == 0) ? p[k] : -p[k];
  std::vector<double> q_minus_one = q;
  q_minus_one[0] -= 1.0;
  q_minus_one.erase(q_minus_one.begin());  // divide by x; q(0) - 1 = 0
  double best = std::numeric_limits<double>::infinity();
  for (const auto& poly : {q, q_minus_one}) {
    for (double r : oracle::real_roots(poly)) {
      if (r > 1e-12) best = std::min(best, r);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("explicit stability polynomials for n = 1 and n = 2") {
  const StabilityFunction r1 = explicit_stability(*cached_explicit(1));
  REQUIRE(r1.numerator.size() == 3);
  CHECK(r1.denominator == std::vector<double>{1.0});
  CHECK(r1.numerator[0] == 1.0);
  CHECK(std::abs(r1.numerator[1] - 1.0) <= 1e-14);
  CHECK(std::abs(r1.numerator[2] - (2.0 - 1.0 / std::numbers::ln2)) <= 1e-14);
  CHECK(std::abs(r1.numerator[2] - 0.557305) <= 1e-6);

  const StabilityFunction r2 = explicit_stability(*cached_explicit(2));
  const double printed[] = {1.0, 1.0, 0.533954, 0.098846};
  REQUIRE(r2.numerator.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(r2.numerator[k] - printed[k]) <= 1e-6);
}

TEST_CASE("explicit stability polynomials are first order for every degree") {
  for (int n = 1; n <= 8; ++n) {
    const StabilityFunction r = explicit_stability(*cached_explicit(n));
    CHECK(r.numerator_degree() == n + 1);
    CHECK(std::abs(r.numerator[1] - 1.0) <= 1e-12);
    CHECK(std::abs(r.numerator[2] - 0.5) > 0.01);
    // P(x) = 1 + sum_s sigma_s K_s(x) evaluated by the scheme itself.
    for (double x : {-2.0, -0.3, 0.7}) {
      const ExplicitScheme& s = *cached_explicit(n);
      std::vector<double> k(n + 1);
      double y = 1.0;
      for (int p = 0; p <= n; ++p) {
        double arg = 1.0;
        for (int q = 0; q < p; ++q) arg += s.mu(p, q) * k[q];
        k[p] = x * arg;
        y += s.sigma(p) * k[p];
      }
      CHECK(r(x) == doctest::Approx(y).epsilon(1e-12));
    }
  }
}

TEST_CASE("irk_stability agrees with the resolvent formula") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<ButcherTableau> methods{to_tableau(*cached_implicit(1)), to_tableau(*cached_implicit(2)),
                                      to_tableau(*cached_implicit(5)), astable2_tableau(),
                                      lstable2_tableau(), to_tableau(*cached_explicit(3))};
  for (const ButcherTableau& t : methods) {
    const StabilityFunction r = irk_stability(t);
    CHECK(r.denominator[0] == doctest::Approx(1.0));
    for (int i = 0; i < 20; ++i) {
      const cd z(u(rng), u(rng));
      const cd expected = oracle::rk_stability(t.A, t.b, z);
      CHECK(std::abs(r(z) - expected) <= 1e-11 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("irk_stability of an explicit tableau is the explicit polynomial") {
  for (int n : {1, 2, 6}) {
    const StabilityFunction a = explicit_stability(*cached_explicit(n));
    const StabilityFunction b = irk_stability(to_tableau(*cached_explicit(n)));
    REQUIRE(b.denominator.size() == 1);
    REQUIRE(a.numerator.size() == b.numerator.size());
    for (std::size_t k = 0; k < a.numerator.size(); ++k) {
      CHECK(std::abs(a.numerator[k] - b.numerator[k]) <= 1e-13);
    }
  }
}

TEST_CASE("irk_stability stage limit") {
  ButcherTableau big;
  big.label = "big";
  big.A = Eigen::MatrixXd::Zero(9, 9);
  big.b = Eigen::VectorXd::Constant(9, 1.0 / 9);
  big.c = Eigen::VectorXd::Zero(9);
  CHECK_THROWS_AS(irk_stability(big), InvalidArgument);
}

TEST_CASE("implicit n = 1 is A-stable with the closed-form function") {
  const StabilityFunction r = irk_stability(to_tableau(*cached_implicit(1)));
  const double A = 1.0 / std::numbers::ln2 - 1.0;
  REQUIRE(r.numerator.size() == 2);
  REQUIRE(r.denominator.size() == 2);
  CHECK(std::abs(r.numerator[1] - A) <= 1e-12);
  CHECK(std::abs(r.denominator[1] + (1.0 - A)) <= 1e-12);
  const LimitAtInfinity lim = limit_at_minus_infinity(r);
  CHECK(lim.kind == LimitAtInfinity::Kind::finite);
  CHECK(std::abs(lim.value + A / (1.0 - A)) <= 1e-12);
  CHECK(std::abs(lim.value - (-0.794349)) <= 1e-6);
  const AStabilityReport rep = a_stability_check(r);
  CHECK(rep.a_stable);
  CHECK(rep.max_modulus_imaginary_axis <= 1.0);
  REQUIRE(rep.poles.size() == 1);
  CHECK(rep.poles[0].real() == doctest::Approx(1.0 / (1.0 - A)).epsilon(1e-12));
}

TEST_CASE("implicit n = 2 and n = 3 are not A-stable") {
  for (int n : {2, 3}) {
    const AStabilityReport rep = a_stability_check(irk_stability(to_tableau(*cached_implicit(n))));
    CHECK_FALSE(rep.a_stable);
    CHECK(rep.max_modulus_imaginary_axis > 1.5);
  }
}

TEST_CASE("A-stable two-stage tableau: limit and imaginary-axis behaviour") {
  const StabilityFunction r = irk_stability(astable2_tableau());
  REQUIRE(r.numerator.size() == 3);
  REQUIRE(r.denominator.size() == 3);
  const LimitAtInfinity lim = limit_at_minus_infinity(r);
  CHECK(lim.kind == LimitAtInfinity::Kind::finite);
  CHECK(std::abs(lim.value - 0.543836) <= 1e-6);
  // |Q(iy)|^2 - |P(iy)|^2 = e2 y^2 + e4 y^4; A-stability needs e2, e4 >= 0.
  const auto& P = r.numerator;
  const auto& Q = r.denominator;
  const double e2 = (Q[1] * Q[1] - 2 * Q[2]) - (P[1] * P[1] - 2 * P[2]);
  const double e4 = Q[2] * Q[2] - P[2] * P[2];
  CHECK(e4 > 0.0);
  CHECK(e2 < 0.0);
  const AStabilityReport rep = a_stability_check(r);
  CHECK(rep.max_modulus_imaginary_axis == doctest::Approx(1.0000030).epsilon(1e-6));
  CHECK(rep.argmax_imaginary_axis == doctest::Approx(0.162).epsilon(0.02));
  CHECK_FALSE(rep.a_stable);
  for (const cd& p : rep.poles) CHECK(p.real() > 0.0);
}

TEST_CASE("L-stable two-stage tableau") {
  const StabilityFunction r = irk_stability(lstable2_tableau());
  const LStable2Constants k = lstable2_constants();
  const double A = k.q * k.mu1 / k.beta2;
  const double B = k.r * k.mu1 / (k.beta2 * k.beta2);
  REQUIRE(r.numerator.size() == 2);
  REQUIRE(r.denominator.size() == 3);
  CHECK(std::abs(r.numerator[1] - A) <= 1e-12);
  CHECK(std::abs(r.denominator[1] + (1.0 - A)) <= 1e-12);
  CHECK(std::abs(r.denominator[2] - B) <= 1e-12);
  CHECK(std::abs(r(-1e8)) <= 1e-6);
  const LimitAtInfinity lim = limit_at_minus_infinity(r);
  CHECK(lim.kind == LimitAtInfinity::Kind::finite);
  CHECK(lim.value == 0.0);
  CHECK(a_stability_check(r).a_stable);
  // Poles from the quadratic formula.
  const double disc = (1 - A) * (1 - A) - 4 * B;
  const auto poles_found = poles(r);
  REQUIRE(poles_found.size() == 2);
  CHECK(poles_found[0].real() == doctest::Approx(((1 - A) - std::sqrt(disc)) / (2 * B)).epsilon(1e-12));
  CHECK(poles_found[1].real() == doctest::Approx(((1 - A) + std::sqrt(disc)) / (2 * B)).epsilon(1e-12));
}

TEST_CASE("limits at minus infinity of polynomials") {
  const LimitAtInfinity l1 = limit_at_minus_infinity(explicit_stability(*cached_explicit(1)));
  CHECK(l1.kind == LimitAtInfinity::Kind::plus_infinity);
  CHECK(std::isinf(l1.value));
  const LimitAtInfinity l2 = limit_at_minus_infinity(explicit_stability(*cached_explicit(2)));
  CHECK(l2.kind == LimitAtInfinity::Kind::minus_infinity);
  CHECK(poles(explicit_stability(*cached_explicit(2))).empty());
  CHECK_FALSE(a_stability_check(explicit_stability(*cached_explicit(2))).a_stable);
}

TEST_CASE("monotonicity thresholds") {
  const double euler = monotonicity_threshold(irk_stability(explicit_euler_tableau()));
  CHECK(euler == 1.0);
  const double t1 = monotonicity_threshold(*cached_explicit(1));
  CHECK(std::abs(t1 - 1.0 / (2.0 - 1.0 / std::numbers::ln2)) <= 1e-12);
  CHECK(std::abs(t1 - 1.7943) <= 1e-3);
  for (int n = 1; n <= 8; ++n) {
    const StabilityFunction r = explicit_stability(*cached_explicit(n));
    CHECK(std::abs(monotonicity_threshold(r) - monotone_root(r.numerator)) <= 1e-9);
  }
  // n = 2 golden, measured once from this implementation.
  CHECK(std::abs(monotonicity_threshold(*cached_explicit(2)) - 3.244962927905) <= 1e-9);
  // A-stable implicit n = 1 turns negative at x = 1/A.
  const double A = 1.0 / std::numbers::ln2 - 1.0;
  CHECK(std::abs(monotonicity_threshold(irk_stability(to_tableau(*cached_implicit(1)))) - 1.0 / A) <= 1e-12);
  // Backward Euler, 1 / (1 + x), stays in (0, 1) for every x > 0.
  StabilityFunction backward;
  backward.numerator = {1.0};
  backward.denominator = {1.0, -1.0};
  CHECK(std::isinf(monotonicity_threshold(backward)));
  StabilityFunction identity;
  identity.numerator = {1.0};
  CHECK(monotonicity_threshold(identity) <= 1e-3);
}

TEST_CASE("real-axis stability interval") {
  const RealStabilityInterval e1 = real_axis_interval(explicit_stability(*cached_explicit(1)));
  CHECK(std::abs(e1.left + 1.0 / (2.0 - 1.0 / std::numbers::ln2)) <= 1e-9);
  CHECK(e1.right == 0.0);
  CHECK_FALSE(e1.left_unbounded);
  const RealStabilityInterval euler = real_axis_interval(irk_stability(explicit_euler_tableau()));
  CHECK(std::abs(euler.left + 2.0) <= 1e-9);
  const RealStabilityInterval i1 = real_axis_interval(irk_stability(to_tableau(*cached_implicit(1))));
  CHECK(i1.left_unbounded);
  CHECK(i1.left == -1e6);
}

TEST_CASE("region raster geometry") {
  const StabilityFunction r = irk_stability(explicit_euler_tableau());
  const StabilityRaster raster = region_raster(r, -3.0, 1.0, -2.0, 2.0, 41, 41);
  CHECK(raster.stable.size() == 41u * 41u);
  CHECK(raster.point(0, 0) == cd(-3.0, 2.0));
  CHECK(raster.point(40, 40) == cd(1.0, -2.0));
  for (int row = 0; row < 41; ++row) {
    for (int col = 0; col < 41; ++col) {
      const cd z = raster.point(row, col);
      CHECK(raster.at(row, col) == (std::abs(1.0 + z) <= 1.0));
    }
  }
  CHECK(raster.at(20, 20));  // z = -1
  CHECK_FALSE(raster.at(0, 0));
  CHECK_THROWS_AS(region_raster(r, -1, 1, -1, 1, 4097, 10), InvalidArgument);
  CHECK_THROWS_AS(region_raster(r, -1, 1, -1, 1, 1, 10), InvalidArgument);
  CHECK_THROWS_AS(region_raster(r, 1, -1, -1, 1, 10, 10), InvalidArgument);
}

TEST_CASE("A-stable function covers the left half-plane raster") {
  const StabilityFunction r = irk_stability(to_tableau(*cached_implicit(1)));
  const StabilityRaster raster = region_raster(r, -20.0, 2.0, -10.0, 10.0, 221, 201);
  for (int row = 0; row < raster.height; ++row) {
    for (int col = 0; col < raster.width; ++col) {
      if (raster.point(row, col).real() <= 0.0) CHECK(raster.at(row, col));
    }
  }
}

TEST_CASE("end-row weights of mixed sign appear for some n <= 8") {
  const std::vector<WeightSigns> report = weight_sign_report(8);
  REQUIRE(report.size() == 8);
  CHECK(report[0].negative_count == 0);
  bool any_negative = false;
  for (const WeightSigns& w : report) {
    CHECK(w.weights.size() == static_cast<std::size_t>(w.n + 1));
    double sum = 0.0;
    for (double v : w.weights) sum += v;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    any_negative = any_negative || w.negative_count > 0;
  }
  CHECK(any_negative);
}
