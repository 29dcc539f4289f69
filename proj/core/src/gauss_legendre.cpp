#include <cmath>
#include <numbers>
#include <string>

#include "expode/basis.hpp"
#include "expode/error.hpp"

namespace expode {
namespace {

struct LegendreValue {
  double p;       // P_n(cos theta)
  double dtheta;  // d/dtheta P_n(cos theta)
};

// Three-term recurrence in z = cos(theta). The theta derivative is
// n (z P_n - P_{n-1}) / sin(theta), which stays finite at the nodes.
LegendreValue legendre_theta(int n, double theta) {
  const double z = std::cos(theta);
  double p0 = 1.0;
  double p1 = z;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (z * p1 - p0) / std::sin(theta)};
}

}  // namespace

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1 || n > 64) {
    throw InvalidDegree("gauss_legendre: node count " + std::to_string(n) +
                        " outside 1..64");
  }
  GaussLegendreRule rule;
  rule.n = n;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  rule.complements.assign(n, 1.0);

  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    const bool middle = (n % 2 == 1) && (i == half - 1);
    double theta = middle ? std::numbers::pi / 2
                          : std::numbers::pi * (i + 0.75) / (n + 0.5);
    if (!middle) {
      for (int iter = 0; iter < 100; ++iter) {
        const LegendreValue v = legendre_theta(n, theta);
        const double delta = v.p / v.dtheta;
        theta -= delta;
        if (std::abs(delta) <= 4e-16 * theta) break;
      }
    }
    const LegendreValue v = legendre_theta(n, theta);
    const double w = 2.0 / (v.dtheta * v.dtheta);
    const double half_theta = 0.5 * theta;
    const double z = middle ? 0.0 : std::cos(theta);

    // i = 0 is the node closest to +1.
    const int hi = n - 1 - i;
    const int lo = i;
    rule.nodes[hi] = z;
    rule.weights[hi] = w;
    rule.complements[hi] = middle ? 1.0 : 2.0 * std::sin(half_theta) * std::sin(half_theta);
    if (!middle) {
      rule.nodes[lo] = -z;
      rule.weights[lo] = w;
      rule.complements[lo] = 2.0 * std::cos(half_theta) * std::cos(half_theta);
    }
  }
  return rule;
}

}  // namespace expode
