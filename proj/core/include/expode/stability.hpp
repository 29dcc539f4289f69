#pragma once

// Stability functions R(z) of the schemes, stability regions, and the A-, L-
// and monotonicity checks built on them.

#include <complex>
#include <cstdint>
#include <vector>

#include "expode/schemes.hpp"
#include "expode/tableau.hpp"

namespace expode {

/// R(z) = P(z) / Q(z), coefficients in ascending powers of z.
struct StabilityFunction {
  std::vector<double> numerator;
  std::vector<double> denominator{1.0};

  std::complex<double> operator()(std::complex<double> z) const;
  double operator()(double x) const;

  int numerator_degree() const noexcept { return static_cast<int>(numerator.size()) - 1; }
  int denominator_degree() const noexcept { return static_cast<int>(denominator.size()) - 1; }
};

/// Propagates coefficient polynomials through the explicit recurrence applied
/// to y' = z y; the numerator has degree n + 1 and the denominator is 1.
StabilityFunction explicit_stability(const ExplicitScheme& scheme);

/// det(I - zA + z 1 b^T) / det(I - zA) expanded by exact minor expansion.
/// Supports up to 8 stages. Trailing coefficients that cancel to rounding
/// level are dropped.
StabilityFunction irk_stability(const ButcherTableau& tableau);

struct LimitAtInfinity {
  enum class Kind { finite, plus_infinity, minus_infinity };
  Kind kind = Kind::finite;
  double value = 0.0;
};

/// lim R(z) as z -> -inf along the real axis.
LimitAtInfinity limit_at_minus_infinity(const StabilityFunction& r);

/// Roots of the denominator (companion-matrix eigenvalues).
std::vector<std::complex<double>> poles(const StabilityFunction& r);

struct AStabilityReport {
  bool a_stable = false;
  double max_modulus_imaginary_axis = 0.0;
  double argmax_imaginary_axis = 0.0;
  double max_modulus_left_half_plane = 0.0;
  std::vector<std::complex<double>> poles;
};

/// Samples |R(iy)| for y on a 4000-point logarithmic grid in [1e-3, 1e6] and a
/// left-half-plane grid, and locates the poles. The verdict requires every
/// sample to satisfy |R| <= 1 + 1e-9 and every pole to lie in Re z > 0.
AStabilityReport a_stability_check(const StabilityFunction& r);

/// Connected interval [left, right] around 0 on the real axis where |R| <= 1,
/// searched within [-1e6, 1e6] and refined by bisection to 1e-10.
struct RealStabilityInterval {
  double left = 0.0;
  double right = 0.0;
  bool left_unbounded = false;  ///< stable up to the -1e6 bracket end
};

RealStabilityInterval real_axis_interval(const StabilityFunction& r);

/// Row-major |R(z)| <= 1 mask. Row 0 is the top edge (im_max), column 0 the
/// left edge (re_min); both edges are included in the sample grid.
struct StabilityRaster {
  int width = 0;
  int height = 0;
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
  std::vector<std::uint8_t> stable;
  RealStabilityInterval real_axis;

  std::complex<double> point(int row, int col) const;
  bool at(int row, int col) const { return stable[static_cast<std::size_t>(row) * width + col] != 0; }
};

/// Width and height must lie in 2..4096.
StabilityRaster region_raster(const StabilityFunction& r, double re_min, double re_max,
                              double im_min, double im_max, int width, int height);

/// Largest x = gamma h such that 0 < R(-x') < 1 for all 0 < x' <= x, i.e. the
/// step bound below which y' = -gamma y decays monotonically. Returns +inf
/// when no violation occurs below 1e3.
double monotonicity_threshold(const StabilityFunction& r);
double monotonicity_threshold(const ExplicitScheme& scheme);

/// End-row quadrature weights of the implicit scheme (sigma_nn0, sigma_nn1..nn).
struct WeightSigns {
  int n = 0;
  std::vector<double> weights;
  int negative_count = 0;
};

std::vector<WeightSigns> weight_sign_report(int max_n);

}  // namespace expode
