#include "expode/stability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "expode/error.hpp"

namespace expode {
namespace {

using Poly = std::vector<double>;

template <typename T>
T horner(const Poly& p, T z) {
  T v(0.0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * z + *it;
  return v;
}

Poly add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly scale(const Poly& a, double s) {
  Poly out(a);
  for (double& c : out) c *= s;
  return out;
}

// (c0 + c1 z) * p
Poly mul_linear(const Poly& p, double c0, double c1) {
  Poly out(p.size() + 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] += c0 * p[i];
    out[i + 1] += c1 * p[i];
  }
  return out;
}

void trim(Poly& p) {
  double magnitude = 0.0;
  for (double c : p) magnitude += std::abs(c);
  const double cutoff = 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
  while (p.size() > 1 && std::abs(p.back()) <= cutoff) p.pop_back();
}

// Determinant of the matrix with entries delta_ij + z * m(i, j), expanded
// row by row with memoization over the set of used columns.
Poly det_identity_plus_z(const Eigen::MatrixXd& m) {
  const int s = static_cast<int>(m.rows());
  const unsigned full = (1u << s) - 1u;
  std::unordered_map<unsigned, Poly> memo;
  auto rec = [&](auto&& self, unsigned used) -> Poly {
    if (used == full) return Poly{1.0};
    if (auto it = memo.find(used); it != memo.end()) return it->second;
    const int row = std::popcount(used);
    Poly total{0.0};
    int free_before = 0;
    for (int col = 0; col < s; ++col) {
      if (used & (1u << col)) continue;
      const double c0 = (row == col) ? 1.0 : 0.0;
      const double c1 = m(row, col);
      if (c0 != 0.0 || c1 != 0.0) {
        Poly term = mul_linear(self(self, used | (1u << col)), c0, c1);
        total = add(total, (free_before % 2 == 0) ? term : scale(term, -1.0));
      }
      ++free_before;
    }
    memo.emplace(used, total);
    return total;
  };
  return rec(rec, 0u);
}

double sample_max(const StabilityFunction& r, const std::vector<std::complex<double>>& zs,
                  double* where = nullptr) {
  double best = 0.0;
  for (const auto& z : zs) {
    const double v = std::abs(r(z));
    if (!(v <= best)) {
      best = v;
      if (where != nullptr) *where = z.imag();
    }
  }
  return best;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i) g[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
  return g;
}

// Walks from 0 toward `limit` on a geometric grid until |R| > 1 and then
// bisects; returns the boundary or `limit` when none is met.
double stability_edge(const StabilityFunction& r, double limit, bool* unbounded) {
  const double sign = limit < 0.0 ? -1.0 : 1.0;
  const double span = std::abs(limit);
  auto stable = [&](double x) { return std::abs(r(x)) <= 1.0; };
  double inside = 0.0;
  double x = 1e-8;
  while (x <= span) {
    if (!stable(sign * x)) break;
    inside = x;
    x *= 1.001;
  }
  if (x > span) {
    if (stable(sign * span)) {
      if (unbounded != nullptr) *unbounded = true;
      return limit;
    }
    x = span;
  }
  double outside = x;
  while (outside - inside > 1e-10) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    (stable(sign * mid) ? inside : outside) = mid;
  }
  return sign * inside;
}

}  // namespace

std::complex<double> StabilityFunction::operator()(std::complex<double> z) const {
  return horner(numerator, z) / horner(denominator, z);
}

double StabilityFunction::operator()(double x) const {
  return horner(numerator, x) / horner(denominator, x);
}

StabilityFunction explicit_stability(const ExplicitScheme& scheme) {
  const int n = scheme.n;
  // K_p as polynomials in z for y' = z y, y(0) = 1, unit step.
  std::vector<Poly> k;
  k.reserve(n + 1);
  k.push_back(Poly{0.0, 1.0});
  for (int p = 1; p <= n; ++p) {
    Poly arg{1.0};
    for (int s = 0; s < p; ++s) arg = add(arg, scale(k[s], scheme.mu(p, s)));
    k.push_back(mul_linear(arg, 0.0, 1.0));
  }
  Poly y{1.0};
  for (int s = 0; s <= n; ++s) y = add(y, scale(k[s], scheme.sigma(s)));
  StabilityFunction r;
  r.numerator = std::move(y);
  r.denominator = Poly{1.0};
  return r;
}

StabilityFunction irk_stability(const ButcherTableau& tableau) {
  const int s = tableau.stages();
  if (s < 1 || s > 8) {
    throw InvalidArgument("irk_stability supports 1..8 stages, got " + std::to_string(s));
  }
  const Eigen::MatrixXd minus_a = -tableau.A;
  const Eigen::MatrixXd num_matrix =
      minus_a + Eigen::VectorXd::Ones(s) * tableau.b.transpose();
  StabilityFunction r;
  r.numerator = det_identity_plus_z(num_matrix);
  r.denominator = det_identity_plus_z(minus_a);
  trim(r.numerator);
  trim(r.denominator);
  return r;
}

LimitAtInfinity limit_at_minus_infinity(const StabilityFunction& r) {
  const int dp = r.numerator_degree();
  const int dq = r.denominator_degree();
  LimitAtInfinity out;
  if (dp < dq) return out;
  const double ratio = r.numerator.back() / r.denominator.back();
  if (dp == dq) {
    out.value = ratio;
    return out;
  }
  const double sign = ((dp - dq) % 2 == 0) ? ratio : -ratio;
  out.kind = sign > 0 ? LimitAtInfinity::Kind::plus_infinity : LimitAtInfinity::Kind::minus_infinity;
  out.value = sign > 0 ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
  return out;
}

std::vector<std::complex<double>> poles(const StabilityFunction& r) {
  const int d = r.denominator_degree();
  if (d < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  const double lead = r.denominator.back();
  for (int i = 0; i < d; ++i) companion(0, i) = -r.denominator[d - 1 - i] / lead;
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    out.push_back(solver.eigenvalues()(i));
  }
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

AStabilityReport a_stability_check(const StabilityFunction& r) {
  constexpr double kTolerance = 1e-9;
  AStabilityReport report;

  std::vector<std::complex<double>> axis;
  for (double y : log_grid(1e-3, 1e6, 4000)) axis.emplace_back(0.0, y);
  report.max_modulus_imaginary_axis = sample_max(r, axis, &report.argmax_imaginary_axis);

  std::vector<std::complex<double>> plane;
  const std::vector<double> re = log_grid(1e-3, 1e6, 200);
  std::vector<double> im = log_grid(1e-3, 1e6, 200);
  im.push_back(0.0);
  for (double x : re) {
    for (double y : im) plane.emplace_back(-x, y);
  }
  report.max_modulus_left_half_plane = sample_max(r, plane);

  report.poles = poles(r);
  const bool poles_ok = std::all_of(report.poles.begin(), report.poles.end(),
                                    [](auto p) { return p.real() > 0.0; });
  report.a_stable = poles_ok && report.max_modulus_imaginary_axis <= 1.0 + kTolerance &&
                    report.max_modulus_left_half_plane <= 1.0 + kTolerance;
  return report;
}

RealStabilityInterval real_axis_interval(const StabilityFunction& r) {
  RealStabilityInterval out;
  out.left = stability_edge(r, -1e6, &out.left_unbounded);
  out.right = stability_edge(r, 1e6, nullptr);
  return out;
}

std::complex<double> StabilityRaster::point(int row, int col) const {
  const double re = re_min + (re_max - re_min) * col / (width - 1);
  const double im = im_max - (im_max - im_min) * row / (height - 1);
  return {re, im};
}

StabilityRaster region_raster(const StabilityFunction& r, double re_min, double re_max,
                              double im_min, double im_max, int width, int height) {
  if (width < 2 || height < 2 || width > 4096 || height > 4096) {
    throw InvalidArgument("raster resolution must lie in 2..4096 per axis");
  }
  if (!(re_max > re_min) || !(im_max > im_min)) {
    throw InvalidArgument("raster window must have positive extent");
  }
  StabilityRaster raster;
  raster.width = width;
  raster.height = height;
  raster.re_min = re_min;
  raster.re_max = re_max;
  raster.im_min = im_min;
  raster.im_max = im_max;
  raster.stable.assign(static_cast<std::size_t>(width) * height, 0);
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      raster.stable[static_cast<std::size_t>(row) * width + col] =
          std::abs(r(raster.point(row, col))) <= 1.0 ? 1 : 0;
    }
  }
  raster.real_axis = real_axis_interval(r);
  return raster;
}

double monotonicity_threshold(const StabilityFunction& r) {
  auto monotone = [&](double x) {
    const double v = r(-x);
    return v > 0.0 && v < 1.0;
  };
  constexpr double kStep = 1e-3;
  constexpr int kSteps = 1'000'000;
  double good = 0.0;
  double bad = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kSteps; ++k) {
    const double x = k * kStep;
    if (!monotone(x)) {
      bad = x;
      break;
    }
    good = x;
  }
  if (std::isinf(bad)) return bad;
  for (;;) {
    const double mid = 0.5 * (good + bad);
    if (mid == good || mid == bad) break;
    (monotone(mid) ? good : bad) = mid;
  }
  return bad;
}

double monotonicity_threshold(const ExplicitScheme& scheme) {
  return monotonicity_threshold(explicit_stability(scheme));
}

std::vector<WeightSigns> weight_sign_report(int max_n) {
  std::vector<WeightSigns> out;
  for (int n = 1; n <= max_n; ++n) {
    const auto scheme = cached_implicit(n);
    WeightSigns w;
    w.n = n;
    w.weights.push_back(scheme->sigma0(n - 1));
    for (int s = 0; s < n; ++s) w.weights.push_back(scheme->sigma(n - 1, s));
    w.negative_count = static_cast<int>(
        std::count_if(w.weights.begin(), w.weights.end(), [](double v) { return v < 0.0; }));
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace expode
