// One PASS/FAIL line per acceptance criterion. `--criterion k` runs a single
// criterion; the exit status is nonzero if any selected criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "expode/basis.hpp"
#include "expode/genmethods.hpp"
#include "expode/integrate.hpp"
#include "expode/problems.hpp"
#include "expode/schemes.hpp"
#include "expode/stability.hpp"
#include "oracles.hpp"

using namespace expode;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [failed]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Tolerances are fixed here and nowhere else.
constexpr double kSigmaTol = 1e-14;
constexpr double kPrintedTol = 1e-6;
constexpr double kTableauTol = 1e-12;
constexpr double kLocalErrorTarget = -0.0573;
constexpr double kLocalErrorTol = 5e-4;
constexpr double kMonotoneTarget = 1.7943;
constexpr double kMonotoneTol = 1e-3;
constexpr double kOrthoTol = 1e-10;
constexpr double kOrthoTolHigh = 1e-8;
constexpr double kGammaTol = 1e-9;
constexpr double kLambdaTol = 1e-12;
constexpr double kQuadratureTol = 1e-10;
constexpr double kOracleTol = 1e-10;
constexpr double kAdaptiveTol = 1e-4;
constexpr double kOrderTol = 0.1;
constexpr double kGoldenTol = 5e-4;

void c1(Outcome& o) {
  const ExplicitScheme& s = *cached_explicit(1);
  const double inv_ln2 = 1.0 / std::numbers::ln2;
  const double d0 = std::abs(s.sigma(0) - (inv_ln2 - 1.0));
  const double d1 = std::abs(s.sigma(1) - (2.0 - inv_ln2));
  o.require(d0 <= kSigmaTol, "sigma0 diff " + num(d0));
  o.require(d1 <= kSigmaTol, "sigma1 diff " + num(d1));
}

void c2(Outcome& o) {
  const std::vector<std::vector<double>> printed{{1, 1, 0.557305}, {1, 1, 0.533954, 0.098846}};
  for (int n = 1; n <= 2; ++n) {
    const StabilityFunction r = explicit_stability(*cached_explicit(n));
    const auto& want = printed[n - 1];
    bool ok = r.numerator.size() == want.size();
    double worst = 0.0;
    for (std::size_t k = 0; ok && k < want.size(); ++k) worst = std::max(worst, std::abs(r.numerator[k] - want[k]));
    o.require(ok && worst <= kPrintedTol, "n=" + std::to_string(n) + " max diff " + num(worst));
  }
}

void c3(Outcome& o) {
  const StabilityFunction r = irk_stability(to_tableau(*cached_implicit(1)));
  const bool shape = r.numerator.size() == 2 && r.denominator.size() == 2;
  o.require(shape, "degrees (1,1)");
  if (!shape) return;
  const double A = r.numerator[1];
  o.require(std::abs(A - 0.442695) <= kPrintedTol, "A=" + num(A));
  o.require(std::abs(r.denominator[1] + (1.0 - A)) <= kTableauTol, "Q = 1-(1-A)z");
  const LimitAtInfinity lim = limit_at_minus_infinity(r);
  o.require(lim.kind == LimitAtInfinity::Kind::finite && std::abs(lim.value + 0.794349) <= kPrintedTol,
            "limit " + num(lim.value));
  o.require(a_stability_check(r).a_stable, "A-stable");
}

void c4(Outcome& o) {
  const AStabilityReport rep = a_stability_check(irk_stability(to_tableau(*cached_implicit(2))));
  o.require(!rep.a_stable, "verdict not A-stable, max|R(iy)|=" + num(rep.max_modulus_imaginary_axis));
}

void c5(Outcome& o) {
  const ButcherTableau t = astable2_tableau();
  const double sum = t.b.sum();
  o.require(std::abs(sum - 1.0) <= kTableauTol, "sum b - 1 = " + num(sum - 1.0));
  const StabilityFunction r = irk_stability(t);
  const LimitAtInfinity lim = limit_at_minus_infinity(r);
  o.require(lim.kind == LimitAtInfinity::Kind::finite && std::abs(lim.value - 0.543836) <= kPrintedTol,
            "limit " + num(lim.value));
  const AStabilityReport rep = a_stability_check(r);
  o.require(rep.a_stable, "A-stable (max|R(iy)|=" + num(rep.max_modulus_imaginary_axis) + " at y=" +
                              num(rep.argmax_imaginary_axis) + ")");
}

void c6(Outcome& o) {
  const StabilityFunction r = irk_stability(lstable2_tableau());
  const LStable2Constants k = lstable2_constants();
  const double A = k.q * k.mu1 / k.beta2;
  const double B = k.r * k.mu1 / (k.beta2 * k.beta2);
  const bool shape = r.numerator.size() == 2 && r.denominator.size() == 3;
  o.require(shape, "degrees (1,2)");
  if (!shape) return;
  const double dA = std::abs(r.numerator[1] - A);
  const double dQ1 = std::abs(r.denominator[1] + (1.0 - A));
  const double dB = std::abs(r.denominator[2] - B);
  o.require(std::max({dA, dQ1, dB}) <= kTableauTol, "coefficient diff " + num(std::max({dA, dQ1, dB})));
  const double far = std::abs(r(-1e8));
  o.require(far <= 1e-6, "|R(-1e8)|=" + num(far));
}

void c7(Outcome& o) {
  // y' = y, one step from y = 1; error taken as exact minus computed.
  OdeProblem p;
  p.rhs = [](double, const State& y) { return y; };
  p.y_initial = State::Constant(1, 1.0);
  auto err = [&](double h) {
    const StepResult step = explicit_step(*cached_explicit(1), p, 0.0, p.y_initial, h);
    return std::exp(h) - step.y_end(0);
  };
  const double h = 1e-2;
  // e(h) = c h^2 + d h^3: eliminate d using h and h/10.
  const double c = (1000.0 * err(h / 10) - err(h)) / (9.0 * h * h);
  o.require(std::abs(c - kLocalErrorTarget) <= kLocalErrorTol, "c=" + num(c));
}

void c8(Outcome& o) {
  const double t1 = monotonicity_threshold(*cached_explicit(1));
  o.require(std::abs(t1 - kMonotoneTarget) <= kMonotoneTol, "n=1 threshold " + num(t1));
  const double euler = monotonicity_threshold(irk_stability(explicit_euler_tableau()));
  o.require(euler == 1.0, "Euler threshold " + num(euler));
}

void c9(Outcome& o) {
  double worst_low = 0.0;
  for (int n = 1; n <= 12; ++n) {
    const OrthogonalityResiduals r = orthogonality_report(*cached_basis(n));
    worst_low = std::max({worst_low, r.discrete, r.integral});
  }
  o.require(worst_low <= kOrthoTol, "n<=12 max residual " + num(worst_low));
  const OrthogonalityResiduals r16 = orthogonality_report(*cached_basis(16));
  o.require(std::max(r16.discrete, r16.integral) <= kOrthoTolHigh,
            "n=16 residual " + num(std::max(r16.discrete, r16.integral)));
}

void c10(Outcome& o) {
  const double gamma2 = gen_zeros(2, 6, 6).back();
  const double dg = std::abs(gamma2 - std::log((15.0 + std::sqrt(15.0)) / 7.0));
  o.require(dg <= kGammaTol, "gamma2 diff " + num(dg));
  const double dl = std::abs(cached_basis(2)->max_zero() - std::log(3.0 + std::sqrt(3.0)));
  o.require(dl <= kLambdaTol, "lambda22 diff " + num(dl));
}

void c11(Outcome& o) {
  // End row of the implicit collocation scheme: sigma_nn0 g(0) + sum_s sigma_nns g(nu_ns).
  for (int n : {2, 4, 8}) {
    const ImplicitScheme& s = *cached_implicit(n);
    double worst = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double a = j * s.lambda_max;
      const double exact = j == 0 ? 1.0 : -std::expm1(-a) / a;
      double sum = s.sigma0(n - 1);
      for (int r = 0; r < n; ++r) sum += s.sigma(n - 1, r) * std::exp(-a * s.nu(r));
      worst = std::max(worst, std::abs(sum - exact));
    }
    o.require(worst <= kQuadratureTol, "n=" + std::to_string(n) + " max diff " + num(worst));
  }
}

void c12(Outcome& o) {
  for (int n : {1, 2, 4, 8}) {
    const ExplicitScheme& s = *cached_explicit(n);
    const std::vector<double> coeffs = explicit_stability(s).numerator;
    double worst = 0.0;
    for (unsigned seed = 1; seed <= 20; ++seed) {
      std::mt19937 rng(seed);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      Eigen::MatrixXd M(3, 3);
      for (int i = 0; i < 9; ++i) M(i / 3, i % 3) = u(rng);
      Eigen::VectorXd y(3);
      for (int i = 0; i < 3; ++i) y(i) = u(rng);
      OdeProblem p;
      p.rhs = [M](double, const State& v) -> State { return M * v; };
      p.y_initial = y;
      const double h = 0.3;
      const StepResult step = explicit_step(s, p, 0.0, y, h);
      const Eigen::VectorXd expected = oracle::matrix_polynomial(coeffs, h * M, y);
      worst = std::max(worst, oracle::max_abs_diff(step.y_end, expected));
    }
    o.require(worst <= kOracleTol, "n=" + std::to_string(n) + " max diff " + num(worst));
  }
}

void c13(Outcome& o) {
  for (const char* name : {"lorenz", "vanderpol"}) {
    const OdeProblem p = lookup(name).problem;
    AdaptiveConfig config;
    config.rtol = 1e-6;
    config.atol = 1e-6;
    Trajectory t;
    try {
      t = solve_adaptive(p, 4, config);
    } catch (const std::exception& e) {
      o.require(false, std::string(name) + " run: " + e.what());
      continue;
    }
    bool bounded = t.times.back() == p.t_final;
    for (const State& y : t.states) bounded = bounded && y.allFinite() && y.cwiseAbs().maxCoeff() < 1e6;
    o.require(bounded, std::string(name) + " bounded to t_final");
    // 20 of the solver's own step times, spread over the run.
    const std::size_t steps = t.times.size() - 1;
    std::vector<double> times;
    std::vector<State> states;
    for (int k = 1; k <= 20; ++k) {
      const std::size_t i = std::max<std::size_t>(1, steps * k / 20);
      if (!times.empty() && t.times[i] <= times.back()) continue;
      times.push_back(t.times[i]);
      states.push_back(t.states[i]);
    }
    const std::vector<State> ref = reference_solve_at(p, times, 1e-11, 1e-13);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      worst = std::max(worst, (states[i] - ref[i]).cwiseAbs().maxCoeff());
    }
    o.require(worst <= kAdaptiveTol, std::string(name) + " max error " + num(worst) + " at " +
                                         std::to_string(times.size()) + " times");
  }
}

double finest_order(int n) {
  const NamedProblem d = decay_problem();
  const double exact = std::exp(-1.0);
  double previous = 0.0, order = 0.0;
  for (int k = 0; k <= 5; ++k) {
    const double h = std::ldexp(0.1, -k);
    const Trajectory t = solve_fixed(d.problem, *cached_explicit(n), h);
    const double e = std::abs(t.states.back()(0) - exact);
    if (k > 0) order = std::log2(previous / e);
    previous = e;
  }
  return order;
}

void c14(Outcome& o) {
  const double p1 = finest_order(1);
  o.require(std::abs(p1 - 1.0) <= kOrderTol, "n=1 order " + num(p1));
  // Measured once from this implementation (h = 0.1 / 2^k, k = 0..5, last pair).
  const std::vector<std::pair<int, double>> golden{{2, 1.013457}, {4, 1.011471}, {8, 1.006467}};
  for (const auto& [n, want] : golden) {
    const double got = finest_order(n);
    o.require(std::abs(got - want) <= kGoldenTol, "n=" + std::to_string(n) + " order " + num(got));
  }
}

const std::vector<std::function<void(Outcome&)>> kCriteria{c1, c2, c3,  c4,  c5,  c6,  c7,
                                                           c8, c9, c10, c11, c12, c13, c14};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("acceptance criteria");
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-14)")->check(CLI::Range(1, 14));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (int k = 1; k <= static_cast<int>(kCriteria.size()); ++k) {
    if (only != 0 && k != only) continue;
    Outcome o;
    try {
      kCriteria[k - 1](o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail.str() << ")\n";
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
