#include "fracnls/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>

namespace fracnls {
namespace {

constexpr double kIdentityTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool near(double a, double b) { return std::abs(a - b) <= kIdentityTol * std::max(1.0, std::abs(b)); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::dimension: return "dimension";
    case Hypothesis::regularity: return "regularity";
    case Hypothesis::growth: return "growth";
    case Hypothesis::power_range: return "power_range";
    case Hypothesis::critical_linear_term: return "critical_linear_term";
  }
  return "unknown";
}

std::string to_string(Criticality c) {
  return c == Criticality::critical ? "critical" : "subcritical";
}

HypothesisViolation::HypothesisViolation(Hypothesis which, const std::string& detail)
    : std::invalid_argument(to_string(which) + ": " + detail), which_(which) {}

double critical_power(int N, double s) { return 4.0 / (N - 2.0 * s); }

Criticality validate(const ProblemParams& p) {
  if (p.N < 1 || p.N > 3)
    throw HypothesisViolation(Hypothesis::dimension, "N must be 1, 2 or 3, got " + std::to_string(p.N));
  const double s_max = std::min(1.0, p.N / 2.0);
  if (!(p.s > 0.0 && p.s < s_max))
    throw HypothesisViolation(Hypothesis::regularity,
                              "need 0 < s < " + fmt(s_max) + ", got s = " + fmt(p.s));
  if (!(p.A >= 0.0) || !(p.B >= 0.0) || !std::isfinite(p.A) || !std::isfinite(p.B))
    throw HypothesisViolation(Hypothesis::growth, "growth constants A, B must be finite and >= 0");
  if (!std::isfinite(p.lambda.real()) || !std::isfinite(p.lambda.imag()))
    throw HypothesisViolation(Hypothesis::growth, "coupling lambda must be finite");
  const double crit = critical_power(p.N, p.s);
  if (!(p.alpha > 0.0))
    throw HypothesisViolation(Hypothesis::power_range, "need alpha > 0, got " + fmt(p.alpha));
  if (near(p.alpha, crit)) {
    if (p.A != 0.0)
      throw HypothesisViolation(Hypothesis::critical_linear_term,
                                "alpha = 4/(N-2s) requires A = 0, got A = " + fmt(p.A));
    return Criticality::critical;
  }
  if (p.alpha > crit)
    throw HypothesisViolation(Hypothesis::power_range,
                              "need alpha <= 4/(N-2s) = " + fmt(crit) + ", got " + fmt(p.alpha));
  return Criticality::subcritical;
}

double admissibility_residual(double q, double r, int N) {
  const double lhs = std::isinf(q) ? 0.0 : 2.0 / q;
  return lhs - N * (0.5 - 1.0 / r);
}

bool is_admissible(double q, double r, int N) {
  if (!(q > 0.0) || !(r > 0.0)) return false;
  if (r < 2.0 - kIdentityTol) return false;
  if (N >= 3 && !(r < 2.0 * N / (N - 2.0))) return false;
  if (std::isinf(r)) return false;
  return std::abs(admissibility_residual(q, r, N)) <= kIdentityTol;
}

std::pair<double, double> canonical_pair(const ProblemParams& p) {
  validate(p);
  const double rho = p.N * (p.alpha + 2.0) / (p.N + p.s * p.alpha);
  const double gamma = 4.0 * (p.alpha + 2.0) / (p.alpha * (p.N - 2.0 * p.s));
  return {gamma, rho};
}

double sigma(const ProblemParams& p) {
  validate(p);
  return p.N * (p.alpha + 2.0) / (p.N - 2.0 * p.s);
}

double nu(double r, int N, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("nu requires s > 0");
  if (!(r >= 2.0 - kIdentityTol)) throw std::invalid_argument("nu requires r >= 2");
  if (!(r < N / s)) throw std::invalid_argument("nu requires r < N/s, got r = " + fmt(r));
  return 1.0 / (1.0 / r - s / N);
}

std::pair<double, double> critical_pair(const ProblemParams& p) {
  if (validate(p) != Criticality::critical)
    throw std::invalid_argument("critical pair requested for subcritical parameters");
  const double q0 = 2.0 * p.alpha * (p.alpha + 2.0) / (4.0 - (p.N - 2.0) * p.alpha);
  const double r0 = p.N * (p.alpha + 2.0) / (p.N + p.s * (p.alpha + 2.0));
  return {q0, r0};
}

double dual(double e) {
  if (!(e >= 1.0)) throw std::invalid_argument("conjugate exponent needs e >= 1");
  if (e == 1.0) return kInf;
  if (std::isinf(e)) return 1.0;
  return e / (e - 1.0);
}

double time_gain_exponent(const ProblemParams& p) {
  return (4.0 - p.alpha * (p.N - 2.0 * p.s)) / 4.0;
}

ExponentSet exponent_set(const ProblemParams& p) {
  ExponentSet e;
  e.criticality = validate(p);
  std::tie(e.gamma, e.rho) = canonical_pair(p);
  e.sigma = sigma(p);
  e.time_gain = e.criticality == Criticality::critical ? 0.0 : time_gain_exponent(p);
  if (e.criticality == Criticality::critical) {
    const auto [q0, r0] = critical_pair(p);
    e.q0 = q0;
    e.r0 = r0;
  }
  return e;
}

}  // namespace fracnls
