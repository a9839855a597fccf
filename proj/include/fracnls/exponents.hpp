#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace fracnls {

enum class Criticality { subcritical, critical };

/// Hypotheses a parameter set can violate.
enum class Hypothesis {
  dimension,             ///< N in {1, 2, 3}
  regularity,            ///< 0 < s < min(1, N/2)
  growth,                ///< A, B >= 0 and finite
  power_range,           ///< 0 < alpha <= 4 / (N - 2s)
  critical_linear_term,  ///< A = 0 when alpha = 4 / (N - 2s)
};

std::string to_string(Hypothesis h);
std::string to_string(Criticality c);

class HypothesisViolation : public std::invalid_argument {
 public:
  HypothesisViolation(Hypothesis which, const std::string& detail);
  Hypothesis which() const { return which_; }

 private:
  Hypothesis which_;
};

struct ProblemParams {
  int N = 1;
  double s = 0.5;
  double alpha = 2.0;
  std::complex<double> lambda{1.0, 0.0};
  double A = 0.0;
  double B = 0.0;
};

/// 4 / (N - 2s).
double critical_power(int N, double s);

/// Throws HypothesisViolation naming the first violated hypothesis.
Criticality validate(const ProblemParams& params);

/// 2 <= r (< 2N/(N-2) for N >= 3) and 2/q = N(1/2 - 1/r) to 1e-12. q may be infinite.
bool is_admissible(double q, double r, int N);

/// Residual 2/q - N(1/2 - 1/r).
double admissibility_residual(double q, double r, int N);

/// (gamma, rho) with rho = N(alpha+2)/(N + s alpha), gamma = 4(alpha+2)/(alpha(N - 2s)).
std::pair<double, double> canonical_pair(const ProblemParams& params);

/// N(alpha+2)/(N - 2s).
double sigma(const ProblemParams& params);

/// 1/nu = 1/r - s/N; requires 2 <= r < N/s.
double nu(double r, int N, double s);

/// (q0, r0) of the critical case; throws std::invalid_argument on subcritical params.
std::pair<double, double> critical_pair(const ProblemParams& params);

/// Hoelder conjugate: 1/e' = 1 - 1/e (1' = inf, inf' = 1).
double dual(double e);

/// (4 - alpha(N - 2s)) / 4, the power of T gained in the subcritical case.
double time_gain_exponent(const ProblemParams& params);

struct ExponentSet {
  double gamma = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
  std::optional<double> q0;
  std::optional<double> r0;
  double time_gain = 0.0;
  Criticality criticality = Criticality::subcritical;
};

/// Validates params and computes every derived exponent.
ExponentSet exponent_set(const ProblemParams& params);

}  // namespace fracnls
