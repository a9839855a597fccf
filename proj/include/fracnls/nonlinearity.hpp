#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>

#include "fracnls/grid.hpp"
#include "fracnls/quadrature.hpp"

namespace fracnls {

/// Pair of Wirtinger derivatives (d/dz, d/dzbar) of a map C -> C.
struct Wirtinger {
  Complex dz;
  Complex dzbar;

  /// |dz| + |dzbar|, the operator norm bound of the real Jacobian.
  double magnitude() const { return std::abs(dz) + std::abs(dzbar); }
};

/// g(u) = lambda |u|^alpha u.
struct PowerNonlinearity {
  Complex lambda{1.0, 0.0};
  double alpha = 2.0;

  Complex value(Complex z) const;
  Wirtinger derivative(Complex z) const;
};

/// A C^1 map g with g(0) = 0 and |g'(u)| <= A + B |u|^alpha, given by samples
/// of g and both Wirtinger derivatives.
struct GeneralNonlinearity {
  std::function<Complex(Complex)> g;
  std::function<Complex(Complex)> dz;
  std::function<Complex(Complex)> dzbar;
  double A = 0.0;
  double B = 0.0;
  double alpha = 1.0;

  Complex value(Complex z) const { return g(z); }
  Wirtinger derivative(Complex z) const { return {dz(z), dzbar(z)}; }
};

using Nonlinearity = std::variant<PowerNonlinearity, GeneralNonlinearity>;

/// Power nonlinearity expressed through callbacks, with A = 0, B = |lambda|(1+alpha).
GeneralNonlinearity as_general(const PowerNonlinearity& nl);

/// Pointwise image g(f).
Field apply_g(const Field& f, const Nonlinearity& nl);

Wirtinger wirtinger(Complex z, const PowerNonlinearity& nl);

/// |g(z1) - g(z2) - [(z1-z2) int dz g + conj(z1-z2) int dzbar g]| along the
/// segment from z2 to z1, with the theta integral done by ThetaRule(n_theta).
double difference_identity_residual(Complex z1, Complex z2, const Nonlinearity& nl,
                                    int n_theta);

/// One side of a pointwise inequality: lhs <= constant * majorant.
struct InequalityCheck {
  double lhs = 0.0;
  double majorant = 0.0;
  double constant = 0.0;
  bool holds() const;
};

/// Both power-function inequalities for the pair (z1, z2):
///  modulus:  ||z1|^a - |z2|^a| <= |z1-z2|^a (a <= 1), a(|z1|^{a-1}+|z2|^{a-1})|z1-z2| (a >= 1)
///  phase:    ||z1|^{a-2}z1^2 - |z2|^{a-2}z2^2| <= 9|z1-z2|^a (a <= 1),
///            C(|z1|^{a-1}+|z2|^{a-1})|z1-z2| with C = max(5, a/2) (a >= 1)
struct PointwiseReport {
  double alpha = 0.0;
  InequalityCheck modulus;
  InequalityCheck phase;
  bool holds() const { return modulus.holds() && phase.holds(); }
};

PointwiseReport check_pointwise_power(Complex z1, Complex z2, double alpha);

/// Violation counts and worst lhs / (C * majorant) over random pairs. Pairs
/// cycle through three regimes: uniform in the square [-radius, radius]^2,
/// log-uniform moduli over six decades, and near-coincident points.
struct PointwiseSweep {
  double alpha = 0.0;
  long pairs = 0;
  long modulus_violations = 0;
  long phase_violations = 0;
  double modulus_worst = 0.0;
  double phase_worst = 0.0;
  double modulus_constant = 0.0;
  double phase_constant = 0.0;
};

PointwiseSweep sweep_pointwise(double alpha, long pairs, std::uint64_t seed, double radius = 4.0);

/// Exponents of the Besov difference estimate: ||g(v)-g(u)|| in B^s_{p,q},
/// ||v-u|| in B^s_{r,q}, with sigma fixed by alpha/sigma = 1/p - 1/r.
struct RemainderSpec {
  double s = 0.5;
  double p = 2.0;
  double q = 2.0;
  double r = 4.0;
  std::optional<double> sigma;  ///< checked against the relation when given
};

/// sigma from alpha/sigma = 1/p - 1/r; throws std::invalid_argument when the
/// relation has no positive finite solution or disagrees with spec.sigma.
double remainder_sigma(const RemainderSpec& spec, double alpha);

/// Lower-order remainder K(u, v): the finite-difference Besov integral of
///   A2(y) = (tau_y u - u) * int_0^1 [g'(v + th(tau_y v - v)) - g'(u + th(tau_y u - u))] d th
/// where the product is taken in the two-Wirtinger sense.
double remainder_K(const Field& u, const Field& v, const Nonlinearity& nl,
                   const RemainderSpec& spec, int theta_nodes = 64,
                   const QuadratureSpec& y_quadrature = {});

struct BesovDifferenceReport {
  double lhs = 0.0;              ///< ||g(v) - g(u)||_{B^s_{p,q}}
  double lipschitz_term = 0.0;   ///< ||v||_{L^sigma}^alpha ||v - u||_{B^s_{r,q}}
  double K_term = 0.0;           ///< K(u, v)
  double sigma = 0.0;
  double u_besov_r = 0.0;        ///< ||u||_{B^s_{r,q}}
  double diff_besov_r = 0.0;     ///< ||v - u||_{B^s_{r,q}}
  double diff_lsigma = 0.0;      ///< ||v - u||_{L^sigma}
  /// Power case, alpha <= 1: ||v||^a ||v-u||_B + ||u||_B ||u-v||_{L^sigma}^a (unit constants).
  std::optional<double> refined_holder;
  /// Power case, alpha >= 1: ||v||^a ||v-u||_B + ||u||_B (||u||^{a-1}+||v||^{a-1}) ||u-v||.
  std::optional<double> refined_lipschitz;
};

/// All Besov norms here use the finite-difference characterization with the
/// same y quadrature as K, so lhs <= (A1 integral) + K holds exactly.
BesovDifferenceReport besov_difference_report(const Field& u, const Field& v,
                                              const Nonlinearity& nl,
                                              const RemainderSpec& spec,
                                              int theta_nodes = 64,
                                              const QuadratureSpec& y_quadrature = {});

/// g = g1 + g2 with g1 compactly supported (bounded derivative) and g2 vanishing
/// on |u| <= cutoff/2.
struct SplitNonlinearity {
  GeneralNonlinearity g1;
  GeneralNonlinearity g2;
};

SplitNonlinearity split(const GeneralNonlinearity& nl, double cutoff);

}  // namespace fracnls
