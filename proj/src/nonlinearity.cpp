#include "fracnls/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fd_integral.hpp"
#include "fracnls/function_spaces.hpp"
#include "fracnls/kernels.hpp"

namespace fracnls {
namespace {

// |z|^a z^2 / |z|^2 with the continuous extension 0 at z = 0.
Complex phase_power(Complex z, double a) {
  const double m = std::abs(z);
  if (m == 0.0) return 0.0;
  const Complex unit = z / m;
  return std::pow(m, a) * unit * unit;
}

double nonlinearity_alpha(const Nonlinearity& nl) {
  return std::visit([](const auto& g) { return g.alpha; }, nl);
}

NormSpec fd_spec(double s, double p, double q) {
  NormSpec spec;
  spec.kind = NormKind::besov_fd;
  spec.s = s;
  spec.p = p;
  spec.q = q;
  return spec;
}

}  // namespace

Complex PowerNonlinearity::value(Complex z) const {
  const double m = std::abs(z);
  if (m == 0.0) return 0.0;
  return lambda * std::pow(m, alpha) * z;
}

Wirtinger PowerNonlinearity::derivative(Complex z) const {
  const double m = std::abs(z);
  if (m == 0.0) return {0.0, 0.0};
  const double ma = std::pow(m, alpha);
  return {lambda * (1.0 + 0.5 * alpha) * ma, lambda * (0.5 * alpha) * phase_power(z, alpha)};
}

GeneralNonlinearity as_general(const PowerNonlinearity& nl) {
  GeneralNonlinearity g;
  g.g = [nl](Complex z) { return nl.value(z); };
  g.dz = [nl](Complex z) { return nl.derivative(z).dz; };
  g.dzbar = [nl](Complex z) { return nl.derivative(z).dzbar; };
  g.A = 0.0;
  g.B = std::abs(nl.lambda) * (1.0 + nl.alpha);
  g.alpha = nl.alpha;
  return g;
}

Field apply_g(const Field& f, const Nonlinearity& nl) {
  Field out(f.grid());
  kernels::apply_nonlinearity(f.values(), out.values(), nl);
  return out;
}

Wirtinger wirtinger(Complex z, const PowerNonlinearity& nl) { return nl.derivative(z); }

double difference_identity_residual(Complex z1, Complex z2, const Nonlinearity& nl,
                                    int n_theta) {
  const ThetaRule rule(n_theta);
  return std::visit(
      [&](const auto& g) {
        const Complex d = z1 - z2;
        Complex integral = 0.0;
        rule.for_each(z2, z1, [&](double theta, double w) {
          const Wirtinger dg = g.derivative(z2 + theta * d);
          integral += w * (dg.dz * d + dg.dzbar * std::conj(d));
        });
        return std::abs(g.value(z1) - g.value(z2) - integral);
      },
      nl);
}

bool InequalityCheck::holds() const {
  const double rhs = constant * majorant;
  return lhs <= rhs + 1e-12 * std::max(lhs, rhs);
}

PointwiseReport check_pointwise_power(Complex z1, Complex z2, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("pointwise inequalities need alpha > 0");
  const double m1 = std::abs(z1);
  const double m2 = std::abs(z2);
  const double dist = std::abs(z1 - z2);

  PointwiseReport r;
  r.alpha = alpha;
  r.modulus.lhs = std::abs(std::pow(m1, alpha) - std::pow(m2, alpha));
  r.phase.lhs = std::abs(phase_power(z1, alpha) - phase_power(z2, alpha));
  if (alpha <= 1.0) {
    const double bound = std::pow(dist, alpha);
    r.modulus = {r.modulus.lhs, bound, 1.0};
    r.phase = {r.phase.lhs, bound, 9.0};
  } else {
    const double bound = (std::pow(m1, alpha - 1.0) + std::pow(m2, alpha - 1.0)) * dist;
    r.modulus = {r.modulus.lhs, bound, alpha};
    r.phase = {r.phase.lhs, bound, std::max(5.0, 0.5 * alpha)};
  }
  return r;
}

PointwiseSweep sweep_pointwise(double alpha, long pairs, std::uint64_t seed, double radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto polar = [&](double m) { return std::polar(m, 2.0 * std::numbers::pi * unit(rng)); };

  PointwiseSweep out;
  out.alpha = alpha;
  out.pairs = pairs;
  for (long i = 0; i < pairs; ++i) {
    Complex z1, z2;
    switch (i % 3) {
      case 0:
        z1 = {radius * (2.0 * unit(rng) - 1.0), radius * (2.0 * unit(rng) - 1.0)};
        z2 = {radius * (2.0 * unit(rng) - 1.0), radius * (2.0 * unit(rng) - 1.0)};
        break;
      case 1:
        z1 = polar(radius * std::pow(10.0, -6.0 * unit(rng)));
        z2 = polar(radius * std::pow(10.0, -6.0 * unit(rng)));
        break;
      default:
        z1 = polar(radius * unit(rng));
        z2 = z1 + polar(1e-3 * radius * unit(rng));
        break;
    }
    const PointwiseReport r = check_pointwise_power(z1, z2, alpha);
    out.modulus_constant = r.modulus.constant;
    out.phase_constant = r.phase.constant;
    if (!r.modulus.holds()) ++out.modulus_violations;
    if (!r.phase.holds()) ++out.phase_violations;
    auto ratio = [](const InequalityCheck& c) {
      const double rhs = c.constant * c.majorant;
      return rhs > 0.0 ? c.lhs / rhs : (c.lhs > 0.0 ? INFINITY : 0.0);
    };
    out.modulus_worst = std::max(out.modulus_worst, ratio(r.modulus));
    out.phase_worst = std::max(out.phase_worst, ratio(r.phase));
  }
  return out;
}

double remainder_sigma(const RemainderSpec& spec, double alpha) {
  if (!(spec.p > 0.0) || !(spec.r > 0.0))
    throw std::invalid_argument("remainder exponents p, r must be positive");
  const double gap = 1.0 / spec.p - 1.0 / spec.r;
  if (!(gap > 0.0))
    throw std::invalid_argument("exponent relation alpha/sigma = 1/p - 1/r needs p < r");
  const double sigma = alpha / gap;
  if (spec.sigma) {
    const double residual = alpha / *spec.sigma - gap;
    if (std::abs(residual) > 1e-12)
      throw std::invalid_argument("exponent relation alpha/sigma = 1/p - 1/r violated");
  }
  return sigma;
}

double remainder_K(const Field& u, const Field& v, const Nonlinearity& nl,
                   const RemainderSpec& spec, int theta_nodes,
                   const QuadratureSpec& y_quadrature) {
  if (!(u.grid() == v.grid())) throw std::invalid_argument("fields live on different grids");
  fd_spec(spec.s, spec.p, spec.q).validate();
  remainder_sigma(spec, nonlinearity_alpha(nl));

  const Grid& grid = u.grid();
  const ThetaRule rule(theta_nodes);
  const RadialQuadrature quad = build_radial_quadrature(grid, y_quadrature);
  const Spectrum uh = forward_transform(u);
  const Spectrum vh = forward_transform(v);

  const double integral = detail::fd_integral(quad, spec.s, spec.q, [&](const RadialNode& node) {
    const std::span<const double> y(node.y.data(), static_cast<std::size_t>(grid.dim()));
    Spectrum su = uh;
    Spectrum sv = vh;
    kernels::serial::translation_phase(su.coeffs(), grid, y);
    kernels::serial::translation_phase(sv.coeffs(), grid, y);
    const Field tu = inverse_transform(su);
    const Field tv = inverse_transform(sv);
    Field a2(grid);
    kernels::serial::remainder_integrand(u.values(), tu.values(), v.values(), tv.values(), nl,
                                         rule, a2.values());
    return lebesgue_norm(a2, spec.p);
  });
  return integral == 0.0 ? 0.0 : std::pow(integral, 1.0 / spec.q);
}

BesovDifferenceReport besov_difference_report(const Field& u, const Field& v,
                                              const Nonlinearity& nl,
                                              const RemainderSpec& spec, int theta_nodes,
                                              const QuadratureSpec& y_quadrature) {
  const double alpha = nonlinearity_alpha(nl);
  BesovDifferenceReport rep;
  rep.sigma = remainder_sigma(spec, alpha);

  const NormSpec bp = fd_spec(spec.s, spec.p, spec.q);
  const NormSpec br = fd_spec(spec.s, spec.r, spec.q);
  const Field diff = v - u;

  rep.lhs = besov_norm_fd(apply_g(v, nl) - apply_g(u, nl), bp, y_quadrature);
  rep.diff_besov_r = besov_norm_fd(diff, br, y_quadrature);
  rep.u_besov_r = besov_norm_fd(u, br, y_quadrature);
  rep.diff_lsigma = lebesgue_norm(diff, rep.sigma);
  const double v_sigma = lebesgue_norm(v, rep.sigma);
  const double u_sigma = lebesgue_norm(u, rep.sigma);
  rep.lipschitz_term = std::pow(v_sigma, alpha) * rep.diff_besov_r;
  rep.K_term = remainder_K(u, v, nl, spec, theta_nodes, y_quadrature);

  if (std::holds_alternative<PowerNonlinearity>(nl)) {
    if (alpha <= 1.0)
      rep.refined_holder =
          rep.lipschitz_term + rep.u_besov_r * std::pow(rep.diff_lsigma, alpha);
    if (alpha >= 1.0)
      rep.refined_lipschitz =
          rep.lipschitz_term + rep.u_besov_r *
                                   (std::pow(u_sigma, alpha - 1.0) + std::pow(v_sigma, alpha - 1.0)) *
                                   rep.diff_lsigma;
  }
  return rep;
}

SplitNonlinearity split(const GeneralNonlinearity& nl, double cutoff) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("split cutoff must be positive");
  SplitNonlinearity out;
  if (nl.A == 0.0) {
    out.g1.g = [](Complex) { return Complex(0.0); };
    out.g1.dz = out.g1.g;
    out.g1.dzbar = out.g1.g;
    out.g1.alpha = nl.alpha;
    out.g2 = nl;
    return out;
  }

  const DyadicPartition* chi = &default_partition();
  const double c = cutoff;
  // d|z|/dz = conj(z) / (2|z|), d|z|/dzbar = z / (2|z|); chi' vanishes near 0.
  auto g1_value = [nl, chi, c](Complex z) { return nl.g(z) * chi->cutoff(std::abs(z) / c); };
  auto g1_dz = [nl, chi, c](Complex z) {
    const double m = std::abs(z);
    const Complex d = nl.dz(z) * chi->cutoff(m / c);
    if (m == 0.0) return d;
    return d + nl.g(z) * chi->cutoff_slope(m / c) / c * std::conj(z) / (2.0 * m);
  };
  auto g1_dzbar = [nl, chi, c](Complex z) {
    const double m = std::abs(z);
    const Complex d = nl.dzbar(z) * chi->cutoff(m / c);
    if (m == 0.0) return d;
    return d + nl.g(z) * chi->cutoff_slope(m / c) / c * z / (2.0 * m);
  };

  out.g1.g = g1_value;
  out.g1.dz = g1_dz;
  out.g1.dzbar = g1_dzbar;
  out.g1.alpha = nl.alpha;
  // |g| <= A|z| + B|z|^{alpha+1}/(alpha+1) and |chi'| <= 4 on the support |z| <= c.
  const double deriv_bound = nl.A + nl.B * std::pow(c, nl.alpha);
  out.g1.A = deriv_bound + 4.0 * (nl.A + nl.B * std::pow(c, nl.alpha) / (nl.alpha + 1.0));
  out.g1.B = 0.0;

  out.g2.g = [nl, g1_value](Complex z) { return nl.g(z) - g1_value(z); };
  out.g2.dz = [nl, g1_dz](Complex z) { return nl.dz(z) - g1_dz(z); };
  out.g2.dzbar = [nl, g1_dzbar](Complex z) { return nl.dzbar(z) - g1_dzbar(z); };
  out.g2.alpha = nl.alpha;
  out.g2.A = 0.0;
  // g2' vanishes for |z| <= c/2, where constants are dominated by (2|z|/c)^alpha.
  out.g2.B = nl.B + (nl.A + out.g1.A) * std::pow(2.0 / c, nl.alpha);
  return out;
}

}  // namespace fracnls
