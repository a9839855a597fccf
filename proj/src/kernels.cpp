#include "fracnls/kernels.hpp"

#include <cmath>
#include <cstdint>

namespace fracnls::kernels {
namespace {

template <bool Parallel, typename Body>
void for_each_index(std::size_t n, Body&& body) {
  const auto count = static_cast<std::int64_t>(n);
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
  } else {
    for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
  }
}

inline Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

template <bool Parallel>
void scale_impl(std::span<Complex> data, double factor) {
  for_each_index<Parallel>(data.size(), [&](std::size_t i) { data[i] *= factor; });
}

template <bool Parallel>
void multiply_real_impl(std::span<Complex> data, std::span<const double> weights) {
  for_each_index<Parallel>(data.size(), [&](std::size_t i) { data[i] *= weights[i]; });
}

template <bool Parallel>
void schrodinger_phase_impl(std::span<Complex> coeffs, std::span<const double> k2,
                            double t) {
  for_each_index<Parallel>(coeffs.size(), [&](std::size_t i) {
    coeffs[i] *= unit_phase(-t * k2[i]);
  });
}

template <bool Parallel>
void translation_phase_impl(std::span<Complex> coeffs, const Grid& grid,
                            std::span<const double> y) {
  const int dim = grid.dim();
  for_each_index<Parallel>(coeffs.size(), [&](std::size_t i) {
    const auto idx = grid.unflatten(i);
    double ky = 0.0;
    for (int a = 0; a < dim; ++a) ky += grid.wavenumber(idx[a]) * y[a];
    coeffs[i] *= unit_phase(-ky);
  });
}

template <bool Parallel>
void apply_nonlinearity_impl(std::span<const Complex> in, std::span<Complex> out,
                             const Nonlinearity& nl) {
  std::visit(
      [&](const auto& g) {
        for_each_index<Parallel>(in.size(), [&](std::size_t i) { out[i] = g.value(in[i]); });
      },
      nl);
}

template <bool Parallel>
void abs_pow_impl(std::span<const Complex> in, std::span<double> out, double p) {
  if (p == 2.0) {
    for_each_index<Parallel>(in.size(), [&](std::size_t i) { out[i] = std::norm(in[i]); });
  } else {
    for_each_index<Parallel>(in.size(),
                             [&](std::size_t i) { out[i] = std::pow(std::abs(in[i]), p); });
  }
}

inline bool power_flow_point(Complex& u, Complex lambda, double alpha, double tau) {
  const double modulus = std::abs(u);
  if (modulus == 0.0) return true;
  const double m_alpha = std::pow(modulus, alpha);
  const double growth = alpha * lambda.imag() * m_alpha;
  const double x = growth * tau;
  const double base = 1.0 + x;
  if (!(base > 0.0)) return false;
  // int_0^tau |u(t)|^alpha dt = m_alpha * tau * log1p(x) / x
  const double log_ratio =
      std::abs(x) < 1e-8 ? 1.0 - x / 2.0 + x * x / 3.0 : std::log1p(x) / x;
  const double phase = lambda.real() * m_alpha * tau * log_ratio;
  const double factor = lambda.imag() == 0.0 ? 1.0 : std::pow(base, -1.0 / alpha);
  u *= factor * unit_phase(phase);
  return std::isfinite(u.real()) && std::isfinite(u.imag());
}

template <bool Parallel>
bool power_flow_impl(std::span<Complex> u, Complex lambda, double alpha, double tau) {
  const auto count = static_cast<std::int64_t>(u.size());
  int failures = 0;
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static) reduction(+ : failures)
    for (std::int64_t i = 0; i < count; ++i)
      failures += power_flow_point(u[i], lambda, alpha, tau) ? 0 : 1;
  } else {
    for (std::int64_t i = 0; i < count; ++i)
      failures += power_flow_point(u[i], lambda, alpha, tau) ? 0 : 1;
  }
  return failures == 0;
}

template <typename G>
Wirtinger theta_average(const G& g, Complex a, Complex b, const ThetaRule& rule) {
  Wirtinger acc{};
  const Complex d = b - a;
  rule.for_each(a, b, [&](double theta, double w) {
    const Wirtinger dg = g.derivative(a + theta * d);
    acc.dz += w * dg.dz;
    acc.dzbar += w * dg.dzbar;
  });
  return acc;
}

template <bool Parallel>
void remainder_integrand_impl(std::span<const Complex> u, std::span<const Complex> tu,
                              std::span<const Complex> v, std::span<const Complex> tv,
                              const Nonlinearity& nl, const ThetaRule& rule,
                              std::span<Complex> out) {
  std::visit(
      [&](const auto& g) {
        for_each_index<Parallel>(u.size(), [&](std::size_t i) {
          const Complex du = tu[i] - u[i];
          const Wirtinger along_v = theta_average(g, v[i], tv[i], rule);
          const Wirtinger along_u = theta_average(g, u[i], tu[i], rule);
          out[i] = du * (along_v.dz - along_u.dz) +
                   std::conj(du) * (along_v.dzbar - along_u.dzbar);
        });
      },
      nl);
}

}  // namespace

void scale(std::span<Complex> data, double factor) { scale_impl<true>(data, factor); }
void multiply_real(std::span<Complex> data, std::span<const double> weights) {
  multiply_real_impl<true>(data, weights);
}
void schrodinger_phase(std::span<Complex> coeffs, std::span<const double> k2, double t) {
  schrodinger_phase_impl<true>(coeffs, k2, t);
}
void translation_phase(std::span<Complex> coeffs, const Grid& grid,
                       std::span<const double> y) {
  translation_phase_impl<true>(coeffs, grid, y);
}
void apply_nonlinearity(std::span<const Complex> in, std::span<Complex> out,
                        const Nonlinearity& nl) {
  apply_nonlinearity_impl<true>(in, out, nl);
}
void abs_pow(std::span<const Complex> in, std::span<double> out, double p) {
  abs_pow_impl<true>(in, out, p);
}
bool power_flow(std::span<Complex> u, Complex lambda, double alpha, double tau) {
  return power_flow_impl<true>(u, lambda, alpha, tau);
}
void remainder_integrand(std::span<const Complex> u, std::span<const Complex> tu,
                         std::span<const Complex> v, std::span<const Complex> tv,
                         const Nonlinearity& nl, const ThetaRule& rule,
                         std::span<Complex> out) {
  remainder_integrand_impl<true>(u, tu, v, tv, nl, rule, out);
}

namespace serial {

void scale(std::span<Complex> data, double factor) { scale_impl<false>(data, factor); }
void multiply_real(std::span<Complex> data, std::span<const double> weights) {
  multiply_real_impl<false>(data, weights);
}
void schrodinger_phase(std::span<Complex> coeffs, std::span<const double> k2, double t) {
  schrodinger_phase_impl<false>(coeffs, k2, t);
}
void translation_phase(std::span<Complex> coeffs, const Grid& grid,
                       std::span<const double> y) {
  translation_phase_impl<false>(coeffs, grid, y);
}
void apply_nonlinearity(std::span<const Complex> in, std::span<Complex> out,
                        const Nonlinearity& nl) {
  apply_nonlinearity_impl<false>(in, out, nl);
}
void abs_pow(std::span<const Complex> in, std::span<double> out, double p) {
  abs_pow_impl<false>(in, out, p);
}
bool power_flow(std::span<Complex> u, Complex lambda, double alpha, double tau) {
  return power_flow_impl<false>(u, lambda, alpha, tau);
}
void remainder_integrand(std::span<const Complex> u, std::span<const Complex> tu,
                         std::span<const Complex> v, std::span<const Complex> tv,
                         const Nonlinearity& nl, const ThetaRule& rule,
                         std::span<Complex> out) {
  remainder_integrand_impl<false>(u, tu, v, tv, nl, rule, out);
}

}  // namespace serial

double ordered_sum(std::span<const double> terms) {
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

}  // namespace fracnls::kernels
