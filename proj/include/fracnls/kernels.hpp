#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version in
// fracnls::kernels and a plain-loop reference in fracnls::kernels::serial with
// identical per-element arithmetic, so both produce bit-identical output.
// Reductions are not done here; callers sum element terms in index order.

#include <span>

#include "fracnls/grid.hpp"
#include "fracnls/nonlinearity.hpp"
#include "fracnls/quadrature.hpp"

namespace fracnls::kernels {

void scale(std::span<Complex> data, double factor);
void multiply_real(std::span<Complex> data, std::span<const double> weights);
/// data[i] *= exp(-i t k2[i])
void schrodinger_phase(std::span<Complex> coeffs, std::span<const double> k2, double t);
/// data[i] *= exp(-i k_i . y)
void translation_phase(std::span<Complex> coeffs, const Grid& grid,
                       std::span<const double> y);
/// out[i] = g(in[i])
void apply_nonlinearity(std::span<const Complex> in, std::span<Complex> out,
                        const Nonlinearity& nl);
/// out[i] = |in[i]|^p (p finite)
void abs_pow(std::span<const Complex> in, std::span<double> out, double p);
/// Exact flow of u_t = i lambda |u|^alpha u over time tau. Returns false if the
/// modulus blows up within tau (possible only for Im lambda < 0).
bool power_flow(std::span<Complex> u, Complex lambda, double alpha, double tau);
/// A2 pointwise: (tu - u) * avg[g'(v + th (tv - v)) - g'(u + th (tu - u))].
void remainder_integrand(std::span<const Complex> u, std::span<const Complex> tu,
                         std::span<const Complex> v, std::span<const Complex> tv,
                         const Nonlinearity& nl, const ThetaRule& rule,
                         std::span<Complex> out);

namespace serial {

void scale(std::span<Complex> data, double factor);
void multiply_real(std::span<Complex> data, std::span<const double> weights);
void schrodinger_phase(std::span<Complex> coeffs, std::span<const double> k2, double t);
void translation_phase(std::span<Complex> coeffs, const Grid& grid,
                       std::span<const double> y);
void apply_nonlinearity(std::span<const Complex> in, std::span<Complex> out,
                        const Nonlinearity& nl);
void abs_pow(std::span<const Complex> in, std::span<double> out, double p);
bool power_flow(std::span<Complex> u, Complex lambda, double alpha, double tau);
void remainder_integrand(std::span<const Complex> u, std::span<const Complex> tu,
                         std::span<const Complex> v, std::span<const Complex> tv,
                         const Nonlinearity& nl, const ThetaRule& rule,
                         std::span<Complex> out);

}  // namespace serial

/// Sum in index order.
double ordered_sum(std::span<const double> terms);

}  // namespace fracnls::kernels
