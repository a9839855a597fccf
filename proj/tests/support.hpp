#pragma once

#include <cmath>
#include <random>

#include "fracnls/grid.hpp"

namespace fracnls::testing {

/// Independent complex normal coefficients on every nonzero mode with
/// |k| <= fraction * k_max.
inline Field random_band_limited(const Grid& grid, std::mt19937_64& rng, double fraction) {
  std::normal_distribution<double> normal;
  Spectrum c(grid);
  const double kc = fraction * grid.max_wavenumber();
  const auto k2 = grid.k_squared();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (k2[i] > 0.0 && k2[i] <= kc * kc) c[i] = {normal(rng), normal(rng)};
  return inverse_transform(c);
}

/// amplitude * exp(-|x - center|^2 / width^2) * exp(i wavenumber x_0)
inline Field gaussian(const Grid& grid, double amplitude = 1.0, double width = 1.0,
                      double center = 0.0, double wavenumber = 0.0) {
  return Field::sample(grid, [=](std::span<const double> x) {
    double r2 = 0.0;
    for (double xi : x) r2 += (xi - center) * (xi - center);
    return amplitude * std::exp(-r2 / (width * width)) * std::polar(1.0, wavenumber * x[0]);
  });
}

inline Field plane_wave(const Grid& grid, Complex amplitude, double k0) {
  return Field::sample(grid, [=](std::span<const double> x) {
    return amplitude * std::polar(1.0, k0 * x[0]);
  });
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline double distance(const Field& a, const Field& b) { return lebesgue_norm(a - b, 2.0); }

}  // namespace fracnls::testing
