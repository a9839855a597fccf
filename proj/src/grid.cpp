#include "fracnls/grid.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"
#include "fracnls/kernels.hpp"

namespace fracnls {

Grid::Grid(int dim, int points, double period) : dim_(dim), points_(points), period_(period) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (points < 8 || (points & (points - 1)) != 0)
    throw std::invalid_argument("grid points per axis must be a power of two >= 8, got " +
                                std::to_string(points));
  if (!(period > 0.0) || !std::isfinite(period))
    throw std::invalid_argument("grid period must be positive and finite");

  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(points);

  auto k2 = std::make_shared<std::vector<double>>(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    const auto idx = unflatten(i);
    double sum = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double k = wavenumber(idx[a]);
      sum += k * k;
    }
    (*k2)[i] = sum;
  }
  k2_ = std::move(k2);
}

double Grid::wavenumber(int i) const {
  const int j = i < points_ / 2 ? i : i - points_;
  return 2.0 * std::numbers::pi * j / period_;
}

std::array<int, 3> Grid::unflatten(std::size_t idx) const {
  std::array<int, 3> out{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    out[a] = static_cast<int>(idx % points_);
    idx /= points_;
  }
  return out;
}

double Grid::fundamental() const { return 2.0 * std::numbers::pi / period_; }

double Grid::max_wavenumber() const {
  return fundamental() * (points_ / 2) * std::sqrt(static_cast<double>(dim_));
}

double Grid::volume() const { return std::pow(period_, dim_); }

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

// ---------------------------------------------------------------------------

Field::Field(Grid grid) : grid_(std::move(grid)), values_(grid_.size()) {}

Field::Field(Grid grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("field length does not match grid size");
  if (!all_finite()) throw std::invalid_argument("field contains non-finite samples");
}

Field Field::sample(const Grid& grid,
                    const std::function<Complex(std::span<const double>)>& fn) {
  Field f(grid);
  std::array<double, 3> x{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    for (int a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(idx[a]);
    f.values_[i] = fn(std::span<const double>(x.data(), grid.dim()));
  }
  if (!f.all_finite()) throw std::invalid_argument("sampled field is not finite");
  return f;
}

bool Field::all_finite() const {
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

Field& Field::operator+=(const Field& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("fields live on different grids");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("fields live on different grids");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(Complex c) {
  for (auto& v : values_) v *= c;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Complex c, Field a) { return a *= c; }

// ---------------------------------------------------------------------------

Spectrum::Spectrum(Grid grid) : grid_(std::move(grid)), coeffs_(grid_.size()) {}

Spectrum::Spectrum(Grid grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size())
    throw std::invalid_argument("spectrum length does not match grid size");
}

Spectrum forward_transform(const Field& f) {
  Spectrum c(f.grid());
  detail::dft_forward(f.grid(), f.values().data(), c.coeffs().data());
  kernels::scale(c.coeffs(), 1.0 / static_cast<double>(f.size()));
  return c;
}

Field inverse_transform(const Spectrum& c) {
  Field f(c.grid());
  detail::dft_backward(c.grid(), c.coeffs().data(), f.values().data());
  return f;
}

Spectrum free_propagate(const Spectrum& c, double t) {
  Spectrum out = c;
  if (t != 0.0) kernels::schrodinger_phase(out.coeffs(), c.grid().k_squared(), t);
  return out;
}

Field free_propagate(const Field& f, double t) {
  if (t == 0.0) return f;
  return inverse_transform(free_propagate(forward_transform(f), t));
}

Field translate(const Field& f, std::span<const double> y) {
  if (static_cast<int>(y.size()) != f.grid().dim())
    throw std::invalid_argument("translation vector has wrong dimension");
  bool zero = true;
  for (double c : y) {
    if (!std::isfinite(c)) throw std::invalid_argument("translation vector is not finite");
    zero = zero && c == 0.0;
  }
  if (zero) return f;
  Spectrum c = forward_transform(f);
  kernels::translation_phase(c.coeffs(), f.grid(), y);
  return inverse_transform(c);
}

double lebesgue_norm(const Field& f, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("Lebesgue exponent must be positive");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> terms(f.size());
  kernels::abs_pow(f.values(), terms, p);
  const double sum = kernels::ordered_sum(terms) * f.grid().cell_volume();
  return sum == 0.0 ? 0.0 : std::pow(sum, 1.0 / p);
}

void dealias_two_thirds(Spectrum& c) {
  const Grid& g = c.grid();
  const double cutoff = (2.0 / 3.0) * g.fundamental() * (g.points() / 2);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto idx = g.unflatten(i);
    for (int a = 0; a < g.dim(); ++a) {
      if (std::abs(g.wavenumber(idx[a])) > cutoff) {
        c[i] = 0.0;
        break;
      }
    }
  }
}

}  // namespace fracnls
