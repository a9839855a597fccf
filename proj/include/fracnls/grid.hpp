#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace fracnls {

using Complex = std::complex<double>;

/// Uniform periodic lattice on the torus [-L/2, L/2)^N with M points per axis.
///
/// Samples are stored row-major (axis 0 slowest). Wavenumbers along an axis are
/// k_j = 2*pi*j/L with j in [-M/2, M/2), in FFT order.
class Grid {
 public:
  Grid(int dim, int points, double period);

  int dim() const { return dim_; }
  int points() const { return points_; }
  double period() const { return period_; }
  double spacing() const { return period_ / points_; }
  std::size_t size() const { return size_; }

  /// Coordinate of sample i along one axis.
  double coordinate(int i) const { return -0.5 * period_ + i * spacing(); }
  /// Wavenumber of FFT index i along one axis.
  double wavenumber(int i) const;
  std::array<int, 3> unflatten(std::size_t idx) const;

  /// |k|^2 per flattened Fourier index.
  std::span<const double> k_squared() const { return *k2_; }
  double fundamental() const;
  double max_wavenumber() const;
  double volume() const;
  double cell_volume() const;

  bool operator==(const Grid& other) const {
    return dim_ == other.dim_ && points_ == other.points_ && period_ == other.period_;
  }

 private:
  int dim_;
  int points_;
  double period_;
  std::size_t size_;
  std::shared_ptr<const std::vector<double>> k2_;
};

/// Complex samples on a grid.
class Field {
 public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<Complex> values);

  /// Evaluates fn at every lattice point; fn receives the point's coordinates.
  static Field sample(const Grid& grid,
                      const std::function<Complex(std::span<const double>)>& fn);

  const Grid& grid() const { return grid_; }
  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  Complex& operator[](std::size_t i) { return values_[i]; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(Complex c);

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Complex c, Field a);

/// Fourier-series coefficients of a field: f(x_j) = sum_k c_k exp(i k (x_j - x_0)).
/// With this normalization ||f||_{L^2}^2 = L^N sum |c_k|^2 holds exactly.
class Spectrum {
 public:
  explicit Spectrum(Grid grid);
  Spectrum(Grid grid, std::vector<Complex> coeffs);

  const Grid& grid() const { return grid_; }
  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  Complex& operator[](std::size_t i) { return coeffs_[i]; }
  const Complex& operator[](std::size_t i) const { return coeffs_[i]; }

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

Spectrum forward_transform(const Field& f);
Field inverse_transform(const Spectrum& c);

/// Applies exp(-i t |k|^2), the solution operator of i u_t + Laplacian u = 0.
Field free_propagate(const Field& f, double t);
Spectrum free_propagate(const Spectrum& c, double t);

/// tau_y f(x) = f(x - y), realized through the phase exp(-i k.y) so that
/// arbitrary (off-lattice) shifts are exact for band-limited fields.
Field translate(const Field& f, std::span<const double> y);

/// (h^N sum |f_i|^p)^{1/p}; p = infinity gives max |f_i|. For p < 1 the same
/// formula yields a quasi-norm.
double lebesgue_norm(const Field& f, double p);

/// Zeroes modes with |k_axis| > (2/3) k_max on any axis.
void dealias_two_thirds(Spectrum& c);

}  // namespace fracnls
