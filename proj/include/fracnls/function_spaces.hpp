#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracnls/grid.hpp"
#include "fracnls/quadrature.hpp"
#include "fracnls/trajectory.hpp"

namespace fracnls {

/// Smooth radial Littlewood-Paley partition.
///
/// chi(x) = 1 on [0, 1/2], 0 on [1, inf) with a C-infinity transition, and
/// psi(x) = chi(x / ratio) - chi(x). Block j uses psi(|k| / 2^j). With the
/// default ratio of 2 the blocks telescope, so sum_{j=a}^{b} psi_j + chi(|k|/2^a)
/// equals 1 wherever |k| <= 2^b.
class DyadicPartition {
 public:
  explicit DyadicPartition(double ratio = 2.0);

  double ratio() const { return ratio_; }
  double cutoff(double x) const;
  double cutoff_slope(double x) const;  ///< d chi / dx
  double bump(double x) const;
  double block_weight(int j, double k) const;
  double low_weight(int jmin, double k) const;

 private:
  double ratio_;
};

const DyadicPartition& default_partition();

struct DyadicBlocks {
  int jmin = 0;
  int jmax = 0;
  std::vector<Field> blocks;       ///< blocks[j - jmin]
  std::optional<Field> low_block;  ///< frequencies |k| < 2^jmin

  Field reconstruct() const;
};

struct Band {
  int jmin = 0;
  int jmax = 0;
};

/// Smallest band covering every lattice frequency. Homogeneous: the low block
/// holds only k = 0. Inhomogeneous: jmin = 1, low block covers |k| < 2.
Band default_band(const Grid& grid, bool homogeneous);

/// Throws std::invalid_argument if jmin >= jmax or if 2^jmax is below the
/// largest lattice frequency (the blocks would not cover the grid).
DyadicBlocks decompose(const Field& f, int jmin, int jmax,
                       const DyadicPartition& partition = default_partition());

enum class NormKind { sobolev_multiplier, besov_lp, besov_fd, lebesgue };

std::string to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& name);

struct NormSpec {
  NormKind kind = NormKind::sobolev_multiplier;
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;
  bool homogeneous = true;

  /// Throws std::invalid_argument if the spec violates its kind's constraints.
  void validate() const;
  /// p < 1 or q < 1: reported values are quasi-norms.
  bool is_quasi_norm() const { return p < 1.0 || q < 1.0; }
};

/// (sum_j (2^{js} ||Delta_j f||_{L^p})^q)^{1/q}, plus the low block with weight 1
/// for inhomogeneous specs.
double besov_norm_lp(const Field& f, const NormSpec& spec,
                     const DyadicPartition& partition = default_partition());

struct FdNormResult {
  double value = 0.0;
  /// Upper bound on the omitted |y| > L/2 contribution to the integral
  /// (before the 1/q power), from ||tau_y f - f||_p <= 2 ||f||_p.
  double tail_bound = 0.0;
};

/// (int ||tau_y f - f||_{L^p}^q |y|^{-N-sq} dy)^{1/q} over |y| <= L/2, with a
/// power-law extrapolation for |y| below the innermost shell.
FdNormResult besov_norm_fd_report(const Field& f, const NormSpec& spec,
                                  const QuadratureSpec& y_quadrature = {});
double besov_norm_fd(const Field& f, const NormSpec& spec,
                     const QuadratureSpec& y_quadrature = {});

/// Multiplier norm with |k|^s (homogeneous) or (1 + |k|^2)^{s/2}.
double sobolev_norm(const Field& f, double s, bool homogeneous);

/// Dispatches on spec.kind; besov_fd uses the default quadrature.
double norm(const Field& f, const NormSpec& spec);

/// Trapezoid time norm (dt sum_m w_m a_m^q)^{1/q} of per-slice values; q = inf
/// gives the maximum.
double time_norm(const std::vector<double>& values, double dt, double q);

double spacetime_norm(const Trajectory& traj, double q_time, const NormSpec& spatial);

/// Range [c1, c2] of ||f||_{B^s_{2,2}} / ||f||_{H^s} (homogeneous) over all
/// fields, i.e. the extremes of sqrt(sum_j 4^{js} psi_j(k)^2) / |k|^s.
std::pair<double, double> lp_equivalence_bracket(
    double s, const DyadicPartition& partition = default_partition());

}  // namespace fracnls
