#include "fracnls/function_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fd_integral.hpp"
#include "fracnls/kernels.hpp"

namespace fracnls {
namespace {

// C-infinity step from 0 (t <= 0) to 1 (t >= 1).
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

std::vector<double> wavenumber_moduli(const Grid& grid) {
  const auto k2 = grid.k_squared();
  std::vector<double> k(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) k[i] = std::sqrt(k2[i]);
  return k;
}

double block_lp_norm(const Spectrum& coeffs, const std::vector<double>& weights, double p) {
  Spectrum block = coeffs;
  kernels::multiply_real(block.coeffs(), weights);
  return lebesgue_norm(inverse_transform(block), p);
}

double lq_sum(const std::vector<double>& terms, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  std::vector<double> powered(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) powered[i] = std::pow(terms[i], q);
  const double sum = kernels::ordered_sum(powered);
  return sum == 0.0 ? 0.0 : std::pow(sum, 1.0 / q);
}

}  // namespace

DyadicPartition::DyadicPartition(double ratio) : ratio_(ratio) {
  if (!(ratio > 1.0)) throw std::invalid_argument("partition ratio must exceed 1");
}

double DyadicPartition::cutoff(double x) const { return 1.0 - smooth_step(2.0 * x - 1.0); }

double DyadicPartition::cutoff_slope(double x) const {
  if (x <= 0.5 || x >= 1.0) return 0.0;
  const double t = 2.0 * x - 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  const double ds = a * b * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t))) / ((a + b) * (a + b));
  return -2.0 * ds;
}

double DyadicPartition::bump(double x) const { return cutoff(x / ratio_) - cutoff(x); }

double DyadicPartition::block_weight(int j, double k) const { return bump(std::ldexp(k, -j)); }

double DyadicPartition::low_weight(int jmin, double k) const {
  return cutoff(std::ldexp(k, -jmin));
}

const DyadicPartition& default_partition() {
  static const DyadicPartition partition;
  return partition;
}

Field DyadicBlocks::reconstruct() const {
  if (blocks.empty()) throw std::logic_error("no blocks to reconstruct from");
  Field sum = low_block ? *low_block : Field(blocks.front().grid());
  for (const auto& b : blocks) sum += b;
  return sum;
}

Band default_band(const Grid& grid, bool homogeneous) {
  Band band;
  band.jmax = static_cast<int>(std::ceil(std::log2(grid.max_wavenumber()) - 1e-12));
  band.jmin = homogeneous ? static_cast<int>(std::floor(std::log2(grid.fundamental()) + 1e-12))
                          : 1;
  band.jmin = std::min(band.jmin, band.jmax - 1);
  return band;
}

namespace {

void check_band(const Grid& grid, int jmin, int jmax) {
  if (jmin >= jmax) throw std::invalid_argument("dyadic band needs jmin < jmax");
  if (std::ldexp(1.0, jmax) < grid.max_wavenumber() * (1.0 - 1e-12))
    throw std::invalid_argument(
        "dyadic band does not reach the grid's Nyquist range: 2^jmax < max |k|");
}

}  // namespace

DyadicBlocks decompose(const Field& f, int jmin, int jmax, const DyadicPartition& partition) {
  check_band(f.grid(), jmin, jmax);
  const Spectrum coeffs = forward_transform(f);
  const auto k = wavenumber_moduli(f.grid());
  std::vector<double> weights(k.size());

  DyadicBlocks out;
  out.jmin = jmin;
  out.jmax = jmax;
  for (int j = jmin; j <= jmax; ++j) {
    for (std::size_t i = 0; i < k.size(); ++i) weights[i] = partition.block_weight(j, k[i]);
    Spectrum block = coeffs;
    kernels::multiply_real(block.coeffs(), weights);
    out.blocks.push_back(inverse_transform(block));
  }
  for (std::size_t i = 0; i < k.size(); ++i) weights[i] = partition.low_weight(jmin, k[i]);
  Spectrum low = coeffs;
  kernels::multiply_real(low.coeffs(), weights);
  out.low_block = inverse_transform(low);
  return out;
}

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::sobolev_multiplier: return "sobolev_multiplier";
    case NormKind::besov_lp: return "besov_lp";
    case NormKind::besov_fd: return "besov_fd";
    case NormKind::lebesgue: return "lebesgue";
  }
  return "unknown";
}

NormKind norm_kind_from_string(const std::string& name) {
  if (name == "sobolev_multiplier") return NormKind::sobolev_multiplier;
  if (name == "besov_lp") return NormKind::besov_lp;
  if (name == "besov_fd") return NormKind::besov_fd;
  if (name == "lebesgue") return NormKind::lebesgue;
  throw std::invalid_argument("unknown norm kind: " + name);
}

void NormSpec::validate() const {
  if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("norm exponents must be positive");
  switch (kind) {
    case NormKind::sobolev_multiplier:
      if (p != 2.0 || q != 2.0)
        throw std::invalid_argument("multiplier Sobolev norms require p = q = 2");
      break;
    case NormKind::besov_fd:
      if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("finite-difference Besov norm requires 0 < s < 1");
      if (std::isinf(q))
        throw std::invalid_argument("finite-difference Besov norm requires q < infinity");
      break;
    case NormKind::besov_lp:
    case NormKind::lebesgue:
      break;
  }
}

double besov_norm_lp(const Field& f, const NormSpec& spec, const DyadicPartition& partition) {
  if (spec.kind != NormKind::besov_lp)
    throw std::invalid_argument("besov_norm_lp called with a non-LP norm spec");
  spec.validate();
  const Band band = default_band(f.grid(), spec.homogeneous);
  check_band(f.grid(), band.jmin, band.jmax);

  const Spectrum coeffs = forward_transform(f);
  const auto k = wavenumber_moduli(f.grid());
  std::vector<double> weights(k.size());
  std::vector<double> terms;
  if (!spec.homogeneous) {
    for (std::size_t i = 0; i < k.size(); ++i) weights[i] = partition.low_weight(band.jmin, k[i]);
    terms.push_back(block_lp_norm(coeffs, weights, spec.p));
  }
  for (int j = band.jmin; j <= band.jmax; ++j) {
    for (std::size_t i = 0; i < k.size(); ++i) weights[i] = partition.block_weight(j, k[i]);
    terms.push_back(std::pow(2.0, j * spec.s) *
                    block_lp_norm(coeffs, weights, spec.p));
  }
  return lq_sum(terms, spec.q);
}

FdNormResult besov_norm_fd_report(const Field& f, const NormSpec& spec,
                                  const QuadratureSpec& y_quadrature) {
  if (spec.kind != NormKind::besov_fd)
    throw std::invalid_argument("besov_norm_fd called with a non-finite-difference spec");
  spec.validate();
  const RadialQuadrature quad = build_radial_quadrature(f.grid(), y_quadrature);
  const Grid& grid = f.grid();
  const Spectrum coeffs = forward_transform(f);

  const double integral = detail::fd_integral(quad, spec.s, spec.q, [&](const RadialNode& node) {
    Spectrum shifted = coeffs;
    kernels::serial::translation_phase(
        shifted.coeffs(), grid,
        std::span<const double>(node.y.data(), static_cast<std::size_t>(grid.dim())));
    Field diff = inverse_transform(shifted);
    diff -= f;
    return lebesgue_norm(diff, spec.p);
  });

  const double sq = spec.s * spec.q;
  FdNormResult out;
  out.value = integral == 0.0 ? 0.0 : std::pow(integral, 1.0 / spec.q);
  out.tail_bound = quad.sphere_measure * std::pow(2.0 * lebesgue_norm(f, spec.p), spec.q) *
                   std::pow(quad.outer_radius, -sq) / sq;
  return out;
}

double besov_norm_fd(const Field& f, const NormSpec& spec, const QuadratureSpec& y_quadrature) {
  return besov_norm_fd_report(f, spec, y_quadrature).value;
}

double sobolev_norm(const Field& f, double s, bool homogeneous) {
  const Spectrum coeffs = forward_transform(f);
  const auto k2 = f.grid().k_squared();
  std::vector<double> terms(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    double w2;
    if (homogeneous)
      w2 = s == 0.0 ? 1.0 : (k2[i] == 0.0 ? 0.0 : std::pow(k2[i], s));
    else
      w2 = std::pow(1.0 + k2[i], s);
    terms[i] = w2 * std::norm(coeffs[i]);
  }
  return std::sqrt(f.grid().volume() * kernels::ordered_sum(terms));
}

double norm(const Field& f, const NormSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case NormKind::sobolev_multiplier: return sobolev_norm(f, spec.s, spec.homogeneous);
    case NormKind::besov_lp: return besov_norm_lp(f, spec);
    case NormKind::besov_fd: return besov_norm_fd(f, spec);
    case NormKind::lebesgue: return lebesgue_norm(f, spec.p);
  }
  throw std::logic_error("unhandled norm kind");
}

double time_norm(const std::vector<double>& values, double dt, double q) {
  if (values.empty()) throw std::invalid_argument("time norm of an empty sequence");
  if (!(q > 0.0)) throw std::invalid_argument("time exponent must be positive");
  if (std::isinf(q)) return *std::max_element(values.begin(), values.end());
  if (values.size() == 1) return 0.0;
  std::vector<double> terms(values.size());
  for (std::size_t m = 0; m < values.size(); ++m) {
    const double w = (m == 0 || m + 1 == values.size()) ? 0.5 : 1.0;
    terms[m] = w * std::pow(values[m], q);
  }
  const double sum = dt * kernels::ordered_sum(terms);
  return sum == 0.0 ? 0.0 : std::pow(sum, 1.0 / q);
}

double spacetime_norm(const Trajectory& traj, double q_time, const NormSpec& spatial) {
  if (traj.slices.empty()) throw std::invalid_argument("spacetime norm of an empty trajectory");
  spatial.validate();
  std::vector<double> values(traj.slices.size());
  for (std::size_t m = 0; m < values.size(); ++m) values[m] = norm(traj.slices[m], spatial);
  return time_norm(values, traj.time_grid.dt(), q_time);
}

std::pair<double, double> lp_equivalence_bracket(double s, const DyadicPartition& partition) {
  // W(2k) = W(k) when the ratio is 2, so one octave suffices; other ratios are
  // sampled over a few octaves.
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  const int samples = 4096;
  for (int i = 0; i < samples; ++i) {
    const double k = std::pow(2.0, 4.0 * i / samples);
    double w = 0.0;
    for (int j = -4; j <= 8; ++j) {
      const double b = partition.block_weight(j, k);
      w += std::pow(4.0, j * s) * b * b;
    }
    const double ratio = std::sqrt(w) / std::pow(k, s);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo, hi};
}

}  // namespace fracnls
