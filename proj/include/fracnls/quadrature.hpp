#pragma once

#include <array>
#include <vector>

#include "fracnls/grid.hpp"

namespace fracnls {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);

/// Rule for integrals over theta in [0, 1] along a segment a + theta (b - a) in C.
///
/// The interval is split at the point of the segment closest to the origin and
/// each piece is integrated with Gauss-Legendre under the substitution
/// theta = theta* -/+ len * tau^2, which clusters nodes where |z|^alpha kinks.
class ThetaRule {
 public:
  explicit ThetaRule(int nodes);

  int nodes() const { return nodes_; }

  /// Calls fn(theta, weight) for each quadrature node of the segment [a, b].
  template <typename Fn>
  void for_each(Complex a, Complex b, Fn&& fn) const {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) {
      fn(0.0, 1.0);
      return;
    }
    double split = -(a.real() * d.real() + a.imag() * d.imag()) / len2;
    if (split <= 0.0 || split >= 1.0) {
      const bool from_start = split <= 0.0;
      for (std::size_t i = 0; i < whole_.nodes.size(); ++i) {
        const double t = whole_.nodes[i];
        const double w = 2.0 * t * whole_.weights[i];
        fn(from_start ? t * t : 1.0 - t * t, w);
      }
      return;
    }
    for (std::size_t i = 0; i < half_.nodes.size(); ++i) {
      const double t = half_.nodes[i];
      const double w = 2.0 * t * half_.weights[i];
      fn(split - split * t * t, split * w);
      fn(split + (1.0 - split) * t * t, (1.0 - split) * w);
    }
  }

 private:
  int nodes_;
  GaussLegendre whole_;
  GaussLegendre half_;
};

/// Polar quadrature for integrals over y in R^N restricted to |y| <= L/2.
struct QuadratureSpec {
  int shells = 32;         ///< log-spaced radial shells
  int angles = 16;         ///< directions per shell (N = 2, 3); N = 1 always uses +-1
  double inner_factor = 0.5;  ///< innermost radius in units of the grid spacing
};

struct RadialNode {
  std::array<double, 3> y{};
  double radius = 0.0;
  double weight = 0.0;  ///< measure weight: direction weight * d(log r)
};

/// Nodes of the translation integral. Shell nodes carry weight dOmega * d(log r);
/// inner nodes sit at the innermost radius and carry dOmega only. The surface
/// measure of the unit sphere is `sphere_measure`.
struct RadialQuadrature {
  std::vector<RadialNode> shell_nodes;
  std::vector<RadialNode> inner_nodes;
  double inner_radius = 0.0;
  double outer_radius = 0.0;
  double sphere_measure = 0.0;
};

RadialQuadrature build_radial_quadrature(const Grid& grid, const QuadratureSpec& spec);

}  // namespace fracnls
