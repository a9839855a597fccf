#include "fracnls/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace fracnls {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  GaussLegendre rule;
  rule.nodes.assign(n, 0.5);
  rule.weights.assign(n, 1.0);
  if (n == 1) return rule;
  for (int i = 0; i < n / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 1.0 / ((1.0 - x * x) * dp * dp);  // half of the [-1,1] weight
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    const double dp = legendre(n, 0.0).second;
    rule.nodes[n / 2] = 0.5;
    rule.weights[n / 2] = 1.0 / (dp * dp);
  }
  return rule;
}

ThetaRule::ThetaRule(int nodes)
    : nodes_(nodes),
      whole_(gauss_legendre(std::max(nodes, 1))),
      half_(gauss_legendre(std::max((nodes + 1) / 2, 1))) {
  if (nodes < 2) throw std::invalid_argument("theta rule needs at least two nodes");
}

RadialQuadrature build_radial_quadrature(const Grid& grid, const QuadratureSpec& spec) {
  if (spec.shells < 1 || spec.angles < 1)
    throw std::invalid_argument("translation quadrature needs at least one shell and angle");
  if (!(spec.inner_factor > 0.0))
    throw std::invalid_argument("inner radius factor must be positive");

  RadialQuadrature quad;
  quad.inner_radius = spec.inner_factor * grid.spacing();
  quad.outer_radius = 0.5 * grid.period();
  if (!(quad.inner_radius < quad.outer_radius))
    throw std::invalid_argument("inner radius exceeds half the period");

  // Unit directions with their share of the sphere measure.
  std::vector<std::pair<std::array<double, 3>, double>> dirs;
  const int dim = grid.dim();
  if (dim == 1) {
    quad.sphere_measure = 2.0;
    dirs.push_back({{1.0, 0.0, 0.0}, 1.0});
    dirs.push_back({{-1.0, 0.0, 0.0}, 1.0});
  } else if (dim == 2) {
    quad.sphere_measure = 2.0 * std::numbers::pi;
    for (int a = 0; a < spec.angles; ++a) {
      const double th = 2.0 * std::numbers::pi * (a + 0.5) / spec.angles;
      dirs.push_back({{std::cos(th), std::sin(th), 0.0}, quad.sphere_measure / spec.angles});
    }
  } else {
    // Fibonacci lattice on S^2, equal weights.
    quad.sphere_measure = 4.0 * std::numbers::pi;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int a = 0; a < spec.angles; ++a) {
      const double z = 1.0 - 2.0 * (a + 0.5) / spec.angles;
      const double rho = std::sqrt(1.0 - z * z);
      const double phi = golden * a;
      dirs.push_back({{rho * std::cos(phi), rho * std::sin(phi), z},
                      quad.sphere_measure / spec.angles});
    }
  }

  // Midpoint rule in log r between inner and outer radius.
  const double log_lo = std::log(quad.inner_radius);
  const double log_hi = std::log(quad.outer_radius);
  const double dt = (log_hi - log_lo) / spec.shells;
  for (int s = 0; s < spec.shells; ++s) {
    const double r = std::exp(log_lo + (s + 0.5) * dt);
    for (const auto& [dir, w] : dirs) {
      RadialNode node;
      node.radius = r;
      node.weight = w * dt;
      for (int a = 0; a < dim; ++a) node.y[a] = r * dir[a];
      quad.shell_nodes.push_back(node);
    }
  }
  for (const auto& [dir, w] : dirs) {
    RadialNode node;
    node.radius = quad.inner_radius;
    node.weight = w;
    for (int a = 0; a < dim; ++a) node.y[a] = quad.inner_radius * dir[a];
    quad.inner_nodes.push_back(node);
  }
  return quad;
}

}  // namespace fracnls
