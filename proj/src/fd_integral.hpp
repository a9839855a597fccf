#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fracnls/kernels.hpp"
#include "fracnls/quadrature.hpp"

namespace fracnls::detail {

// int F(y)^q |y|^{-N-sq} dy over |y| <= L/2 for a translation increment F that
// behaves like |y| near the origin. increment(node) is evaluated once per node,
// in parallel; the sum runs in node order.
template <typename Increment>
double fd_integral(const RadialQuadrature& quad, double s, double q, Increment&& increment) {
  std::vector<const RadialNode*> nodes;
  for (const auto& n : quad.shell_nodes) nodes.push_back(&n);
  for (const auto& n : quad.inner_nodes) nodes.push_back(&n);
  std::vector<double> values(nodes.size());

  const auto count = static_cast<std::int64_t>(nodes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t n = 0; n < count; ++n) values[n] = increment(*nodes[n]);

  const double sq = s * q;
  const std::size_t n_shell = quad.shell_nodes.size();
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    double w = nodes[n]->weight * std::pow(nodes[n]->radius, -sq);
    // Below the innermost shell F(r) ~ F(r0) r / r0, integrated in closed form.
    if (n >= n_shell) w /= q * (1.0 - s);
    values[n] = w * std::pow(values[n], q);
  }
  return kernels::ordered_sum(values);
}

}  // namespace fracnls::detail
