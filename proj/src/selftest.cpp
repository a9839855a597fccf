#include "fracnls/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "fracnls/function_spaces.hpp"
#include "fracnls/grid.hpp"
#include "fracnls/nonlinearity.hpp"
#include "fracnls/solver.hpp"

namespace fracnls {
namespace {

class Suite {
 public:
  explicit Suite(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::string& what, double value) {
    if (ok) {
      ++result_.passed;
      return;
    }
    ++result_.failed;
    char buf[64];
    std::snprintf(buf, sizeof buf, " (%.3e)", value);
    result_.failures.push_back(what + buf);
  }

  SuiteResult result() && { return std::move(result_); }

 private:
  SuiteResult result_;
};

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Random band-limited field: a few low modes with random coefficients.
Field random_field(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Spectrum c(grid);
  const double kcut = 0.25 * grid.max_wavenumber();
  const auto k2 = grid.k_squared();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (k2[i] <= kcut * kcut) c[i] = {normal(rng), normal(rng)};
  return inverse_transform(c);
}

Field gaussian(const Grid& grid, double width) {
  return Field::sample(grid, [width](std::span<const double> x) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return Complex(std::exp(-r2 / (width * width)));
  });
}

SuiteResult norms_suite(const SelftestOptions& opt, std::mt19937_64& rng) {
  Suite suite("norms");
  const DyadicPartition partition(opt.partition_ratio);
  for (int dim = 1; dim <= 2; ++dim) {
    const Grid grid(dim, dim == 1 ? 128 : 32, 4.0 * std::numbers::pi);
    for (int trial = 0; trial < 4; ++trial) {
      const Field f = random_field(grid, rng);
      const double l2 = lebesgue_norm(f, 2.0);
      suite.check(relative(sobolev_norm(f, 0.0, true), l2) < 1e-12, "plancherel",
                  relative(sobolev_norm(f, 0.0, true), l2));

      const Band band = default_band(grid, false);
      const Field rec = decompose(f, band.jmin, band.jmax, partition).reconstruct();
      const double err = lebesgue_norm(rec - f, 2.0) / l2;
      suite.check(err < 1e-10, "dyadic reconstruction", err);

      NormSpec spec;
      spec.kind = NormKind::besov_lp;
      spec.s = 0.5;
      const auto [lo, hi] = lp_equivalence_bracket(spec.s, partition);
      const double ratio = besov_norm_lp(f, spec, partition) / sobolev_norm(f, spec.s, true);
      suite.check(ratio >= lo * (1 - 1e-9) && ratio <= hi * (1 + 1e-9),
                  "LP/Sobolev ratio inside bracket", ratio);
    }
  }
  const Grid line(1, 4096, 40.0 * std::numbers::pi);
  const double exact = std::pow(std::numbers::pi / 2.0, 0.25);
  const double err = relative(lebesgue_norm(gaussian(line, 1.0), 2.0), exact);
  suite.check(err < 1e-10, "gaussian L2 norm", err);
  return std::move(suite).result();
}

SuiteResult propagator_suite(std::mt19937_64& rng) {
  Suite suite("propagator");
  const Grid grid(2, 32, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 4; ++trial) {
    const Field f = random_field(grid, rng);
    const Field g = free_propagate(f, 0.37);
    suite.check(relative(lebesgue_norm(g, 2.0), lebesgue_norm(f, 2.0)) < 1e-12, "L2 isometry",
                relative(lebesgue_norm(g, 2.0), lebesgue_norm(f, 2.0)));
    suite.check(relative(sobolev_norm(g, 0.7, true), sobolev_norm(f, 0.7, true)) < 1e-12,
                "Hs isometry", relative(sobolev_norm(g, 0.7, true), sobolev_norm(f, 0.7, true)));
    const Field twice = free_propagate(free_propagate(f, 0.2), 0.17);
    const double group = lebesgue_norm(twice - g, 2.0) / lebesgue_norm(f, 2.0);
    suite.check(group < 1e-12, "group law", group);
    const double y[2] = {0.3, -1.1};
    const Field a = translate(free_propagate(f, 0.5), y);
    const Field b = free_propagate(translate(f, y), 0.5);
    const double comm = lebesgue_norm(a - b, 2.0) / lebesgue_norm(f, 2.0);
    suite.check(comm < 1e-10, "translation commutes", comm);
  }
  return std::move(suite).result();
}

SuiteResult pointwise_suite(std::mt19937_64& rng) {
  Suite suite("pointwise");
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
    int violations = 0;
    for (int i = 0; i < 20000; ++i) {
      const Complex z1{coord(rng), coord(rng)};
      const Complex z2{coord(rng), coord(rng)};
      if (!check_pointwise_power(z1, z2, alpha).holds()) ++violations;
    }
    char name[48];
    std::snprintf(name, sizeof name, "pointwise alpha=%.1f", alpha);
    suite.check(violations == 0, name, violations);
  }
  return std::move(suite).result();
}

SuiteResult plane_wave_suite() {
  Suite suite("plane_wave");
  const Grid grid(1, 64, 2.0 * std::numbers::pi);
  const double k0 = 3.0;
  const Complex c = 0.5;
  const PowerNonlinearity nl{1.0, 2.0};
  const double omega = std::norm(c);  // lambda |c|^alpha with alpha = 2
  const Field phi = Field::sample(grid, [&](std::span<const double> x) {
    return c * std::exp(Complex(0.0, k0 * x[0]));
  });
  auto exact = [&](double t) {
    return Field::sample(grid, [&](std::span<const double> x) {
      return c * std::exp(Complex(0.0, k0 * x[0] - k0 * k0 * t + omega * t));
    });
  };
  const Trajectory ss = split_step(phi, nl, 1.0, 1e-3, 500);
  const double ss_err = lebesgue_norm(ss.slices.back() - exact(1.0), 2.0);
  suite.check(ss_err < 1e-8, "split-step plane wave", ss_err);

  PicardConfig cfg;
  cfg.metric_pair = {8.0, 4.0};  // 2/8 = 1/2 - 1/4 in one dimension
  cfg.tol = 1e-13;
  const PicardResult pr = picard_duhamel(phi, nl, TimeGrid(1.0, 256), cfg);
  const double pc_err = lebesgue_norm(pr.trajectory.slices.back() - exact(1.0), 2.0);
  suite.check(pc_err < 1e-6, "Picard plane wave", pc_err);
  return std::move(suite).result();
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<SuiteResult> out;
  out.push_back(norms_suite(options, rng));
  out.push_back(propagator_suite(rng));
  out.push_back(pointwise_suite(rng));
  out.push_back(plane_wave_suite());
  return out;
}

}  // namespace fracnls
