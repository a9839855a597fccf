#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracnls/function_spaces.hpp"
#include "fracnls/solver.hpp"
#include "support.hpp"

using namespace fracnls;
using namespace fracnls::testing;

namespace {

double sup_l2_gap(const Trajectory& a, const Trajectory& b) {
  REQUIRE(a.slices.size() == b.slices.size());
  double gap = 0.0;
  for (std::size_t m = 0; m < a.slices.size(); ++m)
    gap = std::max(gap, distance(a.slices[m], b.slices[m]));
  return gap;
}

// Exact solution c exp(i k0 x - i k0^2 t + i lambda |c|^alpha t).
Field plane_wave_solution(const Grid& g, Complex c, double k0, double lambda, double alpha, double t) {
  return std::polar(1.0, -k0 * k0 * t + lambda * std::pow(std::abs(c), alpha) * t) *
         plane_wave(g, c, k0);
}

PicardConfig one_dimensional_config() {
  PicardConfig cfg;
  cfg.metric_pair = {8.0, 4.0};
  return cfg;
}

}  // namespace

TEST_CASE("Picard with lambda = 0 is the free evolution") {
  const Grid g(1, 128, 16.0 * std::numbers::pi);
  const Field phi = gaussian(g);
  const TimeGrid tg(0.5, 32);
  const PicardResult r = picard_duhamel(phi, PowerNonlinearity{0.0, 2.0}, tg, one_dimensional_config());
  CHECK(r.report.converged);
  CHECK(r.report.iterations == 1);
  CHECK(r.report.distances.front() == 0.0);
  for (int m = 0; m <= 32; ++m) CHECK(distance(r.trajectory.at(m), free_propagate(phi, tg.time(m))) == 0.0);
}

TEST_CASE("plane wave exact solution") {
  const Grid g(1, 256, 2.0 * std::numbers::pi);
  const Complex c = 0.5;
  const PowerNonlinearity nl{1.0, 2.0};
  const Field phi = plane_wave(g, c, 3.0);
  const Field exact = plane_wave_solution(g, c, 3.0, 1.0, 2.0, 1.0);

  const Trajectory ss = split_step(phi, nl, 1.0, 1e-3, 500);
  CHECK(distance(ss.slices.back(), exact) < 1e-8);

  PicardConfig cfg = one_dimensional_config();
  cfg.tol = 1e-13;
  const PicardResult pr = picard_duhamel(phi, nl, TimeGrid(1.0, 256), cfg);
  CHECK(pr.report.converged);
  CHECK(distance(pr.trajectory.slices.back(), exact) < 1e-6);
  for (std::size_t k = 1; k < pr.report.ratios.size(); ++k) CHECK(pr.report.ratios[k] < 1.0);
  const auto& steps = pr.report.sup_l2_steps;
  REQUIRE(steps.size() >= 3);
  CHECK(steps[steps.size() - 1] < steps[steps.size() - 2]);
  CHECK(steps[steps.size() - 2] < steps[steps.size() - 3]);
}

TEST_CASE("split-step with lambda = 0 is exact") {
  const Grid g(1, 256, 16.0 * std::numbers::pi);
  const Field phi = gaussian(g, 1.0, 1.0, 0.0, 2.0);
  const Trajectory t = split_step(phi, PowerNonlinearity{0.0, 2.0}, 0.4, 0.01, 10);
  REQUIRE(t.slices.size() == 5);
  for (int m = 0; m <= 4; ++m)
    CHECK(distance(t.at(m), free_propagate(phi, t.time_grid.time(m))) < 1e-12);
}

TEST_CASE("split-step is second order and conserves mass") {
  const Grid g(1, 256, 16.0 * std::numbers::pi);
  const Field phi = gaussian(g);
  const PowerNonlinearity nl{1.0, 2.0};
  const double mass = lebesgue_norm(phi, 2.0);
  std::vector<Field> ends;
  for (int n : {25, 50, 100, 200, 400}) {
    const Trajectory t = split_step(phi, nl, 1.0, 1.0 / n, n / 5);
    for (const Field& slice : t.slices) CHECK(std::abs(lebesgue_norm(slice, 2.0) - mass) < 1e-7);
    ends.push_back(t.slices.back());
  }
  for (std::size_t i = 0; i + 2 < ends.size(); ++i) {
    const double order =
        std::log2(distance(ends[i], ends[i + 1]) / distance(ends[i + 1], ends[i + 2]));
    CHECK(std::abs(order - 2.0) < 0.1);
  }
}

TEST_CASE("Picard and split-step agree on a Gaussian") {
  const Grid g(1, 256, 16.0 * std::numbers::pi);
  const Field phi = gaussian(g);
  const PowerNonlinearity nl{1.0, 2.0};
  PicardConfig cfg = one_dimensional_config();
  cfg.tol = 1e-12;
  const PicardResult pr = picard_duhamel(phi, nl, TimeGrid(0.5, 500), cfg);
  const Trajectory ss = split_step(phi, nl, 0.5, 1e-3, 1);
  CHECK(sup_l2_gap(pr.trajectory, ss) < 1e-5);
  for (const Field& slice : pr.trajectory.slices)
    CHECK(std::abs(lebesgue_norm(slice, 2.0) - lebesgue_norm(phi, 2.0)) < 1e-7);
}

TEST_CASE("dealiasing is opt-in and stays close") {
  const Grid g(1, 256, 16.0 * std::numbers::pi);
  const Field phi = gaussian(g);
  const PowerNonlinearity nl{1.0, 2.0};
  PicardConfig cfg = one_dimensional_config();
  const PicardResult plain = picard_duhamel(phi, nl, TimeGrid(0.25, 64), cfg);
  cfg.dealias = true;
  const PicardResult dealiased = picard_duhamel(phi, nl, TimeGrid(0.25, 64), cfg);
  CHECK(dealiased.report.converged);
  CHECK(sup_l2_gap(plain.trajectory, dealiased.trajectory) < 1e-4);
}

TEST_CASE("Picard failure modes") {
  const Grid g(1, 128, 16.0 * std::numbers::pi);
  const Field phi = gaussian(g, 2.0);
  const PowerNonlinearity nl{1.0, 2.0};
  PicardConfig cfg = one_dimensional_config();
  cfg.max_iter = 4;
  cfg.tol = 1e-12;

  try {
    picard_duhamel(phi, nl, TimeGrid(1.0, 64), cfg);
    FAIL("expected non-convergence");
  } catch (const NonConvergence& e) {
    CHECK_FALSE(e.report().converged);
    CHECK(e.report().distances.size() == 4);
  }

  cfg.max_iter = 40;
  cfg.backoff_attempts = 4;
  const PicardResult r = picard_duhamel(phi, nl, TimeGrid(2.0, 64), cfg);
  CHECK(r.report.converged);
  CHECK(r.report.backoffs >= 1);
  CHECK(r.report.horizon == doctest::Approx(2.0 * std::pow(0.5, r.report.backoffs)));
  CHECK(r.report.smallness_delta == doctest::Approx(cfg.smallness_delta * std::pow(0.5, r.report.backoffs)));

  PicardConfig bad = one_dimensional_config();
  bad.metric_pair = {8.0, 3.0};
  CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);
  bad = one_dimensional_config();
  bad.tol = 0.0;
  CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);
}

TEST_CASE("split-step reports blow-up for dissipative sign errors") {
  const Grid g(1, 64, 8.0);
  const Field phi = gaussian(g, 5.0);
  try {
    split_step(phi, PowerNonlinearity{{0.0, -1.0}, 2.0}, 1.0, 0.01);
    FAIL("expected blow-up");
  } catch (const BlowUp& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() <= 1.0 / (2.0 * 25.0) + 0.01);
  }
  CHECK_THROWS_AS(split_step(phi, PowerNonlinearity{1.0, 2.0}, 1.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(split_step(phi, PowerNonlinearity{1.0, 2.0}, 1.0, 0.1, 3), std::invalid_argument);
}

TEST_CASE("smallness check") {
  const Grid g(1, 256, 16.0 * std::numbers::pi);
  const PicardConfig cfg = one_dimensional_config();
  CHECK(smallness_check(Field(g), TimeGrid(0.5, 32), cfg, 0.4) == 0.0);
  const Field phi = gaussian(g);
  const double full = smallness_check(phi, TimeGrid(0.5, 32), cfg, 0.4);
  CHECK(smallness_check(phi, TimeGrid(0.25, 32), cfg, 0.4) <= full);
  CHECK(relative_error(smallness_check(3.0 * phi, TimeGrid(0.5, 32), cfg, 0.4), 3.0 * full) < 1e-12);
}

TEST_CASE("blow-up detection") {
  const Grid g(1, 256, 16.0 * std::numbers::pi);
  const Field phi = gaussian(g);
  const double h0 = sobolev_norm(phi, 0.5, false);

  const Trajectory linear = split_step(phi, PowerNonlinearity{0.0, 2.0}, 0.5, 0.01, 5);
  CHECK_FALSE(detect_blowup(linear, 1.0001 * h0, 0.5).has_value());

  const Trajectory defocusing = split_step(phi, PowerNonlinearity{-1.0, 2.0}, 1.0, 1e-3, 10);
  CHECK_FALSE(detect_blowup(defocusing, 10.0 * h0, 0.5).has_value());
  for (const Field& slice : defocusing.slices)
    CHECK(std::abs(lebesgue_norm(slice, 2.0) - lebesgue_norm(phi, 2.0)) < 1e-10);

  CHECK_THROWS_AS(detect_blowup(linear, 0.5 * h0, 0.5), std::invalid_argument);
}

TEST_CASE("focusing quintic collapse comes earlier for larger data") {
  const Grid g(1, 1024, 4.0 * std::numbers::pi);
  const PowerNonlinearity quintic{1.0, 4.0};
  double previous = INFINITY;
  for (double amplitude : {2.0, 2.5, 3.0}) {
    const Field phi = gaussian(g, amplitude);
    const Trajectory t = split_step(phi, quintic, 0.15, 2e-5, 50);
    const auto when = detect_blowup(t, 4.0 * sobolev_norm(phi, 0.5, false), 0.5);
    REQUIRE(when.has_value());
    CHECK(*when < previous);
    previous = *when;
  }
}
