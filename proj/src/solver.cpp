#include "fracnls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "fracnls/exponents.hpp"
#include "fracnls/function_spaces.hpp"
#include "fracnls/kernels.hpp"

namespace fracnls {
namespace {

constexpr Complex kI{0.0, 1.0};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Field slice_from_interaction(const Spectrum& base, double t) {
  return inverse_transform(free_propagate(base, t));
}

struct Sweep {
  std::vector<Field> slices;
  double distance = 0.0;
  double sup_l2 = 0.0;
};

// One application of the discrete Duhamel map to `prev`.
Sweep duhamel_sweep(const Spectrum& phi_hat, const std::vector<Field>& prev,
                    const Nonlinearity& nl, const TimeGrid& tg, const PicardConfig& cfg) {
  const Grid& grid = phi_hat.grid();
  const int nt = tg.steps();
  const auto count = static_cast<std::int64_t>(nt + 1);

  // H_l = e^{i t_l |k|^2} FFT(g(u(t_l)))
  std::vector<Spectrum> h(nt + 1, Spectrum(grid));
#pragma omp parallel for schedule(static)
  for (std::int64_t l = 0; l < count; ++l) {
    Field gu(grid);
    kernels::serial::apply_nonlinearity(prev[l].values(), gu.values(), nl);
    Spectrum gh = forward_transform(gu);
    if (cfg.dealias) dealias_two_thirds(gh);
    kernels::serial::schrodinger_phase(gh.coeffs(), grid.k_squared(), -tg.time(l));
    h[l] = std::move(gh);
  }

  // Cumulative trapezoid of the interaction-picture integrand, per mode.
  std::vector<Spectrum> base(nt + 1, phi_hat);
  const double half_dt = 0.5 * tg.dt();
  const auto modes = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < modes; ++i) {
    Complex running = 0.0;
    for (int m = 1; m <= nt; ++m) {
      running += half_dt * (h[m - 1][i] + h[m][i]);
      base[m][i] += kI * running;
    }
  }

  Sweep out;
  out.slices.assign(nt + 1, Field(grid));
  std::vector<double> dist(nt + 1, 0.0);
  std::vector<double> l2(nt + 1, 0.0);
  out.slices[0] = prev[0];
#pragma omp parallel for schedule(static)
  for (std::int64_t m = 1; m < count; ++m) {
    Spectrum c = base[m];
    kernels::serial::schrodinger_phase(c.coeffs(), grid.k_squared(), tg.time(m));
    out.slices[m] = inverse_transform(c);
    const Field diff = out.slices[m] - prev[m];
    dist[m] = lebesgue_norm(diff, cfg.metric_pair.second);
    l2[m] = lebesgue_norm(diff, 2.0);
  }
  for (int m = 0; m <= nt; ++m) {
    if (!out.slices[m].all_finite())
      throw BlowUp("Picard iterate is not finite at t = " + fmt(tg.time(m)), tg.time(m));
    out.sup_l2 = std::max(out.sup_l2, l2[m]);
  }
  out.distance = time_norm(dist, tg.dt(), cfg.metric_pair.first);
  return out;
}

PicardResult picard_once(const Field& phi, const Nonlinearity& nl, const TimeGrid& tg,
                         const PicardConfig& cfg) {
  const Spectrum phi_hat = forward_transform(phi);
  const int nt = tg.steps();
  std::vector<Field> current(nt + 1, Field(phi.grid()));
  current[0] = phi;
  for (int m = 1; m <= nt; ++m) current[m] = slice_from_interaction(phi_hat, tg.time(m));

  IterationReport report;
  report.horizon = tg.horizon();
  report.smallness_delta = cfg.smallness_delta;
  double first = 0.0;
  for (int k = 0; k < cfg.max_iter; ++k) {
    Sweep next = duhamel_sweep(phi_hat, current, nl, tg, cfg);
    current = std::move(next.slices);
    report.iterations = k + 1;
    if (!report.distances.empty())
      report.ratios.push_back(report.distances.back() > 0.0
                                  ? next.distance / report.distances.back()
                                  : 0.0);
    report.distances.push_back(next.distance);
    report.sup_l2_steps.push_back(next.sup_l2);
    if (k == 0) first = next.distance;
    if (next.distance <= cfg.tol * std::max(1.0, first)) {
      report.converged = true;
      return {Trajectory{tg, std::move(current)}, std::move(report)};
    }
  }
  throw NonConvergence("Picard iteration did not converge in " + std::to_string(cfg.max_iter) +
                           " sweeps on T = " + fmt(tg.horizon()),
                       std::move(report));
}

}  // namespace

void PicardConfig::validate(int N) const {
  if (!(tol > 0.0)) throw std::invalid_argument("Picard tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("Picard needs max_iter >= 1");
  if (!is_admissible(metric_pair.first, metric_pair.second, N))
    throw std::invalid_argument("Picard metric pair (" + fmt(metric_pair.first) + ", " +
                                fmt(metric_pair.second) + ") is not admissible");
  if (backoff_attempts < 0) throw std::invalid_argument("backoff_attempts must be >= 0");
}

PicardResult picard_duhamel(const Field& phi, const Nonlinearity& nl, const TimeGrid& tg,
                            const PicardConfig& cfg) {
  cfg.validate(phi.grid().dim());
  if (!phi.all_finite()) throw std::invalid_argument("initial datum is not finite");
  PicardConfig attempt = cfg;
  TimeGrid grid = tg;
  for (int b = 0;; ++b) {
    try {
      PicardResult result = picard_once(phi, nl, grid, attempt);
      result.report.backoffs = b;
      return result;
    } catch (const SolverError&) {
      // A non-finite iterate here means the iteration diverged, which backoff can cure.
      if (b >= cfg.backoff_attempts) throw;
      grid = TimeGrid(0.5 * grid.horizon(), grid.steps());
      attempt.smallness_delta *= 0.5;
    }
  }
}

Trajectory split_step(const Field& phi, const PowerNonlinearity& nl, double T, double dt,
                      int record_every) {
  if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("split-step needs T, dt > 0");
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  const long steps = std::lround(T / dt);
  if (steps < 1 || std::abs(steps * dt - T) > 1e-9 * T)
    throw std::invalid_argument("split-step horizon must be a multiple of dt");
  if (steps % record_every != 0)
    throw std::invalid_argument("step count must be a multiple of record_every");
  const double h = T / steps;

  const Grid& grid = phi.grid();
  const auto k2 = grid.k_squared();
  Trajectory traj{TimeGrid(T, static_cast<int>(steps / record_every)), {phi}};
  Spectrum c = forward_transform(phi);
  Field u(grid);
  for (long n = 1; n <= steps; ++n) {
    kernels::schrodinger_phase(c.coeffs(), k2, 0.5 * h);
    u = inverse_transform(c);
    if (!kernels::power_flow(u.values(), nl.lambda, nl.alpha, h))
      throw BlowUp("modulus blew up inside step ending at t = " + fmt(n * h), n * h);
    c = forward_transform(u);
    kernels::schrodinger_phase(c.coeffs(), k2, 0.5 * h);
    if (n % record_every == 0) traj.slices.push_back(inverse_transform(c));
  }
  return traj;
}

double smallness_check(const Field& phi, const TimeGrid& tg, const PicardConfig& cfg,
                       double s) {
  NormSpec spec;
  spec.kind = NormKind::besov_lp;
  spec.s = s;
  spec.p = cfg.metric_pair.second;
  spec.q = 2.0;
  spec.homogeneous = true;
  const Spectrum phi_hat = forward_transform(phi);
  std::vector<double> values(tg.steps() + 1);
  const auto count = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t m = 0; m < count; ++m)
    values[m] = besov_norm_lp(slice_from_interaction(phi_hat, tg.time(m)), spec);
  return time_norm(values, tg.dt(), cfg.metric_pair.first);
}

std::optional<double> detect_blowup(const Trajectory& traj, double threshold, double s) {
  if (traj.slices.empty()) throw std::invalid_argument("empty trajectory");
  const double initial = sobolev_norm(traj.slices.front(), s, false);
  if (!(threshold > initial))
    throw std::invalid_argument("blow-up threshold must exceed the initial H^s norm");
  for (std::size_t m = 0; m < traj.slices.size(); ++m) {
    if (!traj.slices[m].all_finite() || sobolev_norm(traj.slices[m], s, false) > threshold)
      return traj.time_grid.time(static_cast<int>(m));
  }
  return std::nullopt;
}

}  // namespace fracnls
