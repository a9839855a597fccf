#include "fracnls/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <stdexcept>

#include "fracnls/function_spaces.hpp"

namespace fracnls {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double l2_inner_real(const Field& a, const Field& b, Complex* out) {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  sum *= a.grid().cell_volume();
  if (out) *out = sum;
  return sum.real();
}

SlopeFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

void log_pairs(const std::vector<double>& in, const std::vector<double>& out,
               std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < in.size() && i < out.size(); ++i) {
    if (in[i] > 0.0 && out[i] > 0.0 && std::isfinite(in[i]) && std::isfinite(out[i])) {
      x.push_back(std::log(in[i]));
      y.push_back(std::log(out[i]));
    }
  }
}

struct Distances {
  double sup_Hs = 0.0;
  double lgamma_besov = 0.0;
  double lgamma_lsigma = 0.0;
};

Distances trajectory_distances(const Trajectory& a, const Trajectory& b, double s,
                               const ExponentSet& e) {
  if (a.slices.size() != b.slices.size())
    throw std::invalid_argument("trajectories have different slice counts");
  NormSpec besov;
  besov.kind = NormKind::besov_lp;
  besov.s = s;
  besov.p = e.rho;
  besov.q = 2.0;
  besov.homogeneous = true;

  const std::size_t n = a.slices.size();
  std::vector<double> hs(n), bv(n), ls(n);
  for (std::size_t m = 0; m < n; ++m) {
    const Field diff = b.slices[m] - a.slices[m];
    hs[m] = sobolev_norm(diff, s, false);
    bv[m] = besov_norm_lp(diff, besov);
    ls[m] = lebesgue_norm(diff, e.sigma);
  }
  Distances d;
  d.sup_Hs = *std::max_element(hs.begin(), hs.end());
  d.lgamma_besov = time_norm(bv, a.time_grid.dt(), e.gamma);
  d.lgamma_lsigma = time_norm(ls, a.time_grid.dt(), e.gamma);
  return d;
}

double sup_l2_gap(const Trajectory& a, const Trajectory& b) {
  double gap = 0.0;
  for (std::size_t m = 0; m < a.slices.size() && m < b.slices.size(); ++m)
    gap = std::max(gap, lebesgue_norm(a.slices[m] - b.slices[m], 2.0));
  return gap;
}

PicardConfig metric_config(const ProblemParams& params, const SolverSettings& settings) {
  PicardConfig cfg = settings.picard;
  cfg.metric_pair = canonical_pair(params);
  return cfg;
}

}  // namespace

double PerturbationFamily::scale(int k) const { return eps0 * std::ldexp(1.0, -k); }

Field PerturbationFamily::member(int k) const {
  return base + Complex(scale(k)) * direction;
}

Field default_direction(const Field& base, double s, double shift) {
  const Grid& grid = base.grid();
  Field psi = Field::sample(grid, [shift](std::span<const double> x) {
    double r2 = 0.0;
    for (double xi : x) r2 += (xi - shift) * (xi - shift);
    return Complex(std::exp(-r2));
  });
  Complex proj;
  l2_inner_real(base, psi, &proj);
  const double base_mass = l2_inner_real(base, base, nullptr);
  if (base_mass > 0.0) psi -= (proj / base_mass) * base;
  const double n = sobolev_norm(psi, s, false);
  if (!(n > 0.0)) throw std::invalid_argument("perturbation direction vanishes");
  psi *= Complex(1.0 / n);
  return psi;
}

std::string to_string(Integrator i) { return i == Integrator::picard ? "picard" : "split_step"; }

Integrator integrator_from_string(const std::string& name) {
  if (name == "picard") return Integrator::picard;
  if (name == "split_step") return Integrator::split_step;
  throw std::invalid_argument("unknown integrator: " + name);
}

PowerNonlinearity power_nonlinearity(const ProblemParams& params) {
  return PowerNonlinearity{params.lambda, params.alpha};
}

namespace {

Solution solve_with(Integrator integrator, const Field& phi, const ProblemParams& params,
                    const SolverSettings& settings) {
  const PowerNonlinearity nl = power_nonlinearity(params);
  if (integrator == Integrator::picard) {
    PicardResult r = picard_duhamel(phi, nl, TimeGrid(settings.T, settings.nt),
                                    metric_config(params, settings));
    return {std::move(r.trajectory), std::move(r.report)};
  }
  const long steps = std::lround(settings.T / settings.split_dt);
  if (steps % settings.nt != 0)
    throw std::invalid_argument("T / split_dt must be a multiple of nt");
  return {split_step(phi, nl, settings.T, settings.split_dt, static_cast<int>(steps / settings.nt)),
          std::nullopt};
}

}  // namespace

Solution solve(const Field& phi, const ProblemParams& params, const SolverSettings& settings) {
  validate(params);
  return solve_with(settings.integrator, phi, params, settings);
}

DependenceReport run_dependence(const ProblemParams& params, const PerturbationFamily& family,
                                const SolverSettings& settings) {
  if (family.K < 0) throw std::invalid_argument("family needs K >= 0");
  DependenceReport report;
  report.exponents = exponent_set(params);
  const ExponentSet& e = report.exponents;

  const PicardConfig cfg = metric_config(params, settings);
  const TimeGrid tg(settings.T, settings.nt);
  report.smallness_base = smallness_check(family.base, tg, cfg, params.s);
  report.smallness_worst = smallness_check(family.member(0), tg, cfg, params.s);
  if (report.smallness_worst > cfg.smallness_delta) report.flags.push_back("smallness_exceeded");

  const Solution base = solve(family.base, params, settings);
  if (base.trajectory.time_grid.horizon() != settings.T)
    report.flags.push_back("base_horizon_backoff");

  const Integrator other = settings.integrator == Integrator::picard ? Integrator::split_step
                                                                     : Integrator::picard;

  report.rows.resize(family.K + 1);
  const auto count = static_cast<std::int64_t>(report.rows.size());
  std::vector<std::exception_ptr> errors(report.rows.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < count; ++k) {
    DependenceRow& row = report.rows[k];
    row.k = static_cast<int>(k);
    row.eps = family.scale(row.k);
    const Field phi_k = family.member(row.k);
    row.in_Hs = sobolev_norm(phi_k - family.base, params.s, false);
    try {
      const Solution sol = solve_with(settings.integrator, phi_k, params, settings);
      if (sol.picard) row.iterations = sol.picard->iterations;
      if (sol.trajectory.time_grid.horizon() != base.trajectory.time_grid.horizon())
        throw SolverError("row horizon differs from base horizon after backoff");
      const Distances d = trajectory_distances(base.trajectory, sol.trajectory, params.s, e);
      row.out_sup_Hs = d.sup_Hs;
      row.out_Lgamma_Besov = d.lgamma_besov;
      row.out_Lgamma_Lsigma = d.lgamma_lsigma;
      if (settings.cross_check) {
        const Solution alt = solve_with(other, phi_k, params, settings);
        row.cross_check_gap = sup_l2_gap(sol.trajectory, alt.trajectory);
        if (*row.cross_check_gap > settings.cross_check_tol)
          row.flags.push_back("cross_check_disagreement");
      }
    } catch (const SolverError&) {
      row.converged = false;
      row.flags.push_back("nonconvergent");
      row.out_sup_Hs = row.out_Lgamma_Besov = row.out_Lgamma_Lsigma = kNaN;
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  std::vector<double> in, out;
  for (auto& row : report.rows) {
    in.push_back(row.in_Hs);
    out.push_back(row.out_sup_Hs);
    std::vector<double> x, y;
    log_pairs(in, out, x, y);
    row.slope_running = x.size() >= 2 ? least_squares(x, y).slope : kNaN;
  }
  try {
    report.fit = fit_slope(report);
  } catch (const std::invalid_argument&) {
    report.flags.push_back("too_few_rows_for_fit");
  }
  return report;
}

SlopeFit fit_slope(const std::vector<double>& in, const std::vector<double>& out) {
  std::vector<double> x, y;
  log_pairs(in, out, x, y);
  if (x.size() < 4) throw std::invalid_argument("slope fit needs at least 4 valid rows");
  return least_squares(x, y);
}

double column_value(const DependenceRow& row, Column column) {
  switch (column) {
    case Column::sup_Hs: return row.out_sup_Hs;
    case Column::Lgamma_Besov: return row.out_Lgamma_Besov;
    case Column::Lgamma_Lsigma: return row.out_Lgamma_Lsigma;
  }
  return kNaN;
}

SlopeFit fit_slope(const DependenceReport& report, Column column) {
  std::vector<double> in, out;
  for (const auto& row : report.rows) {
    if (!row.converged) continue;
    in.push_back(row.in_Hs);
    out.push_back(column_value(row, column));
  }
  return fit_slope(in, out);
}

LipschitzEstimate lipschitz_constant(const DependenceReport& report, Column column) {
  std::vector<double> ratios;
  for (const auto& row : report.rows) {
    const double o = column_value(row, column);
    if (row.converged && row.in_Hs > 0.0 && std::isfinite(o)) ratios.push_back(o / row.in_Hs);
  }
  LipschitzEstimate est;
  const std::size_t half = ratios.size() / 2;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    est.constant = std::max(est.constant, ratios[i]);
    if (i < half)
      est.first_half_max = std::max(est.first_half_max, ratios[i]);
    else
      est.second_half_max = std::max(est.second_half_max, ratios[i]);
  }
  return est;
}

std::vector<RemainderRow> remainder_decay_experiment(const ProblemParams& params,
                                                     const PerturbationFamily& family,
                                                     const SolverSettings& settings,
                                                     const RemainderOptions& options) {
  const ExponentSet e = exponent_set(params);
  if (options.stride < 1 || settings.nt % options.stride != 0)
    throw std::invalid_argument("remainder stride must divide nt");

  PowerNonlinearity probe = power_nonlinearity(params);
  if (options.probe) {
    probe = *options.probe;
  } else if (probe.lambda == Complex(0.0)) {
    probe.lambda = 1.0;
  }

  RemainderSpec spec;
  spec.s = params.s;
  spec.p = dual(e.rho);
  spec.r = e.rho;
  spec.q = 2.0;
  if (probe.alpha == params.alpha) spec.sigma = e.sigma;

  const Solution base = solve(family.base, params, settings);
  std::vector<std::optional<Trajectory>> members(family.K + 1);
  const auto count = static_cast<std::int64_t>(members.size());
  std::vector<std::exception_ptr> errors(members.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < count; ++k) {
    try {
      members[k] = solve_with(settings.integrator, family.member(static_cast<int>(k)), params,
                              settings)
                       .trajectory;
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  const double gamma_dual = dual(e.gamma);
  const double dt = base.trajectory.time_grid.dt() * options.stride;
  std::vector<RemainderRow> rows;
  for (int k = 0; k <= family.K; ++k) {
    std::vector<double> values;
    for (int m = 0; m <= settings.nt; m += options.stride)
      values.push_back(remainder_K(base.trajectory.at(m), members[k]->at(m), probe, spec,
                                   options.theta_nodes, options.y_quadrature));
    rows.push_back({k, family.scale(k), time_norm(values, dt, gamma_dual)});
  }
  return rows;
}

}  // namespace fracnls
