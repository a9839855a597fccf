// Acceptance criteria AC1-AC8. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracnls/cli.hpp"
#include "fracnls/dependence.hpp"
#include "fracnls/exponents.hpp"
#include "fracnls/function_spaces.hpp"
#include "fracnls/nonlinearity.hpp"
#include "fracnls/solver.hpp"
#include "support.hpp"

using namespace fracnls;
using namespace fracnls::testing;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::require(bool ok, const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  if (!detail.empty()) detail += "; ";
  detail += buf;
  if (!ok) {
    detail += " [violated]";
    pass = false;
  }
}

int failures = 0;

void criterion(const char* id, const char* title, double budget_seconds,
               const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(elapsed < budget_seconds, "runtime %.2f s < %.0f s", elapsed, budget_seconds);
  if (!o.pass) ++failures;
  std::printf("[%s] %s %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
  std::fflush(stdout);
}

double max_of(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  return *std::max_element(v.begin() + lo, v.begin() + hi);
}

ProblemParams cubic_1d(double lambda) {
  ProblemParams p;
  p.N = 1;
  p.s = 0.4;
  p.alpha = 2.0;
  p.lambda = lambda;
  p.B = std::abs(lambda) * 3.0;
  return p;
}

RemainderSpec remainder_spec_for(const ProblemParams& p) {
  const ExponentSet e = exponent_set(p);
  RemainderSpec spec;
  spec.s = p.s;
  spec.p = dual(e.rho);
  spec.r = e.rho;
  spec.q = 2.0;
  spec.sigma = e.sigma;
  return spec;
}

// ---------------------------------------------------------------------------

void ac1(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  double worst_identity = 0.0, worst_critical = 0.0;
  int range_failures = 0, criticals = 0;
  for (int i = 0; i < 1000; ++i) {
    ProblemParams p;
    p.N = dim(rng);
    p.s = unit(rng) * std::min(1.0, p.N / 2.0);
    const bool critical = i % 5 == 0;
    p.alpha = critical ? critical_power(p.N, p.s) : unit(rng) * critical_power(p.N, p.s);
    p.A = critical ? 0.0 : unit(rng);
    p.B = 1.0;
    const ExponentSet e = exponent_set(p);
    worst_identity = std::max(worst_identity, std::abs(2.0 / e.gamma - p.N * (0.5 - 1.0 / e.rho)));
    const double r_max = p.N <= 2 ? INFINITY : 2.0 * p.N / (p.N - 2.0);
    if (!(e.rho >= 2.0 && e.rho < r_max && e.gamma >= 2.0 - 1e-12)) ++range_failures;
    if (e.criticality == Criticality::critical) {
      ++criticals;
      worst_critical = std::max(worst_critical, std::abs(nu(*e.r0, p.N, p.s) - (p.alpha + 2.0)));
      worst_critical = std::max(worst_critical, std::abs(admissibility_residual(*e.q0, *e.r0, p.N)));
      if (!is_admissible(*e.q0, *e.r0, p.N)) ++range_failures;
    }
  }
  o.require(worst_identity < 1e-12, "max |2/gamma - N(1/2-1/rho)| = %.2e", worst_identity);
  o.require(range_failures == 0, "range failures %d", range_failures);
  o.require(criticals > 0 && worst_critical < 1e-12, "%d critical tuples, max residual %.2e",
            criticals, worst_critical);
}

void ac2(Outcome& o) {
  std::mt19937_64 rng(77);
  double plancherel = 0.0;
  for (int dim = 1; dim <= 3; ++dim) {
    const Grid g(dim, dim == 3 ? 16 : 64, 7.0);
    for (int i = 0; i < 5; ++i) {
      const Field f = random_band_limited(g, rng, 0.9);
      plancherel = std::max(plancherel, relative_error(sobolev_norm(f, 0.0, true), lebesgue_norm(f, 2.0)));
    }
  }
  o.require(plancherel < 1e-12, "Plancherel %.2e", plancherel);

  const Grid line(1, 1024, 16.0 * std::numbers::pi);
  const NormSpec lp{NormKind::besov_lp, 0.5, 2.0, 2.0, true};
  std::vector<double> ratios;
  for (int i = 0; i < 100; ++i) {
    const Field f = random_band_limited(line, rng, 2.0 / 3.0);
    ratios.push_back(besov_norm_lp(f, lp) / sobolev_norm(f, 0.5, true));
  }
  const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
  double mean = 0.0;
  for (double r : ratios) mean += r / ratios.size();
  const auto [lo, hi] = lp_equivalence_bracket(0.5);
  o.require((*mx - *mn) / mean < 0.05 && *mn >= lo && *mx <= hi,
            "LP/Sobolev ratio in [%.4f, %.4f], spread %.2f%%, bracket [%.3f, %.3f]", *mn, *mx,
            100.0 * (*mx - *mn) / mean, lo, hi);

  const Grid wide(1, 1024, 32.0 * std::numbers::pi);
  const NormSpec fd{NormKind::besov_fd, 0.5, 2.0, 2.0, true};
  std::vector<double> fd_ratios;
  for (double w : {1.0, 2.0, 4.0}) {
    const Field f = gaussian(wide, 1.0, w);
    fd_ratios.push_back(besov_norm_fd(f, fd) / besov_norm_lp(f, lp));
  }
  const double factor = max_of(fd_ratios, 0, 3) / *std::min_element(fd_ratios.begin(), fd_ratios.end());
  o.require(factor < 1.5, "FD/LP ratios %.4f %.4f %.4f (factor %.4f)", fd_ratios[0], fd_ratios[1],
            fd_ratios[2], factor);

  double invariance = 0.0;
  const Grid plane(2, 32, 6.0);
  const double y[2] = {0.41, -1.3};
  for (int i = 0; i < 5; ++i) {
    const Field f = random_band_limited(plane, rng, 0.6);
    for (const Field& h : {free_propagate(f, 0.77), translate(f, y)}) {
      invariance = std::max(invariance, relative_error(sobolev_norm(h, 0.6, true), sobolev_norm(f, 0.6, true)));
      invariance = std::max(invariance, relative_error(sobolev_norm(h, 0.6, false), sobolev_norm(f, 0.6, false)));
      const NormSpec b{NormKind::besov_lp, 0.6, 2.0, 2.0, true};
      invariance = std::max(invariance, relative_error(besov_norm_lp(h, b), besov_norm_lp(f, b)));
    }
  }
  o.require(invariance < 1e-10, "multiplier invariance %.2e", invariance);
}

void ac3(Outcome& o) {
  for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
    const PointwiseSweep s = sweep_pointwise(alpha, 1000000, 31337);
    o.require(s.modulus_violations == 0 && s.phase_violations == 0,
              "alpha=%g: %ld+%ld violations (worst %.3f, %.3f)", alpha, s.modulus_violations,
              s.phase_violations, s.modulus_worst, s.phase_worst);
    if (alpha == 1.0) {
      // At alpha = 1 the alpha >= 1 constants (1, 5) also apply; their majorants are
      // 2|z1-z2| and 10|z1-z2| against |z1-z2| and 9|z1-z2|.
      const double modulus = s.modulus_worst * 1.0 / 2.0;
      const double phase = s.phase_worst * 9.0 / 10.0;
      o.require(modulus <= 1.0 && phase <= 1.0, "alpha=1 with C=1/C=5: worst %.3f, %.3f", modulus, phase);
    }
  }
}

void ac4(Outcome& o) {
  const Grid ring(1, 256, 2.0 * std::numbers::pi);
  const Complex c = 0.5;
  const double k0 = 3.0;
  const PowerNonlinearity nl{1.0, 2.0};
  const Field phi = plane_wave(ring, c, k0);
  const Field exact = std::polar(1.0, -k0 * k0 + std::norm(c)) * phi;
  const double ss_err = distance(split_step(phi, nl, 1.0, 1e-3, 500).slices.back(), exact);
  PicardConfig cfg;
  cfg.metric_pair = {8.0, 4.0};
  cfg.tol = 1e-13;
  const double pc_err =
      distance(picard_duhamel(phi, nl, TimeGrid(1.0, 256), cfg).trajectory.slices.back(), exact);
  o.require(ss_err < 1e-8, "plane wave split-step %.2e", ss_err);
  o.require(pc_err < 1e-6, "plane wave Picard %.2e", pc_err);

  const Grid line(1, 256, 16.0 * std::numbers::pi);
  const Field g0 = gaussian(line);
  const double mass = lebesgue_norm(g0, 2.0);
  std::vector<Field> ends;
  double drift = 0.0;
  for (int n : {25, 50, 100, 200, 400}) {
    const Trajectory t = split_step(g0, nl, 1.0, 1.0 / n, n / 5);
    for (const Field& u : t.slices) drift = std::max(drift, std::abs(lebesgue_norm(u, 2.0) - mass));
    ends.push_back(t.slices.back());
  }
  double order_lo = INFINITY, order_hi = 0.0;
  for (std::size_t i = 0; i + 2 < ends.size(); ++i) {
    const double order = std::log2(distance(ends[i], ends[i + 1]) / distance(ends[i + 1], ends[i + 2]));
    order_lo = std::min(order_lo, order);
    order_hi = std::max(order_hi, order);
  }
  o.require(order_lo >= 1.9 && order_hi <= 2.1, "self-convergence order %.4f..%.4f", order_lo, order_hi);
  o.require(drift < 1e-7, "mass drift over T=1 %.2e", drift);

  cfg.tol = 1e-12;
  const Trajectory pr = picard_duhamel(g0, nl, TimeGrid(0.5, 500), cfg).trajectory;
  const Trajectory ss = split_step(g0, nl, 0.5, 1e-3, 1);
  double gap = 0.0;
  for (std::size_t m = 0; m < pr.slices.size(); ++m) gap = std::max(gap, distance(pr.slices[m], ss.slices[m]));
  o.require(gap <= 1e-5, "Picard vs split-step sup L2 %.2e", gap);
}

void ac5(Outcome& o) {
  const ProblemParams p = cubic_1d(1.0);
  const RemainderSpec spec = remainder_spec_for(p);
  const Grid grid(1, 256, 16.0 * std::numbers::pi);
  const Field u = gaussian(grid);
  const Field psi = default_direction(u, p.s);

  std::vector<double> stat;
  for (int k = 0; k <= 8; ++k)
    stat.push_back(remainder_K(u, u + Complex(std::ldexp(1.0, -k)) * psi, PowerNonlinearity{1.0, 2.0}, spec, 64));
  bool monotone = true;
  for (std::size_t k = 1; k < stat.size(); ++k) monotone = monotone && stat[k] < stat[k - 1];
  o.require(monotone && stat.back() < 1e-2 * stat.front(), "static: monotone %s, K8/K0 = %.2e",
            monotone ? "yes" : "no", stat.back() / stat.front());

  SolverSettings st;
  st.T = 0.25;
  st.nt = 256;
  st.picard.tol = 1e-12;
  const auto rows = remainder_decay_experiment(p, {u, psi, 1.0, 8}, st, {32, 32, {}, std::nullopt});
  monotone = true;
  for (std::size_t k = 1; k < rows.size(); ++k) monotone = monotone && rows[k].K_time_norm < rows[k - 1].K_time_norm;
  const double ratio = rows.back().K_time_norm / rows.front().K_time_norm;
  o.require(monotone && ratio < 1e-2, "trajectory: monotone %s, K8/K0 = %.2e", monotone ? "yes" : "no", ratio);
}

void ac6(Outcome& o) {
  const Grid grid(1, 128, 16.0 * std::numbers::pi);
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> amp(0.2, 1.5), width(0.5, 2.0), shift(-2.0, 2.0), wave(-1.0, 1.0);
  auto random_gaussian = [&] { return gaussian(grid, amp(rng), width(rng), shift(rng), wave(rng)); };

  for (double alpha : {0.5, 2.0}) {
    ProblemParams p = cubic_1d(1.0);
    p.alpha = alpha;
    const RemainderSpec spec = remainder_spec_for(p);
    const PowerNonlinearity nl{1.0, alpha};
    std::vector<double> general, refined;
    for (int i = 0; i < 50; ++i) {
      const Field u = random_gaussian();
      const Field v = u + random_gaussian();
      const BesovDifferenceReport r = besov_difference_report(u, v, nl, spec, 32);
      general.push_back(r.lhs / (r.lipschitz_term + r.K_term));
      refined.push_back(r.lhs / (alpha <= 1.0 ? *r.refined_holder : *r.refined_lipschitz));
    }
    for (const auto& [name, ratios] : {std::pair<const char*, const std::vector<double>&>{"general", general},
                                       {"refined", refined}}) {
      const double calibrated = max_of(ratios, 0, 25);
      const double held_out = max_of(ratios, 25, 50);
      int violations = 0;
      for (std::size_t i = 25; i < 50; ++i) violations += ratios[i] > 1.2 * calibrated;
      o.require(violations == 0, "alpha=%g %s: C=%.4f, held-out max %.4f, %d violations", alpha, name,
                calibrated, held_out, violations);
    }
  }

  const ProblemParams p = cubic_1d(1.0);
  const RemainderSpec spec = remainder_spec_for(p);
  const Field u = gaussian(grid);
  const Field psi = default_direction(u, p.s);
  std::vector<double> ratios;
  for (int k = 0; k <= 8; ++k) {
    const BesovDifferenceReport r =
        besov_difference_report(u, u + Complex(std::ldexp(1.0, -k)) * psi, PowerNonlinearity{1.0, 2.0}, spec, 32);
    ratios.push_back(r.lhs / r.diff_besov_r);
  }
  const double first = max_of(ratios, 0, 4), second = max_of(ratios, 4, 9);
  o.require(second <= 1.25 * first, "eps->0: first-half max %.4f, second-half max %.4f", first, second);
}

void ac7(Outcome& o) {
  const Grid grid(1, 256, 16.0 * std::numbers::pi);
  const Field base = gaussian(grid);
  const PerturbationFamily family{base, default_direction(base, 0.4), 1.0, 8};
  SolverSettings st;
  st.T = 0.25;
  st.nt = 256;
  st.picard.tol = 1e-12;

  const DependenceReport r = run_dependence(cubic_1d(1.0), family, st);
  const char* names[] = {"sup_Hs", "Lgamma_Besov", "Lgamma_Lsigma"};
  int i = 0;
  for (Column c : {Column::sup_Hs, Column::Lgamma_Besov, Column::Lgamma_Lsigma}) {
    bool monotone = true;
    for (std::size_t k = 1; k < r.rows.size(); ++k)
      monotone = monotone && column_value(r.rows[k], c) < column_value(r.rows[k - 1], c);
    const SlopeFit fit = fit_slope(r, c);
    o.require(monotone && fit.slope >= 0.85 && fit.slope <= 1.15 && fit.r_squared >= 0.99,
              "%s: monotone %s, slope %.4f, r2 %.6f", names[i++], monotone ? "yes" : "no", fit.slope,
              fit.r_squared);
  }

  const DependenceReport lin = run_dependence(cubic_1d(0.0), family, st);
  const double slope = fit_slope(lin).slope;
  const double constant = lipschitz_constant(lin).constant;
  o.require(std::abs(slope - 1.0) < 1e-10 && std::abs(constant - 1.0) < 1e-10,
            "lambda=0: slope-1 = %.1e, constant-1 = %.1e", slope - 1.0, constant - 1.0);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli_args(std::vector<std::string> args) {
  args.insert(args.begin(), "fracnls");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

void ac8(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / "fracnls_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const json cfg = {
      {"grid", {{"dim", 1}, {"points", 128}, {"period", 16.0 * std::numbers::pi}}},
      {"problem", {{"s", 0.4}, {"alpha", 2.0}, {"lambda", 1.0}}},
      {"initial", {{"type", "gaussian"}}},
      {"solver", {{"integrator", "picard"}, {"T", 0.25}, {"nt", 64}, {"tol", 1e-12}}},
      {"family", {{"eps0", 1.0}, {"K", 4}}},
      {"remainder", {{"stride", 16}, {"theta_nodes", 16}}},
      {"snapshots", {{"every", 32}, {"format", "csv"}}},
      {"theta_nodes", 16}};
  const fs::path path = root / "config.json";
  std::ofstream(path) << cfg.dump(2);

  const int threads = omp_get_max_threads();
  int compared = 0, differing = 0, bad_exit = 0;
  for (const char* cmd : {"solve", "dependence", "remainder"}) {
    for (const char* run : {"a", "b"}) {
      const fs::path out = root / cmd / run;
      bad_exit += run_cli_args({"--threads", std::to_string(threads), cmd, "--config", path.string(),
                                "--out", out.string()}) != kExitOk;
    }
    for (const auto& entry : fs::directory_iterator(root / cmd / "a")) {
      if (entry.path().extension() != ".csv") continue;
      ++compared;
      differing += read_file(entry.path()) != read_file(root / cmd / "b" / entry.path().filename());
    }
  }
  o.require(bad_exit == 0, "%d nonzero exits", bad_exit);
  o.require(compared >= 6 && differing == 0, "%d CSV files compared, %d differ", compared, differing);
}

}  // namespace

int main() {
  criterion("AC1", "exponent identities", 1.0, ac1);
  criterion("AC2", "norm toolkit", 30.0, ac2);
  criterion("AC3", "pointwise inequalities", 30.0, ac3);
  criterion("AC4", "integrator correctness", 300.0, ac4);
  criterion("AC5", "remainder decay", 300.0, ac5);
  criterion("AC6", "Besov difference bound", 300.0, ac6);
  criterion("AC7", "continuous dependence", 900.0, ac7);
  criterion("AC8", "determinism", 300.0, ac8);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
