#include "fracnls/cli.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "fracnls/dependence.hpp"
#include "fracnls/exponents.hpp"
#include "fracnls/function_spaces.hpp"
#include "fracnls/io.hpp"
#include "fracnls/nonlinearity.hpp"
#include "fracnls/selftest.hpp"
#include "fracnls/solver.hpp"

namespace fracnls {
namespace {

namespace fs = std::filesystem;
using cli::ConfigError;
using io::json;

struct Context {
  std::ostream& out;
  std::ostream& err;
};

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + (dir / name).string());
  return f;
}

void write_json(const fs::path& dir, const std::string& name, const json& j) {
  auto f = open_output(dir, name);
  f << j.dump(2) << '\n';
}

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

NormSpec besov_rho(double s, double rho) {
  NormSpec spec;
  spec.kind = NormKind::besov_lp;
  spec.s = s;
  spec.p = rho;
  spec.q = 2.0;
  spec.homogeneous = true;
  return spec;
}

// ---------------------------------------------------------------------------

int cmd_exponents(Context& ctx, int N, double s, double alpha, double A) {
  ProblemParams p;
  p.N = N;
  p.s = s;
  p.alpha = alpha;
  p.A = A;
  const ExponentSet e = exponent_set(p);
  json j = {{"inputs", {{"N", N}, {"s", s}, {"alpha", alpha}, {"A", A}}},
            {"exponents", io::to_json(e)}};
  ctx.out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_selftest(Context& ctx, double ratio, std::uint64_t seed) {
  SelftestOptions opt;
  opt.partition_ratio = ratio;
  opt.seed = seed;
  int failed = 0;
  for (const auto& suite : run_selftest(opt)) {
    ctx.out << "suite " << suite.name << ": " << suite.passed << " passed, " << suite.failed
            << " failed\n";
    for (const auto& f : suite.failures) ctx.out << "  FAIL " << f << '\n';
    failed += suite.failed;
  }
  return failed == 0 ? kExitOk : kExitTestFailure;
}

int cmd_verify_pointwise(Context& ctx, const std::vector<double>& alphas, long pairs,
                         std::uint64_t seed, double radius, const std::string& out_path) {
  if (pairs < 1) throw ConfigError("--pairs must be positive");
  json inputs = {{"alphas", alphas}, {"pairs", pairs}, {"seed", seed}, {"radius", radius}};
  json values = json::object(), violations = json::object();
  long total = 0;
  for (double alpha : alphas) {
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    const PointwiseSweep sw = sweep_pointwise(alpha, pairs, seed, radius);
    char key[32];
    std::snprintf(key, sizeof key, "%g", alpha);
    values[key] = {{"modulus_constant", sw.modulus_constant},
                   {"phase_constant", sw.phase_constant},
                   {"modulus_worst_ratio", sw.modulus_worst},
                   {"phase_worst_ratio", sw.phase_worst}};
    violations[key] = {{"modulus", sw.modulus_violations}, {"phase", sw.phase_violations}};
    total += sw.modulus_violations + sw.phase_violations;
  }
  json report = {{"config_hash", io::hash_hex(io::config_hash(inputs))},
                 {"inputs", inputs},
                 {"values", values},
                 {"violations", violations}};
  if (out_path.empty()) {
    ctx.out << report.dump(2) << '\n';
  } else {
    const fs::path p(out_path);
    write_json(p.parent_path().empty() ? fs::path(".") : p.parent_path(),
               p.filename().string(), report);
  }
  return total == 0 ? kExitOk : kExitTestFailure;
}

int cmd_solve(Context& ctx, const std::string& config_path, const fs::path& out_dir) {
  const json cfg = cli::load_config(config_path);
  const std::string hash = io::hash_hex(io::config_hash(cfg));
  const Grid grid = cli::grid_from(cfg.at("grid"));
  const ProblemParams params = cli::params_from(cfg.at("problem"), grid.dim());
  const ExponentSet e = exponent_set(params);
  const Field phi = cli::initial_from(cfg.at("initial"), grid);
  const json& solver_cfg = cfg.at("solver");
  const SolverSettings settings = cli::solver_from(solver_cfg);

  const Solution sol = solve(phi, params, settings);
  const Trajectory& traj = sol.trajectory;
  const NormSpec besov = besov_rho(params.s, e.rho);

  {
    auto f = open_output(out_dir, "norms.csv");
    io::CsvWriter csv(f, hash, {"t", "L2", "Hs", "Besov_rho"});
    for (std::size_t m = 0; m < traj.slices.size(); ++m) {
      const Field& u = traj.slices[m];
      csv.row({traj.time_grid.time(static_cast<int>(m)), lebesgue_norm(u, 2.0),
               sobolev_norm(u, params.s, false), besov_norm_lp(u, besov)});
    }
  }

  if (cfg.contains("snapshots")) {
    const json& snap = cfg.at("snapshots");
    const int every = snap.value("every", settings.nt);
    const std::string format = snap.value("format", "csv");
    if (every < 1) throw ConfigError("snapshots.every must be >= 1");
    if (format != "csv" && format != "binary") throw ConfigError("snapshots.format: csv | binary");
    for (std::size_t m = 0; m < traj.slices.size(); m += every) {
      char name[48];
      std::snprintf(name, sizeof name, "snapshot_%06zu.%s", m, format == "csv" ? "csv" : "bin");
      auto f = open_output(out_dir, name);
      if (format == "csv")
        io::write_field_csv(f, traj.slices[m], hash);
      else
        io::write_field_binary(f, traj.slices[m], hash);
    }
  }

  json summary = {{"config_hash", hash},
                  {"integrator", to_string(settings.integrator)},
                  {"exponents", io::to_json(e)},
                  {"horizon", traj.time_grid.horizon()},
                  {"slices", traj.slices.size()}};
  if (sol.picard) {
    summary["iterations"] = sol.picard->iterations;
    summary["distances"] = sol.picard->distances;
    summary["ratios"] = sol.picard->ratios;
    summary["backoffs"] = sol.picard->backoffs;
  }
  if (solver_cfg.contains("blowup_factor")) {
    const double factor = solver_cfg.at("blowup_factor").get<double>();
    const double threshold = factor * sobolev_norm(phi, params.s, false);
    const auto t = detect_blowup(traj, threshold, params.s);
    summary["blowup_threshold"] = threshold;
    summary["blowup_time"] = t ? json(*t) : json(nullptr);
  }
  write_json(out_dir, "solve.json", summary);
  ctx.out << "wrote " << (out_dir / "norms.csv").string() << '\n';
  return kExitOk;
}

json lipschitz_json(const DependenceReport& r, Column c) {
  const LipschitzEstimate est = lipschitz_constant(r, c);
  return {{"constant", est.constant},
          {"first_half_max", est.first_half_max},
          {"second_half_max", est.second_half_max},
          {"bounded", est.bounded()}};
}

int cmd_dependence(Context& ctx, const std::string& config_path, const fs::path& out_dir) {
  const json cfg = cli::load_config(config_path);
  const std::string hash = io::hash_hex(io::config_hash(cfg));
  const Grid grid = cli::grid_from(cfg.at("grid"));
  const ProblemParams params = cli::params_from(cfg.at("problem"), grid.dim());
  exponent_set(params);
  const SolverSettings settings = cli::solver_from(cfg.at("solver"));
  const json fam = cfg.value("family", json::object());

  PerturbationFamily family{cli::initial_from(cfg.at("initial"), grid), Field(grid),
                            fam.value("eps0", 1.0), fam.value("K", 8)};
  family.direction = default_direction(family.base, params.s, fam.value("shift", 1.0));

  const DependenceReport report = run_dependence(params, family, settings);
  {
    auto f = open_output(out_dir, "dependence.csv");
    io::CsvWriter csv(f, hash,
                      {"k", "eps", "in_Hs", "out_sup_Hs", "out_Lgamma_Besov", "out_Lgamma_Lsigma",
                       "slope_running"});
    for (const auto& row : report.rows)
      csv.row({static_cast<double>(row.k), row.eps, row.in_Hs, row.out_sup_Hs,
               row.out_Lgamma_Besov, row.out_Lgamma_Lsigma, row.slope_running});
  }

  json rows_flags = json::array();
  for (const auto& row : report.rows) {
    json r = {{"k", row.k}, {"converged", row.converged}, {"iterations", row.iterations},
              {"flags", row.flags}};
    if (row.cross_check_gap) r["cross_check_gap"] = *row.cross_check_gap;
    rows_flags.push_back(r);
  }
  json summary = {{"config_hash", hash},
                  {"exponents", io::to_json(report.exponents)},
                  {"smallness_base", report.smallness_base},
                  {"smallness_worst", report.smallness_worst},
                  {"flags", report.flags},
                  {"rows", rows_flags},
                  {"lipschitz_constant",
                   {{"sup_Hs", lipschitz_json(report, Column::sup_Hs)},
                    {"Lgamma_Besov", lipschitz_json(report, Column::Lgamma_Besov)},
                    {"Lgamma_Lsigma", lipschitz_json(report, Column::Lgamma_Lsigma)}}}};
  if (report.fit) {
    summary["slope"] = report.fit->slope;
    summary["intercept"] = report.fit->intercept;
    summary["r2"] = report.fit->r_squared;
  } else {
    summary["slope"] = nullptr;
    summary["r2"] = nullptr;
  }

  if (cfg.contains("remainder")) {
    const json& rc = cfg.at("remainder");
    RemainderOptions opt;
    opt.stride = rc.value("stride", opt.stride);
    opt.theta_nodes = rc.value("theta_nodes", opt.theta_nodes);
    if (rc.contains("quadrature")) opt.y_quadrature = cli::quadrature_from(rc.at("quadrature"));
    const auto rows = remainder_decay_experiment(params, family, settings, opt);
    auto f = open_output(out_dir, "remainder_decay.csv");
    io::CsvWriter csv(f, hash, {"k", "eps", "K_time_norm"});
    for (const auto& r : rows) csv.row({static_cast<double>(r.k), r.eps, r.K_time_norm});
  }
  write_json(out_dir, "summary.json", summary);
  ctx.out << "wrote " << (out_dir / "dependence.csv").string() << '\n';
  return kExitOk;
}

int cmd_remainder(Context& ctx, const std::string& config_path, const fs::path& out_dir) {
  const json cfg = cli::load_config(config_path);
  const std::string hash = io::hash_hex(io::config_hash(cfg));
  const Grid grid = cli::grid_from(cfg.at("grid"));
  const ProblemParams params = cli::params_from(cfg.at("problem"), grid.dim());
  const ExponentSet e = exponent_set(params);
  const json fam = cfg.value("family", json::object());
  const Field u = cli::initial_from(cfg.at("initial"), grid);
  const Field psi = default_direction(u, params.s, fam.value("shift", 1.0));
  const double eps0 = fam.value("eps0", 1.0);
  const int K = fam.value("K", 8);
  const int theta_nodes = cfg.value("theta_nodes", 64);
  const QuadratureSpec quad =
      cfg.contains("quadrature") ? cli::quadrature_from(cfg.at("quadrature")) : QuadratureSpec{};

  RemainderSpec spec;
  spec.s = params.s;
  spec.p = dual(e.rho);
  spec.r = e.rho;
  spec.q = 2.0;
  if (cfg.contains("exponents")) {
    const json& x = cfg.at("exponents");
    spec.p = x.value("p", spec.p);
    spec.q = x.value("q", spec.q);
    spec.r = x.value("r", spec.r);
  }
  PowerNonlinearity nl = power_nonlinearity(params);

  auto f = open_output(out_dir, "remainder.csv");
  io::CsvWriter csv(f, hash, {"k", "eps", "K", "lhs", "lipschitz_term", "diff_besov_r"});
  std::vector<double> ks;
  for (int k = 0; k <= K; ++k) {
    const double eps = eps0 * std::ldexp(1.0, -k);
    const Field v = u + Complex(eps) * psi;
    const BesovDifferenceReport r = besov_difference_report(u, v, nl, spec, theta_nodes, quad);
    ks.push_back(r.K_term);
    csv.row({static_cast<double>(k), eps, r.K_term, r.lhs, r.lipschitz_term, r.diff_besov_r});
  }
  bool monotone = true;
  for (std::size_t i = 1; i < ks.size(); ++i) monotone = monotone && ks[i] < ks[i - 1];
  json summary = {{"config_hash", hash},
                  {"spec", {{"s", spec.s}, {"p", spec.p}, {"q", spec.q}, {"r", spec.r}}},
                  {"sigma", remainder_sigma(spec, params.alpha)},
                  {"monotone", monotone},
                  {"final_over_initial", ks.front() > 0.0 ? nullable(ks.back() / ks.front())
                                                          : json(nullptr)}};
  write_json(out_dir, "remainder.json", summary);
  ctx.out << "wrote " << (out_dir / "remainder.csv").string() << '\n';
  return kExitOk;
}

void apply_threads(int requested, std::ostream& err) {
  int threads = requested;
  if (const char* env = std::getenv("FRACNLS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      threads = static_cast<int>(v);
    else
      err << "ignoring invalid FRACNLS_THREADS=" << env << '\n';
  }
  if (threads > 0) omp_set_num_threads(threads);
}

int report_error(Context& ctx, const json& j, int code) {
  ctx.err << j.dump() << '\n';
  return code;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  Context ctx{out, err};
  CLI::App app{"Pseudospectral NLS laboratory in fractional Sobolev and Besov spaces", "fracnls"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (FRACNLS_THREADS overrides)");

  auto* exp = app.add_subcommand("exponents", "Print the derived exponent set as JSON");
  int N = 1;
  double s = 0.5, alpha = 2.0, A = 0.0;
  exp->add_option("--N", N, "Spatial dimension")->required();
  exp->add_option("--s", s, "Regularity")->required();
  exp->add_option("--alpha", alpha, "Nonlinearity power")->required();
  exp->add_option("--A", A, "Linear growth constant");

  auto* st = app.add_subcommand("selftest", "Run the built-in invariant suite");
  double ratio = 2.0;
  std::uint64_t seed = 12345;
  st->add_option("--partition-ratio", ratio, "Dyadic ratio under test (fault injection)");
  st->add_option("--seed", seed, "Random seed");

  auto* vp = app.add_subcommand("verify-pointwise", "Random sweep of the pointwise inequalities");
  std::vector<double> alphas{0.5, 1.0, 2.0, 3.0};
  long pairs = 1000000;
  double radius = 4.0;
  std::string vp_out;
  vp->add_option("--alpha", alphas, "Powers to test");
  vp->add_option("--pairs", pairs, "Random pairs per power");
  vp->add_option("--seed", seed, "Random seed");
  vp->add_option("--radius", radius, "Sampling radius");
  vp->add_option("--out", vp_out, "Write the JSON report here instead of stdout");

  std::string config;
  std::string out_dir = ".";
  auto add_experiment = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--out", out_dir, "Output directory");
    return sub;
  };
  auto* rem = add_experiment("remainder", "Remainder K and difference bound along a static family");
  auto* sol = add_experiment("solve", "Integrate one initial datum");
  auto* dep = add_experiment("dependence", "Continuous-dependence experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }
  apply_threads(threads, err);

  try {
    if (*exp) return cmd_exponents(ctx, N, s, alpha, A);
    if (*st) return cmd_selftest(ctx, ratio, seed);
    if (*vp) return cmd_verify_pointwise(ctx, alphas, pairs, seed, radius, vp_out);
    if (*rem) return cmd_remainder(ctx, config, out_dir);
    if (*sol) return cmd_solve(ctx, config, out_dir);
    if (*dep) return cmd_dependence(ctx, config, out_dir);
  } catch (const HypothesisViolation& e) {
    return report_error(ctx,
                        {{"error", "hypothesis_violation"},
                         {"hypothesis", to_string(e.which())},
                         {"detail", e.what()}},
                        kExitConfigError);
  } catch (const NonConvergence& e) {
    return report_error(ctx,
                        {{"error", "non_convergence"},
                         {"detail", e.what()},
                         {"distances", e.report().distances}},
                        kExitNonConvergence);
  } catch (const BlowUp& e) {
    return report_error(ctx, {{"error", "blow_up"}, {"detail", e.what()}, {"time", e.time()}},
                        kExitNonConvergence);
  } catch (const ConfigError& e) {
    return report_error(ctx, {{"error", "config"}, {"detail", e.what()}}, kExitConfigError);
  } catch (const json::exception& e) {
    return report_error(ctx, {{"error", "config"}, {"detail", e.what()}}, kExitConfigError);
  } catch (const std::invalid_argument& e) {
    return report_error(ctx, {{"error", "config"}, {"detail", e.what()}}, kExitConfigError);
  }
  return kExitConfigError;
}

}  // namespace fracnls
