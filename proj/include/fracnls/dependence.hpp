#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracnls/exponents.hpp"
#include "fracnls/grid.hpp"
#include "fracnls/nonlinearity.hpp"
#include "fracnls/quadrature.hpp"
#include "fracnls/solver.hpp"
#include "fracnls/trajectory.hpp"

namespace fracnls {

/// Data phi + eps_k psi with eps_k = eps0 2^{-k}, k = 0..K.
struct PerturbationFamily {
  Field base;
  Field direction;
  double eps0 = 1.0;
  int K = 8;

  double scale(int k) const;
  Field member(int k) const;
};

/// Gaussian centred at `shift` on every axis, made L^2-orthogonal to `base`
/// and normalized to ||psi||_{H^s} = 1.
Field default_direction(const Field& base, double s, double shift = 1.0);

enum class Integrator { picard, split_step };

std::string to_string(Integrator i);
Integrator integrator_from_string(const std::string& name);

struct SolverSettings {
  Integrator integrator = Integrator::picard;
  double T = 0.25;
  int nt = 256;             ///< recorded slices; Picard time grid
  double split_dt = 1e-3;   ///< split-step step; T/split_dt must be a multiple of nt
  PicardConfig picard;      ///< metric_pair is overwritten with (gamma, rho)
  bool cross_check = false; ///< also run the other integrator per row
  double cross_check_tol = 1e-4;
};

/// Solves with the configured integrator on the grid TimeGrid(T, nt).
struct Solution {
  Trajectory trajectory;
  std::optional<IterationReport> picard;
};
Solution solve(const Field& phi, const ProblemParams& params, const SolverSettings& settings);

/// The power nonlinearity lambda |u|^alpha u of params.
PowerNonlinearity power_nonlinearity(const ProblemParams& params);

struct DependenceRow {
  int k = 0;
  double eps = 0.0;
  double in_Hs = 0.0;
  double out_sup_Hs = 0.0;
  double out_Lgamma_Besov = 0.0;
  double out_Lgamma_Lsigma = 0.0;
  double slope_running = 0.0;  ///< least-squares slope of sup-H^s vs input over rows 0..k
  bool converged = true;
  int iterations = 0;
  std::optional<double> cross_check_gap;  ///< sup_t L^2 gap between integrators
  std::vector<std::string> flags;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

enum class Column { sup_Hs, Lgamma_Besov, Lgamma_Lsigma };

struct DependenceReport {
  ExponentSet exponents;
  std::vector<DependenceRow> rows;
  std::optional<SlopeFit> fit;  ///< sup-H^s column
  double smallness_base = 0.0;
  double smallness_worst = 0.0;
  std::vector<std::string> flags;
};

/// One solve per scale plus the base solve; rows are computed in parallel.
DependenceReport run_dependence(const ProblemParams& params, const PerturbationFamily& family,
                                const SolverSettings& settings);

/// Least-squares fit of log(out) against log(in) over rows with positive finite
/// values. Throws std::invalid_argument with fewer than 4 such rows.
SlopeFit fit_slope(const std::vector<double>& in, const std::vector<double>& out);
SlopeFit fit_slope(const DependenceReport& report, Column column = Column::sup_Hs);

double column_value(const DependenceRow& row, Column column);

struct LipschitzEstimate {
  double constant = 0.0;          ///< max output/input over valid rows
  double first_half_max = 0.0;    ///< large-eps half
  double second_half_max = 0.0;   ///< small-eps half
  bool bounded(double factor = 1.25) const { return second_half_max <= factor * first_half_max; }
};

LipschitzEstimate lipschitz_constant(const DependenceReport& report,
                                     Column column = Column::sup_Hs);

struct RemainderOptions {
  int stride = 32;  ///< K evaluated on every stride-th slice; must divide nt
  int theta_nodes = 32;
  QuadratureSpec y_quadrature;
  /// Nonlinearity inside K; defaults to the flow's, or lambda = 1 when the flow is linear.
  std::optional<PowerNonlinearity> probe;
};

struct RemainderRow {
  int k = 0;
  double eps = 0.0;
  double K_time_norm = 0.0;  ///< ||K(u, u_k)||_{L^{gamma'}(0,T)}
};

/// K(u(t), u_k(t)) with exponents p = rho', r = rho, q = 2, integrated in time.
std::vector<RemainderRow> remainder_decay_experiment(const ProblemParams& params,
                                                     const PerturbationFamily& family,
                                                     const SolverSettings& settings,
                                                     const RemainderOptions& options = {});

}  // namespace fracnls
