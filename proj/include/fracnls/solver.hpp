#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracnls/grid.hpp"
#include "fracnls/nonlinearity.hpp"
#include "fracnls/trajectory.hpp"

namespace fracnls {

struct PicardConfig {
  double tol = 1e-10;
  int max_iter = 100;
  /// (gamma, rho): the iteration distance is ||u - v||_{L^gamma((0,T), L^rho)}.
  std::pair<double, double> metric_pair{8.0, 8.0 / 3.0};
  double smallness_delta = 0.1;
  /// Apply the 2/3 rule to each g(u(t_l)) before integrating. Off by default:
  /// it removes mass from the nonlinear term and breaks exact conservation.
  bool dealias = false;
  /// On non-convergence or a non-finite iterate, retry this many times with T
  /// (and smallness_delta) halved.
  int backoff_attempts = 0;

  /// Throws std::invalid_argument unless tol > 0, max_iter >= 1 and the metric
  /// pair is admissible in dimension N.
  void validate(int N) const;
};

struct IterationReport {
  std::vector<double> distances;     ///< d(u^{k+1}, u^k), k = 0, 1, ...
  std::vector<double> ratios;        ///< distances[k] / distances[k-1]
  std::vector<double> sup_l2_steps;  ///< sup_t ||u^{k+1}(t) - u^k(t)||_{L^2}
  int iterations = 0;
  bool converged = false;
  double horizon = 0.0;  ///< T actually solved on (after any backoff)
  double smallness_delta = 0.0;
  int backoffs = 0;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public SolverError {
 public:
  NonConvergence(const std::string& what, IterationReport report)
      : SolverError(what), report_(std::move(report)) {}
  const IterationReport& report() const { return report_; }

 private:
  IterationReport report_;
};

class BlowUp : public SolverError {
 public:
  BlowUp(const std::string& what, double time) : SolverError(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

struct PicardResult {
  Trajectory trajectory;
  IterationReport report;
};

/// Fixed-point iteration of the Duhamel map
///   u(t) = e^{it Laplacian} phi + i int_0^t e^{i(t-s) Laplacian} g(u(s)) ds
/// on the slices of tg, starting from the free evolution, with the s-integral
/// done by the trapezoid rule. Throws NonConvergence after max_iter sweeps
/// (and all backoffs), BlowUp if an iterate stops being finite.
PicardResult picard_duhamel(const Field& phi, const Nonlinearity& nl, const TimeGrid& tg,
                            const PicardConfig& cfg);

/// Strang splitting: half free step, exact pointwise flow of u_t = i g(u), half
/// free step. T must be a multiple of dt; every record_every-th step is stored.
/// Throws BlowUp if the modulus ODE blows up inside a step.
Trajectory split_step(const Field& phi, const PowerNonlinearity& nl, double T, double dt,
                      int record_every = 1);

/// ||e^{it Laplacian} phi||_{L^gamma((0,T), B^s_{rho,2})} with (gamma, rho) =
/// cfg.metric_pair and the homogeneous Littlewood-Paley norm.
double smallness_check(const Field& phi, const TimeGrid& tg, const PicardConfig& cfg, double s);

/// First slice time with ||u(t_m)||_{H^s} > threshold. Throws
/// std::invalid_argument if threshold does not exceed the initial norm.
std::optional<double> detect_blowup(const Trajectory& traj, double threshold, double s);

}  // namespace fracnls
