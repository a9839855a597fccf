#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fracnls/dependence.hpp"
#include "fracnls/exponents.hpp"
#include "fracnls/grid.hpp"
#include "fracnls/quadrature.hpp"

namespace fracnls::cli {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a JSON object from path. Missing, empty or malformed files raise ConfigError.
json load_config(const std::string& path);

/// {"dim", "points", "period"}
Grid grid_from(const json& j);
/// {"s", "alpha", "lambda": number | [re, im], "A", "B"}; N comes from the grid.
ProblemParams params_from(const json& j, int N);
/// {"type": "gaussian" | "plane_wave" | "zero", ...}
Field initial_from(const json& j, const Grid& grid);
/// {"integrator", "T", "nt", "dt", "tol", "max_iter", "smallness_delta",
///  "backoff_attempts", "dealias", "cross_check", "cross_check_tol"}
SolverSettings solver_from(const json& j);
/// {"shells", "angles", "inner_factor"}
QuadratureSpec quadrature_from(const json& j);

}  // namespace fracnls::cli
