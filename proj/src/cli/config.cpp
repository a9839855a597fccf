#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace fracnls::cli {
namespace {

std::vector<double> per_axis(const json& j, const char* key, int dim, double fallback) {
  std::vector<double> out(dim, fallback);
  if (!j.contains(key)) return out;
  const json& v = j.at(key);
  if (v.is_number()) {
    out.assign(dim, v.get<double>());
  } else {
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
      throw ConfigError(std::string("'") + key + "' must be a number or a list of length dim");
    for (int a = 0; a < dim; ++a) out[a] = v[a].get<double>();
  }
  return out;
}

}  // namespace

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw ConfigError("config file is empty: " + path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!j.is_object() || j.empty()) throw ConfigError("config must be a non-empty JSON object");
  return j;
}

Grid grid_from(const json& j) {
  return Grid(j.at("dim").get<int>(), j.at("points").get<int>(), j.at("period").get<double>());
}

ProblemParams params_from(const json& j, int N) {
  ProblemParams p;
  p.N = N;
  p.s = j.at("s").get<double>();
  p.alpha = j.at("alpha").get<double>();
  if (j.contains("lambda")) {
    const json& l = j.at("lambda");
    if (l.is_array()) {
      if (l.size() != 2) throw ConfigError("'lambda' must be a number or [re, im]");
      p.lambda = {l[0].get<double>(), l[1].get<double>()};
    } else {
      p.lambda = l.get<double>();
    }
  }
  p.A = j.value("A", 0.0);
  p.B = j.value("B", std::abs(p.lambda) * (1.0 + p.alpha));
  return p;
}

Field initial_from(const json& j, const Grid& grid) {
  const std::string type = j.value("type", "gaussian");
  const int dim = grid.dim();
  if (type == "zero") return Field(grid);
  if (type == "gaussian") {
    const double amplitude = j.value("amplitude", 1.0);
    const double width = j.value("width", 1.0);
    const auto center = per_axis(j, "center", dim, 0.0);
    const auto k = per_axis(j, "wavenumber", dim, 0.0);
    if (!(width > 0.0)) throw ConfigError("gaussian width must be positive");
    return Field::sample(grid, [&](std::span<const double> x) {
      double r2 = 0.0, phase = 0.0;
      for (int a = 0; a < dim; ++a) {
        r2 += (x[a] - center[a]) * (x[a] - center[a]);
        phase += k[a] * x[a];
      }
      return amplitude * std::exp(-r2 / (width * width)) * std::polar(1.0, phase);
    });
  }
  if (type == "plane_wave") {
    const double amplitude = j.value("amplitude", 1.0);
    const auto k = per_axis(j, "wavenumber", dim, 1.0);
    return Field::sample(grid, [&](std::span<const double> x) {
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += k[a] * x[a];
      return amplitude * std::polar(1.0, phase);
    });
  }
  throw ConfigError("unknown initial datum type: " + type);
}

SolverSettings solver_from(const json& j) {
  SolverSettings s;
  s.integrator = integrator_from_string(j.value("integrator", "picard"));
  s.T = j.at("T").get<double>();
  s.nt = j.value("nt", s.nt);
  s.split_dt = j.value("dt", s.T / s.nt);
  s.picard.tol = j.value("tol", s.picard.tol);
  s.picard.max_iter = j.value("max_iter", s.picard.max_iter);
  s.picard.smallness_delta = j.value("smallness_delta", s.picard.smallness_delta);
  s.picard.backoff_attempts = j.value("backoff_attempts", 0);
  s.picard.dealias = j.value("dealias", false);
  s.cross_check = j.value("cross_check", false);
  s.cross_check_tol = j.value("cross_check_tol", s.cross_check_tol);
  if (!(s.T > 0.0) || s.nt < 2) throw ConfigError("solver needs T > 0 and nt >= 2");
  return s;
}

QuadratureSpec quadrature_from(const json& j) {
  QuadratureSpec q;
  q.shells = j.value("shells", q.shells);
  q.angles = j.value("angles", q.angles);
  q.inner_factor = j.value("inner_factor", q.inner_factor);
  return q;
}

}  // namespace fracnls::cli
