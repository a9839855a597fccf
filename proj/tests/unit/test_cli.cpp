#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracnls/cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fracnls");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Run r;
  r.code = fracnls::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fracnls_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<double>> csv_rows(const fs::path& p) {
  std::istringstream in(read_file(p));
  std::string line;
  std::vector<std::vector<double>> rows;
  std::getline(in, line);  // hash
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

json base_config(double lambda) {
  return {{"grid", {{"dim", 1}, {"points", 128}, {"period", 50.26548245743669}}},
          {"problem", {{"s", 0.4}, {"alpha", 2.0}, {"lambda", lambda}}},
          {"initial", {{"type", "gaussian"}, {"amplitude", 1.0}, {"width", 1.0}}},
          {"solver", {{"integrator", "picard"}, {"T", 0.25}, {"nt", 64}, {"tol", 1e-12}}}};
}

}  // namespace

TEST_CASE("exponents subcommand") {
  const Run ok = run({"exponents", "--N", "2", "--s", "0.5", "--alpha", "2"});
  CHECK(ok.code == fracnls::kExitOk);
  const json j = json::parse(ok.out).at("exponents");
  CHECK(j.at("gamma").get<double>() == doctest::Approx(8.0));
  CHECK(j.at("rho").get<double>() == doctest::Approx(8.0 / 3.0));
  CHECK(j.at("sigma").get<double>() == doctest::Approx(8.0));
  CHECK(j.at("criticality") == "subcritical");

  const Run bad = run({"exponents", "--N", "1", "--s", "0.6", "--alpha", "2"});
  CHECK(bad.code == fracnls::kExitConfigError);
  CHECK(json::parse(bad.err).at("hypothesis") == "regularity");
}

TEST_CASE("selftest passes and detects a broken partition") {
  CHECK(run({"selftest"}).code == fracnls::kExitOk);
  CHECK(run({"selftest", "--partition-ratio", "2.1"}).code == fracnls::kExitTestFailure);
}

TEST_CASE("verify-pointwise") {
  const Run r = run({"verify-pointwise", "--alpha", "0.5", "2", "--pairs", "20000"});
  CHECK(r.code == fracnls::kExitOk);
  const json j = json::parse(r.out);
  REQUIRE(j.size() >= 2);
}

TEST_CASE("usage and config errors exit with code 2") {
  const fs::path dir = scratch_dir("errors");
  CHECK(run({}).code == fracnls::kExitConfigError);
  CHECK(run({"frobnicate"}).code == fracnls::kExitConfigError);
  CHECK(run({"solve"}).code == fracnls::kExitConfigError);
  CHECK(run({"solve", "--config", (dir / "missing.json").string()}).code ==
        fracnls::kExitConfigError);
  CHECK(run({"solve", "--config", write_file(dir, "empty.json", "").string()}).code ==
        fracnls::kExitConfigError);
  CHECK(run({"solve", "--config", write_file(dir, "bad.json", "{\"grid\": ").string()}).code ==
        fracnls::kExitConfigError);
  json no_grid = base_config(1.0);
  no_grid.erase("grid");
  CHECK(run({"solve", "--config", write_file(dir, "nogrid.json", no_grid.dump()).string()}).code ==
        fracnls::kExitConfigError);
  json bad_s = base_config(1.0);
  bad_s["problem"]["s"] = 0.6;
  const Run r = run({"solve", "--config", write_file(dir, "bad_s.json", bad_s.dump()).string(),
                     "--out", dir.string()});
  CHECK(r.code == fracnls::kExitConfigError);
  CHECK(json::parse(r.err).at("error") == "hypothesis_violation");
}

TEST_CASE("solve writes norms with a constant H^s column for the linear flow") {
  const fs::path dir = scratch_dir("solve");
  const fs::path cfg = write_file(dir, "config.json", base_config(0.0).dump());
  const Run r = run({"solve", "--config", cfg.string(), "--out", dir.string()});
  REQUIRE(r.code == fracnls::kExitOk);
  const auto rows = csv_rows(dir / "norms.csv");
  REQUIRE(rows.size() == 65);
  for (const auto& row : rows) CHECK(row[2] == doctest::Approx(rows[0][2]).epsilon(1e-12));
  CHECK(read_file(dir / "norms.csv").rfind("# config_hash=", 0) == 0);
  const json summary = json::parse(read_file(dir / "solve.json"));
  CHECK(summary.at("iterations") == 1);
}

TEST_CASE("non-convergence exits with code 3") {
  const fs::path dir = scratch_dir("nonconv");
  json cfg = base_config(1.0);
  cfg["initial"]["amplitude"] = 2.0;
  cfg["solver"]["T"] = 1.0;
  cfg["solver"]["max_iter"] = 3;
  const Run r = run({"solve", "--config", write_file(dir, "config.json", cfg.dump()).string(),
                     "--out", dir.string()});
  CHECK(r.code == fracnls::kExitNonConvergence);
}

TEST_CASE("dependence emits K + 1 rows, a summary and deterministic CSV") {
  const fs::path dir = scratch_dir("dependence");
  json cfg = base_config(1.0);
  cfg["family"] = {{"eps0", 1.0}, {"K", 5}};
  cfg["remainder"] = {{"stride", 16}, {"theta_nodes", 16}};
  const fs::path path = write_file(dir, "config.json", cfg.dump());
  const fs::path a = dir / "a", b = dir / "b";
  REQUIRE(run({"dependence", "--config", path.string(), "--out", a.string()}).code == fracnls::kExitOk);
  REQUIRE(run({"--threads", "1", "dependence", "--config", path.string(), "--out", b.string()}).code ==
          fracnls::kExitOk);
  REQUIRE(run({"--threads", "1", "dependence", "--config", path.string(), "--out", a.string()}).code ==
          fracnls::kExitOk);

  CHECK(csv_rows(a / "dependence.csv").size() == 6);
  CHECK(csv_rows(a / "remainder_decay.csv").size() == 6);
  const json summary = json::parse(read_file(a / "summary.json"));
  CHECK(summary.at("rows").size() == 6);
  CHECK(summary.contains("slope"));
  CHECK(summary.at("lipschitz_constant").contains("sup_Hs"));

  CHECK(read_file(a / "dependence.csv") == read_file(b / "dependence.csv"));
  CHECK(read_file(a / "remainder_decay.csv") == read_file(b / "remainder_decay.csv"));
}

TEST_CASE("remainder subcommand") {
  const fs::path dir = scratch_dir("remainder");
  json cfg = base_config(1.0);
  cfg["family"] = {{"K", 4}};
  cfg["theta_nodes"] = 16;
  REQUIRE(run({"remainder", "--config", write_file(dir, "config.json", cfg.dump()).string(), "--out",
               dir.string()})
              .code == fracnls::kExitOk);
  CHECK(csv_rows(dir / "remainder.csv").size() == 5);
  const json summary = json::parse(read_file(dir / "remainder.json"));
  CHECK(summary.at("monotone") == true);
  CHECK(summary.at("sigma").get<double>() == doctest::Approx(20.0));
}
