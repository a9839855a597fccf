#include "fracnls/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace fracnls::io {

std::uint64_t config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

namespace {

json exponent_value(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

double exponent_from(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return INFINITY;
    throw std::invalid_argument("exponent must be a number or \"inf\"");
  }
  return j.get<double>();
}

}  // namespace

json to_json(const NormSpec& spec) {
  return {{"kind", to_string(spec.kind)},
          {"s", spec.s},
          {"p", exponent_value(spec.p)},
          {"q", exponent_value(spec.q)},
          {"homogeneous", spec.homogeneous}};
}

NormSpec norm_spec_from_json(const json& j) {
  NormSpec spec;
  spec.kind = norm_kind_from_string(j.at("kind").get<std::string>());
  spec.s = j.value("s", 0.0);
  if (j.contains("p")) spec.p = exponent_from(j.at("p"));
  if (j.contains("q")) spec.q = exponent_from(j.at("q"));
  spec.homogeneous = j.value("homogeneous", true);
  spec.validate();
  return spec;
}

json to_json(const ExponentSet& e) {
  json j = {{"gamma", e.gamma},
            {"rho", e.rho},
            {"sigma", e.sigma},
            {"time_gain", e.time_gain},
            {"criticality", to_string(e.criticality)}};
  j["q0"] = e.q0 ? json(*e.q0) : json(nullptr);
  j["r0"] = e.r0 ? json(*e.r0) : json(nullptr);
  return j;
}

CsvWriter::CsvWriter(std::ostream& out, const std::string& hash,
                     const std::vector<std::string>& columns)
    : out_(out), columns_(columns.size()) {
  out_ << "# config_hash=" << hash << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
}

void write_field_csv(std::ostream& out, const Field& f, const std::string& hash) {
  out << "# config_hash=" << hash << '\n';
  out << "# dim=" << f.grid().dim() << " points=" << f.grid().points()
      << " period=" << format_double(f.grid().period()) << '\n';
  out << "index,re,im\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    out << i << ',' << format_double(f[i].real()) << ',' << format_double(f[i].imag()) << '\n';
}

namespace {

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("truncated field file");
  return v;
}

}  // namespace

void write_field_binary(std::ostream& out, const Field& f, const std::string& hash) {
  out.write("FNLS", 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(hash.size()));
  out.write(hash.data(), static_cast<std::streamsize>(hash.size()));
  put<std::int32_t>(out, f.grid().dim());
  put<std::int32_t>(out, f.grid().points());
  put<double>(out, f.grid().period());
  for (const auto& v : f.values()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
}

Field read_field_binary(std::istream& in, std::string* hash) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "FNLS", 4) != 0) throw std::runtime_error("not a field file");
  const auto n = get<std::uint32_t>(in);
  std::string h(n, '\0');
  in.read(h.data(), n);
  const int dim = get<std::int32_t>(in);
  const int points = get<std::int32_t>(in);
  const double period = get<double>(in);
  Grid grid(dim, points, period);
  std::vector<Complex> values(grid.size());
  for (auto& v : values) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    v = {re, im};
  }
  if (hash) *hash = h;
  return Field(grid, std::move(values));
}

}  // namespace fracnls::io
