#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracnls/exponents.hpp"
#include "fracnls/function_spaces.hpp"
#include "fracnls/grid.hpp"

namespace fracnls::io {

using json = nlohmann::json;

/// FNV-1a 64-bit hash of the compact JSON dump (keys sorted by nlohmann).
std::uint64_t config_hash(const json& config);
std::string hash_hex(std::uint64_t hash);

/// %.16e, i.e. 17 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double x);

json to_json(const NormSpec& spec);
NormSpec norm_spec_from_json(const json& j);
json to_json(const ExponentSet& e);

/// CSV with a leading "# config_hash=<hex>" line.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::string& hash, const std::vector<std::string>& columns);
  /// Numeric row; the cell count must match the header.
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

/// (index, re, im) rows.
void write_field_csv(std::ostream& out, const Field& f, const std::string& hash);
/// "FNLS" magic, hash length and bytes, dim, points, period, then the samples
/// as (re, im) doubles in host byte order.
void write_field_binary(std::ostream& out, const Field& f, const std::string& hash);
Field read_field_binary(std::istream& in, std::string* hash = nullptr);

}  // namespace fracnls::io
