#include "pdmg/runio.hpp"

#include <cmath>
#include <charconv>
#include <cstdio>

namespace pdmg {

double parse_real(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last)
    throw ConfigError("could not parse '" + text + "' as a number");
  return v;
}

int parse_reciprocal(const std::string& text) {
  double value = 0.0;
  const size_t slash = text.find('/');
  if (slash != std::string::npos) {
    const double num = parse_real(text.substr(0, slash));
    const double den = parse_real(text.substr(slash + 1));
    if (den == 0.0) throw ConfigError("division by zero in '" + text + "'");
    value = num / den;
  } else {
    value = parse_real(text);
  }
  if (!(value > 0.0) || !(value <= 0.5))
    throw ConfigError("'" + text + "' is out of range: need a value in (0, 1/2]");
  const double inv = 1.0 / value;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9 * rounded)
    throw ConfigError("'" + text + "' is not the reciprocal of an integer");
  return static_cast<int>(rounded);
}

std::string format_sig(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunManifest::canonical() const {
  std::string s = "command=" + command + ";version=" + version;
  for (const auto& [k, v] : parameters) s += ";" + k + "=" + v;
  return s;
}

void RunManifest::write_comments(std::ostream& os) const {
  os << "# pdmg " << command << " v" << version << "\n";
  os << "# manifest-hash: " << hash() << "\n";
  for (const auto& [k, v] : parameters) os << "# " << k << " = " << v << "\n";
}

CsvWriter::CsvWriter(std::ostream& os, const RunManifest& manifest,
                     std::vector<std::string> columns)
    : os_(os), ncols_(columns.size()) {
  manifest.write_comments(os_);
  for (size_t k = 0; k < columns.size(); ++k) os_ << (k ? "," : "") << columns[k];
  os_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != ncols_)
    throw ConfigError("CsvWriter: row has " + std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(ncols_));
  for (size_t k = 0; k < cells.size(); ++k) os_ << (k ? "," : "") << cells[k];
  os_ << "\n";
}

}  // namespace pdmg
