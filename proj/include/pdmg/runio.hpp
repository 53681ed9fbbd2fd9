#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pdmg/errors.hpp"

namespace pdmg {

// Parse a mesh width or time step given as a unit fraction.  Accepts "p/q"
// (e.g. "1/256") or a plain decimal (e.g. "0.00390625" or "0.25"); in both
// cases the value must be the reciprocal of a positive integer, which is
// returned exactly.  Throws ConfigError otherwise.
int parse_reciprocal(const std::string& text);

// Parse a real number with full error checking.
double parse_real(const std::string& text);

// Format a double with enough digits to round-trip comfortably (>= 12
// significant digits).
std::string format_sig(double v);

// FNV-1a 64-bit hash, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

// Reproducibility manifest emitted at the top of every CSV: the subcommand,
// the fully resolved parameter set, the artifact version, and a hash of the
// canonical serialization of all of the above.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::string version;

  void add(std::string key, std::string value) {
    parameters.emplace_back(std::move(key), std::move(value));
  }

  // Canonical one-line serialization (the hash input).
  std::string canonical() const;
  std::string hash() const { return fnv1a_hex(canonical()); }

  // '#'-prefixed comment block placed before the CSV header.
  void write_comments(std::ostream& os) const;
};

// Minimal CSV emitter: comment block, one header row, then data rows.  All
// numeric content is formatted deterministically via format_sig.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const RunManifest& manifest, std::vector<std::string> columns);

  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
  size_t ncols_;
};

}  // namespace pdmg
