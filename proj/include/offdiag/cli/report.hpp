#pragma once
// Result tables, residual records, CSV / JSON emission and the run manifest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "offdiag/reconstruct/reconstruct.hpp"

namespace offdiag {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// Header row, RFC 4180 quoting, doubles as %.17g, CRLF-free.
std::string to_csv(const Table& t);
/// {"name": ..., "columns": [...], "rows": [[...], ...]}; non-finite values become null.
std::string to_json(const Table& t);

/// A gated residual passes when value <= tolerance (value >= tolerance for
/// lower bounds); residuals without a tolerance are informational.
struct Residual {
  std::string name;
  double value = 0.0;
  std::optional<double> tolerance;
  bool lower_bound = false;
  std::string note;

  bool gated() const { return tolerance.has_value(); }
  bool pass() const;
};

std::string sha256_hex(const std::string& bytes);

struct OutputFile {
  std::string path;  // relative to the scenario output directory
  std::string sha256;
  long long bytes = 0;
};

struct RunManifest {
  std::string scenario, kind;
  std::string scenario_sha256;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string format;
  std::string started, finished;  // ISO 8601 UTC
  std::vector<Residual> residuals;
  std::vector<OutputFile> outputs;
  std::string error;  // module error with scenario context, empty on success
  bool pass = false;

  std::string to_json() const;
};

/// ISO 8601 UTC time; SOURCE_DATE_EPOCH replaces the clock when set.
std::string manifest_timestamp();

/// FModel as a key-value document and back. Custom ODE coefficients are not
/// serializable.
std::string serialize_fmodel(const FModel& m);
FModel parse_fmodel(const std::string& text);

}  // namespace offdiag
