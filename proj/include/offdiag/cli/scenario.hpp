#pragma once
// Scenario files: a key-value tree read with the DSL tokenizer, and the
// per-kind schema used to validate it (grammar in docs/grammar.md).

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "offdiag/fieldkit/expr.hpp"
#include "offdiag/fieldkit/grid.hpp"

namespace offdiag {

struct KvValue {
  enum class Kind { Number, String, Word, List, Table };
  Kind kind = Kind::Table;
  double number = 0.0;
  std::string text;  // String and Word
  std::vector<KvValue> items;
  std::vector<std::pair<std::string, KvValue>> entries;  // file order
  std::size_t offset = 0;
  int line = 1;

  const KvValue* find(std::string_view key) const;
  bool is_text() const { return kind == Kind::String || kind == Kind::Word; }
};

const char* kv_kind_name(KvValue::Kind k);

/// Parses a whole document into a root table. Throws SyntaxError; duplicate
/// keys are syntax errors.
KvValue parse_kv(std::string_view src);

/// Canonical text of a tree; parse_kv(write_kv(v)) reproduces v up to offsets.
std::string write_kv(const KvValue& root);

struct Diagnostic {
  std::string path;  // JSON-pointer style, "" for the document
  std::string message;
  std::size_t offset = 0;  // byte offset in the file
  int line = 0;            // 0 when unknown
};

std::string format_diagnostic(const Diagnostic& d, const std::string& file);

struct Scenario {
  std::string name;
  std::string kind;
  std::string description;
  std::uint64_t seed = 0;
  ConstantTable constants;
  std::map<std::string, std::string> expression_text;
  std::map<std::string, Expr> expressions;
  std::map<std::string, std::string> options;
  std::optional<Grid3> grid;
  std::vector<std::string> outputs;
  std::map<std::string, double> tolerances;  // scenario values merged over the kind defaults
  std::vector<std::string> ungated;          // residuals the scenario marked "off"
  std::string source;                        // raw bytes, hashed into the manifest

  double constant(const std::string& key, double fallback) const;
  bool has_constant(const std::string& key) const { return constants.count(key) != 0; }
  const Expr* expression(const std::string& key) const;
  std::string option(const std::string& key, const std::string& fallback) const;
  bool wants(const std::string& output) const;
};

struct OptionSchema {
  std::string_view key;
  std::vector<std::string_view> values;  // first is the default
};

struct KindSchema {
  std::string_view kind;
  std::string_view summary;
  std::vector<std::string_view> required_constants;
  std::vector<std::string_view> optional_constants;
  std::vector<std::string_view> required_expressions;
  std::vector<std::string_view> optional_expressions;
  VarSet vars;
  bool needs_grid = false;
  std::vector<OptionSchema> options;
  std::vector<std::string_view> outputs;  // first entries are the defaults when "outputs" is absent
  int default_outputs = 1;
  std::vector<std::pair<std::string_view, double>> tolerances;
};

const std::vector<KindSchema>& kind_schemas();
const KindSchema* find_kind(std::string_view kind);

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;
  std::optional<Scenario> scenario;  // set iff there are no diagnostics
  bool ok() const { return diagnostics.empty(); }
};

ValidationReport validate_scenario_text(std::string_view text, const std::string& name);
/// I/O failures are reported as a diagnostic on the document.
ValidationReport validate_scenario_file(const std::filesystem::path& path);

}  // namespace offdiag
