#include "offdiag/cli/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "offdiag/fieldkit/lexer.hpp"

namespace offdiag {

const KvValue* KvValue::find(std::string_view key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

const char* kv_kind_name(KvValue::Kind k) {
  switch (k) {
    case KvValue::Kind::Number: return "number";
    case KvValue::Kind::String: return "string";
    case KvValue::Kind::Word: return "word";
    case KvValue::Kind::List: return "list";
    case KvValue::Kind::Table: return "table";
  }
  return "?";
}

namespace {

class KvParser {
 public:
  explicit KvParser(std::string_view src)
      : toks_(tokenize(src, LexOptions{.newlines = true, .comments = true, .strings = true})) {}

  KvValue document() {
    KvValue root;
    entries(root, TokKind::End);
    return root;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  void skip_separators() {
    while (peek().kind == TokKind::Newline || peek().kind == TokKind::Comma) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what, const Token& t) const {
    throw SyntaxError(what + ", found " + (t.kind == TokKind::End ? std::string("end of input") : "'" + t.text + "'"),
                      t.offset, t.line);
  }

  void entries(KvValue& table, TokKind close) {
    table.kind = KvValue::Kind::Table;
    for (;;) {
      skip_separators();
      if (peek().kind == close) {
        ++pos_;
        return;
      }
      const Token& key = next();
      if (key.kind != TokKind::Ident && key.kind != TokKind::String) fail("expected a key", key);
      for (const auto& e : table.entries)
        if (e.first == key.text) throw SyntaxError("duplicate key '" + key.text + "'", key.offset, key.line);
      KvValue v;
      if (peek().kind == TokKind::Equals) {
        ++pos_;
        v = value();
      } else if (peek().kind == TokKind::LBrace) {
        v = value();
      } else {
        fail("expected '=' or '{' after '" + key.text + "'", peek());
      }
      table.entries.emplace_back(key.text, std::move(v));
      const Token& t = peek();
      if (t.kind != TokKind::Newline && t.kind != TokKind::Comma && t.kind != close)
        fail("expected a newline or ',' between entries", t);
    }
  }

  KvValue value() {
    while (peek().kind == TokKind::Newline) ++pos_;
    const Token& t = next();
    KvValue v;
    v.offset = t.offset;
    v.line = t.line;
    switch (t.kind) {
      case TokKind::Number:
        v.kind = KvValue::Kind::Number;
        v.number = t.number;
        return v;
      case TokKind::Minus:
      case TokKind::Plus: {
        const Token& n = next();
        if (n.kind != TokKind::Number) fail("expected a number after the sign", n);
        v.kind = KvValue::Kind::Number;
        v.number = t.kind == TokKind::Minus ? -n.number : n.number;
        return v;
      }
      case TokKind::String:
        v.kind = KvValue::Kind::String;
        v.text = t.text;
        return v;
      case TokKind::Ident: {
        // bare words may contain '-' (afdm-lc, inverse-h4)
        v.kind = KvValue::Kind::Word;
        v.text = t.text;
        while (peek().kind == TokKind::Minus && pos_ + 1 < toks_.size() &&
               toks_[pos_ + 1].kind == TokKind::Ident && peek().offset == t.offset + v.text.size() &&
               toks_[pos_ + 1].offset == peek().offset + 1) {
          ++pos_;
          v.text += "-" + next().text;
        }
        return v;
      }
      case TokKind::LBracket:
        v.kind = KvValue::Kind::List;
        for (;;) {
          skip_separators();
          if (peek().kind == TokKind::RBracket) {
            ++pos_;
            return v;
          }
          v.items.push_back(value());
          const Token& s = peek();
          if (s.kind != TokKind::Comma && s.kind != TokKind::Newline && s.kind != TokKind::RBracket)
            fail("expected ',' or ']' in list", s);
        }
      case TokKind::LBrace:
        entries(v, TokKind::RBrace);
        return v;
      default:
        fail("expected a value", t);
    }
  }
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  out += s;
  out += '"';
  return out;
}

bool bare_word(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  char prev = 0;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    if (c == '-' && prev == '-') return false;
    prev = c;
  }
  return s.back() != '-';
}

std::string number_text(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s == "inf" || s == "-inf" || s == "nan" || s == "-nan") return quote(s);
  return s;
}

void write_value(std::ostringstream& os, const KvValue& v, int indent);

void write_entries(std::ostringstream& os, const KvValue& t, int indent) {
  for (const auto& [k, v] : t.entries) {
    os << std::string(static_cast<std::size_t>(indent), ' ') << (bare_word(k) && k.find('-') == std::string::npos ? k : quote(k));
    if (v.kind == KvValue::Kind::Table) {
      os << " {\n";
      write_entries(os, v, indent + 2);
      os << std::string(static_cast<std::size_t>(indent), ' ') << "}\n";
    } else {
      os << " = ";
      write_value(os, v, indent);
      os << "\n";
    }
  }
}

void write_value(std::ostringstream& os, const KvValue& v, int indent) {
  switch (v.kind) {
    case KvValue::Kind::Number: os << number_text(v.number); break;
    case KvValue::Kind::String: os << quote(v.text); break;
    case KvValue::Kind::Word: os << (bare_word(v.text) ? v.text : quote(v.text)); break;
    case KvValue::Kind::List:
      os << "[";
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) os << ", ";
        write_value(os, v.items[i], indent);
      }
      os << "]";
      break;
    case KvValue::Kind::Table:
      os << "{\n";
      write_entries(os, v, indent + 2);
      os << std::string(static_cast<std::size_t>(indent), ' ') << "}";
      break;
  }
}

}  // namespace

KvValue parse_kv(std::string_view src) { return KvParser(src).document(); }

std::string write_kv(const KvValue& root) {
  std::ostringstream os;
  write_entries(os, root, 0);
  return os.str();
}

std::string format_diagnostic(const Diagnostic& d, const std::string& file) {
  std::string out = file;
  if (d.line > 0) out += ":" + std::to_string(d.line);
  out += ": ";
  if (!d.path.empty()) out += d.path + ": ";
  return out + d.message;
}

double Scenario::constant(const std::string& key, double fallback) const {
  auto it = constants.find(key);
  return it == constants.end() ? fallback : it->second;
}

const Expr* Scenario::expression(const std::string& key) const {
  auto it = expressions.find(key);
  return it == expressions.end() ? nullptr : &it->second;
}

std::string Scenario::option(const std::string& key, const std::string& fallback) const {
  auto it = options.find(key);
  return it == options.end() ? fallback : it->second;
}

bool Scenario::wants(const std::string& output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

namespace {

constexpr double kOptional = std::numeric_limits<double>::quiet_NaN();

std::vector<KindSchema> build_schemas() {
  const VarSet st = VarSet::spacetime();
  std::vector<KindSchema> s;
  s.push_back({"afdm-lc",
               "Levi-Civita branch from PhiCheck; Einstein, LC, decoupled-system, torsion and Bianchi residuals",
               {"Lambda"},
               {},
               {"PhiCheck"},
               {"psi", "psiBoundary", "hUpsilon", "vUpsilon", "n", "a"},
               st,
               true,
               {},
               {"einstein_residual", "afdm", "torsion"},
               2,
               {{"einstein", 1e-6}, {"lc", 1e-8}, {"system", 1e-6}, {"torsion", 1e-8}, {"divergence", 1e-5}}});
  s.push_back({"afdm-torsionful",
               "torsionful family from PhiHat; decoupled-system residuals and the induced torsion",
               {"Lambda"},
               {"eps3", "eps4", "t0"},
               {"PhiHat"},
               {"psi", "psiBoundary", "hUpsilon", "vUpsilon", "n1_1", "n1_2", "n2_1", "n2_2", "a"},
               st,
               true,
               {{"omega", {"unit", "inverse-h4"}}},
               {"afdm", "torsion"},
               1,
               {{"system", 1e-6}, {"torsion_min", kOptional}, {"lc", kOptional}}});
  s.push_back({"epsilon-family",
               "small off-diagonal deformation of a rescaled FLRW metric",
               {"eps"},
               {},
               {"a"},
               {"chi3", "n1", "n2", "w1", "w2"},
               st,
               true,
               {},
               {"epsilon"},
               1,
               {{"flrw_limit", 1e-12}, {"lc", kOptional}}});
  s.push_back({"dedm",
               "coupled dark energy and dark matter; attractor trials and the Big Rip exponent",
               {},
               {"varpi", "Q", "rho0_DE", "rho0_DM", "kappa2", "a0", "t0", "t1", "samples", "trials", "rip"},
               {},
               {},
               {},
               false,
               {{"coupling", {"de", "dm"}}},
               {"dedm", "attractor", "bigrip"},
               2,
               {{"bookkeeping", 1e-4}, {"attractor_H", 0.01}, {"attractor_ratio", 0.01}, {"rip_exponent", 0.01}}});
  s.push_back({"lcdm-reconstruct",
               "hypergeometric reconstruction of the LCDM expansion",
               {},
               {"H0", "rho0", "a0", "kappa2", "zeta0", "zeta1", "samples", "rows"},
               {},
               {},
               {},
               false,
               {{"chi", {"derived", "printed"}}},
               {"lcdm", "model"},
               1,
               {{"f1gen", 1e-6}, {"ode", 1e-8}, {"rhat", 1e-10}}});
  s.push_back({"powerlaw-reconstruct",
               "Euler-type reconstruction for a phantom power-law expansion and the power-law curvature inversion",
               {"w_ph"},
               {"t_s", "a0", "c", "q_s", "q_p", "rows"},
               {},
               {},
               {},
               false,
               {{"convention", {"inverse", "linear"}}},
               {"euler", "roundtrip", "model"},
               1,
               {{"indicial", 1e-12}, {"rip", 1e-12}, {"euler_ode", 1e-8}, {"roundtrip", 1e-10}}});
  s.push_back({"fgt-reconstruct",
               "F(P) + G(T) model: characteristic exponents of the de Sitter reduction and model tables",
               {},
               {"xi", "H0", "kappa2", "c1", "c2", "c3", "c4", "constant", "arg_lo", "arg_hi", "rows"},
               {},
               {},
               {},
               false,
               {{"exponents", {"derived", "printed"}}},
               {"roots", "fgt", "model"},
               2,
               {{"roots", 1e-10}, {"exponent_match", kOptional}}});
  s.push_back({"stability",
               "oscillator criterion, perturbation evolution and the homogeneous divergence relation",
               {},
               {"Xi0", "P0", "T0", "f1_1", "F1", "F2", "mL", "kappa2", "dP0", "dPdot0", "t0", "t1", "samples",
                "source"},
               {"H"},
               {"dR", "rho", "p"},
               {Var::T},
               false,
               {{"expect", {"any", "trivial", "damped", "oscillatory", "growing"}}},
               {"perturbation", "divergence"},
               1,
               {{"damping", 0.02}, {"trivial", 0.0}, {"divergence", 1e-8}, {"class", 0.0}}});
  s.push_back({"residual-audit",
               "Einstein, LC, torsion and Bianchi residuals of a d-metric given in closed form",
               {"Lambda"},
               {},
               {"g1", "g2", "h3", "h4"},
               {"n1", "n2", "w1", "w2", "omega"},
               st,
               true,
               {{"connection", {"levi-civita", "canonical"}}},
               {"einstein_residual", "torsion"},
               1,
               {{"einstein", 1e-6}, {"bianchi", 1e-5}, {"lc", kOptional}, {"torsion", kOptional}}});
  return s;
}

const std::set<std::string_view> kTopLevel = {"name",    "kind",    "description", "seed",      "constants",
                                              "expressions", "grid", "options",     "outputs", "tolerances"};

class Validator {
 public:
  Validator(std::string_view text, ValidationReport& out) : text_(text), out_(out) {}

  void error(const std::string& path, const std::string& msg, const KvValue* at = nullptr) {
    out_.diagnostics.push_back({path, msg, at ? at->offset : 0, at ? at->line : 0});
  }

  void error_at(const std::string& path, const std::string& msg, std::size_t offset) {
    int line = 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(std::min(offset, text_.size())), '\n'));
    out_.diagnostics.push_back({path, msg, offset, line});
  }

  const KvValue* table(const KvValue& root, const char* key) {
    const KvValue* v = root.find(key);
    if (v && v->kind != KvValue::Kind::Table) {
      error(std::string("/") + key, std::string("expected a table, found a ") + kv_kind_name(v->kind), v);
      return nullptr;
    }
    return v;
  }

  // constants may be numbers or constant DSL expressions over earlier constants
  void constants(const KvValue* t, Scenario& s) {
    if (!t) return;
    for (const auto& [k, v] : t->entries) {
      std::string path = "/constants/" + k;
      if (v.kind == KvValue::Kind::Number) {
        s.constants[k] = v.number;
      } else if (v.is_text()) {
        try {
          Expr e = parse_expression(v.text, VarSet{}, &s.constants);
          s.constants[k] = e.eval(std::array<double, kNumVars>{});
        } catch (const SyntaxError& err) {
          error_at(path, std::string("parse error: ") + err.what(), v.offset + 1 + err.offset());
        }
      } else {
        error(path, std::string("expected a number, found a ") + kv_kind_name(v.kind), &v);
      }
    }
  }

  void expressions(const KvValue* t, const KindSchema& k, Scenario& s) {
    if (t) {
      for (const auto& [key, v] : t->entries) {
        std::string path = "/expressions/" + key;
        bool known = std::find(k.required_expressions.begin(), k.required_expressions.end(), key) !=
                         k.required_expressions.end() ||
                     std::find(k.optional_expressions.begin(), k.optional_expressions.end(), key) !=
                         k.optional_expressions.end();
        if (!known) {
          error(path, "unknown expression '" + key + "' for kind " + std::string(k.kind), &v);
          continue;
        }
        std::string text;
        if (v.is_text())
          text = v.text;
        else if (v.kind == KvValue::Kind::Number)
          text = number_text(v.number);
        else {
          error(path, std::string("expected an expression string, found a ") + kv_kind_name(v.kind), &v);
          continue;
        }
        try {
          s.expressions[key] = parse_expression(text, k.vars, &s.constants);
          s.expression_text[key] = text;
        } catch (const SyntaxError& err) {
          std::size_t base = v.kind == KvValue::Kind::String ? v.offset + 1 : v.offset;
          error_at(path, "parse error: " + std::string(err.what()) + " (offset " + std::to_string(err.offset()) +
                             " in \"" + text + "\")",
                   base + err.offset());
        }
      }
    }
    for (auto req : k.required_expressions)
      if (!t || !t->find(req)) error("/expressions", "missing required key '" + std::string(req) + "'", t);
  }

  void grid(const KvValue* g, const KindSchema& k, Scenario& s) {
    if (!g) {
      if (k.needs_grid) error("/grid", "missing required table 'grid'");
      return;
    }
    Axis axes[3];
    const char* names[3] = {"x1", "x2", "t"};
    bool good = true;
    for (int a = 0; a < 3; ++a) {
      std::string path = std::string("/grid/") + names[a];
      const KvValue* v = g->find(names[a]);
      if (!v) {
        error("/grid", std::string("missing required key '") + names[a] + "'", g);
        good = false;
        continue;
      }
      if (v->kind != KvValue::Kind::List || v->items.size() != 3) {
        error(path, "expected [lo, hi, n]", v);
        good = false;
        continue;
      }
      for (int i = 0; i < 3; ++i)
        if (v->items[static_cast<std::size_t>(i)].kind != KvValue::Kind::Number) {
          error(path + "/" + std::to_string(i), "expected a number", &v->items[static_cast<std::size_t>(i)]);
          good = false;
        }
      if (!good) continue;
      double n = v->items[2].number;
      if (n != std::floor(n) || n < 4 || n > 1e6) {
        error(path + "/2", "node count must be an integer >= 4", &v->items[2]);
        good = false;
        continue;
      }
      axes[a] = Axis{v->items[0].number, v->items[1].number, static_cast<int>(n)};
      if (!(axes[a].hi > axes[a].lo)) {
        error(path, "need lo < hi", v);
        good = false;
      }
    }
    for (const auto& e : g->entries)
      if (e.first != "x1" && e.first != "x2" && e.first != "t") error("/grid/" + e.first, "unknown axis", &e.second);
    if (good) s.grid = Grid3(axes[0], axes[1], axes[2]);
  }

  void options(const KvValue* t, const KindSchema& k, Scenario& s) {
    for (const auto& o : k.options) s.options[std::string(o.key)] = std::string(o.values.front());
    if (!t) return;
    for (const auto& [key, v] : t->entries) {
      std::string path = "/options/" + key;
      auto it = std::find_if(k.options.begin(), k.options.end(), [&](const OptionSchema& o) { return o.key == key; });
      if (it == k.options.end()) {
        error(path, "unknown option for kind " + std::string(k.kind), &v);
        continue;
      }
      if (!v.is_text() || std::find(it->values.begin(), it->values.end(), v.text) == it->values.end()) {
        std::string allowed;
        for (auto a : it->values) allowed += (allowed.empty() ? "" : ", ") + std::string(a);
        error(path, "expected one of {" + allowed + "}", &v);
        continue;
      }
      s.options[key] = v.text;
    }
  }

  void outputs(const KvValue* v, const KindSchema& k, Scenario& s) {
    if (!v) {
      for (int i = 0; i < k.default_outputs && i < static_cast<int>(k.outputs.size()); ++i)
        s.outputs.emplace_back(k.outputs[static_cast<std::size_t>(i)]);
      return;
    }
    if (v->kind != KvValue::Kind::List) {
      error("/outputs", "expected a list", v);
      return;
    }
    for (std::size_t i = 0; i < v->items.size(); ++i) {
      const KvValue& it = v->items[i];
      std::string path = "/outputs/" + std::to_string(i);
      if (!it.is_text()) {
        error(path, "expected a table name", &it);
        continue;
      }
      if (std::find(k.outputs.begin(), k.outputs.end(), it.text) == k.outputs.end()) {
        error(path, "unknown output '" + it.text + "' for kind " + std::string(k.kind), &it);
        continue;
      }
      if (!s.wants(it.text)) s.outputs.push_back(it.text);
    }
  }

  void tolerances(const KvValue* t, const KindSchema& k, Scenario& s) {
    for (const auto& [name, def] : k.tolerances)
      if (!std::isnan(def)) s.tolerances[std::string(name)] = def;
    if (!t) return;
    for (const auto& [key, v] : t->entries) {
      std::string path = "/tolerances/" + key;
      auto it = std::find_if(k.tolerances.begin(), k.tolerances.end(), [&](const auto& p) { return p.first == key; });
      if (it == k.tolerances.end()) {
        error(path, "unknown residual for kind " + std::string(k.kind), &v);
        continue;
      }
      if (v.is_text() && v.text == "off") {
        s.tolerances.erase(key);
        s.ungated.push_back(key);
        continue;
      }
      if (v.kind != KvValue::Kind::Number || !(v.number >= 0)) {
        error(path, "expected a non-negative number or off", &v);
        continue;
      }
      s.tolerances[key] = v.number;
    }
  }

 private:
  std::string_view text_;
  ValidationReport& out_;
};

}  // namespace

const std::vector<KindSchema>& kind_schemas() {
  static const std::vector<KindSchema> s = build_schemas();
  return s;
}

const KindSchema* find_kind(std::string_view kind) {
  for (const auto& k : kind_schemas())
    if (k.kind == kind) return &k;
  return nullptr;
}

ValidationReport validate_scenario_text(std::string_view text, const std::string& name) {
  ValidationReport out;
  Validator val(text, out);
  KvValue root;
  try {
    root = parse_kv(text);
  } catch (const SyntaxError& e) {
    val.error_at("", e.what(), e.offset());
    return out;
  }

  Scenario s;
  s.name = name;
  s.source = std::string(text);
  for (const auto& [k, v] : root.entries)
    if (!kTopLevel.count(k)) val.error("/" + k, "unknown key", &v);

  if (const KvValue* n = root.find("name")) {
    if (n->is_text() && bare_word(n->text))
      s.name = n->text;
    else
      val.error("/name", "expected a word of letters, digits, '_' or '-'", n);
  }
  if (const KvValue* d = root.find("description")) {
    if (d->is_text())
      s.description = d->text;
    else
      val.error("/description", "expected a string", d);
  }
  if (const KvValue* sd = root.find("seed")) {
    if (sd->kind == KvValue::Kind::Number && sd->number >= 0 && sd->number == std::floor(sd->number) &&
        sd->number < 9007199254740992.0)
      s.seed = static_cast<std::uint64_t>(sd->number);
    else
      val.error("/seed", "expected a non-negative integer", sd);
  }

  const KvValue* kind = root.find("kind");
  const KindSchema* schema = nullptr;
  if (!kind) {
    val.error("", "missing required key 'kind'");
  } else if (!kind->is_text() || !(schema = find_kind(kind->text))) {
    std::string allowed;
    for (const auto& k : kind_schemas()) allowed += (allowed.empty() ? "" : ", ") + std::string(k.kind);
    val.error("/kind", "expected one of {" + allowed + "}", kind);
  }

  const KvValue* consts = val.table(root, "constants");
  val.constants(consts, s);
  if (schema) {
    s.kind = std::string(schema->kind);
    for (auto req : schema->required_constants)
      if (!s.constants.count(std::string(req)) && !(consts && consts->find(req)))
        val.error("/constants", "missing required key '" + std::string(req) + "'", consts);
    val.expressions(val.table(root, "expressions"), *schema, s);
    val.grid(val.table(root, "grid"), *schema, s);
    val.options(val.table(root, "options"), *schema, s);
    val.outputs(root.find("outputs"), *schema, s);
    val.tolerances(val.table(root, "tolerances"), *schema, s);
  }
  if (out.diagnostics.empty()) out.scenario = std::move(s);
  return out;
}

ValidationReport validate_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ValidationReport out;
    out.diagnostics.push_back({"", "cannot read file", 0, 0});
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return validate_scenario_text(ss.str(), path.stem().string());
}

}  // namespace offdiag
