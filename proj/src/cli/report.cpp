#include "offdiag/cli/report.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <json.hpp>
#include <stdexcept>

#include "offdiag/cli/scenario.hpp"
#include "offdiag/fieldkit/lexer.hpp"

namespace offdiag {

using nlohmann::ordered_json;

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("row width does not match the header of " + name);
  rows.push_back(std::move(row));
}

namespace {

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return fmt_double(*d);
  if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

ordered_json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return std::isfinite(*d) ? ordered_json(*d) : ordered_json(nullptr);
  if (const long long* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

ordered_json number_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_field(t.columns[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(cell_text(row[i]));
    out += "\n";
  }
  return out;
}

std::string to_json(const Table& t) {
  ordered_json j;
  j["name"] = t.name;
  j["columns"] = t.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json r = ordered_json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(1) + "\n";
}

bool Residual::pass() const {
  if (!tolerance) return true;
  if (std::isnan(value)) return false;
  return lower_bound ? value >= *tolerance : value <= *tolerance;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string manifest_timestamp() {
  std::time_t t;
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH"); e && *e) {
    char* end = nullptr;
    long long v = std::strtoll(e, &end, 10);
    if (*end != '\0') throw std::runtime_error("SOURCE_DATE_EPOCH is not an integer");
    t = static_cast<std::time_t>(v);
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string RunManifest::to_json() const {
  ordered_json j;
  j["scenario"] = scenario;
  j["kind"] = kind;
  j["scenario_sha256"] = scenario_sha256;
  j["tool_version"] = tool_version;
  j["seed"] = seed;
  j["format"] = format;
  j["timestamps"] = {{"started", started}, {"finished", finished}};
  ordered_json rs = ordered_json::array();
  for (const auto& r : residuals) {
    ordered_json e;
    e["name"] = r.name;
    e["value"] = number_or_null(r.value);
    e["tolerance"] = r.tolerance ? number_or_null(*r.tolerance) : ordered_json(nullptr);
    if (r.lower_bound) e["bound"] = "lower";
    e["status"] = !r.gated() ? "info" : r.pass() ? "pass" : "fail";
    if (!r.note.empty()) e["note"] = r.note;
    rs.push_back(std::move(e));
  }
  j["residuals"] = std::move(rs);
  ordered_json os = ordered_json::array();
  for (const auto& f : outputs) os.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["outputs"] = std::move(os);
  if (!error.empty()) j["error"] = error;
  j["status"] = pass ? "pass" : "fail";
  return j.dump(2) + "\n";
}

namespace {

KvValue num(double x) {
  KvValue v;
  v.kind = KvValue::Kind::Number;
  v.number = x;
  return v;
}

KvValue word(const std::string& s) {
  KvValue v;
  v.kind = KvValue::Kind::Word;
  v.text = s;
  return v;
}

KvValue list(const std::vector<double>& xs) {
  KvValue v;
  v.kind = KvValue::Kind::List;
  for (double x : xs) v.items.push_back(num(x));
  return v;
}

KvValue table() {
  KvValue v;
  v.kind = KvValue::Kind::Table;
  return v;
}

void put(KvValue& t, const std::string& k, KvValue v) { t.entries.emplace_back(k, std::move(v)); }

KvValue coeffs(const FgtCoefficients& c) {
  KvValue t = table();
  put(t, "real", list(c.real));
  put(t, "cos", num(c.cos));
  put(t, "sin", num(c.sin));
  put(t, "constant", num(c.constant));
  return t;
}

const KvValue& need(const KvValue& t, const char* key) {
  const KvValue* v = t.find(key);
  if (!v) throw std::runtime_error(std::string("model document lacks '") + key + "'");
  return *v;
}

double need_num(const KvValue& t, const char* key) {
  const KvValue& v = need(t, key);
  if (v.kind == KvValue::Kind::String && (v.text == "inf" || v.text == "-inf" || v.text == "nan"))
    return v.text == "nan" ? NAN : v.text == "inf" ? INFINITY : -INFINITY;
  if (v.kind != KvValue::Kind::Number) throw std::runtime_error(std::string("'") + key + "' must be a number");
  return v.number;
}

std::vector<double> need_list(const KvValue& t, const char* key) {
  const KvValue& v = need(t, key);
  if (v.kind != KvValue::Kind::List) throw std::runtime_error(std::string("'") + key + "' must be a list");
  std::vector<double> out;
  for (const auto& x : v.items) {
    if (x.kind != KvValue::Kind::Number) throw std::runtime_error(std::string("'") + key + "' must hold numbers");
    out.push_back(x.number);
  }
  return out;
}

ChiConstants chi_from(const std::vector<double>& c) {
  if (c.size() != 3) throw std::runtime_error("chi needs three entries");
  return {c[0], c[1], c[2]};
}

FgtCoefficients coeffs_from(const KvValue& t) {
  FgtCoefficients c;
  c.real = need_list(t, "real");
  c.cos = need_num(t, "cos");
  c.sin = need_num(t, "sin");
  c.constant = need_num(t, "constant");
  return c;
}

}  // namespace

std::string serialize_fmodel(const FModel& m) {
  KvValue root = table();
  put(root, "model", word(fmodel_kind(m)));
  if (const auto* p = std::get_if<PowerLaw>(&m)) {
    put(root, "Cp", num(p->Cp));
    put(root, "Cm", num(p->Cm));
    put(root, "mp", num(p->mp));
    put(root, "mm", num(p->mm));
  } else if (const auto* g = std::get_if<GaussSolution>(&m)) {
    put(root, "A", num(g->A));
    put(root, "B", num(g->B));
    put(root, "chi", list({g->chi.chi1, g->chi.chi2, g->chi.chi3}));
    put(root, "H0", num(g->H0));
  } else if (const auto* f = std::get_if<FgtModel>(&m)) {
    KvValue e = table();
    put(e, "real", list(f->e.real));
    put(e, "pair", list({f->e.pair_re, f->e.pair_im}));
    put(e, "linear", num(f->e.linear));
    put(root, "exponents", std::move(e));
    put(root, "F", coeffs(f->F));
    put(root, "G", coeffs(f->G));
    put(root, "xi", num(f->xi));
    put(root, "H0", num(f->H0));
    put(root, "kappa2", num(f->kappa2));
  } else {
    const auto& t = std::get<Tabulated>(m);
    if (t.spec.kind == Ode2Kind::Custom) throw std::runtime_error("custom ODE coefficients cannot be serialized");
    KvValue o = table();
    put(o, "kind", word(ode2_kind_name(t.spec.kind)));
    put(o, "chi", list({t.spec.chi.chi1, t.spec.chi.chi2, t.spec.chi.chi3}));
    put(o, "H0", num(t.spec.H0));
    put(o, "q_s", num(t.spec.q_s));
    put(o, "q_p", num(t.spec.q_p));
    put(o, "A", num(t.spec.A));
    put(o, "B", num(t.spec.B));
    put(root, "ode", std::move(o));
    put(root, "s", list(t.s));
    put(root, "f", list(t.f));
    put(root, "fp", list(t.fp));
  }
  return write_kv(root);
}

FModel parse_fmodel(const std::string& text) {
  KvValue root = parse_kv(text);
  const KvValue& kind = need(root, "model");
  if (!kind.is_text()) throw std::runtime_error("'model' must be a word");
  const std::string& k = kind.text;
  if (k == fmodel_kind(PowerLaw{})) {
    return PowerLaw{need_num(root, "Cp"), need_num(root, "Cm"), need_num(root, "mp"), need_num(root, "mm")};
  }
  if (k == fmodel_kind(GaussSolution{})) {
    GaussSolution g;
    g.A = need_num(root, "A");
    g.B = need_num(root, "B");
    g.chi = chi_from(need_list(root, "chi"));
    g.H0 = need_num(root, "H0");
    return g;
  }
  if (k == fmodel_kind(FgtModel{})) {
    FgtModel f;
    const KvValue& e = need(root, "exponents");
    f.e.real = need_list(e, "real");
    auto pair = need_list(e, "pair");
    if (pair.size() != 2) throw std::runtime_error("'pair' needs two entries");
    f.e.pair_re = pair[0];
    f.e.pair_im = pair[1];
    f.e.linear = need_num(e, "linear");
    f.F = coeffs_from(need(root, "F"));
    f.G = coeffs_from(need(root, "G"));
    f.xi = need_num(root, "xi");
    f.H0 = need_num(root, "H0");
    f.kappa2 = need_num(root, "kappa2");
    return f;
  }
  if (k == fmodel_kind(Tabulated{})) {
    Tabulated t;
    const KvValue& o = need(root, "ode");
    const KvValue& ok = need(o, "kind");
    bool found = false;
    for (Ode2Kind c : {Ode2Kind::Gauss, Ode2Kind::YEquation, Ode2Kind::Euler})
      if (ok.is_text() && ok.text == ode2_kind_name(c)) {
        t.spec.kind = c;
        found = true;
      }
    if (!found) throw std::runtime_error("unknown ODE kind in model document");
    t.spec.chi = chi_from(need_list(o, "chi"));
    t.spec.H0 = need_num(o, "H0");
    t.spec.q_s = need_num(o, "q_s");
    t.spec.q_p = need_num(o, "q_p");
    t.spec.A = need_num(o, "A");
    t.spec.B = need_num(o, "B");
    t.s = need_list(root, "s");
    t.f = need_list(root, "f");
    t.fp = need_list(root, "fp");
    if (t.s.size() != t.f.size() || t.s.size() != t.fp.size() || t.s.size() < 8)
      throw std::runtime_error("tabulated model needs at least 8 matching samples");
    return t;
  }
  throw std::runtime_error("unknown model kind '" + k + "'");
}

}  // namespace offdiag
