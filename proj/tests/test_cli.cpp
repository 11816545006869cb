#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "offdiag/cli/runner.hpp"
#include "offdiag/fieldkit/lexer.hpp"

using namespace offdiag;

namespace {

const std::filesystem::path kScenarios = OFFDIAG_TEST_SCENARIOS;

Scenario load(const std::string& name) {
  ValidationReport r = validate_scenario_file(kScenarios / (name + ".scn"));
  EXPECT_TRUE(r.ok()) << name;
  return *r.scenario;
}

RunOptions in_memory() {
  RunOptions o;
  o.write = false;
  return o;
}

const Table* find_table(const RunOutcome& r, const std::string& name) {
  for (const auto& t : r.tables)
    if (t.name == name) return &t;
  return nullptr;
}

bool mentions(const ValidationReport& r, const std::string& s) {
  for (const auto& d : r.diagnostics)
    if (d.path.find(s) != std::string::npos || d.message.find(s) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Kv, ParsesNestedValues) {
  KvValue v = parse_kv("a = 1\nb = \"x y\" # note\nc = afdm-lc\nd { e = [1, -2.5, w] }\n");
  ASSERT_EQ(v.entries.size(), 4u);
  EXPECT_DOUBLE_EQ(v.find("a")->number, 1.0);
  EXPECT_EQ(v.find("b")->text, "x y");
  EXPECT_EQ(v.find("c")->kind, KvValue::Kind::Word);
  EXPECT_EQ(v.find("c")->text, "afdm-lc");
  const KvValue* e = v.find("d")->find("e");
  ASSERT_EQ(e->items.size(), 3u);
  EXPECT_DOUBLE_EQ(e->items[1].number, -2.5);
  EXPECT_EQ(v.find("d")->line, 4);
}

TEST(Kv, WriteRoundTrip) {
  KvValue v = parse_kv("x = [1, 2]\nt { s = \"q\"\n k = -0.125 }\n");
  KvValue w = parse_kv(write_kv(v));
  EXPECT_EQ(write_kv(v), write_kv(w));
  EXPECT_DOUBLE_EQ(w.find("t")->find("k")->number, -0.125);
}

TEST(Kv, Errors) {
  EXPECT_THROW(parse_kv("a = 1\na = 2\n"), SyntaxError);
  EXPECT_THROW(parse_kv("a = [1, 2\n"), SyntaxError);
  EXPECT_THROW(parse_kv("= 3\n"), SyntaxError);
}

TEST(Validate, BundledCorpusIsValid) {
  auto files = list_scenarios(kScenarios);
  EXPECT_GE(files.size(), 10u);
  for (const auto& f : files) {
    ValidationReport r = validate_scenario_file(f);
    EXPECT_TRUE(r.ok()) << f << ": " << (r.ok() ? "" : r.diagnostics[0].message);
  }
}

TEST(Validate, MissingRequiredConstantNamed) {
  ValidationReport r = validate_scenario_text(
      "kind = afdm-lc\nexpressions { PhiCheck = \"exp(x1 + t)\" }\n"
      "grid {\n x1 = [0, 1, 5]\n x2 = [0, 1, 5]\n t = [0, 1, 5]\n}\n",
      "t");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "Lambda"));
}

TEST(Validate, ExpressionErrorHasOffset) {
  ValidationReport r = validate_scenario_text(
      "kind = afdm-lc\nconstants { Lambda = 1 }\nexpressions { PhiCheck = \"exp(x1 +\" }\n"
      "grid {\n x1 = [0, 1, 5]\n x2 = [0, 1, 5]\n t = [0, 1, 5]\n}\n",
      "t");
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "PhiCheck"));
  EXPECT_EQ(r.diagnostics[0].line, 3);
}

TEST(Validate, UnknownKindAndBadGrid) {
  EXPECT_TRUE(mentions(validate_scenario_text("kind = nonsense\n", "t"), "kind"));
  ValidationReport g = validate_scenario_text(
      "kind = afdm-lc\nconstants { Lambda = 1 }\nexpressions { PhiCheck = \"exp(x1 + t)\" }\n"
      "grid {\n x1 = [0, 1, 3]\n x2 = [0, 1, 5]\n t = [0, 1, 5]\n}\n",
      "t");
  EXPECT_TRUE(mentions(g, "x1"));
}

TEST(Run, LcdmPassesWithTable) {
  RunOutcome r = run_scenario(load("lcdm"), in_memory());
  EXPECT_EQ(r.exit_code, kExitPass) << r.manifest.error;
  const Table* t = find_table(r, "lcdm");
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->columns, (std::vector<std::string>{"zeta", "q", "Rhat", "X", "f", "f1gen_residual"}));
  EXPECT_EQ(t->rows.size(), 301u);
  EXPECT_FALSE(r.model.empty());
}

TEST(Run, TightToleranceFails) {
  RunOptions o = in_memory();
  o.tolerance_all = 1e-30;
  EXPECT_EQ(run_scenario(load("lcdm"), o).exit_code, kExitResidual);
}

TEST(Run, PrintedExponentialFamilyReportsEinsteinFailure) {
  // the printed h-part is not an Einstein space of R^i_j = Lambda
  RunOutcome r = run_scenario(load("qelgen-exponential"), in_memory());
  EXPECT_EQ(r.exit_code, kExitResidual);
  bool seen = false;
  for (const auto& res : r.manifest.residuals)
    if (res.name == "einstein") {
      seen = true;
      EXPECT_NEAR(res.value, 2.0, 1e-6);
    }
  EXPECT_TRUE(seen);
}

TEST(Run, RepairedExponentialFamilyPasses) {
  EXPECT_EQ(run_scenario(load("qelgen-exponential-repaired"), in_memory()).exit_code, kExitPass);
}

TEST(Run, DeterministicTables) {
  Scenario s = load("powerlaw-phantom");
  RunOutcome a = run_scenario(s, in_memory()), b = run_scenario(s, in_memory());
  ASSERT_EQ(a.tables.size(), b.tables.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i) EXPECT_EQ(to_csv(a.tables[i]), to_csv(b.tables[i]));
}

TEST(Report, CsvQuotingAndNonFinite) {
  Table t{"x", {"a", "b"}, {}};
  t.add({std::string("p,\"q\""), 0.5});
  t.add({7LL, std::nan("")});
  EXPECT_EQ(to_csv(t), "a,b\n\"p,\"\"q\"\"\",0.5\n7,nan\n");
  EXPECT_NE(to_json(t).find("null"), std::string::npos);
  EXPECT_THROW(t.add({1.0}), std::invalid_argument);
}

TEST(Report, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Report, GateSemantics) {
  Residual r{"x", 1e-3, 1e-2, false, ""};
  EXPECT_TRUE(r.pass());
  r.lower_bound = true;
  EXPECT_FALSE(r.pass());
  r.value = std::nan("");
  EXPECT_FALSE(r.pass());
}

TEST(Report, TimestampFromSourceDateEpoch) {
  setenv("SOURCE_DATE_EPOCH", "0", 1);
  EXPECT_EQ(manifest_timestamp(), "1970-01-01T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
}

TEST(Report, FModelRoundTrip) {
  FModel pl = PowerLaw{1.5, -2.0, 9.0895, -0.3117};
  FModel back = parse_fmodel(serialize_fmodel(pl));
  ASSERT_TRUE(std::holds_alternative<PowerLaw>(back));
  EXPECT_EQ(std::get<PowerLaw>(back).mp, 9.0895);
  EXPECT_EQ(std::get<PowerLaw>(back).Cm, -2.0);

  Ode2Spec spec;
  spec.kind = Ode2Kind::Euler;
  spec.A = -2;
  spec.B = 2;
  FModel tab = solve_linear_ode2(spec, 1.0, 2.0, 3.0, 3.0, 21);
  FModel tb = parse_fmodel(serialize_fmodel(tab));
  for (double R : {1.3, 2.2, 2.9}) EXPECT_EQ(fmodel_jet(tab, R, 2).value(), fmodel_jet(tb, R, 2).value());

  FModel f = fgt_printed_model({1, 2, 3, 4}, {0.5, 0, 0, 1}, 0.3);
  FModel fb = parse_fmodel(serialize_fmodel(f));
  EXPECT_EQ(fgt_eval(std::get<FgtModel>(f), 2.0, FgtWhich::F), fgt_eval(std::get<FgtModel>(fb), 2.0, FgtWhich::F));
}
