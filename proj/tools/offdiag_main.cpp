// offdiag: validate, run and list scenarios.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "offdiag/cli/runner.hpp"

using namespace offdiag;

namespace {

std::optional<std::array<int, 3>> parse_sample(const std::string& text) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    int n = std::stoi(part, &used);
    if (used != part.size()) throw CLI::ValidationError("--sample", "expected integers, got '" + text + "'");
    v.push_back(n);
  }
  if (v.size() == 1) return std::array<int, 3>{v[0], v[0], v[0]};
  if (v.size() == 3) return std::array<int, 3>{v[0], v[1], v[2]};
  throw CLI::ValidationError("--sample", "expected N or N1,N2,NT");
}

void parse_tolerance(const std::string& text, RunOptions& o) {
  auto eq = text.find('=');
  std::size_t used = 0;
  if (eq == std::string::npos) {
    o.tolerance_all = std::stod(text, &used);
    if (used != text.size()) throw CLI::ValidationError("--tolerance", "bad value '" + text + "'");
    return;
  }
  std::string val = text.substr(eq + 1);
  double v = std::stod(val, &used);
  if (used != val.size() || eq == 0) throw CLI::ValidationError("--tolerance", "expected NAME=VALUE, got '" + text + "'");
  o.tolerance[text.substr(0, eq)] = v;
}

const char* fmt(double x, char* buf, std::size_t n) {
  std::snprintf(buf, n, "%.3e", x);
  return buf;
}

void print_outcome(const RunOutcome& r, bool quiet) {
  const RunManifest& m = r.manifest;
  std::printf("%s (%s): %s\n", m.scenario.c_str(), m.kind.c_str(),
              r.exit_code == kExitPass ? "PASS" : r.exit_code == kExitResidual ? "FAIL" : "ERROR");
  if (!m.error.empty()) std::printf("  error: %s\n", m.error.c_str());
  if (quiet) return;
  char a[32], b[32];
  for (const auto& res : m.residuals) {
    std::string status = !res.gated() ? "info" : res.pass() ? "ok" : "FAIL";
    std::string tol = res.gated() ? std::string(res.lower_bound ? ">= " : "<= ") + fmt(*res.tolerance, b, sizeof b) : "";
    std::printf("  %-20s %12s  %-14s %-5s %s\n", res.name.c_str(), fmt(res.value, a, sizeof a), tol.c_str(),
                status.c_str(), res.note.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Off-diagonal metric constructions and cosmological reconstruction"};
  app.set_version_flag("--version", std::string(OFFDIAG_VERSION));
  app.require_subcommand(1);

  std::vector<std::string> validate_files;
  auto* validate = app.add_subcommand("validate", "check scenario files against the schema");
  validate->add_option("files", validate_files, "scenario files or bundled names")->required();

  std::vector<std::string> run_files;
  RunOptions opts;
  std::string out_dir = "offdiag-out", sample;
  std::vector<std::string> tolerances;
  int jobs = 1;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run scenarios and write tables and manifests");
  run->add_option("files", run_files, "scenario files or bundled names")->required();
  run->add_option("--out-dir,-o", out_dir, "output directory")->capture_default_str();
  run->add_option("--format,-f", opts.format, "table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  run->add_option("--sample", sample, "grid node counts: N or N1,N2,NT");
  run->add_option("--tolerance", tolerances, "VALUE for every residual, or NAME=VALUE (repeatable)");
  run->add_option("--jobs,-j", jobs, "scenarios run concurrently")->check(CLI::PositiveNumber);
  run->add_flag("--quiet,-q", quiet, "only print the verdict per scenario");

  std::string list_dir;
  auto* list = app.add_subcommand("list-scenarios", "list the bundled scenario corpus");
  list->add_option("--dir", list_dir, "scenario directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      int bad = 0;
      for (const auto& f : validate_files) {
        auto path = resolve_scenario(f);
        ValidationReport r = validate_scenario_file(path);
        for (const auto& d : r.diagnostics) std::printf("%s\n", format_diagnostic(d, path.string()).c_str());
        std::printf("%s: %zu diagnostic%s\n", path.string().c_str(), r.diagnostics.size(),
                    r.diagnostics.size() == 1 ? "" : "s");
        bad += !r.ok();
      }
      return bad ? kExitResidual : kExitPass;
    }

    if (*run) {
      opts.out_dir = out_dir;
      if (!sample.empty()) opts.sample = parse_sample(sample);
      for (const auto& t : tolerances) parse_tolerance(t, opts);
      std::vector<Scenario> scenarios;
      bool invalid = false;
      for (const auto& f : run_files) {
        auto path = resolve_scenario(f);
        ValidationReport r = validate_scenario_file(path);
        for (const auto& d : r.diagnostics) std::fprintf(stderr, "%s\n", format_diagnostic(d, path.string()).c_str());
        if (r.ok())
          scenarios.push_back(std::move(*r.scenario));
        else
          invalid = true;
      }
      if (invalid) return kExitError;
      std::vector<RunOutcome> out = run_batch(scenarios, opts, jobs);
      int code = kExitPass;
      for (const auto& r : out) {
        print_outcome(r, quiet);
        code = std::max(code, r.exit_code);
      }
      return code;
    }

    if (*list) {
      auto dir = list_dir.empty() ? bundled_scenario_dir() : std::filesystem::path(list_dir);
      auto files = list_scenarios(dir);
      if (files.empty()) {
        std::fprintf(stderr, "no scenarios in %s\n", dir.string().c_str());
        return kExitError;
      }
      for (const auto& f : files) {
        ValidationReport r = validate_scenario_file(f);
        if (r.ok())
          std::printf("%-30s %-22s %s\n", r.scenario->name.c_str(), r.scenario->kind.c_str(),
                      r.scenario->description.c_str());
        else
          std::printf("%-30s %-22s (invalid: %zu diagnostics)\n", f.stem().string().c_str(), "?",
                      r.diagnostics.size());
      }
      return kExitPass;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "offdiag: %s\n", e.what());
    return kExitError;
  }
  return kExitPass;
}
