#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "crackline/errors.hpp"
#include "crackline/scenario.hpp"

namespace {

using crackline::ErrorCode;
using nlohmann::json;

enum Exit { ok = 0, usage = 2, validation = 3, numerical = 4, oracle_threshold = 5, oracle_convergence = 6 };

int exit_code_for(ErrorCode code, bool oracle) {
  switch (code) {
    case ErrorCode::config_error: return usage;
    case ErrorCode::singular_system: return numerical;
    case ErrorCode::non_convergence: return oracle ? oracle_convergence : numerical;
    default: return validation;
  }
}

void report_error(const std::string& scenario, const std::string& error, const std::string& message) {
  json j = {{"error", error}, {"message", message}};
  if (!scenario.empty()) j["scenario"] = scenario;
  std::cerr << j.dump() << "\n";
}

struct Overrides {
  std::optional<std::string> mode;
  std::optional<std::string> formulation;
  std::optional<int> n, n_neg, n_pos;
  std::optional<double> q, L, L_neg, L_pos;
  bool fixed_point = false;
  std::optional<double> relaxation;
  std::optional<int> max_iterations;
  std::optional<double> tolerance;
  std::optional<double> threshold, window;
  std::optional<int> oracle_max_iterations;
};

void apply(const Overrides& o, crackline::Scenario& s) {
  if (o.mode && *o.mode != crackline::to_string(s.mode)) {
    crackline::fail(ErrorCode::config_error,
                    "scenario '" + s.name + "' is mode " + crackline::to_string(s.mode) + ", not " + *o.mode);
  }
  if (o.formulation) s.formulation = *o.formulation;
  if (o.n) s.grid.n_neg = s.grid.n_pos = *o.n;
  if (o.n_neg) s.grid.n_neg = *o.n_neg;
  if (o.n_pos) s.grid.n_pos = *o.n_pos;
  if (o.q) s.grid.q = *o.q;
  if (o.L) s.grid.L_neg = s.grid.L_pos = *o.L;
  if (o.L_neg) s.grid.L_neg = *o.L_neg;
  if (o.L_pos) s.grid.L_pos = *o.L_pos;
  if (o.fixed_point) s.solver.fixed_point = true;
  if (o.relaxation) s.solver.relaxation = *o.relaxation;
  if (o.max_iterations) s.solver.max_iterations = *o.max_iterations;
  if (o.tolerance) s.solver.tolerance = *o.tolerance;
  if (o.threshold) s.oracle_threshold = *o.threshold;
  if (o.window) s.oracle_window = *o.window;
  if (o.oracle_max_iterations) s.oracle_max_iterations = *o.oracle_max_iterations;
  // Re-serialize and parse so overrides pass the same checks as file input.
  s = crackline::parse_scenario(crackline::serialize_scenario(s));
}

struct Outcome {
  int code = ok;
  std::string stdout_text;
};

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) crackline::fail(ErrorCode::config_error, "cannot write '" + p.string() + "'");
  out << text;
}

template <class F>
Outcome guarded(const std::string& label, bool oracle, F&& body) {
  try {
    return body();
  } catch (const crackline::Error& e) {
    report_error(label, crackline::error_code_name(e.code()), e.what());
    return {exit_code_for(e.code(), oracle), {}};
  } catch (const std::exception& e) {
    report_error(label, "internal_error", e.what());
    return {numerical, {}};
  }
}

Outcome run_one(const std::string& ref, const Overrides& o, const std::filesystem::path& dir) {
  return guarded(ref, false, [&] {
    crackline::Scenario s = crackline::resolve_scenario(ref);
    apply(o, s);
    const crackline::RunResult r = crackline::run_scenario(s);
    std::filesystem::create_directories(dir);
    const auto csv = dir / (s.name + ".csv");
    const auto meta = dir / (s.name + ".json");
    write_file(csv, r.csv);
    write_file(meta, r.metadata);
    return Outcome{ok, s.name + ": wrote " + csv.string() + " and " + meta.string() + "\n"};
  });
}

Outcome oracle_one(const std::string& ref, const Overrides& o, const std::optional<std::filesystem::path>& dir) {
  return guarded(ref, true, [&] {
    crackline::Scenario s = crackline::resolve_scenario(ref);
    apply(o, s);
    const crackline::OracleResult r = crackline::oracle_check(s);
    if (dir) {
      std::filesystem::create_directories(*dir);
      write_file(*dir / (s.name + ".oracle.json"), r.json);
    }
    return Outcome{r.pass ? ok : oracle_threshold, r.json};
  });
}

std::vector<std::string> read_batch(const std::string& path) {
  std::ifstream in(path);
  if (!in) crackline::fail(ErrorCode::config_error, "cannot read batch file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

// Runs every scenario, optionally in parallel, and prints results in input order.
template <class F>
int run_all(const std::vector<std::string>& refs, int jobs, F&& one) {
  std::vector<Outcome> results(refs.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < refs.size(); ++i) results[i] = one(refs[i]);
  } else {
    for (std::size_t start = 0; start < refs.size(); start += static_cast<std::size_t>(jobs)) {
      std::vector<std::future<Outcome>> pending;
      const std::size_t stop = std::min(refs.size(), start + static_cast<std::size_t>(jobs));
      for (std::size_t i = start; i < stop; ++i) {
        pending.push_back(std::async(std::launch::async, [&, i] { return one(refs[i]); }));
      }
      for (std::size_t i = start; i < stop; ++i) results[i] = pending[i - start].get();
    }
  }
  int code = ok;
  for (const auto& r : results) {
    std::cout << r.stdout_text;
    code = std::max(code, r.code);
  }
  return code;
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--mode", o.mode, "Expected mode (iii or i-ii); fails if the scenario differs")
      ->check(CLI::IsMember({"iii", "i-ii"}));
  cmd->add_option("--formulation", o.formulation,
                  "Mode III: coupled, mixed, t-only (default), s-only. Mode I/II: derivative (default), "
                  "derivative-free");
  cmd->add_option("--n", o.n, "Intervals on each side (default 400)");
  cmd->add_option("--n-neg", o.n_neg, "Crack-side intervals (default 400)");
  cmd->add_option("--n-pos", o.n_pos, "Interface-side intervals (default 400)");
  cmd->add_option("--q", o.q, "Grading exponent (default 3)");
  cmd->add_option("--L", o.L, "Truncation length on both sides (default max(10 l, 200 / kernel scale))");
  cmd->add_option("--L-neg", o.L_neg, "Crack-side truncation length");
  cmd->add_option("--L-pos", o.L_pos, "Interface-side truncation length");
  cmd->add_flag("--fixed-point", o.fixed_point, "Mode III: relaxed fixed-point iteration instead of a dense solve");
  cmd->add_option("--relaxation", o.relaxation, "Fixed-point relaxation (default 0.5)");
  cmd->add_option("--max-iterations", o.max_iterations, "Fixed-point iteration cap (default 500)");
  cmd->add_option("--tolerance", o.tolerance, "Fixed-point tolerance (default 1e-8)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crackline: semi-infinite interface crack solver (mode III and mode I/II)"};
  app.require_subcommand(1);

  Overrides run_o;
  std::vector<std::string> run_refs;
  std::string run_batch;
  std::string out_dir = "crackline-out";
  int run_jobs = 1;
  auto* run = app.add_subcommand("run", "Solve scenarios and write <name>.csv and <name>.json");
  run->add_option("scenarios", run_refs, "Bundled scenario names or scenario JSON files");
  run->add_option("--batch", run_batch, "File listing scenarios, one per line ('#' comments)");
  run->add_option("-o,--output-dir", out_dir, "Output directory (default crackline-out)");
  run->add_option("-j,--jobs", run_jobs, "Scenarios solved concurrently (default 1)")->check(CLI::PositiveNumber);
  add_overrides(run, run_o);

  Overrides oc_o;
  std::vector<std::string> oc_refs;
  std::string oc_batch;
  std::string oc_dir;
  int oc_jobs = 1;
  auto* oc = app.add_subcommand("oracle-check", "Compare the Nystrom and spectral solutions and print a JSON report");
  oc->add_option("scenarios", oc_refs, "Bundled scenario names or scenario JSON files");
  oc->add_option("--batch", oc_batch, "File listing scenarios, one per line");
  oc->add_option("-o,--output-dir", oc_dir, "Also write <name>.oracle.json here");
  oc->add_option("-j,--jobs", oc_jobs, "Scenarios checked concurrently (default 1)")->check(CLI::PositiveNumber);
  oc->add_option("--threshold", oc_o.threshold, "Relative max-norm threshold (default 0.005 mode III, 0.01 mode I/II)");
  oc->add_option("--window", oc_o.window, "Comparison window |x1| <= window * l (default 5)");
  oc->add_option("--oracle-max-iterations", oc_o.oracle_max_iterations,
                 "Conjugate-gradient cap of the spectral solve (default 20000)");
  add_overrides(oc, oc_o);

  auto* list = app.add_subcommand("list-scenarios", "List bundled scenarios");

  std::string show_ref;
  auto* show = app.add_subcommand("show-scenario", "Print a scenario as JSON (a template for new files)");
  show->add_option("scenario", show_ref, "Bundled scenario name or scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report_error("", "usage_error", e.what());
    return usage;
  }

  auto collect = [](std::vector<std::string> refs, const std::string& batch) {
    if (!batch.empty()) {
      const auto more = read_batch(batch);
      refs.insert(refs.end(), more.begin(), more.end());
    }
    if (refs.empty()) crackline::fail(ErrorCode::config_error, "no scenarios given");
    return refs;
  };

  try {
    if (*run) {
      const auto refs = collect(run_refs, run_batch);
      return run_all(refs, run_jobs, [&](const std::string& r) { return run_one(r, run_o, out_dir); });
    }
    if (*oc) {
      const auto refs = collect(oc_refs, oc_batch);
      std::optional<std::filesystem::path> dir;
      if (!oc_dir.empty()) dir = oc_dir;
      return run_all(refs, oc_jobs, [&](const std::string& r) { return oracle_one(r, oc_o, dir); });
    }
    if (*list) {
      for (const auto& n : crackline::bundled_scenario_names()) {
        std::cout << n << "  " << crackline::bundled_scenario(n).description << "\n";
      }
      return ok;
    }
    if (*show) {
      std::cout << crackline::serialize_scenario(crackline::resolve_scenario(show_ref));
      return ok;
    }
  } catch (const crackline::Error& e) {
    report_error("", crackline::error_code_name(e.code()), e.what());
    return exit_code_for(e.code(), false);
  }
  return usage;
}
