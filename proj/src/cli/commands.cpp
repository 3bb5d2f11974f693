#include "cli/commands.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "ircg/diagnostics.hpp"
#include "ircg/solvers.hpp"
#include "json.hpp"

namespace ircg::cli {

using json = nlohmann::json;

const char* const kTraceHeader = "t,oracle_calls,wall_ms,f_gap_x,g_gap_x,f_gap_z,g_gap_z,sigma_t,alpha_t";

namespace {

std::string num(double v) {
  if (std::isnan(v)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// RFC 4180: quote fields holding separators, quotes or line breaks.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  return out;
}

RunConfig load_with_overrides(const std::string& config_path, const std::vector<std::string>& sets) {
  RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
  for (const auto& s : sets) apply_override(c, s);
  return c;
}

void attach_reference(ProblemInstance& problem, const RunConfig& config, const std::string& path,
                      std::ostream& err) {
  const auto ref = read_reference(path);
  if (ref.problem != problem_fingerprint(config))
    err << "warning: " << path << " was computed for a different [problem] section\n";
  problem.refs = ref.optima;
}

// ---------------------------------------------------------------- gen

int cmd_gen(const std::string& generator, const std::vector<std::pair<std::string, std::string>>& params,
            const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const auto kind = parse_problem_kind(generator);
  if (!kind) {
    err << "error: unknown generator '" << generator << "'; valid generators: regression, logistic, dictionary\n";
    return kExitUsage;
  }
  RunConfig c;
  c.problem.kind = *kind;
  for (const auto& [k, v] : params) apply_setting(c, "problem", k, v);

  const std::filesystem::path dir(out_dir.empty() ? default_output_path(".") : out_dir);
  std::filesystem::create_directories(dir);
  auto path = [&](const char* name) { return (dir / name).string(); };
  // The generator parameters are kept as a record of how the files were made.
  RunConfig files;
  files.problem = c.problem;
  auto header = [](const char* prefix, Eigen::Index cols, bool label) {
    std::vector<std::string> h;
    for (Eigen::Index j = 0; j < cols; ++j) h.push_back(prefix + std::to_string(j + 1));
    if (label) h.emplace_back("y");
    return h;
  };
  std::vector<std::string> written;
  switch (*kind) {
    case ProblemKind::Regression: {
      const auto d = gen_regression_data(c.problem.regression);
      write_csv(path("train.csv"), d.a_tr, &d.b_tr, header("x", d.a_tr.cols(), true));
      write_csv(path("val.csv"), d.a_val, &d.b_val, header("x", d.a_val.cols(), true));
      files.problem.train_file = path("train.csv");
      files.problem.val_file = path("val.csv");
      written = {path("train.csv"), path("val.csv")};
      break;
    }
    case ProblemKind::Logistic: {
      const auto d = gen_logistic_data(c.problem.logistic);
      write_csv(path("data.csv"), d.a, &d.b, header("x", d.a.cols(), true));
      files.problem.data_file = path("data.csv");
      written = {path("data.csv")};
      break;
    }
    case ProblemKind::Dictionary: {
      const auto d = gen_dictionary_data(c.problem.dictionary);
      write_csv(path("old_samples.csv"), d.old_samples);
      write_csv(path("new_samples.csv"), d.new_samples);
      write_csv(path("old_codes.csv"), d.old_codes);
      files.problem.old_samples_file = path("old_samples.csv");
      files.problem.new_samples_file = path("new_samples.csv");
      files.problem.old_codes_file = path("old_codes.csv");
      written = {path("old_samples.csv"), path("new_samples.csv"), path("old_codes.csv")};
      break;
    }
  }
  {
    auto ini = open_output(path("problem.ini"));
    const std::string text = format_config(files);
    ini << text.substr(0, text.find("\n[solver]"));
    ini << "\n";
  }
  written.push_back(path("problem.ini"));
  for (const auto& w : written) out << w << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- reference

int cmd_reference(const RunConfig& config, const std::string& out_path, std::ostream& out, std::ostream& err) {
  ProblemInstance problem = build_problem(config.problem);
  const auto& rs = config.reference;
  const InnerReference inner = reference_inner(problem, rs.inner_epsilon, rs.inner_max_iterations);
  ReferenceFile ref;
  ref.problem = problem_fingerprint(config);
  ref.optima.g_opt = inner.g_value;
  // The certificate bounds G(x) - G_opt; a little slack absorbs rounding in G itself.
  ref.optima.g_tol = inner.fw_gap + 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(inner.g_value));
  ref.optima.certified = inner.certified;

  json details;
  details["inner"] = {{"epsilon", rs.inner_epsilon},
                      {"max_iterations", rs.inner_max_iterations},
                      {"iterations", inner.iterations},
                      {"fw_gap", inner.fw_gap}};
  details["bilevel"] = nullptr;
  if (problem.convex_outer) {
    const double varsigma = rs.bilevel_varsigma.value_or(config.solver.varsigma);
    const auto bil = reference_bilevel(problem, rs.bilevel_iterations, varsigma, ref.optima.g_opt, rs.bilevel_p);
    ref.optima.f_opt = bil.f_value;
    ref.optima.f_tol = bil.f_tol;
    details["bilevel"] = {{"iterations", bil.iterations},       {"varsigma", varsigma},
                          {"p", rs.bilevel_p},                   {"inner_gap", bil.inner_gap},
                          {"trailing_decrement", bil.trailing_decrement}};
  }

  const std::string path = out_path.empty() ? default_output_path("reference.json") : out_path;
  json j;
  j["g_opt"] = ref.optima.g_opt;
  j["g_tol"] = ref.optima.g_tol;
  j["f_opt"] = ref.optima.f_opt ? json(*ref.optima.f_opt) : json(nullptr);
  j["f_tol"] = ref.optima.f_tol;
  j["certified"] = ref.optima.certified;
  j["problem"] = ref.problem;
  j["settings"] = details;
  open_output(path) << j.dump(2) << "\n";
  out << "g_opt = " << num(ref.optima.g_opt) << " (fw gap " << num(inner.fw_gap) << ", " << inner.iterations
      << " iterations)\n";
  if (ref.optima.f_opt) out << "f_opt = " << num(*ref.optima.f_opt) << " (f_tol " << num(ref.optima.f_tol) << ")\n";
  out << "wrote " << path << "\n";
  if (!inner.certified) {
    err << "error: " << to_string(ErrorCode::BudgetExhausted) << ": inner solve stopped at fw gap " << num(inner.fw_gap)
        << " > " << num(rs.inner_epsilon) << "; " << path << " is flagged uncertified\n";
    return kExitUsage;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- solve

int cmd_solve(const RunConfig& config, const std::string& trace_override, const std::string& ref_override,
              std::ostream& out, std::ostream& err) {
  ProblemInstance problem = build_problem(config.problem);
  const std::string ref_path = !ref_override.empty() ? ref_override : config.reference.file.value_or("");
  if (!ref_path.empty()) attach_reference(problem, config, ref_path, err);
  Solver solver(problem, config.solver);
  const std::string path =
      !trace_override.empty() ? trace_override : config.output.trace.value_or(default_output_path("trace.csv"));
  auto csv = open_output(path);
  const bool est = solver.config().trace_estimate_error;
  write_trace_header(csv, est);
  const auto trace = solver.run([&](const TraceRecord& r) { write_trace_row(csv, r, est); });
  csv.close();
  out << "t = " << solver.t() << ", oracle_calls = " << solver.oracle_calls();
  if (!trace.empty() && problem.refs) {
    const auto& last = trace.back();
    const bool z = !std::isnan(last.g_gap_z);
    out << (problem.refs->f_opt ? ", f_gap = " : ", F = ") << num(z ? last.f_gap_z : last.f_gap_x) << ", g_gap = " << num(z ? last.g_gap_z : last.g_gap_x)
        << (z ? " (z_t)" : " (x_t)");
  }
  out << "\nwrote " << path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- rates

int cmd_rates(const std::string& trace_path, const std::string& field_name, double t_min, double t_max,
              const std::string& json_path, std::ostream& out, std::ostream& err) {
  const auto field = diagnostics::parse_gap_field(field_name);
  if (!field) {
    std::string valid;
    for (const auto& n : diagnostics::gap_field_names()) valid += (valid.empty() ? "" : ", ") + n;
    err << "error: unknown field '" << field_name << "'; valid fields: " << valid << "\n";
    return kExitUsage;
  }
  const auto trace = read_trace_csv(trace_path);
  const auto fit = diagnostics::fit_rate_slope(trace, *field, {t_min, t_max});
  out << "field = " << field_name << "\nslope = " << num(fit.slope) << "\nintercept = " << num(fit.intercept)
      << "\nr2 = " << num(fit.r2) << "\nwindow = [" << num(fit.t_min) << ", " << num(fit.t_max)
      << "]\nsamples = " << fit.samples << "\n";
  json j = {{"trace", trace_path}, {"field", field_name}, {"slope", fit.slope},       {"intercept", fit.intercept},
            {"r2", fit.r2},        {"t_min", fit.t_min},  {"t_max", fit.t_max},        {"samples", fit.samples},
            {"absolute", diagnostics::fits_absolute(*field)}};
  const std::string path = json_path.empty() ? trace_path + ".rates.json" : json_path;
  open_output(path) << j.dump(2) << "\n";
  out << "wrote " << path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct RunOutcome {
  bool ok = false;
  std::string error;
  std::uint64_t iterations = 0;
  std::uint64_t oracle_calls = 0;
  double f_gap = kNaN;
  double g_gap = kNaN;
};

int cmd_bench(const RunConfig& config, const std::string& summary_override, std::ostream& out, std::ostream& err) {
  if (!config.suite || config.suite->entries.empty()) {
    err << "error: a bench suite needs at least one [entry.NAME] section\n";
    return kExitUsage;
  }
  const auto& suite = *config.suite;
  ProblemInstance problem = build_problem(config.problem);
  if (config.reference.file) attach_reference(problem, config, *config.reference.file, err);

  const auto reps = suite.replications;
  const auto n_entries = suite.entries.size();
  std::vector<SolverConfig> configs;
  bool reproducible = true;
  for (const auto& e : suite.entries) {
    configs.push_back(entry_solver(config, e));
    if (configs.back().budget.max_seconds) reproducible = false;
  }
  const auto jobs = static_cast<long long>(n_entries * reps);
  std::vector<RunOutcome> outcomes(static_cast<std::size_t>(jobs));

  // Each run owns its state; results land in a fixed slot, so the order of
  // completion never shows in the output.
#pragma omp parallel for schedule(dynamic, 1)
  for (long long job = 0; job < jobs; ++job) {
    const auto e = static_cast<std::size_t>(job) / reps;
    const auto rep = static_cast<std::uint64_t>(job) % reps;
    RunOutcome& o = outcomes[static_cast<std::size_t>(job)];
    try {
      SolverConfig cfg = configs[e];
      cfg.seed += rep;
      cfg.checkpoint_every = std::numeric_limits<std::uint64_t>::max();
      cfg.checkpoints_per_decade = 0;
      Solver solver(problem, cfg);
      const auto trace = solver.run();
      o.iterations = solver.t();
      o.oracle_calls = solver.oracle_calls();
      if (!trace.empty()) {
        const auto& r = trace.back();
        const bool z = !std::isnan(r.g_gap_z);
        o.f_gap = z ? r.f_gap_z : r.f_gap_x;
        o.g_gap = z ? r.g_gap_z : r.g_gap_x;
      }
      o.ok = true;
    } catch (const std::exception& ex) {
      o.error = ex.what();
    }
  }

  const std::string path = !summary_override.empty() ? summary_override
                           : suite.summary                ? *suite.summary
                                                          : default_output_path("bench_summary.csv");
  auto csv = open_output(path);
  csv << "entry,method,replications,failures,mean_iterations,mean_oracle_calls,mean_f_gap,mean_g_gap,error\n";
  json meta;
  meta["reproducible"] = reproducible;
  meta["replications"] = reps;
  meta["threads"] = omp_get_max_threads();
  meta["entries"] = json::array();
  for (std::size_t e = 0; e < n_entries; ++e) {
    double it = 0.0, calls = 0.0, fg = 0.0, gg = 0.0;
    std::uint64_t ok = 0;
    std::string first_error;
    json seeds = json::array();
    for (std::uint64_t rep = 0; rep < reps; ++rep) {
      const auto& o = outcomes[e * reps + rep];
      seeds.push_back(configs[e].seed + rep);
      if (!o.ok) {
        if (first_error.empty()) first_error = o.error;
        continue;
      }
      ++ok;
      it += static_cast<double>(o.iterations);
      calls += static_cast<double>(o.oracle_calls);
      fg += o.f_gap;
      gg += o.g_gap;
    }
    const double k = static_cast<double>(ok);
    const auto mean = [&](double s) { return ok ? num(s / k) : std::string(); };
    csv << csv_field(suite.entries[e].name) << "," << to_string(configs[e].method) << "," << reps << ","
        << (reps - ok) << "," << mean(it) << "," << mean(calls) << "," << mean(fg) << "," << mean(gg) << ","
        << csv_field(first_error) << "\n";
    meta["entries"].push_back({{"name", suite.entries[e].name},
                               {"method", to_string(configs[e].method)},
                               {"seeds", seeds},
                               {"wall_clock_budget", configs[e].budget.max_seconds.has_value()}});
    out << suite.entries[e].name << ": " << ok << "/" << reps << " runs";
    if (ok) out << ", mean iterations " << num(it / k) << ", mean oracle calls " << num(calls / k);
    out << "\n";
  }
  csv.close();
  open_output(path + ".meta.json") << meta.dump(2) << "\n";
  out << "wrote " << path << "\n";
  if (!reproducible) out << "note: wall-clock budgets make oracle counts machine dependent\n";
  return kExitOk;
}

}  // namespace

std::string default_output_path(const std::string& name) {
  if (const char* dir = std::getenv("IRCG_OUTPUT_DIR"); dir && *dir) {
    if (name == ".") return dir;
    return (std::filesystem::path(dir) / name).string();
  }
  return name;
}

void write_trace_header(std::ostream& os, bool with_estimate_error) {
  os << kTraceHeader;
  if (with_estimate_error) os << ",est_err_f,est_err_g";
  os << "\n";
}

void write_trace_row(std::ostream& os, const TraceRecord& r, bool with_estimate_error) {
  os << r.t << "," << r.oracle_calls << "," << num(r.wall_ms) << "," << num(r.f_gap_x) << "," << num(r.g_gap_x) << ","
     << num(r.f_gap_z) << "," << num(r.g_gap_z) << "," << num(r.sigma_t) << "," << num(r.alpha_t);
  if (with_estimate_error) os << "," << num(r.est_err_f) << "," << num(r.est_err_g);
  os << "\n";
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind(kTraceHeader, 0) != 0)
    throw Error(ErrorCode::ParseError, path + ": not a trace file (header mismatch)");
  std::vector<TraceRecord> trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() < 9) throw Error(ErrorCode::RaggedRows, path + ": row " + std::to_string(line_no) + " is short");
    auto d = [&](std::size_t k) {
      if (cells[k].empty()) return kNaN;
      char* end = nullptr;
      const double v = std::strtod(cells[k].c_str(), &end);
      if (end != cells[k].c_str() + cells[k].size())
        throw Error(ErrorCode::ParseError, path + ": row " + std::to_string(line_no) + ", column " +
                                               std::to_string(k + 1) + ": not a number");
      return v;
    };
    TraceRecord r;
    r.t = static_cast<std::uint64_t>(d(0));
    r.oracle_calls = static_cast<std::uint64_t>(d(1));
    r.wall_ms = d(2);
    r.f_gap_x = d(3);
    r.g_gap_x = d(4);
    r.f_gap_z = d(5);
    r.g_gap_z = d(6);
    r.sigma_t = d(7);
    r.alpha_t = d(8);
    if (cells.size() >= 11) {
      r.est_err_f = d(9);
      r.est_err_g = d(10);
    }
    trace.push_back(r);
  }
  return trace;
}

ReferenceFile read_reference(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  ReferenceFile ref;
  try {
    ref.optima.g_opt = j.at("g_opt").get<double>();
    ref.optima.g_tol = j.at("g_tol").get<double>();
    if (!j.at("f_opt").is_null()) ref.optima.f_opt = j.at("f_opt").get<double>();
    ref.optima.f_tol = j.at("f_tol").get<double>();
    ref.optima.certified = j.at("certified").get<bool>();
    ref.problem = j.value("problem", std::string());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return ref;
}

std::string problem_fingerprint(const RunConfig& config) {
  RunConfig only;
  only.problem = config.problem;
  const std::string text = format_config(only);
  return text.substr(0, text.find("\n[solver]"));
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projection-free stochastic bilevel optimization (IR-SCG / IR-FSCG)", "ircg"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a synthetic data set as CSV files");
  std::string generator;
  std::string gen_out;
  gen->add_option("generator", generator, "regression, logistic or dictionary")->required();
  gen->add_option("--out", gen_out, "Output directory (default: $IRCG_OUTPUT_DIR or .)");
  const std::vector<std::pair<std::string, std::string>> gen_flags = {
      {"--seed", "seed"},   {"--n", "n"},         {"--d", "d"},          {"--n-val", "n_val"},
      {"--delta", "delta"}, {"--noise", "noise"}, {"--val-noise", "val_noise"}, {"--beta", "beta"},
      {"--flip", "flip"},   {"--m", "m"},         {"--p-old", "p_old"},  {"--q-dict", "q_dict"},
      {"--n-new", "n_new"}};
  std::vector<std::string> gen_values(gen_flags.size());
  std::vector<CLI::Option*> gen_opts;
  for (std::size_t k = 0; k < gen_flags.size(); ++k)
    gen_opts.push_back(gen->add_option(gen_flags[k].first, gen_values[k], "Generator parameter " + gen_flags[k].second));

  // shared config options
  struct ConfigArgs {
    std::string path;
    std::vector<std::string> sets;
    bool print = false;
  };
  auto add_config = [](CLI::App* sub, ConfigArgs& a, bool required) {
    auto* o = sub->add_option("-c,--config", a.path, "Run configuration file");
    if (required) o->required()->check(CLI::ExistingFile);
    sub->add_option("--set", a.sets, "Override one setting: section.key=value")->take_all();
    sub->add_flag("--print-config", a.print, "Print the resolved configuration and exit");
  };

  auto* ref = app.add_subcommand("reference", "Certify G_opt and estimate F_opt for a problem");
  ConfigArgs ref_args;
  std::string ref_out;
  add_config(ref, ref_args, false);
  ref->add_option("-o,--out", ref_out, "Reference JSON path (default: $IRCG_OUTPUT_DIR/reference.json)");

  auto* solve = app.add_subcommand("solve", "Run IR-SCG or IR-FSCG and write a trace CSV");
  ConfigArgs solve_args;
  std::string solve_trace, solve_ref;
  add_config(solve, solve_args, false);
  solve->add_option("--trace", solve_trace, "Trace CSV path (overrides output.trace)");
  solve->add_option("--reference", solve_ref, "Reference JSON (overrides reference.file)");

  auto* rates = app.add_subcommand("rates", "Fit a power law to one trace column");
  std::string rates_trace, rates_field = "g_gap_z", rates_json;
  double t_min = 0.0, t_max = std::numeric_limits<double>::infinity();
  rates->add_option("trace", rates_trace, "Trace CSV")->required();
  rates->add_option("--field", rates_field, "f_gap_x, g_gap_x, f_gap_z or g_gap_z");
  rates->add_option("--t-min", t_min, "Window start");
  rates->add_option("--t-max", t_max, "Window end");
  rates->add_option("--json", rates_json, "JSON output (default: TRACE.rates.json)");

  auto* bench = app.add_subcommand("bench", "Run a suite of entries with replications");
  ConfigArgs bench_args;
  std::string bench_summary;
  add_config(bench, bench_args, true);
  bench->add_option("--summary", bench_summary, "Summary CSV (overrides suite.summary)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      std::vector<std::pair<std::string, std::string>> params;
      for (std::size_t k = 0; k < gen_flags.size(); ++k)
        if (gen_opts[k]->count() > 0) params.emplace_back(gen_flags[k].second, gen_values[k]);
      return cmd_gen(generator, params, gen_out, out, err);
    }
    if (rates->parsed()) return cmd_rates(rates_trace, rates_field, t_min, t_max, rates_json, out, err);

    ConfigArgs& a = ref->parsed() ? ref_args : solve->parsed() ? solve_args : bench_args;
    RunConfig config = load_with_overrides(a.path, a.sets);
    if (solve->parsed()) {
      // Validated against the actual problem, so the printed form is normalized.
      config.solver = validated(build_problem(config.problem), config.solver);
    } else if (bench->parsed() && config.suite) {
      const ProblemInstance problem = build_problem(config.problem);
      for (const auto& e : config.suite->entries) validated(problem, entry_solver(config, e));
    }
    if (a.print) {
      out << format_config(config);
      return kExitOk;
    }
    if (ref->parsed()) return cmd_reference(config, ref_out, out, err);
    if (solve->parsed()) return cmd_solve(config, solve_trace, solve_ref, out, err);
    return cmd_bench(config, bench_summary, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::NumericalFailure ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace ircg::cli
