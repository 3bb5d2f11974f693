#include "cli/config.hpp"

#include <cctype>
#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace ircg::cli {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d))
    fail("'" + key + "' expects a finite number, got '" + v + "'");
  return d;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  if (v.empty() || v.front() == '-') fail("'" + key + "' expects a non-negative integer, got '" + v + "'");
  const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE)
    fail("'" + key + "' expects a non-negative integer, got '" + v + "'");
  return u;
}

std::size_t to_size(const std::string& key, const std::string& v) { return static_cast<std::size_t>(to_u64(key, v)); }

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail("'" + key + "' expects true or false, got '" + v + "'");
}

template <class T, class Parse>
T to_enum(const std::string& key, const std::string& v, Parse parse, const std::string& valid) {
  const auto e = parse(v);
  if (!e) fail("'" + key + "' must be one of " + valid + ", got '" + v + "'");
  return *e;
}

// One accepted key: how to set it and how to print it (nullopt = omitted).
template <class Target>
struct Field {
  const char* key;
  std::function<void(Target&, const std::string&)> set;
  std::function<std::optional<std::string>(const Target&)> get;
};

template <class T>
std::optional<std::string> opt_num(const std::optional<T>& v) {
  if (!v) return std::nullopt;
  if constexpr (std::is_floating_point_v<T>)
    return fmt_double(*v);
  else
    return std::to_string(*v);
}

const std::vector<Field<SolverConfig>>& solver_fields() {
  using C = SolverConfig;
  static const std::vector<Field<C>> fields = {
      {"method",
       [](C& c, const std::string& v) { c.method = to_enum<Method>("method", v, parse_method, "ir-scg, ir-fscg"); },
       [](const C& c) { return std::optional<std::string>(to_string(c.method)); }},
      {"preset",
       [](C& c, const std::string& v) { c.preset = to_enum<Preset>("preset", v, parse_preset, "convex, nonconvex"); },
       [](const C& c) { return std::optional<std::string>(to_string(c.preset)); }},
      {"varsigma", [](C& c, const std::string& v) { c.varsigma = to_double("varsigma", v); },
       [](const C& c) { return std::optional<std::string>(fmt_double(c.varsigma)); }},
      {"p", [](C& c, const std::string& v) { c.p = to_double("p", v); }, [](const C& c) { return opt_num(c.p); }},
      {"omega", [](C& c, const std::string& v) { c.omega = to_double("omega", v); },
       [](const C& c) { return opt_num(c.omega); }},
      {"period_outer", [](C& c, const std::string& v) { c.period_outer = to_size("period_outer", v); },
       [](const C& c) { return opt_num(c.period_outer); }},
      {"period_inner", [](C& c, const std::string& v) { c.period_inner = to_size("period_inner", v); },
       [](const C& c) { return opt_num(c.period_inner); }},
      {"batch_outer", [](C& c, const std::string& v) { c.batch_outer = to_size("batch_outer", v); },
       [](const C& c) { return opt_num(c.batch_outer); }},
      {"batch_inner", [](C& c, const std::string& v) { c.batch_inner = to_size("batch_inner", v); },
       [](const C& c) { return opt_num(c.batch_inner); }},
      // Both levels at once; printed per level.
      {"period",
       [](C& c, const std::string& v) { c.period_outer = c.period_inner = to_size("period", v); },
       [](const C&) { return std::optional<std::string>(); }},
      {"batch", [](C& c, const std::string& v) { c.batch_outer = c.batch_inner = to_size("batch", v); },
       [](const C&) { return std::optional<std::string>(); }},
      {"alpha_variant",
       [](C& c, const std::string& v) {
         c.alpha_variant = to_enum<AlphaVariant>("alpha_variant", v, parse_alpha_variant, "theorem, experiment");
       },
       [](const C& c) { return std::optional<std::string>(to_string(c.alpha_variant)); }},
      {"seed", [](C& c, const std::string& v) { c.seed = to_u64("seed", v); },
       [](const C& c) { return std::optional<std::string>(std::to_string(c.seed)); }},
      {"max_iterations", [](C& c, const std::string& v) { c.budget.max_iterations = to_u64("max_iterations", v); },
       [](const C& c) { return opt_num(c.budget.max_iterations); }},
      {"max_oracle_calls",
       [](C& c, const std::string& v) { c.budget.max_oracle_calls = to_u64("max_oracle_calls", v); },
       [](const C& c) { return opt_num(c.budget.max_oracle_calls); }},
      {"max_seconds", [](C& c, const std::string& v) { c.budget.max_seconds = to_double("max_seconds", v); },
       [](const C& c) { return opt_num(c.budget.max_seconds); }},
      {"checkpoint_every", [](C& c, const std::string& v) { c.checkpoint_every = to_u64("checkpoint_every", v); },
       [](const C& c) { return std::optional<std::string>(std::to_string(c.checkpoint_every)); }},
      {"checkpoints_per_decade",
       [](C& c, const std::string& v) {
         c.checkpoints_per_decade = static_cast<std::uint32_t>(to_u64("checkpoints_per_decade", v));
       },
       [](const C& c) { return std::optional<std::string>(std::to_string(c.checkpoints_per_decade)); }},
      {"trace_estimate_error",
       [](C& c, const std::string& v) { c.trace_estimate_error = to_bool("trace_estimate_error", v); },
       [](const C& c) { return std::optional<std::string>(c.trace_estimate_error ? "true" : "false"); }},
  };
  return fields;
}

// Problem keys, listed per kind (the generator key is handled separately).
struct ProblemField {
  const char* key;
  std::vector<ProblemKind> kinds;
  std::function<void(ProblemSpec&, const std::string&)> set;
  std::function<std::optional<std::string>(const ProblemSpec&)> get;
};

std::optional<std::string> opt_str(const std::optional<std::string>& s) { return s; }

const std::vector<ProblemField>& problem_fields() {
  using P = ProblemSpec;
  using K = ProblemKind;
  const std::vector<K> all = {K::Regression, K::Logistic, K::Dictionary};
  static const std::vector<ProblemField> fields = {
      {"seed", all,
       [](P& p, const std::string& v) {
         const auto s = to_u64("seed", v);
         p.regression.seed = p.logistic.seed = p.dictionary.seed = s;
       },
       [](const P& p) {
         const std::uint64_t s = p.kind == K::Regression ? p.regression.seed
                                 : p.kind == K::Logistic ? p.logistic.seed
                                                         : p.dictionary.seed;
         return std::optional<std::string>(std::to_string(s));
       }},
      {"n", all,
       [](P& p, const std::string& v) {
         const auto n = to_size("n", v);
         if (p.kind == K::Regression) p.regression.n = n;
         if (p.kind == K::Logistic) p.logistic.n = n;
         if (p.kind == K::Dictionary) p.dictionary.n = n;
       },
       [](const P& p) {
         const std::size_t n = p.kind == K::Regression ? p.regression.n
                               : p.kind == K::Logistic ? p.logistic.n
                                                       : p.dictionary.n;
         return std::optional<std::string>(std::to_string(n));
       }},
      {"d", {K::Regression, K::Logistic},
       [](P& p, const std::string& v) {
         const auto d = to_size("d", v);
         if (p.kind == K::Regression) p.regression.d = d;
         if (p.kind == K::Logistic) p.logistic.d = d;
       },
       [](const P& p) {
         return std::optional<std::string>(
             std::to_string(p.kind == K::Regression ? p.regression.d : p.logistic.d));
       }},
      {"n_val", {K::Regression}, [](P& p, const std::string& v) { p.regression.n_val = to_size("n_val", v); },
       [](const P& p) { return std::optional<std::string>(std::to_string(p.regression.n_val)); }},
      {"delta", {K::Regression, K::Dictionary},
       [](P& p, const std::string& v) {
         const auto d = to_double("delta", v);
         if (p.kind == K::Regression) p.regression.delta = d;
         if (p.kind == K::Dictionary) p.dictionary.delta = d;
       },
       [](const P& p) {
         return std::optional<std::string>(
             fmt_double(p.kind == K::Regression ? p.regression.delta : p.dictionary.delta));
       }},
      {"noise", {K::Regression, K::Dictionary},
       [](P& p, const std::string& v) {
         const auto d = to_double("noise", v);
         if (p.kind == K::Regression) p.regression.noise = d;
         if (p.kind == K::Dictionary) p.dictionary.noise = d;
       },
       [](const P& p) {
         return std::optional<std::string>(
             fmt_double(p.kind == K::Regression ? p.regression.noise : p.dictionary.noise));
       }},
      {"val_noise", {K::Regression},
       [](P& p, const std::string& v) { p.regression.val_noise = to_double("val_noise", v); },
       [](const P& p) { return std::optional<std::string>(fmt_double(p.regression.val_noise)); }},
      {"beta", {K::Logistic}, [](P& p, const std::string& v) { p.logistic.beta = to_double("beta", v); },
       [](const P& p) { return std::optional<std::string>(fmt_double(p.logistic.beta)); }},
      {"flip", {K::Logistic}, [](P& p, const std::string& v) { p.logistic.flip = to_double("flip", v); },
       [](const P& p) { return std::optional<std::string>(fmt_double(p.logistic.flip)); }},
      {"m", {K::Dictionary}, [](P& p, const std::string& v) { p.dictionary.m = to_size("m", v); },
       [](const P& p) { return std::optional<std::string>(std::to_string(p.dictionary.m)); }},
      {"p_old", {K::Dictionary}, [](P& p, const std::string& v) { p.dictionary.p_old = to_size("p_old", v); },
       [](const P& p) { return std::optional<std::string>(std::to_string(p.dictionary.p_old)); }},
      {"q_dict", {K::Dictionary}, [](P& p, const std::string& v) { p.dictionary.q_dict = to_size("q_dict", v); },
       [](const P& p) { return std::optional<std::string>(std::to_string(p.dictionary.q_dict)); }},
      {"n_new", {K::Dictionary}, [](P& p, const std::string& v) { p.dictionary.n_new = to_size("n_new", v); },
       [](const P& p) { return std::optional<std::string>(std::to_string(p.dictionary.n_new)); }},
      {"train_file", {K::Regression}, [](P& p, const std::string& v) { p.train_file = v; },
       [](const P& p) { return opt_str(p.train_file); }},
      {"val_file", {K::Regression}, [](P& p, const std::string& v) { p.val_file = v; },
       [](const P& p) { return opt_str(p.val_file); }},
      {"data_file", {K::Logistic}, [](P& p, const std::string& v) { p.data_file = v; },
       [](const P& p) { return opt_str(p.data_file); }},
      {"label_column", {K::Regression, K::Logistic},
       [](P& p, const std::string& v) { p.label_column = to_size("label_column", v); },
       [](const P& p) { return opt_num(p.label_column); }},
      {"old_samples_file", {K::Dictionary}, [](P& p, const std::string& v) { p.old_samples_file = v; },
       [](const P& p) { return opt_str(p.old_samples_file); }},
      {"new_samples_file", {K::Dictionary}, [](P& p, const std::string& v) { p.new_samples_file = v; },
       [](const P& p) { return opt_str(p.new_samples_file); }},
      {"old_codes_file", {K::Dictionary}, [](P& p, const std::string& v) { p.old_codes_file = v; },
       [](const P& p) { return opt_str(p.old_codes_file); }},
  };
  return fields;
}

const std::vector<Field<ReferenceSpec>>& reference_fields() {
  using R = ReferenceSpec;
  static const std::vector<Field<R>> fields = {
      {"file", [](R& r, const std::string& v) { r.file = v; }, [](const R& r) { return r.file; }},
      {"inner_epsilon", [](R& r, const std::string& v) { r.inner_epsilon = to_double("inner_epsilon", v); },
       [](const R& r) { return std::optional<std::string>(fmt_double(r.inner_epsilon)); }},
      {"inner_max_iterations",
       [](R& r, const std::string& v) { r.inner_max_iterations = to_u64("inner_max_iterations", v); },
       [](const R& r) { return std::optional<std::string>(std::to_string(r.inner_max_iterations)); }},
      {"bilevel_iterations",
       [](R& r, const std::string& v) { r.bilevel_iterations = to_u64("bilevel_iterations", v); },
       [](const R& r) { return std::optional<std::string>(std::to_string(r.bilevel_iterations)); }},
      {"bilevel_varsigma", [](R& r, const std::string& v) { r.bilevel_varsigma = to_double("bilevel_varsigma", v); },
       [](const R& r) { return opt_num(r.bilevel_varsigma); }},
      {"bilevel_p", [](R& r, const std::string& v) { r.bilevel_p = to_double("bilevel_p", v); },
       [](const R& r) { return std::optional<std::string>(fmt_double(r.bilevel_p)); }},
  };
  return fields;
}

template <class T>
bool apply_field(const std::vector<Field<T>>& fields, T& target, const std::string& key, const std::string& value) {
  for (const auto& f : fields) {
    if (key == f.key) {
      f.set(target, value);
      return true;
    }
  }
  return false;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& e : v) s += (s.empty() ? "" : ", ") + e;
  return s;
}

void check_value(const std::string& value) {
  if (value.find('\n') != std::string::npos) fail("values cannot span lines");
}

}  // namespace

const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Regression: return "regression";
    case ProblemKind::Logistic: return "logistic";
    case ProblemKind::Dictionary: return "dictionary";
  }
  return "?";
}

std::optional<ProblemKind> parse_problem_kind(const std::string& s) {
  for (auto k : {ProblemKind::Regression, ProblemKind::Logistic, ProblemKind::Dictionary})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

std::vector<std::string> problem_kind_names() { return {"regression", "logistic", "dictionary"}; }

bool ProblemSpec::from_files() const {
  return train_file || val_file || data_file || old_samples_file || new_samples_file || old_codes_file;
}

std::vector<std::string> solver_keys() {
  std::vector<std::string> keys;
  for (const auto& f : solver_fields()) keys.emplace_back(f.key);
  return keys;
}

IniDocument parse_ini(const std::string& text, const std::string& origin) {
  IniDocument doc;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::set<std::string> sections;
  while (std::getline(in, raw)) {
    ++line_no;
    // A ';' or '#' after whitespace starts a trailing comment.
    std::string uncommented = raw;
    for (std::size_t k = 1; k < raw.size(); ++k) {
      if ((raw[k] == ';' || raw[k] == '#') && std::isspace(static_cast<unsigned char>(raw[k - 1]))) {
        uncommented = raw.substr(0, k);
        break;
      }
    }
    const std::string line = trim(uncommented);
    const auto where = [&] { return origin + ":" + std::to_string(line_no) + ": "; };
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(where() + "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) fail(where() + "empty section name");
      if (!sections.insert(name).second) fail(where() + "duplicate section [" + name + "]");
      doc.push_back({name, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(where() + "expected key = value");
    if (doc.empty()) fail(where() + "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(where() + "empty key");
    auto& entries = doc.back().second;
    for (const auto& [k, v] : entries)
      if (k == key) fail(where() + "duplicate key '" + key + "' in [" + doc.back().first + "]");
    entries.emplace_back(key, value);
  }
  return doc;
}

void apply_setting(RunConfig& c, const std::string& section, const std::string& key, const std::string& value) {
  check_value(value);
  if (section == "problem") {
    if (key == "generator") {
      c.problem.kind = to_enum<ProblemKind>("generator", value, parse_problem_kind, join(problem_kind_names()));
      return;
    }
    for (const auto& f : problem_fields()) {
      if (key != f.key) continue;
      if (std::find(f.kinds.begin(), f.kinds.end(), c.problem.kind) == f.kinds.end())
        fail("[problem] key '" + key + "' does not apply to generator " + to_string(c.problem.kind));
      f.set(c.problem, value);
      return;
    }
    fail("unknown key '" + key + "' in [problem]");
  }
  if (section == "solver") {
    if (!apply_field(solver_fields(), c.solver, key, value))
      fail("unknown key '" + key + "' in [solver]; valid keys: " + join(solver_keys()));
    return;
  }
  if (section == "output") {
    if (key != "trace") fail("unknown key '" + key + "' in [output]; valid keys: trace");
    c.output.trace = value;
    return;
  }
  if (section == "reference") {
    if (!apply_field(reference_fields(), c.reference, key, value))
      fail("unknown key '" + key + "' in [reference]");
    return;
  }
  if (section == "suite") {
    if (!c.suite) c.suite.emplace();
    if (key == "replications") {
      c.suite->replications = to_u64("replications", value);
      if (c.suite->replications == 0) fail("'replications' must be >= 1");
    } else if (key == "summary") {
      c.suite->summary = value;
    } else {
      fail("unknown key '" + key + "' in [suite]; valid keys: replications, summary");
    }
    return;
  }
  if (section.rfind("entry.", 0) == 0) {
    const std::string name = section.substr(6);
    if (name.empty()) fail("entry sections need a name: [entry.NAME]");
    SolverConfig probe;
    if (!apply_field(solver_fields(), probe, key, value))
      fail("unknown key '" + key + "' in [" + section + "]; valid keys: " + join(solver_keys()));
    if (!c.suite) c.suite.emplace();
    auto it = std::find_if(c.suite->entries.begin(), c.suite->entries.end(),
                           [&](const SuiteEntry& e) { return e.name == name; });
    if (it == c.suite->entries.end()) {
      c.suite->entries.push_back({name, {}});
      it = c.suite->entries.end() - 1;
    }
    auto slot = std::find_if(it->overrides.begin(), it->overrides.end(),
                             [&](const auto& kv) { return kv.first == key; });
    if (slot != it->overrides.end())
      slot->second = value;
    else
      it->overrides.emplace_back(key, value);
    return;
  }
  fail("unknown section [" + section + "]; valid sections: problem, solver, output, reference, suite, entry.NAME");
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const std::string lhs = trim(assignment.substr(0, eq));
  const auto dot = lhs.rfind('.');
  if (eq == std::string::npos || dot == std::string::npos || dot == 0)
    fail("override '" + assignment + "' must look like section.key=value");
  apply_setting(config, lhs.substr(0, dot), lhs.substr(dot + 1), trim(assignment.substr(eq + 1)));
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig c;
  const auto doc = parse_ini(text, origin);
  // The generator decides which problem keys apply, so it goes first.
  for (const auto& [section, entries] : doc) {
    if (section != "problem") continue;
    for (const auto& [k, v] : entries)
      if (k == "generator") apply_setting(c, section, k, v);
  }
  for (const auto& [section, entries] : doc) {
    const bool known = section == "problem" || section == "solver" || section == "output" ||
                       section == "reference" || section == "suite" || section.rfind("entry.", 0) == 0;
    if (!known)
      fail("unknown section [" + section + "]; valid sections: problem, solver, output, reference, suite, entry.NAME");
    if (section == "suite" || section.rfind("entry.", 0) == 0)
      if (!c.suite) c.suite.emplace();
    for (const auto& [k, v] : entries) {
      if (section == "problem" && k == "generator") continue;
      apply_setting(c, section, k, v);
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string format_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[problem]\n";
  out << "generator = " << to_string(c.problem.kind) << "\n";
  for (const auto& f : problem_fields()) {
    if (std::find(f.kinds.begin(), f.kinds.end(), c.problem.kind) == f.kinds.end()) continue;
    if (const auto v = f.get(c.problem)) out << f.key << " = " << *v << "\n";
  }
  out << "\n[solver]\n";
  for (const auto& f : solver_fields())
    if (const auto v = f.get(c.solver)) out << f.key << " = " << *v << "\n";
  if (c.output.trace) out << "\n[output]\ntrace = " << *c.output.trace << "\n";
  out << "\n[reference]\n";
  for (const auto& f : reference_fields())
    if (const auto v = f.get(c.reference)) out << f.key << " = " << *v << "\n";
  if (c.suite) {
    out << "\n[suite]\nreplications = " << c.suite->replications << "\n";
    if (c.suite->summary) out << "summary = " << *c.suite->summary << "\n";
    for (const auto& e : c.suite->entries) {
      out << "\n[entry." << e.name << "]\n";
      for (const auto& [k, v] : e.overrides) out << k << " = " << v << "\n";
    }
  }
  return out.str();
}

SolverConfig entry_solver(const RunConfig& config, const SuiteEntry& entry) {
  SolverConfig s = config.solver;
  for (const auto& [k, v] : entry.overrides) apply_field(solver_fields(), s, k, v);
  return s;
}

ProblemInstance build_problem(const ProblemSpec& spec) {
  if (!spec.from_files()) {
    switch (spec.kind) {
      case ProblemKind::Regression: return gen_regression(spec.regression);
      case ProblemKind::Logistic: return gen_logistic(spec.logistic);
      case ProblemKind::Dictionary: return gen_dictionary(spec.dictionary);
    }
  }
  auto labeled = [&](const std::string& path) {
    const bool libsvm = path.size() > 4 && (path.ends_with(".svm") || path.ends_with(".libsvm"));
    if (libsvm) return load_libsvm(path);
    // Default label column: the last one.
    if (spec.label_column) return load_csv(path, *spec.label_column);
    const Matrix probe = load_csv_matrix(path);
    return load_csv(path, static_cast<std::size_t>(probe.cols()) - 1);
  };
  switch (spec.kind) {
    case ProblemKind::Regression: {
      if (!spec.train_file || !spec.val_file)
        throw Error(ErrorCode::InvalidArgument, "regression from files needs train_file and val_file");
      RegressionData data;
      auto tr = labeled(*spec.train_file);
      auto val = labeled(*spec.val_file);
      data.a_tr = std::move(tr.features);
      data.b_tr = std::move(tr.labels);
      data.a_val = std::move(val.features);
      data.b_val = std::move(val.labels);
      data.delta = spec.regression.delta;
      return make_regression(data);
    }
    case ProblemKind::Logistic: {
      if (!spec.data_file) throw Error(ErrorCode::InvalidArgument, "logistic from files needs data_file");
      auto d = labeled(*spec.data_file);
      for (auto& b : d.labels) b = b > 0.0 ? 1.0 : -1.0;
      return make_logistic({std::move(d.features), std::move(d.labels), spec.logistic.beta});
    }
    case ProblemKind::Dictionary: {
      if (!spec.old_samples_file || !spec.new_samples_file || !spec.old_codes_file)
        throw Error(ErrorCode::InvalidArgument,
                    "dictionary from files needs old_samples_file, new_samples_file and old_codes_file");
      DictionaryData data;
      data.old_samples = load_csv_matrix(*spec.old_samples_file);
      data.new_samples = load_csv_matrix(*spec.new_samples_file);
      data.old_codes = load_csv_matrix(*spec.old_codes_file);
      data.delta = spec.dictionary.delta;
      return make_dictionary(data);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown problem kind");
}

}  // namespace ircg::cli
