#pragma once

// Run configuration files: a sectioned key = value format with exact keys.
//
//   [problem]    generator and its parameters, or data files
//   [solver]     SolverConfig fields and the budget
//   [output]     trace path and checkpoint spacing
//   [reference]  precomputed reference file or settings for computing one
//
// Bench suites add [suite] and any number of [entry.NAME] sections holding
// solver keys that override [solver].

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ircg/core.hpp"
#include "ircg/problems.hpp"

namespace ircg::cli {

enum class ProblemKind { Regression, Logistic, Dictionary };

const char* to_string(ProblemKind k);
std::optional<ProblemKind> parse_problem_kind(const std::string& s);
std::vector<std::string> problem_kind_names();

struct ProblemSpec {
  ProblemKind kind = ProblemKind::Regression;
  RegressionOptions regression;
  LogisticOptions logistic;
  DictionaryOptions dictionary;
  /// Data files; when set they replace the generator. Regression: train and
  /// validation CSVs with the label in label_column. Logistic: one CSV or
  /// LIBSVM file. Dictionary: old samples, new samples and old codes CSVs.
  std::optional<std::string> train_file;
  std::optional<std::string> val_file;
  std::optional<std::string> data_file;
  std::optional<std::string> old_samples_file;
  std::optional<std::string> new_samples_file;
  std::optional<std::string> old_codes_file;
  /// Defaults to the last column.
  std::optional<std::size_t> label_column;

  bool from_files() const;
  bool operator==(const ProblemSpec&) const = default;
};

struct OutputSpec {
  std::optional<std::string> trace;

  bool operator==(const OutputSpec&) const = default;
};

struct ReferenceSpec {
  std::optional<std::string> file;
  double inner_epsilon = 1e-8;
  std::uint64_t inner_max_iterations = 1'000'000;
  std::uint64_t bilevel_iterations = 200'000;
  /// Unset means solver.varsigma.
  std::optional<double> bilevel_varsigma;
  double bilevel_p = 0.5;

  bool operator==(const ReferenceSpec&) const = default;
};

struct SuiteEntry {
  std::string name;
  /// Solver keys applied on top of [solver], in file order.
  std::vector<std::pair<std::string, std::string>> overrides;

  bool operator==(const SuiteEntry&) const = default;
};

struct SuiteSpec {
  std::uint64_t replications = 1;
  std::optional<std::string> summary;
  std::vector<SuiteEntry> entries;

  bool operator==(const SuiteSpec&) const = default;
};

struct RunConfig {
  ProblemSpec problem;
  SolverConfig solver;
  OutputSpec output;
  ReferenceSpec reference;
  /// Present only for bench suites.
  std::optional<SuiteSpec> suite;

  bool operator==(const RunConfig&) const = default;
};

/// Parsed file: section -> ordered (key, value) pairs.
using IniDocument = std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>;

IniDocument parse_ini(const std::string& text, const std::string& origin = "<config>");

/// Applies one "section.key=value" assignment (also used by --set).
void apply_setting(RunConfig& config, const std::string& section, const std::string& key, const std::string& value);
void apply_override(RunConfig& config, const std::string& assignment);

/// Unknown sections or keys, malformed values and duplicates throw ParseError.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(format_config(c)) == c.
std::string format_config(const RunConfig& config);

/// Builds the problem instance (generator or files), without references.
ProblemInstance build_problem(const ProblemSpec& spec);

/// [solver] with the entry's overrides applied.
SolverConfig entry_solver(const RunConfig& config, const SuiteEntry& entry);

/// Keys accepted in [solver] / [entry.*].
std::vector<std::string> solver_keys();

}  // namespace ircg::cli
