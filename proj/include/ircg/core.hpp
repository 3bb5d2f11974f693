#pragma once

// Shared domain types: vectors, errors, RNG streams, component oracles,
// problem instances, solver configuration and trace records.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ircg/error.hpp"
#include "ircg/lmo.hpp"
#include "ircg/rng.hpp"
#include "ircg/types.hpp"

namespace ircg {

/// Component index for finite sums, raw generator draw for streaming oracles.
using SampleId = std::uint64_t;

/// Stochastic access to F = E[f(x, theta)] or G = E[g(x, xi)].
///
/// Implementations are immutable after construction and may be queried from
/// several threads at once.
class ComponentOracle {
 public:
  virtual ~ComponentOracle() = default;

  virtual std::size_t dim() const = 0;
  /// Number of components of a finite sum, std::nullopt for a pure stream.
  virtual std::optional<std::size_t> n_components() const = 0;

  virtual double value_component(const Vector& x, SampleId id) const = 0;
  /// out += weight * grad f(x, id)
  virtual void add_grad_component(const Vector& x, SampleId id, double weight, Vector& out) const = 0;

  Vector grad_component(const Vector& x, SampleId id) const;

  /// Mean of the component gradients. Finite sums only.
  virtual void full_grad(const Vector& x, Vector& out) const;
  virtual double full_value(const Vector& x) const;

  Vector full_grad(const Vector& x) const {
    Vector g(dim());
    full_grad(x, g);
    return g;
  }
  bool finite_sum() const { return n_components().has_value(); }

 protected:
  void require_finite_sum(const char* what) const;
};

using OraclePtr = std::shared_ptr<const ComponentOracle>;

struct ReferenceOptima {
  double g_opt = 0.0;
  double g_tol = 0.0;
  /// Absent for problems whose bilevel optimum is not estimated (nonconvex outer).
  std::optional<double> f_opt;
  double f_tol = 0.0;
  bool certified = true;
};

struct ProblemInstance {
  std::string name;
  std::size_t dim = 0;
  FeasibleSet feasible_set;
  OraclePtr outer;
  OraclePtr inner;
  std::optional<ReferenceOptima> refs;
  /// Smoothness constants, diagnostic only.
  std::optional<double> lipschitz_outer;
  std::optional<double> lipschitz_inner;
  bool convex_outer = true;

  std::optional<std::size_t> n_outer() const { return outer->n_components(); }
  std::optional<std::size_t> n_inner() const { return inner->n_components(); }
  bool finite_sum() const { return outer->finite_sum() && inner->finite_sum(); }
};

/// Throws DimensionMismatch / InvalidArgument when the instance is malformed.
void check_problem(const ProblemInstance& problem);

enum class Method { IrScg, IrFscg };
enum class Preset { Convex, Nonconvex };
/// Stepsize after the warm phase of IR-FSCG: 2/(t+2) (theorem) or 2/(t+1).
enum class AlphaVariant { Theorem, Experiment };

const char* to_string(Method m);
const char* to_string(Preset p);
const char* to_string(AlphaVariant v);
std::optional<Method> parse_method(const std::string& s);
std::optional<Preset> parse_preset(const std::string& s);
std::optional<AlphaVariant> parse_alpha_variant(const std::string& s);

struct Budget {
  std::optional<std::uint64_t> max_iterations;
  std::optional<std::uint64_t> max_oracle_calls;
  /// Wall-clock mode; runs under it are not reproducible across machines.
  std::optional<double> max_seconds;

  bool unlimited() const { return !max_iterations && !max_oracle_calls && !max_seconds; }
  bool operator==(const Budget&) const = default;
};

struct SolverConfig {
  Method method = Method::IrFscg;
  Preset preset = Preset::Convex;
  double varsigma = 1.0;
  /// Unset means the preset default for the method.
  std::optional<double> p;
  std::optional<double> omega;
  /// Reset period and mini-batch per level (IR-FSCG). Unset means floor(sqrt(n)).
  std::optional<std::size_t> period_outer;
  std::optional<std::size_t> period_inner;
  std::optional<std::size_t> batch_outer;
  std::optional<std::size_t> batch_inner;
  AlphaVariant alpha_variant = AlphaVariant::Theorem;
  std::uint64_t seed = 0;
  Budget budget;
  std::uint64_t checkpoint_every = 100;
  /// Extra log-spaced checkpoints, 0 = none.
  std::uint32_t checkpoints_per_decade = 0;
  /// Record the estimator error in traces (costs two full gradients per checkpoint).
  bool trace_estimate_error = false;

  bool operator==(const SolverConfig&) const = default;
};

struct Violation {
  ErrorCode code;
  std::string message;
};

struct ValidationResult {
  SolverConfig config;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Normalizes preset defaults and per-level periods/batches, and lists every
/// violated constraint. Idempotent on its own output.
ValidationResult validate(const ProblemInstance& problem, const SolverConfig& config);
/// validate() that throws the first violation.
SolverConfig validated(const ProblemInstance& problem, const SolverConfig& config);

/// Period that drives the schedules and the averaging start index.
std::size_t schedule_period(const SolverConfig& normalized);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct TraceRecord {
  std::uint64_t t = 0;
  std::uint64_t oracle_calls = 0;
  double wall_ms = 0.0;
  double f_gap_x = kNaN;
  double g_gap_x = kNaN;
  /// NaN while z_t is undefined or references are missing.
  double f_gap_z = kNaN;
  double g_gap_z = kNaN;
  double sigma_t = 0.0;
  double alpha_t = 0.0;
  double est_err_f = kNaN;
  double est_err_g = kNaN;
};

}  // namespace ircg
