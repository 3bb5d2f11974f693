#include "ircg/core.hpp"

#include <cmath>
#include <string>

#include "ircg/kernels.hpp"
#include "ircg/schedules.hpp"

namespace ircg {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MissingFiniteSum: return "MissingFiniteSum";
    case ErrorCode::PeriodTooSmall: return "PeriodTooSmall";
    case ErrorCode::StreamingOracle: return "StreamingOracle";
    case ErrorCode::NotYetDefined: return "NotYetDefined";
    case ErrorCode::BudgetZero: return "BudgetZero";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::MissingReference: return "MissingReference";
    case ErrorCode::StaleReference: return "StaleReference";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonAscendingIndex: return "NonAscendingIndex";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

const char* to_string(Method m) { return m == Method::IrScg ? "ir-scg" : "ir-fscg"; }
const char* to_string(Preset p) { return p == Preset::Convex ? "convex" : "nonconvex"; }
const char* to_string(AlphaVariant v) { return v == AlphaVariant::Theorem ? "theorem" : "experiment"; }

std::optional<Method> parse_method(const std::string& s) {
  if (s == "ir-scg") return Method::IrScg;
  if (s == "ir-fscg") return Method::IrFscg;
  return std::nullopt;
}

std::optional<Preset> parse_preset(const std::string& s) {
  if (s == "convex") return Preset::Convex;
  if (s == "nonconvex") return Preset::Nonconvex;
  return std::nullopt;
}

std::optional<AlphaVariant> parse_alpha_variant(const std::string& s) {
  if (s == "theorem") return AlphaVariant::Theorem;
  if (s == "experiment") return AlphaVariant::Experiment;
  return std::nullopt;
}

Vector ComponentOracle::grad_component(const Vector& x, SampleId id) const {
  Vector g = Vector::Zero(static_cast<Eigen::Index>(dim()));
  add_grad_component(x, id, 1.0, g);
  return g;
}

void ComponentOracle::require_finite_sum(const char* what) const {
  if (!finite_sum())
    throw Error(ErrorCode::StreamingOracle, std::string(what) + " needs a finite-sum oracle");
}

void ComponentOracle::full_grad(const Vector& x, Vector& out) const {
  require_finite_sum("full_grad");
  kernels::serial::mean_component_gradient(*this, x, out);
}

double ComponentOracle::full_value(const Vector& x) const {
  require_finite_sum("full_value");
  return kernels::serial::mean_component_value(*this, x);
}

void check_problem(const ProblemInstance& problem) {
  if (problem.dim == 0) throw Error(ErrorCode::InvalidArgument, "problem dimension must be positive");
  if (!problem.outer || !problem.inner) throw Error(ErrorCode::InvalidArgument, "problem needs both oracles");
  if (problem.feasible_set.dim() != problem.dim)
    throw Error(ErrorCode::DimensionMismatch, "feasible set dimension " + std::to_string(problem.feasible_set.dim()) +
                                                  " != problem dimension " + std::to_string(problem.dim));
  if (problem.outer->dim() != problem.dim || problem.inner->dim() != problem.dim)
    throw Error(ErrorCode::DimensionMismatch, "oracle dimension does not match problem dimension");
  for (const auto& n : {problem.n_outer(), problem.n_inner()})
    if (n && *n == 0) throw Error(ErrorCode::InvalidArgument, "finite sums need at least one component");
}

namespace {

std::size_t default_period(std::size_t n) {
  auto r = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r < 1 ? 1 : r;
}

}  // namespace

std::size_t schedule_period(const SolverConfig& c) {
  return std::max(c.period_outer.value_or(1), c.period_inner.value_or(1));
}

ValidationResult validate(const ProblemInstance& problem, const SolverConfig& config) {
  ValidationResult result{config, {}};
  SolverConfig& c = result.config;
  auto fail = [&](ErrorCode code, std::string msg) { result.violations.push_back({code, std::move(msg)}); };

  try {
    check_problem(problem);
  } catch (const Error& e) {
    fail(e.code(), e.what());
  }

  if (!c.p) {
    if (c.preset == Preset::Nonconvex)
      c.p = c.method == Method::IrScg ? 2.0 / 7.0 : 0.5;
    else
      c.p = c.method == Method::IrScg ? 0.25 : 0.5;
  }
  if (c.preset == Preset::Nonconvex && !c.omega) c.omega = c.method == Method::IrScg ? 6.0 / 7.0 : 0.75;

  if (!(c.varsigma > 0.0) || !std::isfinite(c.varsigma)) fail(ErrorCode::InvalidArgument, "varsigma must be positive");
  const double p = *c.p;
  if (c.preset == Preset::Convex) {
    if (c.method == Method::IrScg && !(p > 0.0 && p < 0.5))
      fail(ErrorCode::InvalidExponent, "ir-scg (convex) needs p in (0, 1/2), got " + std::to_string(p));
    if (c.method == Method::IrFscg && !(p > 0.0 && p < 1.0))
      fail(ErrorCode::InvalidExponent, "ir-fscg (convex) needs p in (0, 1), got " + std::to_string(p));
  } else {
    const double w = *c.omega;
    if (!(p > 0.0 && p <= w && w < 1.0))
      fail(ErrorCode::InvalidExponent, "nonconvex preset needs 0 < p <= omega < 1, got p=" + std::to_string(p) +
                                           " omega=" + std::to_string(w));
  }

  if (c.method == Method::IrFscg) {
    if (problem.outer && problem.inner && !problem.finite_sum()) {
      fail(ErrorCode::MissingFiniteSum, "ir-fscg needs finite-sum oracles at both levels");
    } else if (problem.outer && problem.inner) {
      const std::size_t nf = *problem.n_outer();
      const std::size_t ng = *problem.n_inner();
      if (!c.period_outer) c.period_outer = default_period(nf);
      if (!c.period_inner) c.period_inner = default_period(ng);
      if (!c.batch_outer) c.batch_outer = default_period(nf);
      if (!c.batch_inner) c.batch_inner = default_period(ng);
    }
    for (const auto& v : {c.period_outer, c.period_inner})
      if (v && *v < 1) fail(ErrorCode::InvalidArgument, "reset period q must be >= 1");
    for (const auto& v : {c.batch_outer, c.batch_inner})
      if (v && *v < 1) fail(ErrorCode::InvalidArgument, "mini-batch size must be >= 1");
  }
  if (c.checkpoint_every < 1) fail(ErrorCode::InvalidArgument, "checkpoint_every must be >= 1");
  if (c.budget.max_seconds && !(*c.budget.max_seconds > 0.0))
    fail(ErrorCode::InvalidArgument, "max_seconds must be positive");

  if (result.ok()) {
    // Structural checks of the implied schedule on a short prefix.
    const schedules::StepRule rule(c);
    const std::uint64_t horizon = std::max<std::uint64_t>(1000, 4 * rule.period());
    if (!schedules::satisfies_monotone_positive(rule, horizon))
      fail(ErrorCode::InvalidExponent, "regularization schedule is not positive and non-increasing");
    if (c.method == Method::IrScg && c.preset == Preset::Convex && !schedules::satisfies_squared_growth(rule, horizon))
      fail(ErrorCode::InvalidExponent, "t*sigma_t^2 must increase (p < 1/2)");
    if (c.method == Method::IrFscg && c.preset == Preset::Convex && !schedules::satisfies_plateau_growth(rule, horizon))
      fail(ErrorCode::InvalidExponent, "sigma_t must be constant through t = q and t*sigma_t increasing");
  }
  return result;
}

SolverConfig validated(const ProblemInstance& problem, const SolverConfig& config) {
  auto r = validate(problem, config);
  if (!r.ok()) throw Error(r.violations.front().code, r.violations.front().message);
  return r.config;
}

}  // namespace ircg
