#pragma once

// Iteratively regularized conditional-gradient solvers.
//
// Each step forms the estimate of sigma_t * grad F + grad G at x_t (STORM for
// IR-SCG, SPIDER for IR-FSCG), calls the LMO once and takes the convex step
// x_{t+1} = x_t + alpha_t (v_t - x_t). The averaged iterate
//
//   z_t = ((t+1) t sigma_t x_t + sum_{start < i <= t} w_i x_i) / S_t,
//   w_i = (i+1) i (sigma_{i-1} - sigma_i),   S_t = (t+1) t sigma_t + sum w_i
//
// is maintained with O(d) accumulators; start is 0 for IR-SCG and q for IR-FSCG.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "ircg/core.hpp"
#include "ircg/estimators.hpp"
#include "ircg/schedules.hpp"

namespace ircg {

struct AveragingState {
  Vector weighted_sum;
  double weight_sum = 0.0;
  std::uint64_t start_index = 0;

  /// Adds w_i x_i; indices at or before start_index are ignored.
  void add(std::uint64_t i, double weight, const Vector& x_i);
  /// z_t given the lead weight (t+1) t sigma_t and x_t.
  Vector combine(double lead_weight, const Vector& x_t) const;
};

using TraceCallback = std::function<void(const TraceRecord&)>;

class Solver {
 public:
  /// Validates the configuration (throws on the first violation). Without x0
  /// the start point is drawn from the feasible set with the config seed.
  Solver(ProblemInstance problem, const SolverConfig& config, std::optional<Vector> x0 = std::nullopt);

  /// One iteration: x_t -> x_{t+1}.
  void step();

  /// Runs until the configured budget is reached (BudgetZero if none is set).
  std::vector<TraceRecord> run(const TraceCallback& on_record = {});
  /// Runs exactly `steps` more iterations, ignoring the configured budget.
  std::vector<TraceRecord> run_steps(std::uint64_t steps, const TraceCallback& on_record = {});

  /// z_t, or nullopt before the averaging guard (t < 1 for IR-SCG, t < q for IR-FSCG).
  std::optional<Vector> averaged_iterate() const;
  /// Throws NotYetDefined instead of returning nullopt.
  Vector require_averaged_iterate() const;

  /// Trace record for the current iterate (gaps filled when references exist).
  TraceRecord snapshot() const;
  bool checkpoint_due(std::uint64_t t) const;
  bool budget_reached() const;

  const Vector& x() const { return x_; }
  std::uint64_t t() const { return t_; }
  std::uint64_t oracle_calls() const;
  const SolverConfig& config() const { return config_; }
  const ProblemInstance& problem() const { return problem_; }
  const schedules::StepRule& rule() const { return rule_; }
  const AveragingState& averaging() const { return avg_; }
  /// Current gradient estimates (outer, inner) at x_{t-1} after a step.
  const Vector& estimate_outer() const;
  const Vector& estimate_inner() const;
  /// Records every drawn sample id from now on.
  void enable_sample_log() { log_.emplace(); }
  const std::optional<SampleLog>& sample_log() const { return log_; }

 private:
  void advance_estimator();

  ProblemInstance problem_;
  SolverConfig config_;
  schedules::StepRule rule_;
  Vector x_;
  std::uint64_t t_ = 0;
  std::variant<StormState, SpiderState> estimator_;
  LevelStreams streams_;
  AveragingState avg_;
  Vector direction_;
  Vector vertex_;
  std::optional<SampleLog> log_;
  double wall_ms_ = 0.0;
};

/// Deterministic Frank-Wolfe on G with an adaptive (backtracking) step.
struct InnerReference {
  Vector x;
  double g_value = 0.0;
  /// Final Frank-Wolfe gap; by convexity G(x) - G_opt <= fw_gap.
  double fw_gap = 0.0;
  std::uint64_t iterations = 0;
  bool certified = false;
};

/// Runs until the Frank-Wolfe gap drops to epsilon; certified is false (with the
/// best point found) when max_iterations is exhausted first.
InnerReference reference_inner(const ProblemInstance& problem, double epsilon,
                               std::uint64_t max_iterations = 10'000'000,
                               std::optional<Vector> x0 = std::nullopt);

struct BilevelReference {
  double f_value = 0.0;
  /// G(z_T) - g_opt, the quality tag of the estimate.
  double inner_gap = 0.0;
  /// |F(z_T) - F(z_{T/2})|
  double trailing_decrement = 0.0;
  /// Estimated tolerance: max(inner_gap, 0) + trailing_decrement.
  double f_tol = 0.0;
  std::uint64_t iterations = 0;
  Vector z;
};

/// Noiseless iteratively regularized CG (exact gradients, alpha_t = 2/(t+2),
/// sigma_t = varsigma (t+1)^{-p}) run for T iterations; returns F(z_T).
BilevelReference reference_bilevel(const ProblemInstance& problem, std::uint64_t iterations, double varsigma,
                                   double g_opt, double p = 0.5, std::optional<Vector> x0 = std::nullopt);

}  // namespace ircg
