#pragma once

// Variance-reduced gradient estimators, one state per run holding both levels.
//
//   STORM  (IR-SCG):  est_t = (1 - a_t) est_{t-1} + grad(x_t; s_t) - (1 - a_t) grad(x_{t-1}; s_t)
//   SPIDER (IR-FSCG): est_t = full gradient when t % q == 0, otherwise
//                     est_{t-1} + mean over a fresh batch B of [grad(x_t; B) - grad(x_{t-1}; B)]
//
// The outer and inner levels draw from independent streams. Evaluation counts
// are kept per level and count component-gradient evaluations only.

#include <cstdint>
#include <vector>

#include "ircg/core.hpp"

namespace ircg {

/// Independent sample streams for the outer (theta) and inner (xi) levels.
struct LevelStreams {
  Rng outer;
  Rng inner;

  static LevelStreams from_seed(std::uint64_t seed);
  bool operator==(const LevelStreams&) const = default;
};

/// Ids drawn per estimator step (an empty entry marks a full-gradient reset).
struct SampleLog {
  std::vector<std::vector<SampleId>> outer;
  std::vector<std::vector<SampleId>> inner;
};

/// Draws one id from a level: uniform index for finite sums, raw draw for streams.
SampleId draw_sample(const ComponentOracle& oracle, Rng& rng);

struct StormState {
  Vector est_f;
  Vector est_g;
  /// Number of estimates formed; the current estimate belongs to x_{steps-1}.
  std::uint64_t steps = 0;
  Vector x_prev;
  std::uint64_t evals_outer = 0;
  std::uint64_t evals_inner = 0;
};

StormState storm_init(const ProblemInstance& problem, const Vector& x0, LevelStreams& streams,
                      SampleLog* log = nullptr);
void storm_update(StormState& state, const ProblemInstance& problem, const Vector& x_t, double alpha_t,
                  LevelStreams& streams, SampleLog* log = nullptr);

struct SpiderState {
  Vector est_f;
  Vector est_g;
  std::uint64_t steps = 0;
  Vector x_prev;
  std::size_t period_outer = 1;
  std::size_t period_inner = 1;
  std::size_t batch_outer = 1;
  std::size_t batch_inner = 1;
  std::uint64_t evals_outer = 0;
  std::uint64_t evals_inner = 0;
};

SpiderState spider_init(std::size_t dim, std::size_t period_outer, std::size_t period_inner, std::size_t batch_outer,
                        std::size_t batch_inner);
/// Advances to the estimate at x_t (t = state.steps). Resets consume no draws.
void spider_step(SpiderState& state, const ProblemInstance& problem, const Vector& x_t, LevelStreams& streams,
                 SampleLog* log = nullptr);

struct EstimateError {
  double outer;
  double inner;
};

/// (||est_f - grad F(x_t)||, ||est_g - grad G(x_t)||). Finite sums only.
EstimateError estimate_error(const Vector& est_f, const Vector& est_g, const ProblemInstance& problem,
                             const Vector& x_t);
inline EstimateError estimate_error(const StormState& s, const ProblemInstance& p, const Vector& x_t) {
  return estimate_error(s.est_f, s.est_g, p, x_t);
}
inline EstimateError estimate_error(const SpiderState& s, const ProblemInstance& p, const Vector& x_t) {
  return estimate_error(s.est_f, s.est_g, p, x_t);
}

}  // namespace ircg
