#pragma once

// Stepsize, regularization and weight sequences. Every schedule is a pure
// function of the iteration index and its parameters: nothing here knows the
// total budget, which is what makes the solvers anytime and resumable.

#include <cstddef>
#include <cstdint>

#include "ircg/core.hpp"

namespace ircg::schedules {

/// 2/(t+2)
double alpha_convex(std::uint64_t t);

/// ln(q)/q, the constant warm-phase step of IR-FSCG. Throws PeriodTooSmall for q < 2.
double alpha_warm(std::size_t q);

/// (t+1)^{-omega}
double alpha_nonconvex(std::uint64_t t, double omega);

/// varsigma * (t+1)^{-p}
double sigma_one_sample(std::uint64_t t, double varsigma, double p);

/// varsigma * (max{t, q} + 1)^{-p}: constant through t = q.
double sigma_finite_sum(std::uint64_t t, std::size_t q, double varsigma, double p);

/// varsigma * (max{t, q+1} + 1)^{-p}: constant through t = q + 1.
double sigma_nonconvex_fs(std::uint64_t t, std::size_t q, double varsigma, double p);

/// Weights of the nonconvex finite-sum stationarity average:
/// sigma_0 (q+1)^omega ln(q+1)/(q+1) (1 - ln(q+1)/(q+1))^{q-t} for t <= q,
/// sigma_nonconvex_fs(t) afterwards. Throws PeriodTooSmall for q < 2.
double beta_nonconvex(std::uint64_t t, std::size_t q, double omega, double varsigma, double p);

/// sigma_{i-1} - sigma_i for sigma_one_sample, computed without cancellation.
double sigma_one_sample_decrement(std::uint64_t i, double varsigma, double p);

/// Resolved (alpha_t, sigma_t) pair for one normalized solver configuration.
class StepRule {
 public:
  StepRule(Method method, Preset preset, double varsigma, double p, double omega, std::size_t q,
           AlphaVariant variant);
  /// Requires a normalized (validated) configuration.
  explicit StepRule(const SolverConfig& normalized);

  double alpha(std::uint64_t t) const;
  double sigma(std::uint64_t t) const;
  /// Indices i <= start never enter the weighted average (0 for IR-SCG, q for IR-FSCG).
  std::uint64_t averaging_start() const;
  /// sigma(i-1) - sigma(i) for i >= 1, cancellation-free where the schedule allows it.
  double sigma_decrement(std::uint64_t i) const;

  Method method() const { return method_; }
  Preset preset() const { return preset_; }
  std::size_t period() const { return q_; }

 private:
  Method method_;
  Preset preset_;
  double varsigma_;
  double p_;
  double omega_;
  std::size_t q_;
  AlphaVariant variant_;
  double warm_alpha_;
};

/// Runtime predicates over t in [0, t_max]. Condition 1: positive and
/// non-increasing. Condition 3 growth part: (t+1) sigma_{t+1}^2 > t sigma_t^2.
/// Condition 4 plateau part: sigma_t = sigma_0 for t <= q and (t+1) sigma_{t+1} > t sigma_t.
bool satisfies_monotone_positive(const StepRule& rule, std::uint64_t t_max);
bool satisfies_squared_growth(const StepRule& rule, std::uint64_t t_max);
bool satisfies_plateau_growth(const StepRule& rule, std::uint64_t t_max);

}  // namespace ircg::schedules
