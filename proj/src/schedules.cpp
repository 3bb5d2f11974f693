#include "ircg/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ircg::schedules {

double alpha_convex(std::uint64_t t) { return 2.0 / (static_cast<double>(t) + 2.0); }

double alpha_warm(std::size_t q) {
  if (q < 2) throw Error(ErrorCode::PeriodTooSmall, "warm stepsize ln(q)/q needs q >= 2, got " + std::to_string(q));
  const auto qd = static_cast<double>(q);
  return std::log(qd) / qd;
}

double alpha_nonconvex(std::uint64_t t, double omega) {
  return std::pow(static_cast<double>(t) + 1.0, -omega);
}

double sigma_one_sample(std::uint64_t t, double varsigma, double p) {
  return varsigma * std::pow(static_cast<double>(t) + 1.0, -p);
}

double sigma_finite_sum(std::uint64_t t, std::size_t q, double varsigma, double p) {
  return sigma_one_sample(std::max<std::uint64_t>(t, q), varsigma, p);
}

double sigma_nonconvex_fs(std::uint64_t t, std::size_t q, double varsigma, double p) {
  return sigma_one_sample(std::max<std::uint64_t>(t, q + 1), varsigma, p);
}

double beta_nonconvex(std::uint64_t t, std::size_t q, double omega, double varsigma, double p) {
  if (q < 2) throw Error(ErrorCode::PeriodTooSmall, "beta weights need q >= 2, got " + std::to_string(q));
  if (t > q) return sigma_nonconvex_fs(t, q, varsigma, p);
  const double q1 = static_cast<double>(q) + 1.0;
  const double sigma0 = sigma_nonconvex_fs(0, q, varsigma, p);
  const double ratio = std::log(q1) / q1;
  return sigma0 * std::pow(q1, omega) * ratio * std::pow(1.0 - ratio, static_cast<double>(q - t));
}

double sigma_one_sample_decrement(std::uint64_t i, double varsigma, double p) {
  if (i == 0) return 0.0;
  const auto id = static_cast<double>(i);
  // varsigma * i^{-p} * (1 - (1 + 1/i)^{-p})
  return -varsigma * std::pow(id, -p) * std::expm1(-p * std::log1p(1.0 / id));
}

StepRule::StepRule(Method method, Preset preset, double varsigma, double p, double omega, std::size_t q,
                   AlphaVariant variant)
    : method_(method),
      preset_(preset),
      varsigma_(varsigma),
      p_(p),
      omega_(omega),
      q_(q),
      variant_(variant),
      warm_alpha_(0.0) {
  if (method_ == Method::IrFscg) {
    if (preset_ == Preset::Nonconvex) {
      const double q1 = static_cast<double>(q_) + 1.0;
      warm_alpha_ = std::log(q1) / q1;
    } else if (q_ >= 2) {
      warm_alpha_ = alpha_warm(q_);
    }
  }
}

StepRule::StepRule(const SolverConfig& c)
    : StepRule(c.method, c.preset, c.varsigma, c.p.value(), c.omega.value_or(0.75),
               c.method == Method::IrFscg ? schedule_period(c) : 1, c.alpha_variant) {}

double StepRule::alpha(std::uint64_t t) const {
  if (method_ == Method::IrScg) return preset_ == Preset::Convex ? alpha_convex(t) : alpha_nonconvex(t, omega_);
  if (preset_ == Preset::Nonconvex) return t <= q_ ? warm_alpha_ : alpha_nonconvex(t, omega_);
  // A period of one has no usable warm phase (ln(1)/1 = 0 would freeze x_0).
  if (t < q_ && q_ >= 2) return warm_alpha_;
  if (variant_ == AlphaVariant::Experiment) return std::min(1.0, 2.0 / (static_cast<double>(t) + 1.0));
  return alpha_convex(t);
}

double StepRule::sigma(std::uint64_t t) const {
  if (method_ == Method::IrScg) return sigma_one_sample(t, varsigma_, p_);
  if (preset_ == Preset::Nonconvex) return sigma_nonconvex_fs(t, q_, varsigma_, p_);
  return sigma_finite_sum(t, q_, varsigma_, p_);
}

std::uint64_t StepRule::averaging_start() const { return method_ == Method::IrScg ? 0 : q_; }

double StepRule::sigma_decrement(std::uint64_t i) const {
  if (i == 0) return 0.0;
  std::uint64_t plateau_end = 0;
  if (method_ == Method::IrFscg) plateau_end = preset_ == Preset::Nonconvex ? q_ + 1 : q_;
  if (i <= plateau_end) return 0.0;
  return sigma_one_sample_decrement(i, varsigma_, p_);
}

bool satisfies_monotone_positive(const StepRule& rule, std::uint64_t t_max) {
  double prev = rule.sigma(0);
  if (!(prev > 0.0) || !std::isfinite(prev)) return false;
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    const double s = rule.sigma(t);
    if (!(s > 0.0) || s > prev) return false;
    prev = s;
  }
  return true;
}

bool satisfies_squared_growth(const StepRule& rule, std::uint64_t t_max) {
  for (std::uint64_t t = 0; t < t_max; ++t) {
    const double now = static_cast<double>(t) * rule.sigma(t) * rule.sigma(t);
    const double next = static_cast<double>(t + 1) * rule.sigma(t + 1) * rule.sigma(t + 1);
    if (!(next > now)) return false;
  }
  return true;
}

bool satisfies_plateau_growth(const StepRule& rule, std::uint64_t t_max) {
  const double sigma0 = rule.sigma(0);
  for (std::uint64_t t = 0; t <= rule.period() && t <= t_max; ++t)
    if (rule.sigma(t) != sigma0) return false;
  for (std::uint64_t t = 0; t < t_max; ++t) {
    if (!(static_cast<double>(t + 1) * rule.sigma(t + 1) > static_cast<double>(t) * rule.sigma(t))) return false;
  }
  return true;
}

}  // namespace ircg::schedules
