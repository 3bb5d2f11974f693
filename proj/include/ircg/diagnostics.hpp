#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ircg/core.hpp"

namespace ircg::diagnostics {

struct Gaps {
  /// F(x) - F_opt; the raw value F(x) when the reference has no F_opt.
  double f_gap;
  double g_gap;
};

/// Exact full-objective gaps against problem.refs. Throws MissingReference
/// without references and StaleReference when G(x) - G_opt < -g_tol.
Gaps eval_gaps(const Vector& x, const ProblemInstance& problem);

enum class GapField { FGapX, GGapX, FGapZ, GGapZ };

const char* to_string(GapField f);
std::optional<GapField> parse_gap_field(const std::string& s);
std::vector<std::string> gap_field_names();
/// Outer gaps are fitted on |gap| (the signed outer gap of an estimated
/// optimum crosses zero); inner gaps on strictly positive values only.
bool fits_absolute(GapField f);
double field_value(const TraceRecord& r, GapField f);

struct Window {
  double t_min = 0.0;
  double t_max = std::numeric_limits<double>::infinity();
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  /// Range of t actually fitted.
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t samples = 0;
};

inline constexpr std::size_t kMinFitSamples = 10;

/// Least-squares line through (ln t, ln gap) over samples with t in the
/// window and a usable gap. Throws InsufficientData below kMinFitSamples.
RateFit fit_power_law(std::span<const double> t, std::span<const double> gap, Window window, bool absolute);
RateFit fit_rate_slope(const std::vector<TraceRecord>& trace, GapField field, Window window);

struct ScheduleConstantsReport {
  double p = 0.0;
  std::uint64_t t_max = 0;
  /// max_t sum_{i<=t} (i+1) i (s_{i-1}-s_i) / ((t+1) t s_t)
  double max_c_ratio = 0.0;
  /// max_t sum_{i<=t} (i+1) i (s_{i-1}-s_i) s_i / ((t+1) t s_t^2)
  double max_v_ratio = 0.0;
  double c_bound = 0.0;
  double v_bound = 0.0;
  std::uint64_t c_violations = 0;
  std::uint64_t v_violations = 0;
  bool pass = false;
};

/// Checks the averaging-weight constants of s_t = varsigma (t+1)^{-p} for all
/// 1 <= t <= t_max against C <= 2p and V <= 2p / min{1, 2(1-p)}.
ScheduleConstantsReport check_schedule_constants(double varsigma, double p, std::uint64_t t_max);

/// max_{v in X} <g, x - v>; zero iff x minimizes the linearization over X.
double fw_gap(const Vector& x, const FeasibleSet& set, const Vector& g);
/// Frank-Wolfe gap of sigma F + G at x (stationarity surrogate over X).
double fw_gap(const Vector& x, const ProblemInstance& problem, double sigma);

}  // namespace ircg::diagnostics
