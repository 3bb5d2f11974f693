#include "ircg/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "ircg/schedules.hpp"

namespace ircg::diagnostics {

namespace {

// Kahan-Babuska (Neumaier) compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

Gaps eval_gaps(const Vector& x, const ProblemInstance& problem) {
  if (!problem.refs) throw Error(ErrorCode::MissingReference, "problem has no reference optima");
  if (!problem.finite_sum()) throw Error(ErrorCode::MissingFiniteSum, "gaps need exact objective values");
  const auto& refs = *problem.refs;
  const double g_gap = problem.inner->full_value(x) - refs.g_opt;
  if (g_gap < -refs.g_tol)
    throw Error(ErrorCode::StaleReference, "G(x) - G_opt = " + std::to_string(g_gap) + " is below -g_tol = " +
                                               std::to_string(-refs.g_tol));
  const double f_value = problem.outer->full_value(x);
  return {refs.f_opt ? f_value - *refs.f_opt : f_value, g_gap};
}

const char* to_string(GapField f) {
  switch (f) {
    case GapField::FGapX: return "f_gap_x";
    case GapField::GGapX: return "g_gap_x";
    case GapField::FGapZ: return "f_gap_z";
    case GapField::GGapZ: return "g_gap_z";
  }
  return "?";
}

std::optional<GapField> parse_gap_field(const std::string& s) {
  for (auto f : {GapField::FGapX, GapField::GGapX, GapField::FGapZ, GapField::GGapZ})
    if (s == to_string(f)) return f;
  return std::nullopt;
}

std::vector<std::string> gap_field_names() { return {"f_gap_x", "g_gap_x", "f_gap_z", "g_gap_z"}; }

bool fits_absolute(GapField f) { return f == GapField::FGapX || f == GapField::FGapZ; }

double field_value(const TraceRecord& r, GapField f) {
  switch (f) {
    case GapField::FGapX: return r.f_gap_x;
    case GapField::GGapX: return r.g_gap_x;
    case GapField::FGapZ: return r.f_gap_z;
    case GapField::GGapZ: return r.g_gap_z;
  }
  return kNaN;
}

RateFit fit_power_law(std::span<const double> t, std::span<const double> gap, Window window, bool absolute) {
  if (t.size() != gap.size()) throw Error(ErrorCode::DimensionMismatch, "t and gap differ in length");
  std::vector<double> lx, ly;
  RateFit fit;
  fit.t_min = std::numeric_limits<double>::infinity();
  fit.t_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!(t[k] > 0.0) || t[k] < window.t_min || t[k] > window.t_max) continue;
    const double g = absolute ? std::abs(gap[k]) : gap[k];
    if (!(g > 0.0) || !std::isfinite(g)) continue;
    lx.push_back(std::log(t[k]));
    ly.push_back(std::log(g));
    fit.t_min = std::min(fit.t_min, t[k]);
    fit.t_max = std::max(fit.t_max, t[k]);
  }
  fit.samples = lx.size();
  if (fit.samples < kMinFitSamples || !(fit.t_min < fit.t_max))
    throw Error(ErrorCode::InsufficientData, "need at least " + std::to_string(kMinFitSamples) +
                                                 " positive samples at distinct t in the window, got " +
                                                 std::to_string(fit.samples));
  const auto n = static_cast<double>(fit.samples);
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    const double dx = lx[k] - mx;
    const double dy = ly[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

RateFit fit_rate_slope(const std::vector<TraceRecord>& trace, GapField field, Window window) {
  std::vector<double> t, gap;
  t.reserve(trace.size());
  gap.reserve(trace.size());
  for (const auto& r : trace) {
    t.push_back(static_cast<double>(r.t));
    gap.push_back(field_value(r, field));
  }
  return fit_power_law(t, gap, window, fits_absolute(field));
}

ScheduleConstantsReport check_schedule_constants(double varsigma, double p, std::uint64_t t_max) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidExponent, "p must lie in (0, 1)");
  if (!(varsigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "varsigma must be positive");
  ScheduleConstantsReport r;
  r.p = p;
  r.t_max = t_max;
  r.c_bound = 2.0 * p;
  r.v_bound = 2.0 * p / std::min(1.0, 2.0 * (1.0 - p));
  CompensatedSum weights, weighted_sigma;
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    const auto td = static_cast<double>(t);
    const double sigma = schedules::sigma_one_sample(t, varsigma, p);
    const double w = (td + 1.0) * td * schedules::sigma_one_sample_decrement(t, varsigma, p);
    weights.add(w);
    weighted_sigma.add(w * sigma);
    const double lead = (td + 1.0) * td * sigma;
    const double c_ratio = weights.value() / lead;
    const double v_ratio = weighted_sigma.value() / (lead * sigma);
    r.max_c_ratio = std::max(r.max_c_ratio, c_ratio);
    r.max_v_ratio = std::max(r.max_v_ratio, v_ratio);
    if (c_ratio > r.c_bound) ++r.c_violations;
    if (v_ratio > r.v_bound) ++r.v_violations;
  }
  r.pass = r.c_violations == 0 && r.v_violations == 0;
  return r;
}

double fw_gap(const Vector& x, const FeasibleSet& set, const Vector& g) {
  const Vector v = lmo(set, g);
  // x is itself a candidate, so the exact value is >= 0; clamp rounding noise.
  return std::max(0.0, g.dot(x - v));
}

double fw_gap(const Vector& x, const ProblemInstance& problem, double sigma) {
  if (!problem.finite_sum()) throw Error(ErrorCode::MissingFiniteSum, "fw_gap needs full gradients");
  const Vector g = sigma * problem.outer->full_grad(x) + problem.inner->full_grad(x);
  return fw_gap(x, problem.feasible_set, g);
}

}  // namespace ircg::diagnostics
