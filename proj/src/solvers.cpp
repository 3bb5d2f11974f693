#include "ircg/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ircg/diagnostics.hpp"

namespace ircg {

namespace {

constexpr std::uint64_t kStartStream = 3;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

Vector start_point(const ProblemInstance& problem, const SolverConfig& config, std::optional<Vector> x0) {
  if (x0) {
    if (static_cast<std::size_t>(x0->size()) != problem.dim)
      throw Error(ErrorCode::DimensionMismatch, "x0 has dimension " + std::to_string(x0->size()));
    if (!contains(problem.feasible_set, *x0, 1e-9)) throw Error(ErrorCode::InvalidArgument, "x0 is not feasible");
    return std::move(*x0);
  }
  Rng rng(Rng::derive(config.seed, kStartStream));
  return random_point(problem.feasible_set, rng);
}

bool log_spaced(std::uint64_t t, std::uint32_t per_decade) {
  if (per_decade == 0 || t == 0) return false;
  const double k = static_cast<double>(per_decade);
  const double j = std::round(k * std::log10(static_cast<double>(t)));
  return static_cast<std::uint64_t>(std::llround(std::pow(10.0, j / k))) == t;
}

}  // namespace

void AveragingState::add(std::uint64_t i, double weight, const Vector& x_i) {
  if (i <= start_index) return;
  if (weighted_sum.size() == 0) weighted_sum = Vector::Zero(x_i.size());
  weighted_sum.noalias() += weight * x_i;
  weight_sum += weight;
}

Vector AveragingState::combine(double lead_weight, const Vector& x_t) const {
  const double total = lead_weight + weight_sum;
  if (weighted_sum.size() == 0) return x_t;
  Vector z = (lead_weight / total) * x_t;
  z.noalias() += (1.0 / total) * weighted_sum;
  return z;
}

Solver::Solver(ProblemInstance problem, const SolverConfig& config, std::optional<Vector> x0)
    : problem_(std::move(problem)),
      config_(validated(problem_, config)),
      rule_(config_),
      x_(start_point(problem_, config_, std::move(x0))),
      streams_(LevelStreams::from_seed(config_.seed)) {
  if (config_.method == Method::IrScg) {
    estimator_ = StormState{};
  } else {
    estimator_ = spider_init(problem_.dim, config_.period_outer.value(), config_.period_inner.value(),
                             config_.batch_outer.value(), config_.batch_inner.value());
  }
  avg_.start_index = rule_.averaging_start();
  avg_.weighted_sum = Vector::Zero(x_.size());
  direction_.resize(x_.size());
  vertex_.resize(x_.size());
}

void Solver::advance_estimator() {
  SampleLog* log = log_ ? &*log_ : nullptr;
  if (auto* s = std::get_if<StormState>(&estimator_)) {
    if (t_ == 0)
      *s = storm_init(problem_, x_, streams_, log);
    else
      storm_update(*s, problem_, x_, rule_.alpha(t_), streams_, log);
  } else {
    spider_step(std::get<SpiderState>(estimator_), problem_, x_, streams_, log);
  }
}

void Solver::step() {
  const auto start = Clock::now();
  advance_estimator();
  const double sigma = rule_.sigma(t_);
  direction_.noalias() = sigma * estimate_outer();
  direction_ += estimate_inner();
  lmo(problem_.feasible_set, direction_, vertex_);
  const double alpha = rule_.alpha(t_);
  x_ += alpha * (vertex_ - x_);
  ++t_;
  if (!x_.allFinite())
    throw Error(ErrorCode::NumericalFailure, "non-finite iterate at t = " + std::to_string(t_));
  avg_.add(t_, static_cast<double>(t_ + 1) * static_cast<double>(t_) * rule_.sigma_decrement(t_), x_);
  wall_ms_ += elapsed_ms(start);
}

const Vector& Solver::estimate_outer() const {
  return std::visit([](const auto& s) -> const Vector& { return s.est_f; }, estimator_);
}

const Vector& Solver::estimate_inner() const {
  return std::visit([](const auto& s) -> const Vector& { return s.est_g; }, estimator_);
}

std::uint64_t Solver::oracle_calls() const {
  return std::visit([](const auto& s) { return s.evals_outer + s.evals_inner; }, estimator_);
}

std::optional<Vector> Solver::averaged_iterate() const {
  const std::uint64_t guard = std::max<std::uint64_t>(1, avg_.start_index);
  if (t_ < guard) return std::nullopt;
  const auto td = static_cast<double>(t_);
  return avg_.combine((td + 1.0) * td * rule_.sigma(t_), x_);
}

Vector Solver::require_averaged_iterate() const {
  auto z = averaged_iterate();
  if (!z)
    throw Error(ErrorCode::NotYetDefined, "z_t is undefined at t = " + std::to_string(t_) + " (needs t >= " +
                                              std::to_string(std::max<std::uint64_t>(1, avg_.start_index)) + ")");
  return std::move(*z);
}

TraceRecord Solver::snapshot() const {
  TraceRecord r;
  r.t = t_;
  r.oracle_calls = oracle_calls();
  r.wall_ms = wall_ms_;
  r.sigma_t = rule_.sigma(t_);
  r.alpha_t = rule_.alpha(t_);
  if (problem_.refs && problem_.finite_sum()) {
    const auto gx = diagnostics::eval_gaps(x_, problem_);
    r.f_gap_x = gx.f_gap;
    r.g_gap_x = gx.g_gap;
    if (const auto z = averaged_iterate()) {
      const auto gz = diagnostics::eval_gaps(*z, problem_);
      r.f_gap_z = gz.f_gap;
      r.g_gap_z = gz.g_gap;
    }
  }
  if (config_.trace_estimate_error && t_ > 0 && problem_.finite_sum()) {
    const auto& x_est = std::visit([](const auto& s) -> const Vector& { return s.x_prev; }, estimator_);
    const auto e = estimate_error(estimate_outer(), estimate_inner(), problem_, x_est);
    r.est_err_f = e.outer;
    r.est_err_g = e.inner;
  }
  return r;
}

bool Solver::checkpoint_due(std::uint64_t t) const {
  return t % config_.checkpoint_every == 0 || log_spaced(t, config_.checkpoints_per_decade);
}

bool Solver::budget_reached() const {
  const auto& b = config_.budget;
  if (b.max_iterations && t_ >= *b.max_iterations) return true;
  if (b.max_oracle_calls && oracle_calls() >= *b.max_oracle_calls) return true;
  if (b.max_seconds && wall_ms_ >= *b.max_seconds * 1e3) return true;
  return false;
}

std::vector<TraceRecord> Solver::run(const TraceCallback& on_record) {
  if (config_.budget.unlimited()) throw Error(ErrorCode::BudgetZero, "run() needs an iteration, oracle or time budget");
  std::vector<TraceRecord> trace;
  auto emit = [&] {
    trace.push_back(snapshot());
    if (on_record) on_record(trace.back());
  };
  bool stepped = false;
  while (!budget_reached()) {
    step();
    stepped = true;
    if (checkpoint_due(t_)) emit();
  }
  if (stepped && (trace.empty() || trace.back().t != t_)) emit();
  return trace;
}

std::vector<TraceRecord> Solver::run_steps(std::uint64_t steps, const TraceCallback& on_record) {
  std::vector<TraceRecord> trace;
  for (std::uint64_t k = 0; k < steps; ++k) {
    step();
    if (checkpoint_due(t_)) {
      trace.push_back(snapshot());
      if (on_record) on_record(trace.back());
    }
  }
  return trace;
}

namespace {

// Away-step bookkeeping is only kept for sets with finitely many vertices,
// where LMO outputs repeat and the active set stays small.
bool polytope(const FeasibleSet& set) {
  return std::holds_alternative<L1Ball>(set.variant()) || std::holds_alternative<Simplex>(set.variant());
}

struct ActiveSet {
  std::vector<Vector> atoms;
  std::vector<double> weights;

  std::size_t find_or_add(const Vector& v) {
    for (std::size_t k = 0; k < atoms.size(); ++k)
      if (atoms[k] == v) return k;
    atoms.push_back(v);
    weights.push_back(0.0);
    return atoms.size() - 1;
  }

  void prune() {
    for (std::size_t k = atoms.size(); k-- > 0;) {
      if (weights[k] <= 0.0) {
        atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(k));
        weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(k));
      }
    }
  }
};

}  // namespace

InnerReference reference_inner(const ProblemInstance& problem, double epsilon, std::uint64_t max_iterations,
                               std::optional<Vector> x0) {
  if (!problem.finite_sum()) throw Error(ErrorCode::MissingFiniteSum, "reference_inner needs full gradients");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const auto& g_oracle = *problem.inner;
  const FeasibleSet& set = problem.feasible_set;
  Vector x = x0 ? std::move(*x0) : canonical_point(set);
  if (static_cast<std::size_t>(x.size()) != problem.dim)
    throw Error(ErrorCode::DimensionMismatch, "x0 has dimension " + std::to_string(x.size()));

  const bool away = polytope(set);
  ActiveSet active;
  if (away) {
    active.atoms.push_back(x);
    active.weights.push_back(1.0);
  }

  Vector grad(x.size()), v(x.size()), d(x.size()), trial(x.size());
  double value = g_oracle.full_value(x);
  double lipschitz = problem.lipschitz_inner.value_or(1.0);
  InnerReference out;
  for (std::uint64_t it = 0;; ++it) {
    g_oracle.full_grad(x, grad);
    lmo(set, grad, v);
    const double gap = std::max(0.0, grad.dot(x - v));
    out.fw_gap = gap;
    out.iterations = it;
    if (gap <= epsilon) {
      out.certified = true;
      break;
    }
    if (it >= max_iterations) break;

    // Frank-Wolfe direction, or an away step from the worst active atom.
    bool away_step = false;
    std::size_t away_idx = 0;
    double gamma_max = 1.0;
    d = v - x;
    if (away && active.atoms.size() > 1) {
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < active.atoms.size(); ++k) {
        const double s = grad.dot(active.atoms[k]);
        if (s > worst) {
          worst = s;
          away_idx = k;
        }
      }
      const double away_gap = worst - grad.dot(x);
      if (away_gap > gap) {
        away_step = true;
        d = x - active.atoms[away_idx];
        const double lam = active.weights[away_idx];
        gamma_max = lam / (1.0 - lam);
      }
    }
    const double slope = grad.dot(d);
    const double dd = d.squaredNorm();
    if (!(dd > 0.0) || !(slope < 0.0)) break;

    lipschitz *= 0.9;
    double gamma = 0.0, trial_value = value;
    for (int tries = 0; tries < 100; ++tries) {
      gamma = std::min(-slope / (lipschitz * dd), gamma_max);
      trial = x + gamma * d;
      trial_value = g_oracle.full_value(trial);
      if (trial_value <= value + gamma * slope + 0.5 * lipschitz * gamma * gamma * dd) break;
      lipschitz *= 2.0;
    }
    x = trial;
    value = trial_value;

    if (away) {
      if (away_step) {
        for (auto& w : active.weights) w *= 1.0 + gamma;
        active.weights[away_idx] -= gamma;
        if (gamma >= gamma_max) active.weights[away_idx] = 0.0;
      } else {
        for (auto& w : active.weights) w *= 1.0 - gamma;
        const std::size_t k = active.find_or_add(v);
        active.weights[k] += gamma;
        if (gamma >= 1.0) {
          active.atoms = {v};
          active.weights = {1.0};
        }
      }
      active.prune();
    }
  }
  out.x = std::move(x);
  out.g_value = g_oracle.full_value(out.x);
  return out;
}

BilevelReference reference_bilevel(const ProblemInstance& problem, std::uint64_t iterations, double varsigma,
                                   double g_opt, double p, std::optional<Vector> x0) {
  if (!problem.finite_sum()) throw Error(ErrorCode::MissingFiniteSum, "reference_bilevel needs full gradients");
  if (!(varsigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "varsigma must be positive");
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidExponent, "p must lie in (0, 1)");
  if (iterations < 2) throw Error(ErrorCode::InvalidArgument, "reference_bilevel needs at least 2 iterations");
  const FeasibleSet& set = problem.feasible_set;
  Vector x = x0 ? std::move(*x0) : canonical_point(set);
  const auto n = x.size();
  Vector gf(n), gg(n), v(n);
  AveragingState avg;
  avg.weighted_sum = Vector::Zero(n);
  auto z_at = [&](std::uint64_t t) {
    const auto td = static_cast<double>(t);
    return avg.combine((td + 1.0) * td * schedules::sigma_one_sample(t, varsigma, p), x);
  };
  const std::uint64_t half = iterations / 2;
  double f_half = 0.0;
  for (std::uint64_t t = 0; t < iterations; ++t) {
    problem.outer->full_grad(x, gf);
    problem.inner->full_grad(x, gg);
    gg.noalias() += schedules::sigma_one_sample(t, varsigma, p) * gf;
    lmo(set, gg, v);
    x += schedules::alpha_convex(t) * (v - x);
    const std::uint64_t i = t + 1;
    const auto id = static_cast<double>(i);
    avg.add(i, (id + 1.0) * id * schedules::sigma_one_sample_decrement(i, varsigma, p), x);
    if (i == half) f_half = problem.outer->full_value(z_at(i));
  }
  BilevelReference out;
  out.iterations = iterations;
  out.z = z_at(iterations);
  out.f_value = problem.outer->full_value(out.z);
  out.inner_gap = problem.inner->full_value(out.z) - g_opt;
  out.trailing_decrement = std::abs(out.f_value - f_half);
  out.f_tol = std::max(out.inner_gap, 0.0) + out.trailing_decrement;
  return out;
}

}  // namespace ircg
