#include "ircg/estimators.hpp"

#include <string>

namespace ircg {

namespace {

constexpr std::uint64_t kOuterStream = 1;
constexpr std::uint64_t kInnerStream = 2;

void check_point(const ProblemInstance& problem, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != problem.dim)
    throw Error(ErrorCode::DimensionMismatch, "iterate has dimension " + std::to_string(x.size()));
}

// One STORM recursion on a single level.
void storm_level(const ComponentOracle& oracle, Vector& est, const Vector& x_t, const Vector& x_prev, double alpha,
                 Rng& rng, std::vector<std::vector<SampleId>>* log) {
  const SampleId id = draw_sample(oracle, rng);
  const double keep = 1.0 - alpha;
  est *= keep;
  oracle.add_grad_component(x_t, id, 1.0, est);
  oracle.add_grad_component(x_prev, id, -keep, est);
  if (log) log->push_back({id});
}

// One SPIDER step on a single level; returns the evaluations spent.
std::uint64_t spider_level(const ComponentOracle& oracle, Vector& est, const Vector& x_t, const Vector& x_prev,
                           std::uint64_t t, std::size_t period, std::size_t batch, Rng& rng,
                           std::vector<std::vector<SampleId>>* log) {
  if (t % period == 0) {
    oracle.full_grad(x_t, est);
    if (log) log->push_back({});
    return oracle.n_components().value();
  }
  // The same ids are evaluated at both points. A batch covering the whole
  // sum is taken as the full index set instead of n draws with replacement.
  const std::size_t n = oracle.n_components().value();
  std::vector<SampleId> ids(batch);
  if (batch >= n) {
    ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  } else {
    for (auto& id : ids) id = draw_sample(oracle, rng);
  }
  const double w = 1.0 / static_cast<double>(ids.size());
  for (const SampleId id : ids) {
    oracle.add_grad_component(x_t, id, w, est);
    oracle.add_grad_component(x_prev, id, -w, est);
  }
  const auto spent = 2 * static_cast<std::uint64_t>(ids.size());
  if (log) log->push_back(std::move(ids));
  return spent;
}

}  // namespace

LevelStreams LevelStreams::from_seed(std::uint64_t seed) {
  return LevelStreams{Rng(Rng::derive(seed, kOuterStream)), Rng(Rng::derive(seed, kInnerStream))};
}

SampleId draw_sample(const ComponentOracle& oracle, Rng& rng) {
  if (const auto n = oracle.n_components()) return rng.index(*n);
  return rng.next();
}

StormState storm_init(const ProblemInstance& problem, const Vector& x0, LevelStreams& streams, SampleLog* log) {
  check_point(problem, x0);
  StormState s;
  const SampleId theta = draw_sample(*problem.outer, streams.outer);
  const SampleId xi = draw_sample(*problem.inner, streams.inner);
  s.est_f = problem.outer->grad_component(x0, theta);
  s.est_g = problem.inner->grad_component(x0, xi);
  s.x_prev = x0;
  s.steps = 1;
  s.evals_outer = 1;
  s.evals_inner = 1;
  if (log) {
    log->outer.push_back({theta});
    log->inner.push_back({xi});
  }
  return s;
}

void storm_update(StormState& state, const ProblemInstance& problem, const Vector& x_t, double alpha_t,
                  LevelStreams& streams, SampleLog* log) {
  if (state.steps == 0) throw Error(ErrorCode::InvalidArgument, "storm_update before storm_init");
  check_point(problem, x_t);
  storm_level(*problem.outer, state.est_f, x_t, state.x_prev, alpha_t, streams.outer, log ? &log->outer : nullptr);
  storm_level(*problem.inner, state.est_g, x_t, state.x_prev, alpha_t, streams.inner, log ? &log->inner : nullptr);
  state.evals_outer += 2;
  state.evals_inner += 2;
  state.x_prev = x_t;
  ++state.steps;
}

SpiderState spider_init(std::size_t dim, std::size_t period_outer, std::size_t period_inner, std::size_t batch_outer,
                        std::size_t batch_inner) {
  if (period_outer < 1 || period_inner < 1 || batch_outer < 1 || batch_inner < 1)
    throw Error(ErrorCode::InvalidArgument, "SPIDER periods and batches must be >= 1");
  SpiderState s;
  s.est_f = Vector::Zero(static_cast<Eigen::Index>(dim));
  s.est_g = Vector::Zero(static_cast<Eigen::Index>(dim));
  s.period_outer = period_outer;
  s.period_inner = period_inner;
  s.batch_outer = batch_outer;
  s.batch_inner = batch_inner;
  return s;
}

void spider_step(SpiderState& state, const ProblemInstance& problem, const Vector& x_t, LevelStreams& streams,
                 SampleLog* log) {
  check_point(problem, x_t);
  if (!problem.finite_sum()) throw Error(ErrorCode::MissingFiniteSum, "SPIDER needs finite-sum oracles");
  const std::uint64_t t = state.steps;
  state.evals_outer += spider_level(*problem.outer, state.est_f, x_t, state.x_prev, t, state.period_outer,
                                    state.batch_outer, streams.outer, log ? &log->outer : nullptr);
  state.evals_inner += spider_level(*problem.inner, state.est_g, x_t, state.x_prev, t, state.period_inner,
                                    state.batch_inner, streams.inner, log ? &log->inner : nullptr);
  state.x_prev = x_t;
  ++state.steps;
}

EstimateError estimate_error(const Vector& est_f, const Vector& est_g, const ProblemInstance& problem,
                             const Vector& x_t) {
  if (!problem.finite_sum())
    throw Error(ErrorCode::StreamingOracle, "estimate_error needs exact gradients (finite sums)");
  return {(est_f - problem.outer->full_grad(x_t)).norm(), (est_g - problem.inner->full_grad(x_t)).norm()};
}

}  // namespace ircg
