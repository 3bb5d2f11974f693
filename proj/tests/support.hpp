#pragma once

// Small problem builders shared by the test binaries.

#include <memory>

#include "ircg/problems.hpp"

namespace ircg::test {

/// Components 1/2 ||x - c_i||^2 with centers c_i as matrix rows.
inline OraclePtr centered_quadratic(const Matrix& centers) {
  const auto n = static_cast<std::size_t>(centers.rows());
  return std::make_shared<FunctionOracle>(
      static_cast<std::size_t>(centers.cols()), n,
      [centers](const Vector& x, SampleId id) {
        return 0.5 * (x - centers.row(static_cast<Eigen::Index>(id)).transpose()).squaredNorm();
      },
      [centers](const Vector& x, SampleId id, double w, Vector& out) {
        out += w * (x - centers.row(static_cast<Eigen::Index>(id)).transpose());
      });
}

/// Single-component quadratic 1/2 x^T H x - c^T x (deterministic level).
inline OraclePtr fixed_quadratic(const Matrix& h, const Vector& c) {
  return std::make_shared<FunctionOracle>(
      static_cast<std::size_t>(c.size()), std::size_t{1},
      [h, c](const Vector& x, SampleId) { return 0.5 * x.dot(h * x) - c.dot(x); },
      [h, c](const Vector& x, SampleId, double w, Vector& out) { out += w * (h * x - c); });
}

inline ProblemInstance make_instance(OraclePtr outer, OraclePtr inner, FeasibleSet set) {
  ProblemInstance p;
  p.name = "test";
  p.dim = set.dim();
  p.feasible_set = std::move(set);
  p.outer = std::move(outer);
  p.inner = std::move(inner);
  return p;
}

inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
  return m;
}

/// Small noiseless regression used by several suites.
inline ProblemInstance small_regression(std::uint64_t seed = 1, std::size_t n = 30, std::size_t d = 8) {
  RegressionOptions o;
  o.seed = seed;
  o.n = n;
  o.d = d;
  o.n_val = 20;
  return gen_regression(o);
}

}  // namespace ircg::test
