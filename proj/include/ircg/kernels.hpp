#pragma once

// Full-pass kernels behind the finite-sum oracles.
//
// The top-level functions are OpenMP-parallel; kernels::serial holds the
// straight-line versions kept as the reference for tests and benchmarks.
// residual() and transposed_product() accumulate every output entry in the
// same order as their serial twins, so the two agree bitwise for any thread
// count. mean_component_gradient() sums fixed-size chunks and combines them in
// index order: deterministic for any thread count, but summed in a different
// order than the serial reference.

#include <cstddef>

#include "ircg/types.hpp"

namespace ircg {
class ComponentOracle;
}

namespace ircg::kernels {

/// Worker threads available to the parallel kernels.
int max_threads();

/// Problems smaller than this many multiply-adds run single-threaded.
inline constexpr std::size_t kParallelThreshold = 1u << 15;

/// r = A x - b
void residual(const Matrix& a, const Vector& x, const Vector& b, Vector& r);
/// out = scale * A^T w
void transposed_product(const Matrix& a, const Vector& w, double scale, Vector& out);
/// u = A x
void product(const Matrix& a, const Vector& x, Vector& u);
/// Sum of entries in index order.
double ordered_sum(const Vector& v);

/// Mean of all component gradients / values of a finite-sum oracle.
void mean_component_gradient(const ComponentOracle& oracle, const Vector& x, Vector& out);
double mean_component_value(const ComponentOracle& oracle, const Vector& x);

namespace serial {

void residual(const Matrix& a, const Vector& x, const Vector& b, Vector& r);
void transposed_product(const Matrix& a, const Vector& w, double scale, Vector& out);
void product(const Matrix& a, const Vector& x, Vector& u);

/// (1/n) sum_i grad_i(x), summed in index order.
void mean_component_gradient(const ComponentOracle& oracle, const Vector& x, Vector& out);
double mean_component_value(const ComponentOracle& oracle, const Vector& x);

}  // namespace serial

}  // namespace ircg::kernels
