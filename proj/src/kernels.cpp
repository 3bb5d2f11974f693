#include "ircg/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <string>
#include <vector>

#include "ircg/core.hpp"

namespace ircg::kernels {

namespace {

constexpr std::size_t kChunk = 64;

bool worth_parallel(std::size_t work) { return work >= kParallelThreshold; }

void check_shapes(const Matrix& a, const Vector& x, const char* what) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": A.cols != x.size");
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

void residual(const Matrix& a, const Vector& x, const Vector& b, Vector& r) {
  check_shapes(a, x, "residual");
  const Eigen::Index rows = a.rows();
  r.resize(rows);
#pragma omp parallel for schedule(static) if (worth_parallel(static_cast<std::size_t>(a.size())))
  for (Eigen::Index i = 0; i < rows; ++i) r[i] = a.row(i).dot(x) - b[i];
}

void product(const Matrix& a, const Vector& x, Vector& u) {
  check_shapes(a, x, "product");
  const Eigen::Index rows = a.rows();
  u.resize(rows);
#pragma omp parallel for schedule(static) if (worth_parallel(static_cast<std::size_t>(a.size())))
  for (Eigen::Index i = 0; i < rows; ++i) u[i] = a.row(i).dot(x);
}

void transposed_product(const Matrix& a, const Vector& w, double scale, Vector& out) {
  if (a.rows() != w.size()) throw Error(ErrorCode::DimensionMismatch, "transposed_product: A.rows != w.size");
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  out.setZero(cols);
  // Each thread owns a column block and sweeps all rows in order, so every
  // output entry sees the same summation order as the serial row sweep.
#pragma omp parallel if (worth_parallel(static_cast<std::size_t>(a.size())))
  {
    const Eigen::Index nt = omp_get_num_threads();
    const Eigen::Index tid = omp_get_thread_num();
    const Eigen::Index lo = cols * tid / nt;
    const Eigen::Index hi = cols * (tid + 1) / nt;
    if (hi > lo) {
      auto block = out.segment(lo, hi - lo);
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double wi = w[i];
        const double* row = a.data() + i * cols;
        for (Eigen::Index j = lo; j < hi; ++j) block[j - lo] += wi * row[j];
      }
    }
  }
  out *= scale;
}

double ordered_sum(const Vector& v) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += v[i];
  return s;
}

void mean_component_gradient(const ComponentOracle& oracle, const Vector& x, Vector& out) {
  const std::size_t n = oracle.n_components().value();
  const auto d = static_cast<Eigen::Index>(oracle.dim());
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Vector> partial(chunks, Vector::Zero(d));
#pragma omp parallel for schedule(dynamic) if (worth_parallel(n * static_cast<std::size_t>(d)) && chunks > 1)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) oracle.add_grad_component(x, i, 1.0, partial[c]);
  }
  out.setZero(d);
  for (const auto& p : partial) out += p;
  out /= static_cast<double>(n);
}

double mean_component_value(const ComponentOracle& oracle, const Vector& x) {
  const std::size_t n = oracle.n_components().value();
  Vector values(static_cast<Eigen::Index>(n));
#pragma omp parallel for schedule(static) if (worth_parallel(n * oracle.dim()))
  for (std::size_t i = 0; i < n; ++i) values[static_cast<Eigen::Index>(i)] = oracle.value_component(x, i);
  return ordered_sum(values) / static_cast<double>(n);
}

namespace serial {

void residual(const Matrix& a, const Vector& x, const Vector& b, Vector& r) {
  check_shapes(a, x, "residual");
  r.resize(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) r[i] = a.row(i).dot(x) - b[i];
}

void product(const Matrix& a, const Vector& x, Vector& u) {
  check_shapes(a, x, "product");
  u.resize(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) u[i] = a.row(i).dot(x);
}

void transposed_product(const Matrix& a, const Vector& w, double scale, Vector& out) {
  if (a.rows() != w.size()) throw Error(ErrorCode::DimensionMismatch, "transposed_product: A.rows != w.size");
  const Eigen::Index cols = a.cols();
  out.setZero(cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double wi = w[i];
    const double* row = a.data() + i * cols;
    for (Eigen::Index j = 0; j < cols; ++j) out[j] += wi * row[j];
  }
  out *= scale;
}

void mean_component_gradient(const ComponentOracle& oracle, const Vector& x, Vector& out) {
  const std::size_t n = oracle.n_components().value();
  out.setZero(static_cast<Eigen::Index>(oracle.dim()));
  for (std::size_t i = 0; i < n; ++i) oracle.add_grad_component(x, i, 1.0, out);
  out /= static_cast<double>(n);
}

double mean_component_value(const ComponentOracle& oracle, const Vector& x) {
  const std::size_t n = oracle.n_components().value();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += oracle.value_component(x, i);
  return s / static_cast<double>(n);
}

}  // namespace serial

}  // namespace ircg::kernels
