#pragma once

// Component oracles and the built-in bilevel instances: over-parameterized
// regression, l1-constrained logistic regression with a min-norm outer level,
// and dictionary learning with a fixed old dictionary. Plus CSV / LIBSVM loaders.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "ircg/core.hpp"

namespace ircg {

/// Components (a_i^T x - b_i)^2, so the mean is (1/n) ||A x - b||^2.
class LeastSquaresOracle final : public ComponentOracle {
 public:
  LeastSquaresOracle(Matrix a, Vector b);

  std::size_t dim() const override { return static_cast<std::size_t>(a_.cols()); }
  std::optional<std::size_t> n_components() const override { return static_cast<std::size_t>(a_.rows()); }
  double value_component(const Vector& x, SampleId id) const override;
  void add_grad_component(const Vector& x, SampleId id, double weight, Vector& out) const override;
  using ComponentOracle::full_grad;
  void full_grad(const Vector& x, Vector& out) const override;
  double full_value(const Vector& x) const override;

  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }

 private:
  Matrix a_;
  Vector b_;
};

/// Stable ln(1 + exp(-b u)).
double logistic_loss(double u, double b);
/// d/du ln(1 + exp(-b u)) = -b / (1 + exp(b u)).
double logistic_loss_derivative(double u, double b);

/// Components psi(a_i^T x, b_i) with psi the logistic loss and b_i in {-1, +1}.
class LogisticOracle final : public ComponentOracle {
 public:
  LogisticOracle(Matrix a, Vector b);

  std::size_t dim() const override { return static_cast<std::size_t>(a_.cols()); }
  std::optional<std::size_t> n_components() const override { return static_cast<std::size_t>(a_.rows()); }
  double value_component(const Vector& x, SampleId id) const override;
  void add_grad_component(const Vector& x, SampleId id, double weight, Vector& out) const override;
  using ComponentOracle::full_grad;
  void full_grad(const Vector& x, Vector& out) const override;
  double full_value(const Vector& x) const override;

 private:
  Matrix a_;
  Vector b_;
};

/// Deterministic 1/2 ||x||^2 exposed as a one-component finite sum.
class HalfSqNormOracle final : public ComponentOracle {
 public:
  explicit HalfSqNormOracle(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const override { return dim_; }
  std::optional<std::size_t> n_components() const override { return 1; }
  double value_component(const Vector& x, SampleId) const override { return 0.5 * x.squaredNorm(); }
  void add_grad_component(const Vector& x, SampleId, double weight, Vector& out) const override {
    out += weight * x;
  }

 private:
  std::size_t dim_;
};

/// Variable layout of the dictionary problem: vec(D) column-major (m x q)
/// followed by vec(X) column-major (q x n_new).
struct DictionaryLayout {
  std::size_t m = 0;
  std::size_t q = 0;
  std::size_t n_new = 0;

  std::size_t dict_size() const { return m * q; }
  std::size_t dim() const { return m * q + q * n_new; }
  std::size_t code_offset(std::size_t i) const { return m * q + i * q; }
};

/// Inner level: components 1/2 ||a_i - D xhat_i||^2 (rows of `samples` are a_i,
/// rows of `codes` are the padded xhat_i). Independent of the code block.
class DictionaryInnerOracle final : public ComponentOracle {
 public:
  DictionaryInnerOracle(DictionaryLayout layout, Matrix samples, Matrix codes);

  std::size_t dim() const override { return layout_.dim(); }
  std::optional<std::size_t> n_components() const override { return static_cast<std::size_t>(samples_.rows()); }
  double value_component(const Vector& x, SampleId id) const override;
  void add_grad_component(const Vector& x, SampleId id, double weight, Vector& out) const override;

 private:
  DictionaryLayout layout_;
  Matrix samples_;
  Matrix codes_;
};

/// Outer level: components 1/2 ||a'_i - D x_i||^2 with x_i column i of the code block.
class DictionaryOuterOracle final : public ComponentOracle {
 public:
  DictionaryOuterOracle(DictionaryLayout layout, Matrix samples);

  std::size_t dim() const override { return layout_.dim(); }
  std::optional<std::size_t> n_components() const override { return static_cast<std::size_t>(samples_.rows()); }
  double value_component(const Vector& x, SampleId id) const override;
  void add_grad_component(const Vector& x, SampleId id, double weight, Vector& out) const override;

 private:
  DictionaryLayout layout_;
  Matrix samples_;
};

/// Oracle assembled from callables; used by tests and harnesses.
class FunctionOracle final : public ComponentOracle {
 public:
  using ValueFn = std::function<double(const Vector&, SampleId)>;
  using GradFn = std::function<void(const Vector&, SampleId, double, Vector&)>;

  FunctionOracle(std::size_t dim, std::optional<std::size_t> n, ValueFn value, GradFn grad)
      : dim_(dim), n_(n), value_(std::move(value)), grad_(std::move(grad)) {}

  std::size_t dim() const override { return dim_; }
  std::optional<std::size_t> n_components() const override { return n_; }
  double value_component(const Vector& x, SampleId id) const override { return value_(x, id); }
  void add_grad_component(const Vector& x, SampleId id, double weight, Vector& out) const override {
    grad_(x, id, weight, out);
  }

 private:
  std::size_t dim_;
  std::optional<std::size_t> n_;
  ValueFn value_;
  GradFn grad_;
};

struct RegressionOptions {
  std::uint64_t seed = 0;
  std::size_t n = 200;
  std::size_t d = 50;
  std::size_t n_val = 100;
  double delta = 5.0;
  /// Training label noise; 0 plants G_opt = 0 at the planted point.
  double noise = 0.0;
  /// Validation label noise, which keeps grad F nonzero at the planted point.
  double val_noise = 0.5;

  bool operator==(const RegressionOptions&) const = default;
};

struct RegressionData {
  Matrix a_tr;
  Vector b_tr;
  Matrix a_val;
  Vector b_val;
  double delta = 0.0;
  /// Planted point, when generated.
  std::optional<Vector> planted;
};

RegressionData gen_regression_data(const RegressionOptions& opts);
ProblemInstance make_regression(const RegressionData& data);
ProblemInstance gen_regression(const RegressionOptions& opts);

struct LogisticOptions {
  std::uint64_t seed = 0;
  std::size_t n = 300;
  std::size_t d = 40;
  double beta = 20.0;
  double flip = 0.1;

  bool operator==(const LogisticOptions&) const = default;
};

struct LogisticData {
  Matrix a;
  Vector b;
  double beta = 0.0;
};

LogisticData gen_logistic_data(const LogisticOptions& opts);
ProblemInstance make_logistic(const LogisticData& data);
ProblemInstance gen_logistic(const LogisticOptions& opts);

struct DictionaryOptions {
  std::uint64_t seed = 0;
  std::size_t m = 15;
  std::size_t p_old = 6;
  std::size_t q_dict = 8;
  std::size_t n = 40;
  std::size_t n_new = 40;
  double delta = 3.0;
  double noise = 0.01;

  bool operator==(const DictionaryOptions&) const = default;
};

struct DictionaryData {
  /// Rows are the old samples a_i (n x m).
  Matrix old_samples;
  /// Rows are the new samples a'_i (n_new x m).
  Matrix new_samples;
  /// Rows are the old codes zero-padded to q_dict entries (n x q_dict).
  Matrix old_codes;
  double delta = 0.0;
};

DictionaryData gen_dictionary_data(const DictionaryOptions& opts);
ProblemInstance make_dictionary(const DictionaryData& data);
ProblemInstance gen_dictionary(const DictionaryOptions& opts);

struct LabeledData {
  Matrix features;
  Vector labels;
};

/// Comma-separated numeric table; a non-numeric first row is taken as a header.
/// The label column is removed from the features.
LabeledData load_csv(const std::string& path, std::size_t label_column);
/// Plain numeric table without a label column.
Matrix load_csv_matrix(const std::string& path);
/// "label idx:val ..." with 1-based ascending indices, densified. Labels > 0
/// map to +1 and everything else to -1.
LabeledData load_libsvm(const std::string& path);

/// Writes a matrix (and optionally a trailing label column) with %.17g numbers.
void write_csv(const std::string& path, const Matrix& m, const Vector* labels = nullptr,
               const std::vector<std::string>& header = {});

}  // namespace ircg
