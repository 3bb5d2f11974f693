#include "ircg/problems.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ircg/kernels.hpp"

namespace ircg {

namespace {

constexpr std::uint64_t kDataStream = 11;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void check_id(SampleId id, Eigen::Index n) {
  if (id >= static_cast<SampleId>(n)) throw Error(ErrorCode::InvalidArgument, "sample id out of range");
}

Matrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(idx(rows), idx(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
  return m;
}

Vector gaussian_vector(Rng& rng, std::size_t n) {
  Vector v(idx(n));
  for (auto& e : v) e = rng.normal();
  return v;
}

}  // namespace

// ---------------------------------------------------------------- least squares

LeastSquaresOracle::LeastSquaresOracle(Matrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != b_.size()) throw Error(ErrorCode::DimensionMismatch, "A and b differ in row count");
  if (a_.rows() == 0 || a_.cols() == 0) throw Error(ErrorCode::InvalidArgument, "empty least-squares data");
}

double LeastSquaresOracle::value_component(const Vector& x, SampleId id) const {
  check_id(id, a_.rows());
  const auto i = static_cast<Eigen::Index>(id);
  const double r = a_.row(i).dot(x) - b_(i);
  return r * r;
}

void LeastSquaresOracle::add_grad_component(const Vector& x, SampleId id, double weight, Vector& out) const {
  check_id(id, a_.rows());
  const auto i = static_cast<Eigen::Index>(id);
  const double r = a_.row(i).dot(x) - b_(i);
  out.noalias() += (2.0 * weight * r) * a_.row(i).transpose();
}

void LeastSquaresOracle::full_grad(const Vector& x, Vector& out) const {
  Vector r;
  kernels::residual(a_, x, b_, r);
  kernels::transposed_product(a_, r, 2.0 / static_cast<double>(a_.rows()), out);
}

double LeastSquaresOracle::full_value(const Vector& x) const {
  Vector r;
  kernels::residual(a_, x, b_, r);
  return r.squaredNorm() / static_cast<double>(a_.rows());
}

// ---------------------------------------------------------------- logistic

double logistic_loss(double u, double b) {
  const double s = -b * u;
  // ln(1 + e^s) = max(s, 0) + log1p(e^{-|s|})
  return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s)));
}

double logistic_loss_derivative(double u, double b) {
  const double s = b * u;
  // -b * sigmoid(-s)
  if (s >= 0.0) {
    const double e = std::exp(-s);
    return -b * e / (1.0 + e);
  }
  return -b / (1.0 + std::exp(s));
}

LogisticOracle::LogisticOracle(Matrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != b_.size()) throw Error(ErrorCode::DimensionMismatch, "A and b differ in row count");
  if (a_.rows() == 0 || a_.cols() == 0) throw Error(ErrorCode::InvalidArgument, "empty logistic data");
}

double LogisticOracle::value_component(const Vector& x, SampleId id) const {
  check_id(id, a_.rows());
  const auto i = static_cast<Eigen::Index>(id);
  return logistic_loss(a_.row(i).dot(x), b_(i));
}

void LogisticOracle::add_grad_component(const Vector& x, SampleId id, double weight, Vector& out) const {
  check_id(id, a_.rows());
  const auto i = static_cast<Eigen::Index>(id);
  const double g = logistic_loss_derivative(a_.row(i).dot(x), b_(i));
  out.noalias() += (weight * g) * a_.row(i).transpose();
}

void LogisticOracle::full_grad(const Vector& x, Vector& out) const {
  Vector u;
  kernels::product(a_, x, u);
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = logistic_loss_derivative(u(i), b_(i));
  kernels::transposed_product(a_, u, 1.0 / static_cast<double>(a_.rows()), out);
}

double LogisticOracle::full_value(const Vector& x) const {
  Vector u;
  kernels::product(a_, x, u);
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = logistic_loss(u(i), b_(i));
  return kernels::ordered_sum(u) / static_cast<double>(a_.rows());
}

// ---------------------------------------------------------------- dictionary

namespace {

using ConstMap = Eigen::Map<const Eigen::MatrixXd>;

ConstMap dictionary_block(const DictionaryLayout& l, const Vector& x) {
  return ConstMap(x.data(), idx(l.m), idx(l.q));
}

}  // namespace

DictionaryInnerOracle::DictionaryInnerOracle(DictionaryLayout layout, Matrix samples, Matrix codes)
    : layout_(layout), samples_(std::move(samples)), codes_(std::move(codes)) {
  if (samples_.cols() != idx(layout_.m) || codes_.cols() != idx(layout_.q) || samples_.rows() != codes_.rows())
    throw Error(ErrorCode::DimensionMismatch, "dictionary inner data does not match the layout");
}

double DictionaryInnerOracle::value_component(const Vector& x, SampleId id) const {
  check_id(id, samples_.rows());
  const auto i = static_cast<Eigen::Index>(id);
  const Vector r = samples_.row(i).transpose() - dictionary_block(layout_, x) * codes_.row(i).transpose();
  return 0.5 * r.squaredNorm();
}

void DictionaryInnerOracle::add_grad_component(const Vector& x, SampleId id, double weight, Vector& out) const {
  check_id(id, samples_.rows());
  const auto i = static_cast<Eigen::Index>(id);
  const Vector r = samples_.row(i).transpose() - dictionary_block(layout_, x) * codes_.row(i).transpose();
  Eigen::Map<Eigen::MatrixXd> g(out.data(), idx(layout_.m), idx(layout_.q));
  // d/dD 1/2 ||a - D c||^2 = -(a - D c) c^T
  g.noalias() -= weight * r * codes_.row(i);
}

DictionaryOuterOracle::DictionaryOuterOracle(DictionaryLayout layout, Matrix samples)
    : layout_(layout), samples_(std::move(samples)) {
  if (samples_.cols() != idx(layout_.m) || samples_.rows() != idx(layout_.n_new))
    throw Error(ErrorCode::DimensionMismatch, "dictionary outer data does not match the layout");
}

double DictionaryOuterOracle::value_component(const Vector& x, SampleId id) const {
  check_id(id, samples_.rows());
  const auto i = static_cast<Eigen::Index>(id);
  const auto code = x.segment(idx(layout_.code_offset(id)), idx(layout_.q));
  const Vector r = samples_.row(i).transpose() - dictionary_block(layout_, x) * code;
  return 0.5 * r.squaredNorm();
}

void DictionaryOuterOracle::add_grad_component(const Vector& x, SampleId id, double weight, Vector& out) const {
  check_id(id, samples_.rows());
  const auto i = static_cast<Eigen::Index>(id);
  const auto d = dictionary_block(layout_, x);
  const auto off = idx(layout_.code_offset(id));
  const auto code = x.segment(off, idx(layout_.q));
  const Vector r = samples_.row(i).transpose() - d * code;
  Eigen::Map<Eigen::MatrixXd> g(out.data(), idx(layout_.m), idx(layout_.q));
  g.noalias() -= weight * r * code.transpose();
  out.segment(off, idx(layout_.q)).noalias() -= weight * (d.transpose() * r);
}

// ---------------------------------------------------------------- generators

RegressionData gen_regression_data(const RegressionOptions& o) {
  if (o.n < 1 || o.d < 1 || o.n_val < 1) throw Error(ErrorCode::InvalidArgument, "n, d and n_val must be >= 1");
  if (!(o.delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  Rng rng(Rng::derive(o.seed, kDataStream));
  RegressionData data;
  data.delta = o.delta;
  Vector planted = gaussian_vector(rng, o.d);
  planted *= 0.5 * o.delta / planted.lpNorm<1>();
  data.a_tr = gaussian_matrix(rng, o.n, o.d);
  data.b_tr = data.a_tr * planted + o.noise * gaussian_vector(rng, o.n);
  data.a_val = gaussian_matrix(rng, o.n_val, o.d);
  data.b_val = data.a_val * planted + o.val_noise * gaussian_vector(rng, o.n_val);
  data.planted = std::move(planted);
  return data;
}

ProblemInstance make_regression(const RegressionData& data) {
  if (data.a_tr.cols() != data.a_val.cols())
    throw Error(ErrorCode::DimensionMismatch, "training and validation features differ in width");
  ProblemInstance p;
  p.name = "regression";
  p.dim = static_cast<std::size_t>(data.a_tr.cols());
  p.feasible_set = FeasibleSet::l1_ball(p.dim, data.delta);
  p.outer = std::make_shared<LeastSquaresOracle>(data.a_val, data.b_val);
  p.inner = std::make_shared<LeastSquaresOracle>(data.a_tr, data.b_tr);
  // 2 lambda_max(A^T A) / n
  auto lmax = [](const Matrix& a) {
    const Eigen::MatrixXd gram = a.transpose() * a;
    return 2.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff() /
           static_cast<double>(a.rows());
  };
  p.lipschitz_outer = lmax(data.a_val);
  p.lipschitz_inner = lmax(data.a_tr);
  check_problem(p);
  return p;
}

ProblemInstance gen_regression(const RegressionOptions& opts) { return make_regression(gen_regression_data(opts)); }

LogisticData gen_logistic_data(const LogisticOptions& o) {
  if (o.n < 1 || o.d < 1) throw Error(ErrorCode::InvalidArgument, "n and d must be >= 1");
  if (!(o.beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  if (!(o.flip >= 0.0 && o.flip <= 1.0)) throw Error(ErrorCode::InvalidArgument, "flip must lie in [0, 1]");
  Rng rng(Rng::derive(o.seed, kDataStream));
  LogisticData data;
  data.beta = o.beta;
  const Vector rule = gaussian_vector(rng, o.d);
  data.a = gaussian_matrix(rng, o.n, o.d);
  data.b.resize(idx(o.n));
  for (Eigen::Index i = 0; i < data.b.size(); ++i) {
    double label = data.a.row(i).dot(rule) >= 0.0 ? 1.0 : -1.0;
    if (rng.uniform() < o.flip) label = -label;
    data.b(i) = label;
  }
  return data;
}

ProblemInstance make_logistic(const LogisticData& data) {
  ProblemInstance p;
  p.name = "logistic";
  p.dim = static_cast<std::size_t>(data.a.cols());
  p.feasible_set = FeasibleSet::l1_ball(p.dim, data.beta);
  p.outer = std::make_shared<HalfSqNormOracle>(p.dim);
  p.inner = std::make_shared<LogisticOracle>(data.a, data.b);
  p.lipschitz_outer = 1.0;
  const Eigen::MatrixXd gram = data.a.transpose() * data.a;
  p.lipschitz_inner =
      0.25 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff() /
      static_cast<double>(data.a.rows());
  check_problem(p);
  return p;
}

ProblemInstance gen_logistic(const LogisticOptions& opts) { return make_logistic(gen_logistic_data(opts)); }

DictionaryData gen_dictionary_data(const DictionaryOptions& o) {
  if (o.m < 1 || o.p_old < 1 || o.n < 1 || o.n_new < 1)
    throw Error(ErrorCode::InvalidArgument, "m, p_old, n and n_new must be >= 1");
  if (o.q_dict <= o.p_old) throw Error(ErrorCode::InvalidArgument, "q_dict must exceed p_old");
  if (!(o.delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  Rng rng(Rng::derive(o.seed, kDataStream));
  // Ground-truth atoms, strictly inside the unit ball.
  Eigen::MatrixXd atoms = gaussian_matrix(rng, o.m, o.q_dict);
  for (Eigen::Index j = 0; j < atoms.cols(); ++j) atoms.col(j) *= 0.9 / atoms.col(j).norm();

  // Two-sparse codes with l1 norm at most delta / 2.
  auto sparse_codes = [&](std::size_t count, std::size_t atoms_used) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(idx(o.q_dict), idx(count));
    for (Eigen::Index i = 0; i < c.cols(); ++i) {
      const auto a = static_cast<Eigen::Index>(rng.index(atoms_used));
      Eigen::Index b = a;
      if (atoms_used > 1) {
        b = static_cast<Eigen::Index>(rng.index(atoms_used - 1));
        if (b >= a) ++b;
      }
      c(a, i) += rng.normal();
      c(b, i) += rng.normal();
      const double l1 = c.col(i).lpNorm<1>();
      if (l1 > 0.5 * o.delta) c.col(i) *= 0.5 * o.delta / l1;
    }
    return c;
  };
  const Eigen::MatrixXd old_codes = sparse_codes(o.n, o.p_old);
  const Eigen::MatrixXd new_codes = sparse_codes(o.n_new, o.q_dict);

  DictionaryData data;
  data.delta = o.delta;
  data.old_codes = old_codes.transpose();
  data.old_samples = (atoms * old_codes).transpose();
  data.new_samples = (atoms * new_codes).transpose();
  for (Eigen::Index i = 0; i < data.old_samples.rows(); ++i)
    for (Eigen::Index j = 0; j < data.old_samples.cols(); ++j) data.old_samples(i, j) += o.noise * rng.normal();
  for (Eigen::Index i = 0; i < data.new_samples.rows(); ++i)
    for (Eigen::Index j = 0; j < data.new_samples.cols(); ++j) data.new_samples(i, j) += o.noise * rng.normal();
  return data;
}

ProblemInstance make_dictionary(const DictionaryData& data) {
  DictionaryLayout layout;
  layout.m = static_cast<std::size_t>(data.old_samples.cols());
  layout.q = static_cast<std::size_t>(data.old_codes.cols());
  layout.n_new = static_cast<std::size_t>(data.new_samples.rows());
  if (data.new_samples.cols() != data.old_samples.cols())
    throw Error(ErrorCode::DimensionMismatch, "old and new samples differ in dimension");
  if (data.old_codes.rows() != data.old_samples.rows())
    throw Error(ErrorCode::DimensionMismatch, "one code per old sample is required");
  std::vector<FeasibleSet> blocks;
  for (std::size_t j = 0; j < layout.q; ++j) blocks.push_back(FeasibleSet::l2_ball(layout.m, 1.0));
  for (std::size_t i = 0; i < layout.n_new; ++i) blocks.push_back(FeasibleSet::l1_ball(layout.q, data.delta));
  ProblemInstance p;
  p.name = "dictionary";
  p.dim = layout.dim();
  p.feasible_set = FeasibleSet::concat(blocks);
  p.outer = std::make_shared<DictionaryOuterOracle>(layout, data.new_samples);
  p.inner = std::make_shared<DictionaryInnerOracle>(layout, data.old_samples, data.old_codes);
  p.convex_outer = false;
  check_problem(p);
  return p;
}

ProblemInstance gen_dictionary(const DictionaryOptions& opts) { return make_dictionary(gen_dictionary_data(opts)); }

// ---------------------------------------------------------------- files

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cell += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return in;
}

std::vector<std::vector<double>> read_table(const std::string& path) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    std::vector<double> row;
    row.reserve(cells.size());
    bool numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_double(cells[c]);
      if (!v) {
        numeric = false;
        bad_col = c + 1;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (rows.empty() && width == 0) {
        width = cells.size();  // header row
        continue;
      }
      throw Error(ErrorCode::ParseError, path + ": row " + std::to_string(line_no) + ", column " +
                                             std::to_string(bad_col) + ": not a number");
    }
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw Error(ErrorCode::RaggedRows, path + ": row " + std::to_string(line_no) + " has " +
                                             std::to_string(row.size()) + " cells, expected " + std::to_string(width));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, path + ": no data rows");
  return rows;
}

}  // namespace

LabeledData load_csv(const std::string& path, std::size_t label_column) {
  const auto rows = read_table(path);
  const std::size_t width = rows.front().size();
  if (label_column >= width)
    throw Error(ErrorCode::InvalidArgument, "label column " + std::to_string(label_column) + " out of range");
  LabeledData out;
  out.features.resize(idx(rows.size()), idx(width - 1));
  out.labels.resize(idx(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (c == label_column)
        out.labels(idx(i)) = rows[i][c];
      else
        out.features(idx(i), col++) = rows[i][c];
    }
  }
  return out;
}

Matrix load_csv_matrix(const std::string& path) {
  const auto rows = read_table(path);
  Matrix m(idx(rows.size()), idx(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < rows[i].size(); ++c) m(idx(i), idx(c)) = rows[i][c];
  return m;
}

LabeledData load_libsvm(const std::string& path) {
  auto in = open_input(path);
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::vector<double> labels;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;
    const auto where = [&] { return path + ": line " + std::to_string(line_no); };
    const auto label = parse_double(tok);
    if (!label) throw Error(ErrorCode::ParseError, where() + ": bad label '" + tok + "'");
    std::vector<std::pair<std::size_t, double>> entries;
    std::size_t last = 0;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw Error(ErrorCode::ParseError, where() + ": expected idx:val, got '" + tok + "'");
      const std::string key = tok.substr(0, colon);
      char* end = nullptr;
      const unsigned long long index = std::strtoull(key.c_str(), &end, 10);
      if (key.empty() || end != key.c_str() + key.size() || index == 0)
        throw Error(ErrorCode::ParseError, where() + ": bad index '" + key + "'");
      const auto value = parse_double(tok.substr(colon + 1));
      if (!value) throw Error(ErrorCode::ParseError, where() + ": bad value in '" + tok + "'");
      if (index <= last)
        throw Error(ErrorCode::NonAscendingIndex, where() + ": index " + std::to_string(index) + " after " +
                                                      std::to_string(last));
      last = static_cast<std::size_t>(index);
      entries.emplace_back(last - 1, *value);
    }
    width = std::max(width, last);
    labels.push_back(*label > 0.0 ? 1.0 : -1.0);
    rows.push_back(std::move(entries));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, path + ": no data rows");
  LabeledData out;
  out.features = Matrix::Zero(idx(rows.size()), idx(std::max<std::size_t>(width, 1)));
  out.labels.resize(idx(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [c, v] : rows[i]) out.features(idx(i), idx(c)) = v;
    out.labels(idx(i)) = labels[i];
  }
  return out;
}

void write_csv(const std::string& path, const Matrix& m, const Vector* labels, const std::vector<std::string>& header) {
  if (labels && labels->size() != m.rows()) throw Error(ErrorCode::DimensionMismatch, "labels do not match rows");
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  if (!header.empty()) {
    for (std::size_t k = 0; k < header.size(); ++k) std::fprintf(f, "%s%s", k ? "," : "", header[k].c_str());
    std::fputc('\n', f);
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) std::fprintf(f, "%s%.17g", j ? "," : "", m(i, j));
    if (labels) std::fprintf(f, "%s%.17g", m.cols() ? "," : "", (*labels)(i));
    std::fputc('\n', f);
  }
  std::fclose(f);
}

}  // namespace ircg
