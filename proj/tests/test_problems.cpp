#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ircg/problems.hpp"
#include "ircg/solvers.hpp"

using namespace ircg;
namespace fs = std::filesystem;

namespace {

// Worst relative error of component gradients against central differences.
double fd_error(const ComponentOracle& o, const Vector& x, SampleId id, double h = 1e-6) {
  const Vector g = o.grad_component(x, id);
  Vector fd(x.size());
  Vector xp = x, xm = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    fd[k] = (o.value_component(xp, id) - o.value_component(xm, id)) / (2 * h);
    xp[k] = xm[k] = x[k];
  }
  return (g - fd).norm() / std::max(1.0, g.norm());
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = fs::temp_directory_path() / ("ircg_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::InvalidArgument;
}

std::vector<ProblemInstance> generators() {
  return {gen_regression({.seed = 1, .n = 8, .d = 5, .n_val = 6}), gen_logistic({.seed = 2, .n = 20, .d = 6}),
          gen_dictionary({.seed = 3, .m = 3, .p_old = 1, .q_dict = 2, .n = 2, .n_new = 3}),
          gen_dictionary({.seed = 4})};
}

}  // namespace

TEST_CASE("component gradients match finite differences") {
  Rng rng(10);
  for (const auto& p : generators()) {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const Vector x = random_point(p.feasible_set, rng);
      for (const auto* o : {p.outer.get(), p.inner.get()}) {
        const auto n = *o->n_components();
        worst = std::max(worst, fd_error(*o, x, rng.index(n)));
      }
    }
    INFO(p.name);
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("mean consistency") {
  Rng rng(11);
  for (const auto& p : generators()) {
    for (int k = 0; k < 10; ++k) {
      const Vector x = random_point(p.feasible_set, rng);
      for (const auto* o : {p.outer.get(), p.inner.get()}) {
        const auto n = *o->n_components();
        double sum = 0.0;
        Vector g = Vector::Zero(x.size());
        for (std::size_t i = 0; i < n; ++i) {
          sum += o->value_component(x, i);
          g += o->grad_component(x, i);
        }
        const double mean = sum / static_cast<double>(n);
        CHECK(o->full_value(x) == doctest::Approx(mean).epsilon(1e-10));
        CHECK((o->full_grad(x) - g / static_cast<double>(n)).norm() <= 1e-12 * std::max(1.0, g.norm()));
      }
    }
  }
}

TEST_CASE("convexity spot check") {
  Rng rng(12);
  for (const auto& p : generators()) {
    if (!p.convex_outer) continue;
    for (int k = 0; k < 100; ++k) {
      const Vector x = random_point(p.feasible_set, rng);
      const Vector y = random_point(p.feasible_set, rng);
      const auto& g = *p.inner;
      CHECK(g.full_value(0.5 * x + 0.5 * y) <= 0.5 * g.full_value(x) + 0.5 * g.full_value(y) + 1e-9);
    }
  }
}

TEST_CASE("regression") {
  const auto data = gen_regression_data({.seed = 7, .n = 40, .d = 12, .n_val = 10});
  REQUIRE(data.planted);
  CHECK(data.planted->lpNorm<1>() <= 0.8 * data.delta + 1e-12);
  const auto p = make_regression(data);
  CHECK(p.inner->full_value(*data.planted) <= 1e-20);
  CHECK(p.outer->full_value(*data.planted) > 1e-3);
  CHECK(contains(p.feasible_set, *data.planted, 0.0));
  CHECK(p.n_inner() == 40u);
  CHECK(p.n_outer() == 10u);

  // Component value is the unhalved squared residual.
  const auto& ls = dynamic_cast<const LeastSquaresOracle&>(*p.inner);
  const Vector x = Vector::Constant(12, 0.1);
  const double r = ls.a().row(3).dot(x) - ls.b()[3];
  CHECK(ls.value_component(x, 3) == doctest::Approx(r * r));

  const auto again = gen_regression_data({.seed = 7, .n = 40, .d = 12, .n_val = 10});
  CHECK(again.a_tr == data.a_tr);
  CHECK(again.b_val == data.b_val);
}

TEST_CASE("logistic loss") {
  CHECK(logistic_loss(0.0, 1.0) == doctest::Approx(std::log(2.0)));
  CHECK(logistic_loss(0.0, -1.0) == doctest::Approx(std::log(2.0)));
  CHECK(logistic_loss_derivative(0.0, 1.0) == -0.5);
  CHECK(logistic_loss(50.0, 1.0) == doctest::Approx(std::exp(-50.0)).epsilon(1e-12));
  CHECK(std::isfinite(logistic_loss(-800.0, 1.0)));
  CHECK(logistic_loss(-800.0, 1.0) == doctest::Approx(800.0));
  CHECK(std::isfinite(logistic_loss_derivative(800.0, -1.0)));

  const auto p = gen_logistic({.seed = 1, .n = 50, .d = 8});
  CHECK(p.n_outer() == 1u);
  CHECK(p.outer->full_value(Vector::Constant(8, 2.0)) == doctest::Approx(16.0));
  const auto data = gen_logistic_data({.seed = 1, .n = 50, .d = 8});
  for (Eigen::Index i = 0; i < data.b.size(); ++i) CHECK(std::abs(data.b[i]) == 1.0);
}

TEST_CASE("dictionary") {
  DictionaryOptions o{.seed = 5, .m = 4, .p_old = 2, .q_dict = 3, .n = 5, .n_new = 6, .delta = 3.0};
  const auto p = gen_dictionary(o);
  const DictionaryLayout layout{4, 3, 6};
  CHECK(p.dim == layout.dim());
  CHECK_FALSE(p.convex_outer);
  CHECK(diameter(p.feasible_set) == doctest::Approx(std::sqrt(4.0 * 3 + 4.0 * 9 * 6)));

  const auto data = gen_dictionary_data(o);
  for (Eigen::Index i = 0; i < data.old_codes.rows(); ++i) CHECK(data.old_codes(i, 2) == 0.0);

  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const Vector x = random_point(p.feasible_set, rng);
    const Vector g = p.inner->grad_component(x, rng.index(5));
    CHECK(g.tail(static_cast<Eigen::Index>(3 * 6)).norm() == 0.0);
    // Outer component i touches only code column i.
    const std::size_t i = rng.index(6);
    const Vector f = p.outer->grad_component(x, i);
    for (std::size_t j = 0; j < 6; ++j) {
      if (j == i) continue;
      CHECK(f.segment(static_cast<Eigen::Index>(layout.code_offset(j)), 3).norm() == 0.0);
    }
  }

  CHECK_THROWS_WITH_AS(gen_dictionary_data({.p_old = 6, .q_dict = 4}), doctest::Contains("q_dict must exceed p_old"),
                       Error);
}

TEST_CASE("planted regression reference") {
  const auto p = gen_regression({.seed = 2, .n = 40, .d = 10, .n_val = 10});
  const auto r = reference_inner(p, 1e-9);
  CHECK(r.certified);
  CHECK(std::abs(r.g_value) <= 1e-8);
}

TEST_CASE("load_csv") {
  const auto path = write_file("basic.csv", "1,2\n3,4\n");
  const auto d = load_csv(path, 1);
  CHECK(d.features.rows() == 2);
  CHECK(d.features.cols() == 1);
  CHECK(d.features(0, 0) == 1.0);
  CHECK(d.features(1, 0) == 3.0);
  CHECK(d.labels[0] == 2.0);
  CHECK(d.labels[1] == 4.0);

  const auto header = load_csv(write_file("header.csv", "a,b,y\n1,2,3\n4,5,6\n"), 0);
  CHECK(header.features.rows() == 2);
  CHECK(header.labels[1] == 4.0);
  CHECK(header.features(1, 1) == 6.0);

  CHECK(code_of([] { load_csv(write_file("empty.csv", ""), 0); }) == ErrorCode::ParseError);
  try {
    load_csv(write_file("bad.csv", "1,2\n3,4\n5,x\n"), 0);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  CHECK(code_of([] { load_csv(write_file("ragged.csv", "1,2\n3\n"), 0); }) == ErrorCode::RaggedRows);
  CHECK(code_of([] { load_csv(write_file("basic2.csv", "1,2\n"), 5); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { load_csv("/nonexistent/ircg.csv", 0); }) == ErrorCode::ParseError);
}

TEST_CASE("write_csv round trip") {
  Matrix m(2, 3);
  m << 0.1, 1.0 / 3.0, -2e-300, 4.0, 5.5, 1e10;
  Vector labels(2);
  labels << -1.0, 1.0;
  const auto path = (fs::temp_directory_path() / "ircg_test_rt.csv").string();
  write_csv(path, m, &labels, {"a", "b", "c", "y"});
  const auto d = load_csv(path, 3);
  CHECK(d.features == m);
  CHECK(d.labels == labels);
  CHECK(load_csv_matrix(write_file("plain.csv", "1,2\n3,4\n")).rows() == 2);
}

TEST_CASE("load_libsvm") {
  const auto d = load_libsvm(write_file("a.svm", "+1 1:0.5 3:2\n0 1:1\n-1 2:4\n"));
  REQUIRE(d.features.rows() == 3);
  REQUIRE(d.features.cols() == 3);
  CHECK(d.features(0, 0) == 0.5);
  CHECK(d.features(0, 1) == 0.0);
  CHECK(d.features(0, 2) == 2.0);
  CHECK(d.labels[0] == 1.0);
  CHECK(d.labels[1] == -1.0);
  CHECK(d.labels[2] == -1.0);
  CHECK(d.features(2, 1) == 4.0);

  CHECK(code_of([] { load_libsvm(write_file("b.svm", "-1 3:1 2:1\n")); }) == ErrorCode::NonAscendingIndex);
  CHECK(code_of([] { load_libsvm(write_file("c.svm", "1 0:1\n")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { load_libsvm(write_file("d.svm", "x 1:1\n")); }) == ErrorCode::ParseError);
}
