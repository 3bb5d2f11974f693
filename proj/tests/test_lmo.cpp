#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "ircg/lmo.hpp"

using namespace ircg;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Vector gaussian(std::size_t d, Rng& rng) {
  Vector g(static_cast<Eigen::Index>(d));
  for (auto& x : g) x = rng.normal();
  return g;
}

std::vector<FeasibleSet> all_sets() {
  Vector lo = vec({-1.0, 0.0, 2.0, -0.5});
  Vector hi = vec({1.0, 3.0, 2.5, 0.5});
  return {FeasibleSet::l1_ball(6, 2.0), FeasibleSet::l2_ball(5, 1.5), FeasibleSet::box(lo, hi),
          FeasibleSet::simplex(4, 3.0),
          FeasibleSet::concat({FeasibleSet::l2_ball(3, 1.0), FeasibleSet::l1_ball(4, 3.0),
                               FeasibleSet::simplex(2, 1.0)})};
}

}  // namespace

TEST_CASE("l1 ball picks the largest magnitude coordinate") {
  const auto set = FeasibleSet::l1_ball(3, 1.0);
  const Vector v = lmo(set, vec({0.0, 2.0, -1.0}));
  CHECK(v[0] == 0.0);
  CHECK(v[1] == -1.0);
  CHECK(v[2] == 0.0);
}

TEST_CASE("l2 ball is the negative normalized gradient") {
  const Vector v = lmo(FeasibleSet::l2_ball(2, 1.0), vec({3.0, 4.0}));
  CHECK(v[0] == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(-0.8).epsilon(1e-15));
}

TEST_CASE("box and simplex vertices") {
  const auto box = FeasibleSet::box(vec({0.0, 0.0, 0.0}), vec({1.0, 2.0, 3.0}));
  const Vector v = lmo(box, vec({1.0, -1.0, 0.0}));
  CHECK(v == vec({0.0, 2.0, 0.0}));

  const auto simplex = FeasibleSet::simplex(3, 2.0);
  CHECK(lmo(simplex, vec({0.5, -1.0, -1.0})) == vec({0.0, 2.0, 0.0}));
}

TEST_CASE("ties break to the lowest index") {
  CHECK(lmo(FeasibleSet::l1_ball(3, 1.0), vec({1.0, -1.0, 1.0})) == vec({-1.0, 0.0, 0.0}));
  CHECK(lmo(FeasibleSet::simplex(3, 1.0), vec({0.0, -2.0, -2.0})) == vec({0.0, 1.0, 0.0}));
}

TEST_CASE("zero gradient returns the canonical point") {
  for (const auto& set : all_sets()) {
    const Vector zero = Vector::Zero(static_cast<Eigen::Index>(set.dim()));
    CHECK(lmo(set, zero) == canonical_point(set));
  }
  CHECK(canonical_point(FeasibleSet::simplex(4, 2.0)) == Vector::Constant(4, 0.5));
}

TEST_CASE("dimension mismatch") {
  try {
    lmo(FeasibleSet::l1_ball(3, 1.0), Vector::Zero(2));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("l1 lmo matches vertex enumeration") {
  Rng rng(11);
  const std::size_t d = 6;
  const auto set = FeasibleSet::l1_ball(d, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vector g = gaussian(d, rng);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < d; ++k)
      for (double s : {-2.0, 2.0}) best = std::min(best, s * g[static_cast<Eigen::Index>(k)]);
    CHECK(g.dot(lmo(set, g)) == doctest::Approx(best).epsilon(1e-14));
  }
}

TEST_CASE("diameter") {
  CHECK(diameter(FeasibleSet::l1_ball(5, 1.0)) == 2.0);
  CHECK(diameter(FeasibleSet::box(4, 0.0, 1.0)) == 2.0);
  CHECK(diameter(FeasibleSet::simplex(3, 2.0)) == doctest::Approx(2.0 * std::sqrt(2.0)));
  const auto prod = FeasibleSet::concat({FeasibleSet::l2_ball(3, 1.0), FeasibleSet::l1_ball(4, 3.0)});
  CHECK(diameter(prod) == doctest::Approx(std::sqrt(40.0)));

  // No sampled pair is farther apart than the formula.
  Rng rng(5);
  double far = 0.0;
  for (int i = 0; i < 2000; ++i) far = std::max(far, (random_point(prod, rng) - random_point(prod, rng)).norm());
  CHECK(far <= std::sqrt(40.0) + 1e-6);
}

TEST_CASE("contains") {
  const auto l1 = FeasibleSet::l1_ball(2, 1.0);
  CHECK(contains(l1, vec({0.5, -0.5}), 0.0));
  CHECK_FALSE(contains(l1, vec({0.6, -0.5}), 1e-9));
  CHECK(contains(FeasibleSet::simplex(3, 1.0), vec({0.5, 0.5, 0.0}), 0.0));
  CHECK_FALSE(contains(FeasibleSet::simplex(3, 1.0), vec({0.5, 0.6, -0.1}), 1e-9));
  CHECK_FALSE(contains(FeasibleSet::box(2, 0.0, 1.0), vec({0.5, 1.1}), 1e-9));
}

TEST_CASE("random points are feasible and reproducible") {
  for (const auto& set : all_sets()) {
    Rng a(42), b(42);
    for (int i = 0; i < 200; ++i) {
      const Vector x = random_point(set, a);
      CHECK(contains(set, x, 1e-12));
      CHECK(x == random_point(set, b));
    }
  }
  Rng rng(3);
  const auto l1 = FeasibleSet::l1_ball(2, 1.0);
  Vector mean = Vector::Zero(2);
  for (int i = 0; i < 10000; ++i) mean += random_point(l1, rng);
  mean /= 10000.0;
  CHECK(mean.norm() < 0.1);
}

TEST_CASE("lmo beats random feasible points") {
  Rng rng(2024);
  for (const auto& set : all_sets()) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 200; ++trial) {
      const Vector g = gaussian(set.dim(), rng);
      const Vector v = lmo(set, g);
      REQUIRE(contains(set, v, 1e-12));
      for (int k = 0; k < 20; ++k) worst = std::max(worst, g.dot(v) - g.dot(random_point(set, rng)));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("convex combinations stay feasible") {
  Rng rng(8);
  for (const auto& set : all_sets()) {
    for (int trial = 0; trial < 100; ++trial) {
      const Vector x = random_point(set, rng);
      const Vector v = lmo(set, gaussian(set.dim(), rng));
      for (double a : {0.0, 0.5, 1.0}) CHECK(contains(set, x + a * (v - x), 1e-12));
    }
  }
}

TEST_CASE("scaling") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector g = gaussian(5, rng);
    const Vector unit = lmo(FeasibleSet::l2_ball(5, 1.0), g);
    CHECK((lmo(FeasibleSet::l2_ball(5, 2.5), g) - 2.5 * unit).norm() <= 1e-14);
    for (const auto& set : all_sets()) {
      const Vector h = gaussian(set.dim(), rng);
      const Vector v = lmo(set, h);
      CHECK((lmo(set, 3.7 * h) - v).norm() <= 1e-14);
      CHECK((lmo(set, 1e-3 * h) - v).norm() <= 1e-14);
    }
  }
}

TEST_CASE("product blocks in any order") {
  std::vector<ProductBlock> blocks{{FeasibleSet::l1_ball(2, 1.0), 3}, {FeasibleSet::l2_ball(3, 1.0), 0}};
  const auto set = FeasibleSet::product(blocks);
  CHECK(set.dim() == 5);
  const Vector v = lmo(set, vec({0.0, 0.0, 2.0, 0.5, -1.0}));
  CHECK(v == vec({0.0, 0.0, -1.0, 0.0, 1.0}));

  std::vector<ProductBlock> overlap{{FeasibleSet::l1_ball(2, 1.0), 1}, {FeasibleSet::l2_ball(3, 1.0), 0}};
  CHECK_THROWS_AS(FeasibleSet::product(overlap), Error);
  CHECK_THROWS_AS(FeasibleSet::l1_ball(2, 0.0), Error);
}
