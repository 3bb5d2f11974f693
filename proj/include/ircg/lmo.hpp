#pragma once

// Feasible sets and their exact linear minimization oracles. The solvers
// never touch a constraint set through anything other than this header.

#include <cstddef>
#include <variant>
#include <vector>

#include "ircg/error.hpp"
#include "ircg/rng.hpp"
#include "ircg/types.hpp"

namespace ircg {

class FeasibleSet;

struct L1Ball {
  std::size_t dim;
  double radius;
};

struct L2Ball {
  std::size_t dim;
  double radius;
};

struct Box {
  Vector lower;
  Vector upper;
};

/// {x >= 0, sum(x) = scale}
struct Simplex {
  std::size_t dim;
  double scale;
};

struct ProductBlock;

/// Blocks are stored sorted by offset and partition [0, dim).
struct Product {
  std::vector<ProductBlock> blocks;
  std::size_t dim = 0;
};

class FeasibleSet {
 public:
  using Variant = std::variant<L1Ball, L2Ball, Box, Simplex, Product>;

  FeasibleSet() : FeasibleSet(L2Ball{1, 1.0}) {}

  static FeasibleSet l1_ball(std::size_t dim, double radius);
  static FeasibleSet l2_ball(std::size_t dim, double radius);
  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet box(std::size_t dim, double lower, double upper);
  static FeasibleSet simplex(std::size_t dim, double scale);
  /// Blocks may be given in any order; their ranges must partition [0, dim).
  static FeasibleSet product(std::vector<ProductBlock> blocks);
  /// Convenience: blocks laid out back to back.
  static FeasibleSet concat(const std::vector<FeasibleSet>& sets);

  std::size_t dim() const;
  const Variant& variant() const { return v_; }

 private:
  explicit FeasibleSet(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct ProductBlock {
  FeasibleSet set;
  std::size_t offset;
};

/// argmin_{v in set} <g, v>. Ties break to the lowest index; a zero gradient
/// (per block) returns canonical_point.
Vector lmo(const FeasibleSet& set, const Vector& g);
void lmo(const FeasibleSet& set, const Vector& g, Vector& out);

/// Origin for balls, midpoint for boxes, barycenter for simplices.
Vector canonical_point(const FeasibleSet& set);

/// Euclidean diameter.
double diameter(const FeasibleSet& set);

/// True iff every defining constraint is violated by at most tol.
bool contains(const FeasibleSet& set, const Vector& x, double tol);

/// Feasible point drawn with full support on the set (uniform for balls,
/// boxes and simplices).
Vector random_point(const FeasibleSet& set, Rng& rng);

}  // namespace ircg
