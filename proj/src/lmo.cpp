#include "ircg/lmo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ircg {

namespace {

using Segment = Eigen::Ref<Vector>;
using ConstSegment = Eigen::Ref<const Vector>;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive and finite");
}

void canonical_into(const FeasibleSet& set, Segment out) {
  std::visit(Overloaded{
                 [&](const L1Ball&) { out.setZero(); },
                 [&](const L2Ball&) { out.setZero(); },
                 [&](const Box& b) { out = 0.5 * (b.lower + b.upper); },
                 [&](const Simplex& s) { out.setConstant(s.scale / static_cast<double>(s.dim)); },
                 [&](const Product& p) {
                   for (const auto& block : p.blocks)
                     canonical_into(block.set, out.segment(block.offset, block.set.dim()));
                 },
             },
             set.variant());
}

void lmo_into(const FeasibleSet& set, const ConstSegment& g, Segment out) {
  std::visit(
      Overloaded{
          [&](const L1Ball& b) {
            out.setZero();
            Eigen::Index best = 0;
            double best_abs = 0.0;
            for (Eigen::Index k = 0; k < g.size(); ++k) {
              const double a = std::abs(g[k]);
              if (a > best_abs) {
                best_abs = a;
                best = k;
              }
            }
            if (best_abs == 0.0) return;
            out[best] = g[best] > 0.0 ? -b.radius : b.radius;
          },
          [&](const L2Ball& b) {
            const double norm = g.norm();
            if (norm == 0.0) {
              out.setZero();
              return;
            }
            out = (-b.radius / norm) * g;
          },
          [&](const Box& b) {
            if ((g.array() == 0.0).all()) {
              out = 0.5 * (b.lower + b.upper);
              return;
            }
            for (Eigen::Index k = 0; k < g.size(); ++k) out[k] = g[k] < 0.0 ? b.upper[k] : b.lower[k];
          },
          [&](const Simplex& s) {
            if ((g.array() == 0.0).all()) {
              out.setConstant(s.scale / static_cast<double>(s.dim));
              return;
            }
            Eigen::Index best = 0;
            for (Eigen::Index k = 1; k < g.size(); ++k)
              if (g[k] < g[best]) best = k;
            out.setZero();
            out[best] = s.scale;
          },
          [&](const Product& p) {
            for (const auto& block : p.blocks) {
              const auto n = static_cast<Eigen::Index>(block.set.dim());
              const auto off = static_cast<Eigen::Index>(block.offset);
              lmo_into(block.set, g.segment(off, n), out.segment(off, n));
            }
          },
      },
      set.variant());
}

bool contains_segment(const FeasibleSet& set, const ConstSegment& x, double tol) {
  if (!x.allFinite()) return false;
  return std::visit(Overloaded{
                        [&](const L1Ball& b) { return x.lpNorm<1>() <= b.radius + tol; },
                        [&](const L2Ball& b) { return x.norm() <= b.radius + tol; },
                        [&](const Box& b) {
                          return ((x - b.lower).array() >= -tol).all() &&
                                 ((b.upper - x).array() >= -tol).all();
                        },
                        [&](const Simplex& s) {
                          return (x.array() >= -tol).all() && std::abs(x.sum() - s.scale) <= tol;
                        },
                        [&](const Product& p) {
                          for (const auto& block : p.blocks) {
                            if (!contains_segment(block.set,
                                                  x.segment(static_cast<Eigen::Index>(block.offset),
                                                            static_cast<Eigen::Index>(block.set.dim())),
                                                  tol))
                              return false;
                          }
                          return true;
                        },
                    },
                    set.variant());
}

double exponential(Rng& rng) { return -std::log1p(-rng.uniform()); }

void random_into(const FeasibleSet& set, Rng& rng, Segment out) {
  std::visit(Overloaded{
                 [&](const L1Ball& b) {
                   // d+1 exponentials normalized give a uniform point of the
                   // unit corner simplex {y >= 0, sum y <= 1}; random signs fill the ball.
                   double total = exponential(rng);
                   for (Eigen::Index k = 0; k < out.size(); ++k) {
                     out[k] = exponential(rng);
                     total += out[k];
                   }
                   for (Eigen::Index k = 0; k < out.size(); ++k) {
                     const double sign = (rng.next() >> 63) ? -1.0 : 1.0;
                     out[k] = sign * b.radius * out[k] / total;
                   }
                 },
                 [&](const L2Ball& b) {
                   for (Eigen::Index k = 0; k < out.size(); ++k) out[k] = rng.normal();
                   const double norm = out.norm();
                   const double radius =
                       b.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(out.size()));
                   if (norm > 0.0) out *= radius / norm;
                 },
                 [&](const Box& b) {
                   for (Eigen::Index k = 0; k < out.size(); ++k)
                     out[k] = b.lower[k] + rng.uniform() * (b.upper[k] - b.lower[k]);
                 },
                 [&](const Simplex& s) {
                   double total = 0.0;
                   for (Eigen::Index k = 0; k < out.size(); ++k) {
                     out[k] = exponential(rng);
                     total += out[k];
                   }
                   out *= s.scale / total;
                 },
                 [&](const Product& p) {
                   for (const auto& block : p.blocks)
                     random_into(block.set, rng,
                                 out.segment(static_cast<Eigen::Index>(block.offset),
                                             static_cast<Eigen::Index>(block.set.dim())));
                 },
             },
             set.variant());
}

void require_dim(const FeasibleSet& set, const Vector& v, const char* what) {
  if (static_cast<std::size_t>(v.size()) != set.dim())
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": vector has dimension " +
                                                  std::to_string(v.size()) + ", set has " +
                                                  std::to_string(set.dim()));
}

}  // namespace

FeasibleSet FeasibleSet::l1_ball(std::size_t dim, double radius) {
  require_positive(radius, "l1 radius");
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  return FeasibleSet(L1Ball{dim, radius});
}

FeasibleSet FeasibleSet::l2_ball(std::size_t dim, double radius) {
  require_positive(radius, "l2 radius");
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  return FeasibleSet(L2Ball{dim, radius});
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) throw Error(ErrorCode::DimensionMismatch, "box bounds differ in size");
  if (lower.size() == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  if (!lower.allFinite() || !upper.allFinite() || ((upper - lower).array() < 0.0).any())
    throw Error(ErrorCode::InvalidArgument, "box needs finite lower <= upper");
  return FeasibleSet(Box{std::move(lower), std::move(upper)});
}

FeasibleSet FeasibleSet::box(std::size_t dim, double lower, double upper) {
  return box(Vector::Constant(static_cast<Eigen::Index>(dim), lower),
             Vector::Constant(static_cast<Eigen::Index>(dim), upper));
}

FeasibleSet FeasibleSet::simplex(std::size_t dim, double scale) {
  require_positive(scale, "simplex scale");
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  return FeasibleSet(Simplex{dim, scale});
}

FeasibleSet FeasibleSet::product(std::vector<ProductBlock> blocks) {
  if (blocks.empty()) throw Error(ErrorCode::InvalidArgument, "product needs at least one block");
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const ProductBlock& a, const ProductBlock& b) { return a.offset < b.offset; });
  std::size_t next = 0;
  for (const auto& block : blocks) {
    if (block.offset != next)
      throw Error(ErrorCode::InvalidArgument, "product ranges must partition [0, dim): gap or overlap at " +
                                                  std::to_string(block.offset));
    next += block.set.dim();
  }
  Product p{std::move(blocks), next};
  return FeasibleSet(std::move(p));
}

FeasibleSet FeasibleSet::concat(const std::vector<FeasibleSet>& sets) {
  std::vector<ProductBlock> blocks;
  blocks.reserve(sets.size());
  std::size_t offset = 0;
  for (const auto& s : sets) {
    blocks.push_back({s, offset});
    offset += s.dim();
  }
  return product(std::move(blocks));
}

std::size_t FeasibleSet::dim() const {
  return std::visit(Overloaded{
                        [](const L1Ball& b) { return b.dim; },
                        [](const L2Ball& b) { return b.dim; },
                        [](const Box& b) { return static_cast<std::size_t>(b.lower.size()); },
                        [](const Simplex& s) { return s.dim; },
                        [](const Product& p) { return p.dim; },
                    },
                    v_);
}

Vector lmo(const FeasibleSet& set, const Vector& g) {
  Vector out(static_cast<Eigen::Index>(set.dim()));
  lmo(set, g, out);
  return out;
}

void lmo(const FeasibleSet& set, const Vector& g, Vector& out) {
  require_dim(set, g, "lmo");
  out.resize(g.size());
  lmo_into(set, g, out);
}

Vector canonical_point(const FeasibleSet& set) {
  Vector out(static_cast<Eigen::Index>(set.dim()));
  canonical_into(set, out);
  return out;
}

double diameter(const FeasibleSet& set) {
  return std::visit(Overloaded{
                        [](const L1Ball& b) { return 2.0 * b.radius; },
                        [](const L2Ball& b) { return 2.0 * b.radius; },
                        [](const Box& b) { return (b.upper - b.lower).norm(); },
                        [](const Simplex& s) { return s.scale * std::sqrt(2.0); },
                        [](const Product& p) {
                          double sq = 0.0;
                          for (const auto& block : p.blocks) {
                            const double d = diameter(block.set);
                            sq += d * d;
                          }
                          return std::sqrt(sq);
                        },
                    },
                    set.variant());
}

bool contains(const FeasibleSet& set, const Vector& x, double tol) {
  require_dim(set, x, "contains");
  return contains_segment(set, x, tol);
}

Vector random_point(const FeasibleSet& set, Rng& rng) {
  Vector out(static_cast<Eigen::Index>(set.dim()));
  random_into(set, rng, out);
  return out;
}

}  // namespace ircg
