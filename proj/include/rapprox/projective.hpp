#pragma once

// Points of projective space over Q in canonical integer coordinates, the
// height, and the multiplicative-distance function
//
//   dist(P, Q) = max_{i<j} |p_i q_j - p_j q_i| / (max_i |p_i| * max_j |q_j|)
//
// which is 0 iff P = Q and is bounded by 2 on canonical representatives.

#include <vector>

#include "rapprox/numeric.hpp"

namespace rapprox {

// Canonical representative: integer coordinates, gcd 1, first nonzero
// coordinate positive.  Construct through normalize().
class ProjPoint {
public:
  static ProjPoint normalize(const std::vector<Int>& raw);
  static ProjPoint normalize(const std::vector<Rat>& raw);

  const std::vector<Int>& coords() const { return c_; }
  size_t dim() const { return c_.size(); }  // coordinate count, ambient P^{dim-1}

  bool operator==(const ProjPoint& o) const { return c_ == o.c_; }
  bool operator!=(const ProjPoint& o) const { return !(*this == o); }
  bool operator<(const ProjPoint& o) const { return lex_less(c_, o.c_); }

  std::string str() const { return join_ints(c_, ':'); }

private:
  explicit ProjPoint(std::vector<Int> c) : c_(std::move(c)) {}
  std::vector<Int> c_;
};

// H(P) = max |coordinate| of the canonical representative.
Int height(const ProjPoint& p);

Rat distance(const ProjPoint& p, const ProjPoint& q);

// Largest 2x2 minor |p_i q_j - p_j q_i|; distance without the height
// normalization.  Used by scan kernels that fix one argument.
Int max_minor(const ProjPoint& p, const ProjPoint& q);

// |p_i/p_chart - q_i/q_chart| maximized over i, on the affine chart where
// both chart coordinates are nonzero.
Rat affine_chart_distance(const ProjPoint& p, const ProjPoint& q, size_t chart);

// Line a*x + b*y + c*z = 0 through two distinct points of P^2, in canonical
// dual coordinates (primitive, first nonzero positive).
class LineInP2 {
public:
  static LineInP2 through(const ProjPoint& p, const ProjPoint& q);

  const std::vector<Int>& dual() const { return d_; }
  Int plucker_height() const;
  bool contains(const ProjPoint& p) const;

  bool operator==(const LineInP2& o) const { return d_ == o.d_; }
  bool operator<(const LineInP2& o) const { return lex_less(d_, o.d_); }
  std::string str() const { return join_ints(d_, ':'); }

private:
  explicit LineInP2(std::vector<Int> d) : d_(std::move(d)) {}
  std::vector<Int> d_;
};

}  // namespace rapprox
