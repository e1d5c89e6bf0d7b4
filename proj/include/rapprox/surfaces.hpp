#pragma once

// Arithmetic realizations that carry heights: plane linear systems with base
// conditions (blowup models), Cox-coordinate Hirzebruch models, and product
// spaces.  Heights are exact integers; embeddings are exact projective points.

#include <array>
#include <utility>
#include <vector>

#include "rapprox/projective.hpp"

namespace rapprox {
namespace surf {

// Plane curves of degree `degree` vanishing to order >= b_i at each base
// point.  Monomials x^i y^j z^k are ordered lexicographically by descending
// exponent triple; forms are primitive integer coefficient rows in that
// order, in kernel echelon order.  Both orders are fixed so heights are
// reproducible across runs.
struct LinearSystem {
  long degree = 0;
  std::vector<std::pair<ProjPoint, long>> base_points;
  std::vector<std::array<long, 3>> exponents;
  std::vector<std::vector<Int>> forms;
  // Kernel dimension differs from the general-position count
  // (a+1)(a+2)/2 - sum b_i(b_i+1)/2.
  bool non_generic = false;

  size_t dim() const { return forms.size(); }
};

// Exact kernel of the vanishing conditions.  An empty system (dimension 0)
// is returned, not thrown.
LinearSystem linear_system_basis(long degree,
                                 const std::vector<std::pair<ProjPoint, long>>& base_points);

// Basis values at the primitive coordinates of q, divided by their gcd.
// Fails when q lies in the base locus (every form vanishes).
std::vector<Int> system_values(const ProjPoint& q, const LinearSystem& sys);
Int height_via_system(const ProjPoint& q, const LinearSystem& sys);
ProjPoint embed_via_system(const ProjPoint& q, const LinearSystem& sys);

// A point of the Hirzebruch surface H_n in Cox coordinates: x on the base,
// y on the fiber direction, both primitive.  deg x_i = F, deg y_1 = S,
// deg y_2 = S + nF.
struct HirzebruchModel {
  long n = 0;
  ProjPoint x;
  ProjPoint y;
};

HirzebruchModel make_hirzebruch_point(long n, const ProjPoint& x, const ProjPoint& y);

// Monomials x1^i x2^j y1^k y2^l of the class a*F + b*S: i+j+n*l = a, k+l = b.
// Values at the point, gcd-normalized; deterministic monomial order.
std::vector<Int> cox_values(const HirzebruchModel& m, long a, long b);
Int cox_height(const HirzebruchModel& m, long a, long b);
ProjPoint cox_embed(const HirzebruchModel& m, long a, long b);

// Product of two projective spaces under the bidegree (a, b) polarization:
// height of the pair q, sup-distance between the pairs.
struct PairPoint {
  ProjPoint first;
  ProjPoint second;
};

struct HeightDistance {
  Int height;
  Rat distance;
};

HeightDistance product_height_and_distance(const PairPoint& p, const PairPoint& q, long a, long b);

}  // namespace surf
}  // namespace rapprox
