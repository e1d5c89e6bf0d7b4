#pragma once

// Parametrized rational curves P^1 -> P^n given by equal-degree coprime
// binary forms, and the exact local data that controls how well the curve
// approximates its own points: the branch multiplicity m at a parameter and
// the ratio e*d/m.

#include <vector>

#include "rapprox/projective.hpp"

namespace rapprox {
namespace curves {

// Homogeneous polynomial in (s, t); coeff(i) multiplies s^(d-i) t^i.
class BinaryForm {
public:
  BinaryForm() = default;  // zero form
  explicit BinaryForm(std::vector<Int> coeffs);

  bool is_zero() const;
  int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
  const std::vector<Int>& coeffs() const { return c_; }

  Int eval(const Int& a, const Int& b) const;

  // Multiplicity of the root [a:b], i.e. the largest k with (bs-at)^k
  // dividing the form.  Zero forms are rejected.
  int root_order(const Int& a, const Int& b) const;

private:
  std::vector<Int> c_;
};

// Nonconstant gcd detection across a set of forms (content ignored).
bool forms_coprime(const std::vector<BinaryForm>& forms);

class ParamCurve {
public:
  // All components of equal degree >= 1, at least two, no common factor.
  explicit ParamCurve(std::vector<BinaryForm> components);

  int degree() const;
  size_t ambient_coords() const { return f_.size(); }
  const std::vector<BinaryForm>& components() const { return f_; }

private:
  std::vector<BinaryForm> f_;
};

ProjPoint evaluate(const ParamCurve& c, const ProjPoint& t);

// Branch multiplicity at t0: with P = evaluate(c, t0) and a chart j where
// P_j != 0, the minimum over i of the vanishing order at t0 of
// f_i * P_j - f_j * P_i.  Always >= 1.
int branch_multiplicity(const ParamCurve& c, const ProjPoint& t0);

// e * degree / branch multiplicity: the approximation exponent along the
// curve when the ambient embedding multiplies degrees by e.
Rat alpha_along_curve(const ParamCurve& c, const ProjPoint& t0, long e = 1);

// Images of the parameters j*t0 + q, j = 1..count, where q is the first
// standard basis vector not proportional to t0.  Parameters whose image
// collides with the center or an earlier image are skipped.
std::vector<ProjPoint> best_sequence(const ParamCurve& c, const ProjPoint& t0, size_t count);

}  // namespace curves
}  // namespace rapprox
