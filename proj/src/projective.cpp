#include "rapprox/projective.hpp"

#include <algorithm>

namespace rapprox {

ProjPoint ProjPoint::normalize(const std::vector<Int>& raw) {
  return normalize(to_rat(raw));
}

ProjPoint ProjPoint::normalize(const std::vector<Rat>& raw) {
  if (raw.size() < 2) fail(Errc::invalid_point, "projective point needs at least two coordinates");
  std::vector<Int> c = primitive_signed(raw);
  bool all_zero = std::all_of(c.begin(), c.end(), [](const Int& x) { return x == 0; });
  if (all_zero) fail(Errc::invalid_point, "zero vector is not a projective point");
  return ProjPoint(std::move(c));
}

Int height(const ProjPoint& p) {
  Int h = 0;
  for (const Int& x : p.coords()) {
    Int a = abs(x);
    if (a > h) h = a;
  }
  return h;
}

Int max_minor(const ProjPoint& p, const ProjPoint& q) {
  if (p.dim() != q.dim()) fail(Errc::dimension_mismatch, "distance needs equal ambient dimension");
  const auto& a = p.coords();
  const auto& b = q.coords();
  Int best = 0, m;
  for (size_t i = 0; i + 1 < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j) {
      m = abs(a[i] * b[j] - a[j] * b[i]);
      if (m > best) best = m;
    }
  return best;
}

Rat distance(const ProjPoint& p, const ProjPoint& q) {
  return make_rat(max_minor(p, q), height(p) * height(q));
}

Rat affine_chart_distance(const ProjPoint& p, const ProjPoint& q, size_t chart) {
  if (p.dim() != q.dim()) fail(Errc::dimension_mismatch, "distance needs equal ambient dimension");
  if (chart >= p.dim()) fail(Errc::precondition, "chart index out of range");
  const auto& a = p.coords();
  const auto& b = q.coords();
  if (a[chart] == 0 || b[chart] == 0)
    fail(Errc::precondition, "point on the hyperplane at infinity of the chart");
  Int best = 0, m;
  for (size_t i = 0; i < a.size(); ++i) {
    if (i == chart) continue;
    m = abs(a[i] * b[chart] - a[chart] * b[i]);
    if (m > best) best = m;
  }
  return make_rat(best, abs(a[chart] * b[chart]));
}

LineInP2 LineInP2::through(const ProjPoint& p, const ProjPoint& q) {
  if (p.dim() != 3 || q.dim() != 3) fail(Errc::dimension_mismatch, "lines live in P^2");
  if (p == q) fail(Errc::precondition, "two distinct points are needed to span a line");
  const auto& a = p.coords();
  const auto& b = q.coords();
  std::vector<Int> cross = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                            a[0] * b[1] - a[1] * b[0]};
  return LineInP2(primitive_signed(to_rat(cross)));
}

Int LineInP2::plucker_height() const {
  Int h = 0;
  for (const Int& x : d_) {
    Int a = abs(x);
    if (a > h) h = a;
  }
  return h;
}

bool LineInP2::contains(const ProjPoint& p) const {
  if (p.dim() != 3) fail(Errc::dimension_mismatch, "lines live in P^2");
  Int s = 0;
  for (size_t i = 0; i < 3; ++i) s += d_[i] * p.coords()[i];
  return s == 0;
}

}  // namespace rapprox
