#include "rapprox/surfaces.hpp"

#include <algorithm>

#include "rapprox/linalg.hpp"

namespace rapprox {
namespace surf {

namespace {

std::vector<std::array<long, 3>> monomial_exponents(long degree) {
  std::vector<std::array<long, 3>> out;
  for (long i = degree; i >= 0; --i)
    for (long j = degree - i; j >= 0; --j) out.push_back({i, j, degree - i - j});
  return out;
}

// x^e with e >= 0.
Int int_pow(const Int& x, long e) {
  Int r = 1;
  for (long i = 0; i < e; ++i) r *= x;
  return r;
}

// Falling factorial i (i-1) ... (i-p+1); the derivative coefficient of
// d^p/dx^p x^i.  Zero when p > i.
Int falling(long i, long p) {
  if (p > i) return 0;
  Int r = 1;
  for (long s = 0; s < p; ++s) r *= Int(i - s);
  return r;
}

// One vanishing condition: the (p,q,r)-th partial derivative at `pt`, as a
// row over the degree-`degree` monomials.
std::vector<Rat> derivative_row(long degree, const std::vector<Int>& pt, long p, long q, long r) {
  std::vector<Rat> row;
  for (const auto& e : monomial_exponents(degree)) {
    if (e[0] < p || e[1] < q || e[2] < r) {
      row.emplace_back(0);
      continue;
    }
    Int v = falling(e[0], p) * falling(e[1], q) * falling(e[2], r);
    v *= int_pow(pt[0], e[0] - p) * int_pow(pt[1], e[1] - q) * int_pow(pt[2], e[2] - r);
    row.emplace_back(v);
  }
  return row;
}

}  // namespace

LinearSystem linear_system_basis(long degree,
                                 const std::vector<std::pair<ProjPoint, long>>& base_points) {
  if (degree < 1) fail(Errc::invalid_configuration, "linear system degree must be >= 1");
  for (size_t i = 0; i < base_points.size(); ++i) {
    if (base_points[i].first.dim() != 3)
      fail(Errc::dimension_mismatch, "base points must lie in the plane");
    if (base_points[i].second < 1)
      fail(Errc::invalid_configuration, "base multiplicity must be >= 1");
    for (size_t j = i + 1; j < base_points.size(); ++j)
      if (base_points[i].first == base_points[j].first)
        fail(Errc::invalid_configuration, "repeated base point " + base_points[i].first.str());
  }

  LinearSystem sys;
  sys.degree = degree;
  sys.base_points = base_points;
  sys.exponents = monomial_exponents(degree);
  const size_t n = sys.exponents.size();

  // Vanishing to order >= b at a point is cut out by the order-(b-1)
  // derivatives alone: the Euler relation propagates vanishing downward to
  // the lower orders.  A positive-degree form cannot vanish to order beyond
  // its degree, so orders past `degree` are capped at the killing order.
  MatQ rows;
  for (const auto& [pt, b] : base_points) {
    const long m = std::min(b - 1, degree);
    for (long p = m; p >= 0; --p)
      for (long q = m - p; q >= 0; --q)
        rows.push_back(derivative_row(degree, pt.coords(), p, q, m - p - q));
  }

  for (const auto& k : kernel_basis(rows, n)) sys.forms.push_back(primitive_signed(k));

  long expected = (degree + 1) * (degree + 2) / 2;
  for (const auto& [pt, b] : base_points) expected -= b * (b + 1) / 2;
  sys.non_generic = (static_cast<long>(sys.forms.size()) != std::max<long>(expected, 0));
  return sys;
}

std::vector<Int> system_values(const ProjPoint& q, const LinearSystem& sys) {
  if (q.dim() != 3) fail(Errc::dimension_mismatch, "expected a plane point");
  if (sys.forms.empty()) fail(Errc::degenerate_input, "empty linear system");
  std::vector<Int> vals;
  for (const auto& f : sys.forms) {
    Int v = 0;
    for (size_t i = 0; i < f.size(); ++i) {
      const auto& e = sys.exponents[i];
      v += f[i] * int_pow(q.coords()[0], e[0]) * int_pow(q.coords()[1], e[1]) *
           int_pow(q.coords()[2], e[2]);
    }
    vals.push_back(v);
  }
  if (std::all_of(vals.begin(), vals.end(), [](const Int& v) { return v == 0; }))
    fail(Errc::invalid_point, "point " + q.str() + " lies in the base locus");
  Int g = gcd_all(vals);
  for (auto& v : vals) v /= g;
  return vals;
}

Int height_via_system(const ProjPoint& q, const LinearSystem& sys) {
  Int h = 0;
  for (const auto& v : system_values(q, sys)) if (abs(v) > h) h = abs(v);
  return h;
}

ProjPoint embed_via_system(const ProjPoint& q, const LinearSystem& sys) {
  return ProjPoint::normalize(system_values(q, sys));
}

HirzebruchModel make_hirzebruch_point(long n, const ProjPoint& x, const ProjPoint& y) {
  if (n < 0) fail(Errc::invalid_configuration, "negative twist");
  if (x.dim() != 2 || y.dim() != 2)
    fail(Errc::dimension_mismatch, "Cox coordinates are a pair of binary points");
  return HirzebruchModel{n, x, y};
}

std::vector<Int> cox_values(const HirzebruchModel& m, long a, long b) {
  if (a < 0 || b < 0) fail(Errc::invalid_configuration, "class without sections");
  const Int& x1 = m.x.coords()[0];
  const Int& x2 = m.x.coords()[1];
  const Int& y1 = m.y.coords()[0];
  const Int& y2 = m.y.coords()[1];
  // Monomials x1^i x2^j y1^k y2^l with i + j + n*l = a and k + l = b.
  std::vector<Int> vals;
  for (long l = 0; l <= b; ++l) {
    const long rem = a - m.n * l;
    if (rem < 0) continue;
    const Int yv = int_pow(y1, b - l) * int_pow(y2, l);
    for (long i = rem; i >= 0; --i) vals.push_back(int_pow(x1, i) * int_pow(x2, rem - i) * yv);
  }
  if (vals.empty()) fail(Errc::invalid_configuration, "class without sections");
  if (std::all_of(vals.begin(), vals.end(), [](const Int& v) { return v == 0; }))
    fail(Errc::invalid_point, "point lies in the base locus of the class");
  Int g = gcd_all(vals);
  for (auto& v : vals) v /= g;
  return vals;
}

Int cox_height(const HirzebruchModel& m, long a, long b) {
  Int h = 0;
  for (const auto& v : cox_values(m, a, b)) if (abs(v) > h) h = abs(v);
  return h;
}

ProjPoint cox_embed(const HirzebruchModel& m, long a, long b) {
  return ProjPoint::normalize(cox_values(m, a, b));
}

HeightDistance product_height_and_distance(const PairPoint& p, const PairPoint& q, long a,
                                           long b) {
  if (a < 0 || b < 0 || (a == 0 && b == 0))
    fail(Errc::invalid_configuration, "bidegree must be nonnegative and nonzero");
  if (p.first.dim() != q.first.dim() || p.second.dim() != q.second.dim())
    fail(Errc::dimension_mismatch, "product factors of different dimension");
  HeightDistance out;
  out.height = int_pow(height(q.first), a) * int_pow(height(q.second), b);
  out.distance = std::max(distance(p.first, q.first), distance(p.second, q.second));
  return out;
}

}  // namespace surf
}  // namespace rapprox
