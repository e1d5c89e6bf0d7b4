#include "rapprox/ratcurves.hpp"

#include <algorithm>

namespace rapprox {
namespace curves {

namespace {

// Univariate polynomials with Int coefficients, ascending powers, used only
// for the common-factor check.  Primitive pseudo-remainder Euclid keeps the
// arithmetic in Z.
using Poly = std::vector<Int>;

void strip(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

void make_primitive(Poly& p) {
  Int g = gcd_all(p);
  if (g == 0 || g == 1) return;
  for (Int& c : p) c /= g;
}

Poly pseudo_rem(Poly a, const Poly& b) {
  Int lead = b.back();
  while (a.size() >= b.size()) {
    Int q = a.back();
    size_t shift = a.size() - b.size();
    for (Int& c : a) c *= lead;
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
    strip(a);
    make_primitive(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  strip(a);
  strip(b);
  make_primitive(a);
  make_primitive(b);
  while (!b.empty()) {
    Poly r = pseudo_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Dehomogenization at t=1 after stripping trailing s-powers; ord_s and ord_t
// are returned so the binary-form gcd can track monomial factors.
struct Split {
  Poly uni;  // ascending in x = s/t after stripping
  int ord_s = 0;
  int ord_t = 0;
};

Split split_form(const BinaryForm& f) {
  Split out;
  const auto& c = f.coeffs();
  int d = f.degree();
  int lo = 0;
  while (lo <= d && c[lo] == 0) ++lo;  // ord_t = lo
  int hi = d;
  while (hi >= 0 && c[hi] == 0) --hi;  // ord_s = d - hi
  out.ord_t = lo;
  out.ord_s = d - hi;
  // coefficient of s^(d-i) t^i, i in [lo, hi]; as univariate in x with
  // x-degree (hi - i).
  out.uni.assign(hi - lo + 1, Int(0));
  for (int i = lo; i <= hi; ++i) out.uni[hi - i] = c[i];
  return out;
}

}  // namespace

BinaryForm::BinaryForm(std::vector<Int> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) fail(Errc::invalid_configuration, "binary form needs a coefficient vector");
  bool all_zero = std::all_of(c_.begin(), c_.end(), [](const Int& x) { return x == 0; });
  if (all_zero) c_.clear();
}

bool BinaryForm::is_zero() const { return c_.empty(); }

Int BinaryForm::eval(const Int& a, const Int& b) const {
  if (is_zero()) return 0;
  int d = degree();
  // powers of a descending, powers of b ascending
  std::vector<Int> pa(d + 1), pb(d + 1);
  pa[0] = 1;
  pb[0] = 1;
  for (int i = 1; i <= d; ++i) {
    pa[i] = pa[i - 1] * a;
    pb[i] = pb[i - 1] * b;
  }
  Int acc = 0;
  for (int i = 0; i <= d; ++i) acc += c_[i] * pa[d - i] * pb[i];
  return acc;
}

int BinaryForm::root_order(const Int& a, const Int& b) const {
  if (is_zero()) fail(Errc::precondition, "root order of the zero form");
  if (a == 0 && b == 0) fail(Errc::precondition, "root order needs a projective parameter");
  // Repeated exact division by (b s - a t) over Q.
  std::vector<Rat> cur(c_.begin(), c_.end());
  int ord = 0;
  while (true) {
    int d = static_cast<int>(cur.size()) - 1;
    if (d < 0) break;
    std::vector<Rat> q;
    bool divides = true;
    if (b != 0) {
      // c_i = b q_i - a q_{i-1}
      q.assign(d, Rat(0));
      Rat prev(0);
      for (int i = 0; i < d; ++i) {
        q[i] = (cur[i] + Rat(a) * prev) / Rat(b);
        prev = q[i];
      }
      divides = (cur[d] + Rat(a) * prev == 0);
    } else {
      // divisor ~ t: requires zero coefficient on s^d
      divides = (cur[0] == 0);
      if (divides) q.assign(cur.begin() + 1, cur.end());
    }
    if (!divides || d == 0) break;
    ++ord;
    cur = std::move(q);
    if (cur.empty()) break;
  }
  return ord;
}

bool forms_coprime(const std::vector<BinaryForm>& forms) {
  int min_ord_s = -1, min_ord_t = -1;
  Poly g;
  bool first = true;
  for (const BinaryForm& f : forms) {
    if (f.is_zero()) continue;
    Split sp = split_form(f);
    if (first) {
      min_ord_s = sp.ord_s;
      min_ord_t = sp.ord_t;
      g = sp.uni;
      make_primitive(g);
      first = false;
    } else {
      min_ord_s = std::min(min_ord_s, sp.ord_s);
      min_ord_t = std::min(min_ord_t, sp.ord_t);
      g = poly_gcd(g, sp.uni);
    }
    if (min_ord_s == 0 && min_ord_t == 0 && g.size() <= 1) return true;
  }
  if (first) return true;  // all zero: vacuous
  return min_ord_s == 0 && min_ord_t == 0 && g.size() <= 1;
}

ParamCurve::ParamCurve(std::vector<BinaryForm> components) : f_(std::move(components)) {
  if (f_.size() < 2) fail(Errc::invalid_configuration, "curve needs at least two components");
  int d = -1;
  for (const BinaryForm& f : f_) {
    if (f.is_zero()) continue;
    if (d < 0)
      d = f.degree();
    else if (f.degree() != d)
      fail(Errc::invalid_configuration, "curve components must share one degree");
  }
  if (d < 1) fail(Errc::invalid_configuration, "curve components must be nonconstant");
  // zero components are allowed as coordinates, but the nonzero ones must be
  // collectively coprime
  if (!forms_coprime(f_)) fail(Errc::invalid_configuration, "curve components share a factor");
}

int ParamCurve::degree() const {
  for (const BinaryForm& f : f_)
    if (!f.is_zero()) return f.degree();
  return 0;
}

ProjPoint evaluate(const ParamCurve& c, const ProjPoint& t) {
  if (t.dim() != 2) fail(Errc::dimension_mismatch, "curve parameters live in P^1");
  const Int& a = t.coords()[0];
  const Int& b = t.coords()[1];
  std::vector<Int> v;
  v.reserve(c.ambient_coords());
  for (const BinaryForm& f : c.components()) v.push_back(f.eval(a, b));
  return ProjPoint::normalize(v);  // coprime components: never the zero vector
}

int branch_multiplicity(const ParamCurve& c, const ProjPoint& t0) {
  ProjPoint p = evaluate(c, t0);
  const auto& pc = p.coords();
  size_t chart = 0;
  while (pc[chart] == 0) ++chart;
  const Int& a = t0.coords()[0];
  const Int& b = t0.coords()[1];
  const auto& fs = c.components();
  int m = -1;
  for (size_t i = 0; i < fs.size(); ++i) {
    if (i == chart) continue;
    // h = f_i * P_chart - f_chart * P_i, degree d, vanishes at t0
    int d = c.degree();
    std::vector<Int> h(static_cast<size_t>(d) + 1, Int(0));
    if (!fs[i].is_zero())
      for (int k = 0; k <= d; ++k) h[k] += fs[i].coeffs()[k] * pc[chart];
    if (!fs[chart].is_zero())
      for (int k = 0; k <= d; ++k) h[k] -= fs[chart].coeffs()[k] * pc[i];
    BinaryForm hf(std::move(h));
    if (hf.is_zero()) continue;
    int ord = hf.root_order(a, b);
    if (m < 0 || ord < m) m = ord;
  }
  if (m < 1) fail(Errc::invalid_configuration, "degenerate curve at the parameter");
  return m;
}

Rat alpha_along_curve(const ParamCurve& c, const ProjPoint& t0, long e) {
  if (e < 1) fail(Errc::precondition, "embedding degree must be positive");
  int m = branch_multiplicity(c, t0);
  return make_rat(Int(e) * c.degree(), Int(m));
}

std::vector<ProjPoint> best_sequence(const ParamCurve& c, const ProjPoint& t0, size_t count) {
  if (t0.dim() != 2) fail(Errc::dimension_mismatch, "curve parameters live in P^1");
  ProjPoint center = evaluate(c, t0);
  // q = first standard basis vector not proportional to t0
  std::vector<Int> q = {1, 0};
  if (t0.coords()[1] == 0) q = {0, 1};
  std::vector<ProjPoint> out;
  out.reserve(count);
  const size_t give_up = 100 * count + 100;
  for (size_t j = 1; out.size() < count; ++j) {
    if (j > give_up) fail(Errc::invalid_configuration, "curve image is too small for the sequence");
    std::vector<Int> par = {Int(j) * t0.coords()[0] + q[0], Int(j) * t0.coords()[1] + q[1]};
    ProjPoint image = evaluate(c, ProjPoint::normalize(par));
    if (image == center) continue;
    if (std::find(out.begin(), out.end(), image) != out.end()) continue;
    out.push_back(image);
  }
  return out;
}

}  // namespace curves
}  // namespace rapprox
