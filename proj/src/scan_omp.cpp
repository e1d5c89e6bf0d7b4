// OpenMP scan kernels.  Each kernel partitions the height shells across
// threads and works in machine words (bounds guarded by kMaxEnumHeight and
// kMaxTargetHeight, so every minor and cross-multiplication fits in 64/128
// bits), then merges per-thread results exactly.
//
// The frontier kernels skip the gcd test in the hot loop.  That admits
// scaled copies of canonical points, which is harmless: a scaled copy has
// the same distance as its primitive point but k times the height, so the
// primitive point's entry (recorded in its own shell, which some thread
// visits with the same ascending-height discipline) dominates it and the
// merge evicts it.  Conversely a candidate rejected by the per-thread
// strict-improvement filter is dominated by an entry already in that
// thread's local frontier, so nothing Pareto-minimal is ever lost.  This
// argument needs each thread to visit its shells in ascending order, hence
// the explicit strided loops instead of an OpenMP schedule clause.

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <iterator>
#include <vector>

#include "rapprox/approx.hpp"
#include "shells.hpp"

namespace rapprox {
namespace approx {

namespace {

void check_scan_height(long max_height) {
  if (max_height < 1) fail(Errc::precondition, "height bound must be >= 1");
  if (max_height > kMaxEnumHeight) fail(Errc::unsupported, "height bound above the enumeration cap");
}

long long word_coord(const Int& x) {
  if (!x.fits_slong_p()) fail(Errc::unsupported, "target coordinate above the kernel word bound");
  return x.get_si();
}

std::vector<long long> word_target(const ProjPoint& target) {
  if (height(target) > kMaxTargetHeight)
    fail(Errc::unsupported, "target height above the kernel word bound");
  std::vector<long long> q;
  for (const Int& x : target.coords()) q.push_back(word_coord(x));
  return q;
}

// a/b < c/d with positive denominators.
bool frac_less(long long a, long long b, long long c, long long d) {
  return static_cast<__int128>(a) * d < static_cast<__int128>(c) * b;
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int ceil_div(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

Frontier frontier_p1(const ProjPoint& target, long max_height, Metric metric) {
  if (target.dim() != 2) fail(Errc::dimension_mismatch, "target must lie in P^1");
  check_scan_height(max_height);
  std::vector<long long> q = word_target(target);
  const long long hq = std::max(std::llabs(q[0]), std::llabs(q[1]));
  const size_t chart = q[1] != 0 ? 1 : 0;  // last nonzero coordinate
  const long long qc = q[chart];
  const bool affine = metric == Metric::affine_chart;
  Frontier global;
#pragma omp parallel
  {
    Frontier local;
    long long bn = -1, bd = 1;  // best distance seen by this thread
    const long stride = omp_get_num_threads();
    for (long h = 2 + omp_get_thread_num(); h <= max_height; h += stride) {
      detail::p1_shell_raw(h, [&](long a, long b) {
        long long m = std::llabs(static_cast<long long>(a) * q[1] - static_cast<long long>(b) * q[0]);
        if (m == 0) return;  // the target's own direction
        long long den;
        if (affine) {
          long long pc = chart == 1 ? b : a;
          if (pc == 0) return;  // off the chart
          den = std::llabs(pc * qc);
        } else {
          den = static_cast<long long>(h) * hq;
        }
        if (m >= den) return;  // distance >= 1
        if (bn >= 0 && !frac_less(m, den, bn, bd)) return;
        bn = m;
        bd = den;
        local.insert(detail::point2(a, b),
                     make_rat(Int(static_cast<long>(m)), Int(static_cast<long>(den))), Int(h));
      });
    }
#pragma omp critical
    global.merge(local);
  }
  return global;
}

Frontier frontier_p2(const ProjPoint& target, long max_height) {
  if (target.dim() != 3) fail(Errc::dimension_mismatch, "target must lie in P^2");
  check_scan_height(max_height);
  std::vector<long long> q = word_target(target);
  const long long hq = std::max({std::llabs(q[0]), std::llabs(q[1]), std::llabs(q[2])});
  Frontier global;
#pragma omp parallel
  {
    Frontier local;
    long long bn = -1, bd = 1;
    const long stride = omp_get_num_threads();
    for (long h = 2 + omp_get_thread_num(); h <= max_height; h += stride) {
      detail::p2_shell_raw(h, [&](long a, long b, long c) {
        long long la = a, lb = b, lc = c;
        long long m = std::max({std::llabs(la * q[1] - lb * q[0]),
                                std::llabs(la * q[2] - lc * q[0]),
                                std::llabs(lb * q[2] - lc * q[1])});
        if (m == 0) return;
        long long den = static_cast<long long>(h) * hq;
        if (m >= den) return;
        if (bn >= 0 && !frac_less(m, den, bn, bd)) return;
        bn = m;
        bd = den;
        local.insert(detail::point3(a, b, c),
                     make_rat(Int(static_cast<long>(m)), Int(static_cast<long>(den))), Int(h));
      });
    }
#pragma omp critical
    global.merge(local);
  }
  return global;
}

Frontier frontier_curve(const curves::ParamCurve& curve, const ProjPoint& target,
                        long param_height) {
  if (target.dim() != curve.ambient_coords())
    fail(Errc::dimension_mismatch, "target dimension differs from the curve's ambient space");
  check_scan_height(param_height);
  Frontier global;
#pragma omp parallel
  {
    Frontier local;  // exact inserts: partition order does not matter here
#pragma omp for schedule(dynamic, 16)
    for (long h = 1; h <= param_height; ++h) {
      detail::p1_shell(h, [&](long a, long b) {
        ProjPoint t = detail::point2(a, b);
        ProjPoint image = curves::evaluate(curve, t);
        if (image == target) return;
        local.insert(image, distance(target, image), height(image));
      });
    }
#pragma omp critical
    global.merge(local);
  }
  return global;
}

Rat dist_height_floor(const ProjPoint& target, long max_height, long min_first_abs) {
  if (target.dim() != 2) fail(Errc::dimension_mismatch, "target must lie in P^1");
  if (min_first_abs < 0) fail(Errc::precondition, "coordinate filter must be >= 0");
  check_scan_height(max_height);
  std::vector<long long> q = word_target(target);
  long long best = -1;
  auto consider = [&](long long& slot, long a, long b) {
    // canonical points have first coordinate >= 0, so a is |first|
    if (a < min_first_abs) return;
    long long m = std::llabs(static_cast<long long>(a) * q[1] - static_cast<long long>(b) * q[0]);
    if (m == 0) return;
    if (slot >= 0 && m >= slot) return;
    if (std::gcd(a, std::labs(b)) != 1) return;  // scaled point, not a canonical candidate
    slot = m;
  };
  detail::p1_shell(1, [&](long a, long b) { consider(best, a, b); });
#pragma omp parallel
  {
    long long lb = -1;
#pragma omp for schedule(dynamic, 64)
    for (long h = 2; h <= max_height; ++h)
      detail::p1_shell_raw(h, [&](long a, long b) { consider(lb, a, b); });
#pragma omp critical
    {
      if (lb >= 0 && (best < 0 || lb < best)) best = lb;
    }
  }
  if (best < 0) fail(Errc::degenerate_input, "no point passes the coordinate filter");
  return make_rat(Int(static_cast<long>(best)), height(target));
}

std::vector<ProjPoint> near_points_p2(const ProjPoint& target, long max_height,
                                      const Rat& threshold) {
  if (target.dim() != 3) fail(Errc::dimension_mismatch, "target must lie in P^2");
  if (!(threshold > 0)) fail(Errc::precondition, "threshold must be positive");
  check_scan_height(max_height);
  const std::vector<Int>& p = target.coords();
  // admission is max_minor(target, q) <= T with T = threshold * H(target)
  Rat T = threshold * make_rat(height(target), 1);
  const Int tn = T.get_num(), td = T.get_den();
  size_t k = 0;  // chart of the target's largest coordinate
  for (size_t i = 1; i < 3; ++i)
    if (abs(p[i]) > abs(p[k])) k = i;
  const size_t j1 = k == 0 ? 1 : 0;
  const size_t j2 = k == 2 ? 1 : 2;
  Int pk = p[k];
  const long B = max_height;
  std::vector<ProjPoint> out;
#pragma omp parallel
  {
    std::vector<ProjPoint> loc;
#pragma omp for schedule(dynamic, 8)
    for (long qk = -B; qk <= B; ++qk) {
      // |pk * qj - pj * qk| <= T confines qj to one integer window
      auto window = [&](size_t j, long& lo, long& hi) {
        Int A = p[j] * qk;
        Int PK = pk;
        if (PK < 0) {
          PK = -PK;
          A = -A;
        }
        Int l = ceil_div(A * td - tn, PK * td);
        Int h = floor_div(A * td + tn, PK * td);
        if (l < -B) l = -B;
        if (h > B) h = B;
        lo = l.get_si();
        hi = h.get_si();
      };
      long lo1, hi1, lo2, hi2;
      window(j1, lo1, hi1);
      window(j2, lo2, hi2);
      for (long a = lo1; a <= hi1; ++a) {
        for (long b = lo2; b <= hi2; ++b) {
          std::vector<Int> v(3);
          v[k] = qk;
          v[j1] = a;
          v[j2] = b;
          if (v[0] == 0 && v[1] == 0 && v[2] == 0) continue;
          Int cross = p[j1] * b - p[j2] * a;  // the minor the windows do not bound
          if (abs(cross) * td > tn) continue;
          if (gcd_all(v) != 1) continue;  // canonical points only
          size_t first = v[0] != 0 ? 0 : v[1] != 0 ? 1 : 2;
          if (v[first] < 0) continue;  // sign-canonical twin is scanned too
          ProjPoint pt = ProjPoint::normalize(v);
          if (pt == target) continue;
          loc.push_back(std::move(pt));
        }
      }
    }
#pragma omp critical
    out.insert(out.end(), std::make_move_iterator(loc.begin()), std::make_move_iterator(loc.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace approx
}  // namespace rapprox
