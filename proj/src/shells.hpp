#pragma once

// Height shells of canonical projective points over the integers.  A shell
// is the set of points whose max coordinate is exactly h; iterating shells
// in order gives a height-major stream, and every visitor walks a shell in
// ascending lexicographic coordinate order (the tie-break order the
// frontier relies on).

#include <cstdlib>
#include <numeric>
#include <vector>

#include "rapprox/projective.hpp"

namespace rapprox {
namespace approx {
namespace detail {

inline ProjPoint point2(long a, long b) {
  std::vector<Int> v{Int(a), Int(b)};
  return ProjPoint::normalize(v);
}

inline ProjPoint point3(long a, long b, long c) {
  std::vector<Int> v{Int(a), Int(b), Int(c)};
  return ProjPoint::normalize(v);
}

// Canonical primitive points of P^1 with max(|a|, |b|) == h.
template <class F>
void p1_shell(long h, F&& fn) {
  if (h == 1) {
    fn(0L, 1L);
    fn(1L, -1L);
    fn(1L, 0L);
    fn(1L, 1L);
    return;
  }
  for (long a = 1; a < h; ++a) {
    if (std::gcd(a, h) != 1) continue;
    fn(a, -h);
    fn(a, h);
  }
  for (long b = -(h - 1); b <= h - 1; ++b) {
    if (b == 0) continue;
    if (std::gcd(h, std::abs(b)) != 1) continue;
    fn(h, b);
  }
}

// Canonical primitive points of P^2 on the shell.
template <class F>
void p2_shell(long h, F&& fn) {
  auto consider = [&](long a, long b, long c) {
    if (a == 0 && (b < 0 || (b == 0 && c < 0))) return;  // sign-canonical
    if (std::gcd(std::gcd(a, std::abs(b)), std::abs(c)) != 1) return;
    fn(a, b, c);
  };
  for (long a = 0; a <= h; ++a) {
    if (a == h) {
      for (long b = -h; b <= h; ++b)
        for (long c = -h; c <= h; ++c) consider(a, b, c);
      continue;
    }
    for (long b = -h; b <= h; ++b) {
      if (std::abs(b) == h) {
        for (long c = -h; c <= h; ++c) consider(a, b, c);
      } else {
        consider(a, b, -h);
        consider(a, b, h);
      }
    }
  }
}

// Machine strips for the scan kernels, h >= 2: no primitivity filter (a
// scaled point never survives the frontier merge, see the eviction note in
// scan_omp.cpp), but scalings of the height-1 points are excluded here
// because their primitive versions are filtered out of frontiers, not
// dominated.
template <class F>
void p1_shell_raw(long h, F&& fn) {
  for (long a = 1; a < h; ++a) {
    fn(a, -h);
    fn(a, h);
  }
  for (long b = -(h - 1); b <= h - 1; ++b) {
    if (b == 0) continue;  // ray of [1:0]
    fn(h, b);
  }
}

template <class F>
void p2_shell_raw(long h, F&& fn) {
  auto consider = [&](long a, long b, long c) {
    if (a == 0 && (b < 0 || (b == 0 && c < 0))) return;
    long ab = std::abs(b), ac = std::abs(c);
    if ((a == 0 || a == h) && (ab == 0 || ab == h) && (ac == 0 || ac == h))
      return;  // ray of a height-1 point
    fn(a, b, c);
  };
  for (long a = 0; a <= h; ++a) {
    if (a == h) {
      for (long b = -h; b <= h; ++b)
        for (long c = -h; c <= h; ++c) consider(a, b, c);
      continue;
    }
    for (long b = -h; b <= h; ++b) {
      if (std::abs(b) == h) {
        for (long c = -h; c <= h; ++c) consider(a, b, c);
      } else {
        consider(a, b, -h);
        consider(a, b, h);
      }
    }
  }
}

}  // namespace detail
}  // namespace approx
}  // namespace rapprox
