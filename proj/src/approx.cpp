#include "rapprox/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "shells.hpp"

namespace rapprox {
namespace approx {

namespace {

void check_shell_range(long lo, long hi) {
  if (lo < 1 || hi < lo) fail(Errc::precondition, "shell range must satisfy 1 <= lo <= hi");
  if (hi > kMaxEnumHeight) fail(Errc::unsupported, "height bound above the enumeration cap");
}

// Linear sieve for the Moebius function on [1, n].
std::vector<int> mobius_table(long n) {
  std::vector<int> mu(static_cast<size_t>(n) + 1, 0);
  std::vector<char> composite(static_cast<size_t>(n) + 1, 0);
  std::vector<long> primes;
  if (n >= 1) mu[1] = 1;
  for (long i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (long p : primes) {
      if (i > n / p) break;
      composite[i * p] = 1;
      if (i % p == 0) {
        mu[i * p] = 0;
        break;
      }
      mu[i * p] = -mu[i];
    }
  }
  return mu;
}

// #{primitive canonical points with max |coordinate| <= B} in P^{dim-1}:
// Moebius inversion over the scaling factor of the (2m+1)^dim - 1 nonzero
// integer vectors in the box, then one representative per +-v pair.
Int coprime_point_count(long max_height, int dim) {
  if (max_height < 1) fail(Errc::precondition, "height bound must be >= 1");
  if (max_height > kMaxEnumHeight) fail(Errc::unsupported, "height bound above the enumeration cap");
  std::vector<int> mu = mobius_table(max_height);
  Int total = 0;
  for (long g = 1; g <= max_height; ++g) {
    if (mu[g] == 0) continue;
    Int side = 2 * (max_height / g) + 1;
    Int box = side;
    for (int i = 1; i < dim; ++i) box *= side;
    box -= 1;
    if (mu[g] > 0)
      total += box;
    else
      total -= box;
  }
  return total / 2;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double xm = 0, ym = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= static_cast<double>(x.size());
  ym /= static_cast<double>(x.size());
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  return sxy / sxx;
}

size_t last_nonzero_chart(const ProjPoint& p) {
  const auto& c = p.coords();
  for (size_t i = c.size(); i-- > 0;)
    if (c[i] != 0) return i;
  fail(Errc::invalid_point, "zero vector has no chart");
}

}  // namespace

void enumerate_p1_range(long lo, long hi, const std::function<void(const ProjPoint&)>& emit) {
  check_shell_range(lo, hi);
  for (long h = lo; h <= hi; ++h)
    detail::p1_shell(h, [&](long a, long b) { emit(detail::point2(a, b)); });
}

void enumerate_p1(long max_height, const std::function<void(const ProjPoint&)>& emit) {
  enumerate_p1_range(1, max_height, emit);
}

void enumerate_p2_range(long lo, long hi, const std::function<void(const ProjPoint&)>& emit) {
  check_shell_range(lo, hi);
  for (long h = lo; h <= hi; ++h)
    detail::p2_shell(h, [&](long a, long b, long c) { emit(detail::point3(a, b, c)); });
}

void enumerate_p2(long max_height, const std::function<void(const ProjPoint&)>& emit) {
  enumerate_p2_range(1, max_height, emit);
}

Int count_p1(long max_height) { return coprime_point_count(max_height, 2); }

Int count_p2(long max_height) { return coprime_point_count(max_height, 3); }

// Entries are strictly decreasing in distance and strictly increasing in
// height; insert() keeps that invariant by evicting dominated neighbours.
void Frontier::insert(const ProjPoint& point, const Rat& dist, const Int& height) {
  if (!(dist > 0) || dist >= 1 || height < 2) return;
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), dist,
      [](const FrontierEntry& e, const Rat& d) { return e.dist > d; });
  size_t i = static_cast<size_t>(it - entries_.begin());
  if (i < entries_.size()) {
    FrontierEntry& e = entries_[i];  // smallest height among entries with dist <= d
    if (e.height < height) return;
    if (e.height == height) {
      if (e.dist < dist) return;
      // exact (dist, height) tie: keep the lexicographically least point
      if (point < e.point) e.point = point;
      return;
    }
  }
  size_t lo = i;
  while (lo > 0 && entries_[lo - 1].height >= height) --lo;  // larger dist, no better height
  size_t hi = i;
  if (hi < entries_.size() && entries_[hi].dist == dist) ++hi;  // equal dist, larger height
  entries_.erase(entries_.begin() + lo, entries_.begin() + hi);
  entries_.insert(entries_.begin() + lo, FrontierEntry{point, dist, height});
}

void Frontier::merge(const Frontier& other) {
  if (other.entries_.empty()) return;
  if (entries_.empty()) {
    entries_ = other.entries_;
    return;
  }
  std::vector<FrontierEntry> all;
  all.reserve(entries_.size() + other.entries_.size());
  all.insert(all.end(), entries_.begin(), entries_.end());
  all.insert(all.end(), other.entries_.begin(), other.entries_.end());
  std::sort(all.begin(), all.end(), [](const FrontierEntry& a, const FrontierEntry& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.height != b.height) return a.height < b.height;
    return a.point < b.point;
  });
  std::vector<FrontierEntry> keep;
  for (FrontierEntry& e : all)
    if (keep.empty() || e.height < keep.back().height) keep.push_back(std::move(e));
  std::reverse(keep.begin(), keep.end());
  entries_ = std::move(keep);
}

bool Frontier::operator==(const Frontier& o) const {
  if (entries_.size() != o.entries_.size()) return false;
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].point != o.entries_[i].point) return false;
    if (entries_[i].dist != o.entries_[i].dist) return false;
    if (entries_[i].height != o.entries_[i].height) return false;
  }
  return true;
}

ApproxEstimate empirical_alpha(const Frontier& frontier, const Int& max_height_searched) {
  ApproxEstimate est;
  est.max_height_searched = max_height_searched;
  est.empty = frontier.entries().empty();
  est.insufficient = frontier.entries().size() < 8;
  for (const FrontierEntry& e : frontier.entries()) {
    RecordPoint r{e.point, e.dist, e.height, 0, 0, 0};
    r.neg_log_dist = -log_rat(e.dist);
    r.log_height = log_int(e.height);
    r.gamma = r.log_height / r.neg_log_dist;
    est.records.push_back(std::move(r));
  }
  if (est.records.empty()) return est;
  size_t n = est.records.size();
  size_t k = (n + 3) / 4;  // smallest-distance quartile, at least one record
  std::vector<double> tail;
  for (size_t i = n - k; i < n; ++i) tail.push_back(est.records[i].gamma);
  std::sort(tail.begin(), tail.end());
  size_t m = tail.size() / 2;
  est.tail_median_gamma = tail.size() % 2 ? tail[m] : (tail[m - 1] + tail[m]) / 2;
  if (n == 1) {
    est.slope_fit = est.records[0].gamma;
  } else {
    std::vector<double> x, y;
    for (const RecordPoint& r : est.records) {
      x.push_back(r.neg_log_dist);
      y.push_back(r.log_height);
    }
    est.slope_fit = ls_slope(x, y);
  }
  return est;
}

Frontier frontier_p1_serial(const ProjPoint& target, long max_height, Metric metric) {
  if (target.dim() != 2) fail(Errc::dimension_mismatch, "target must lie in P^1");
  size_t chart = metric == Metric::affine_chart ? last_nonzero_chart(target) : 0;
  Frontier f;
  enumerate_p1(max_height, [&](const ProjPoint& p) {
    if (p == target) return;
    if (metric == Metric::affine_chart) {
      if (p.coords()[chart] == 0) return;
      f.insert(p, affine_chart_distance(target, p, chart), height(p));
    } else {
      f.insert(p, distance(target, p), height(p));
    }
  });
  return f;
}

Frontier frontier_p2_serial(const ProjPoint& target, long max_height) {
  if (target.dim() != 3) fail(Errc::dimension_mismatch, "target must lie in P^2");
  Frontier f;
  enumerate_p2(max_height, [&](const ProjPoint& p) {
    if (p == target) return;
    f.insert(p, distance(target, p), height(p));
  });
  return f;
}

Frontier frontier_curve_serial(const curves::ParamCurve& curve, const ProjPoint& target,
                               long param_height) {
  if (target.dim() != curve.ambient_coords())
    fail(Errc::dimension_mismatch, "target dimension differs from the curve's ambient space");
  Frontier f;
  enumerate_p1(param_height, [&](const ProjPoint& t) {
    ProjPoint image = curves::evaluate(curve, t);
    if (image == target) return;
    f.insert(image, distance(target, image), height(image));
  });
  return f;
}

Rat dist_height_floor_serial(const ProjPoint& target, long max_height, long min_first_abs) {
  if (target.dim() != 2) fail(Errc::dimension_mismatch, "target must lie in P^1");
  if (min_first_abs < 0) fail(Errc::precondition, "coordinate filter must be >= 0");
  Int best = -1;
  enumerate_p1(max_height, [&](const ProjPoint& p) {
    if (p == target) return;
    if (abs(p.coords()[0]) < min_first_abs) return;
    Int m = max_minor(target, p);
    if (best < 0 || m < best) best = m;
  });
  if (best < 0) fail(Errc::degenerate_input, "no point passes the coordinate filter");
  return make_rat(best, height(target));
}

std::vector<ProjPoint> near_points_p2_serial(const ProjPoint& target, long max_height,
                                             const Rat& threshold) {
  if (target.dim() != 3) fail(Errc::dimension_mismatch, "target must lie in P^2");
  if (!(threshold > 0)) fail(Errc::precondition, "threshold must be positive");
  Int hp = height(target);
  std::vector<ProjPoint> out;
  enumerate_p2(max_height, [&](const ProjPoint& q) {
    if (q == target) return;
    // dist(target, q) * H(q) = max_minor / H(target)
    if (make_rat(max_minor(target, q), hp) <= threshold) out.push_back(q);
  });
  std::sort(out.begin(), out.end());
  return out;
}

LineClusterReport line_cluster(const ProjPoint& target, const std::vector<ProjPoint>& points,
                               const Rat& threshold) {
  if (target.dim() != 3) fail(Errc::dimension_mismatch, "target must lie in P^2");
  if (!(threshold > 0)) fail(Errc::precondition, "threshold must be positive");
  Int hp = height(target);
  std::map<LineInP2, std::vector<ProjPoint>> groups;
  LineClusterReport rep;
  for (const ProjPoint& q : points) {
    if (q.dim() != 3) fail(Errc::dimension_mismatch, "cluster points must lie in P^2");
    if (q == target) continue;
    if (make_rat(max_minor(target, q), hp) > threshold) continue;
    ++rep.admitted;
    groups[LineInP2::through(target, q)].push_back(q);
  }
  for (auto& [line, members] : groups) {
    Int ph = line.plucker_height();
    if (ph > rep.max_plucker_height) rep.max_plucker_height = ph;
    rep.groups.push_back(LineGroup{line, std::move(members)});
  }
  return rep;
}

GrowthDiagnostic growth_ratio(const CountLadder& first, const CountLadder& second) {
  auto check = [](const CountLadder& l) {
    if (l.heights.size() != l.counts.size())
      fail(Errc::dimension_mismatch, "ladder heights and counts differ in length");
    if (l.heights.size() < 4) fail(Errc::precondition, "ladder needs at least four rungs");
    for (size_t i = 0; i < l.heights.size(); ++i) {
      if (l.heights[i] < 1 || (i > 0 && l.heights[i] <= l.heights[i - 1]))
        fail(Errc::precondition, "ladder heights must be strictly increasing");
      if (l.counts[i] <= 0) fail(Errc::precondition, "ladder counts must be positive");
    }
  };
  check(first);
  check(second);
  if (first.heights != second.heights)
    fail(Errc::invalid_configuration, "ladders must share their height rungs");
  auto slope = [](const CountLadder& l) {
    size_t n = l.heights.size();
    std::vector<double> x, y;
    for (size_t i = n / 2; i < n; ++i) {  // top half, where asymptotics dominate
      x.push_back(std::log(static_cast<double>(l.heights[i])));
      y.push_back(log_int(l.counts[i]));
    }
    return ls_slope(x, y);
  };
  GrowthDiagnostic g;
  g.slope_first = slope(first);
  g.slope_second = slope(second);
  if (g.slope_first - g.slope_second > 0.5)
    g.dominant = 1;
  else if (g.slope_second - g.slope_first > 0.5)
    g.dominant = 2;
  return g;
}

double product_min_gamma(const Frontier& first, const Frontier& second) {
  if (first.entries().empty() || second.entries().empty())
    fail(Errc::degenerate_input, "both factor frontiers must be nonempty");
  double best = std::numeric_limits<double>::infinity();
  for (const FrontierEntry& a : first.entries())
    for (const FrontierEntry& b : second.entries()) {
      const Rat& d = a.dist > b.dist ? a.dist : b.dist;
      double g = (log_int(a.height) + log_int(b.height)) / -log_rat(d);
      if (g < best) best = g;
    }
  return best;
}

}  // namespace approx
}  // namespace rapprox
