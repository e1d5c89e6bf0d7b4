#pragma once

// Rational point enumeration by height, coprime counting functions, the
// record-frontier estimator for approximation constants, and line
// clustering of good approximators.
//
// Every scan comes in two builds with identical exact output: a plain
// serial reference (enumerate, evaluate, insert) and an OpenMP kernel that
// strips the search space and works in machine words where the bounds
// allow.  Tests pin the two against each other; the benchmark tool
// compares their speed.

#include <functional>
#include <vector>

#include "rapprox/projective.hpp"
#include "rapprox/ratcurves.hpp"

namespace rapprox {
namespace approx {

// Word-size guards for the machine-arithmetic kernels.
inline constexpr long kMaxEnumHeight = 1000000;
inline constexpr long kMaxTargetHeight = 10000000;

// Canonical points emitted height-major (shell h = 1, 2, ...), in ascending
// lexicographic coordinate order inside each shell.  Range variants cover
// the shells [lo, hi] so a partition of [1, B] replays the exact stream.
void enumerate_p1(long max_height, const std::function<void(const ProjPoint&)>& emit);
void enumerate_p1_range(long lo, long hi, const std::function<void(const ProjPoint&)>& emit);
void enumerate_p2(long max_height, const std::function<void(const ProjPoint&)>& emit);
void enumerate_p2_range(long lo, long hi, const std::function<void(const ProjPoint&)>& emit);

// #{P : H(P) <= B} by Moebius inclusion-exclusion over scaling classes of
// the coordinate box; exact, no enumeration.
Int count_p1(long max_height);
Int count_p2(long max_height);

struct FrontierEntry {
  ProjPoint point;
  Rat dist;
  Int height;
};

// Pareto frontier of approximators: entries minimal in (distance, height),
// kept sorted by decreasing distance (so increasing height).  Admits only
// 0 < dist < 1 and height >= 2, one representative per (distance, height)
// pair (the lexicographically least point).  Merging is associative and
// commutative, so partitioned scans may combine in any order.
class Frontier {
public:
  void insert(const ProjPoint& point, const Rat& dist, const Int& height);
  void merge(const Frontier& other);
  const std::vector<FrontierEntry>& entries() const { return entries_; }

  bool operator==(const Frontier& o) const;

private:
  std::vector<FrontierEntry> entries_;
};

struct RecordPoint {
  ProjPoint point;
  Rat dist;
  Int height;
  double neg_log_dist = 0;  // > 0: records have dist < 1
  double log_height = 0;    // > 0: records have height >= 2
  double gamma = 0;         // log_height / neg_log_dist
};

struct ApproxEstimate {
  std::vector<RecordPoint> records;  // decreasing distance
  bool empty = true;                 // no admissible approximators at all
  bool insufficient = true;          // fewer than 8 records
  // Median gamma over the smallest-distance quartile of the records: the
  // primary estimate of the approximation constant.
  double tail_median_gamma = 0;
  // Least-squares slope of log height against -log distance; secondary
  // diagnostic.  Equals the single record's gamma when there is only one.
  double slope_fit = 0;
  Int max_height_searched = 0;
};

ApproxEstimate empirical_alpha(const Frontier& frontier, const Int& max_height_searched);

// The projective metric is the default; the affine variant measures on the
// chart of the target's last nonzero coordinate and skips points off it.
enum class Metric { projective, affine_chart };

Frontier frontier_p1_serial(const ProjPoint& target, long max_height,
                            Metric metric = Metric::projective);
Frontier frontier_p1(const ProjPoint& target, long max_height,
                     Metric metric = Metric::projective);

Frontier frontier_p2_serial(const ProjPoint& target, long max_height);
Frontier frontier_p2(const ProjPoint& target, long max_height);

// Frontier of the curve's image over all parameters of height <= param_height,
// measured against `target` in the ambient space.
Frontier frontier_curve_serial(const curves::ParamCurve& curve, const ProjPoint& target,
                               long param_height);
Frontier frontier_curve(const curves::ParamCurve& curve, const ProjPoint& target,
                        long param_height);

// Exact min of dist(target, Q) * H(Q) over enumerated points Q != target
// with |first coordinate| >= min_first_abs.  This equals
// (min max-minor) / H(target), so the scan is a pure integer minimum.
Rat dist_height_floor_serial(const ProjPoint& target, long max_height, long min_first_abs = 0);
Rat dist_height_floor(const ProjPoint& target, long max_height, long min_first_abs = 0);

// All canonical plane points Q != target with H(Q) <= max_height and
// dist(target, Q) * H(Q) <= threshold, sorted.  The kernel walks only the
// congruence windows around the target's direction.
std::vector<ProjPoint> near_points_p2_serial(const ProjPoint& target, long max_height,
                                             const Rat& threshold);
std::vector<ProjPoint> near_points_p2(const ProjPoint& target, long max_height,
                                      const Rat& threshold);

struct LineGroup {
  LineInP2 line;
  std::vector<ProjPoint> members;
};

struct LineClusterReport {
  std::vector<LineGroup> groups;  // sorted by line
  Int max_plucker_height = 0;
  size_t admitted = 0;
};

// Filters points with dist * height <= threshold and groups them by the
// line through the target.
LineClusterReport line_cluster(const ProjPoint& target, const std::vector<ProjPoint>& points,
                               const Rat& threshold);

struct CountLadder {
  std::vector<long> heights;  // strictly increasing
  std::vector<Int> counts;    // positive
};

struct GrowthDiagnostic {
  double slope_first = 0;   // log-log slope over the top half of the ladder
  double slope_second = 0;
  int dominant = 0;  // 0 comparable, 1/2 = that side's count grows faster by > 0.5
};

GrowthDiagnostic growth_ratio(const CountLadder& first, const CountLadder& second);

// Minimal gamma over cross pairs of the two factor frontiers under the
// (1,1) polarization: height H1*H2, distance max(d1, d2).  Restricting to
// frontier entries is exact over all enumerated pairs whenever each factor
// target has height 1 (then every approximator at distance < 1 has height
// >= 2 and is dominated by a frontier entry, and swapping a factor for a
// dominating one never raises gamma).
double product_min_gamma(const Frontier& first, const Frontier& second);

}  // namespace approx
}  // namespace rapprox
