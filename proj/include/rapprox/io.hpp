#pragma once

// Report serialization and scenario parsing.  All JSON emission goes
// through ordered nlohmann objects (keys sorted), integers become JSON
// numbers when they fit a signed 64-bit word and decimal strings past
// that, rationals are always "num/den" strings, and doubles are printed
// with twelve significant digits, so re-running a scenario reproduces
// byte-identical reports.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rapprox/approx.hpp"
#include "rapprox/fixtures.hpp"
#include "rapprox/nslattice.hpp"
#include "rapprox/predictor.hpp"
#include "rapprox/projective.hpp"

namespace rapprox {
namespace cone {
class Cone;
}

namespace io {

using nlohmann::json;

json int_json(const Int& v);
json coords_json(const std::vector<Int>& v);
std::string rat_str(const Rat& v);  // canonical "num/den", plain "num" for integers
std::string double_str(double v);
json point_json(const ProjPoint& p);

// {"classes": [{"coeffs", "label"}...], "effective", "gram", "labels",
//  "name", "nef", "signature"}; classes follow the preset display order.
json lattice_json(const lat::Preset& p);

json rays_json(const cone::Cone& c);

// {"alpha": "3/2", "winners": [...]}.
json prediction_json(const pred::Prediction& p);

// {"empty", "insufficient", "max_height", "records", "slope_fit",
//  "tail_median_gamma"}; each record carries point, dist_num, dist_den,
//  height, neg_log_dist, log_height, gamma.
json estimate_json(const approx::ApproxEstimate& e);

// Column order: point, dist_num, dist_den, height, neg_log_dist,
// log_height, gamma.  Points are colon-joined coordinates.
std::string estimate_csv(const approx::ApproxEstimate& e);

std::string points_csv(const std::vector<ProjPoint>& points);

// [{"detail", "name", "pass"}...] in run order.
json checks_json(const std::vector<fix::CheckResult>& checks);

// dump with two-space indent and a trailing newline.
std::string dump(const json& j);

// ---------------------------------------------------------------------------
// Scenario files.

// Model scenarios:
//   {"type": "blowup_p2", "points": [[0,0,1], ...],
//    "class": {"a": 2, "b": [1,1,1,1]}, "target": [x,y,z]?}
//   {"type": "hirzebruch", "n": 2, "class": [a,b],
//    "target": {"x": [x1,x2], "y": [y1,y2]}?}       (class = a*F + b*S)
//   {"type": "product", "bidegree": [1,1], "target": [[p],[q]]?}
struct ModelScenario {
  enum class Type { blowup_p2, hirzebruch, product };
  Type type = Type::blowup_p2;

  long degree = 0;
  std::vector<std::pair<ProjPoint, long>> base_points;
  std::optional<ProjPoint> target;

  long n = 0;
  long class_a = 0;
  long class_b = 0;
  std::optional<ProjPoint> fiber_x;
  std::optional<ProjPoint> section_y;

  long bidegree_a = 1;
  long bidegree_b = 1;
  std::optional<ProjPoint> target_first;
  std::optional<ProjPoint> target_second;
};

ModelScenario parse_model_scenario(const json& j);

// Predictor scenarios:
//   {"context": {"candidates": [{"label": "E1", "class": [...], "mult": 1}, ...],
//                "effective": [[...], ...]?,
//                "facts": [{"candidate": "F", "effective": [...]}]?,
//                "lattice": {"labels": [...], "gram": [[...]]}?},
//    "divisor": [...]?}
// A preset supplies the lattice and default effective generators; classes
// may then also be expression strings over the preset's named classes.
// Without a preset the embedded lattice and explicit coefficient arrays
// are required.
struct PredictorScenario {
  pred::PointContext context;
  std::optional<lat::DivisorClass> divisor;
};

PredictorScenario parse_predictor_scenario(const json& j, const lat::Preset* preset);

}  // namespace io
}  // namespace rapprox
