#include "rapprox/io.hpp"

#include <cstdio>

#include "rapprox/cones.hpp"

namespace rapprox {
namespace io {
namespace {

long require_long(const json& j, const std::string& where) {
  if (!j.is_number_integer())
    fail(Errc::invalid_configuration, "scenario field '" + where + "' must be an integer");
  return j.get<long>();
}

const json& require_field(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    fail(Errc::invalid_configuration, "scenario is missing '" + where + "'");
  return *it;
}

std::vector<Int> int_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    fail(Errc::invalid_configuration, "scenario field '" + where + "' must be a nonempty array");
  std::vector<Int> v;
  for (const auto& x : j) {
    if (x.is_number_integer())
      v.emplace_back(x.get<long>());
    else if (x.is_string())
      v.emplace_back(x.get<std::string>());
    else
      fail(Errc::invalid_configuration,
           "scenario field '" + where + "' must hold integers or decimal strings");
  }
  return v;
}

ProjPoint point_from(const json& j, const std::string& where) {
  return ProjPoint::normalize(int_vector(j, where));
}

std::vector<Rat> rat_vector(const json& j, const std::string& where) {
  std::vector<Rat> v;
  for (const auto& x : int_vector(j, where)) v.emplace_back(x);
  return v;
}

}  // namespace

json int_json(const Int& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

json coords_json(const std::vector<Int>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(int_json(x));
  return a;
}

std::string rat_str(const Rat& v) { return v.get_str(); }

std::string double_str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json point_json(const ProjPoint& p) { return coords_json(p.coords()); }

json lattice_json(const lat::Preset& p) {
  json j;
  j["name"] = p.name;
  j["labels"] = p.lattice->labels();
  json gram = json::array();
  for (const auto& row : p.lattice->gram()) gram.push_back(coords_json(row));
  j["gram"] = gram;
  Signature sig = p.lattice->signature();
  j["signature"] = {{"negative", sig.negative}, {"positive", sig.positive}, {"zero", sig.zero}};
  json classes = json::array();
  for (const auto& label : p.class_order) {
    json coeffs = json::array();
    for (const auto& c : p.classes.at(label).coeffs()) coeffs.push_back(rat_str(c));
    classes.push_back({{"coeffs", coeffs}, {"label", label}});
  }
  j["classes"] = classes;
  j["effective"] = p.effective;
  j["nef"] = p.nef;
  return j;
}

json rays_json(const cone::Cone& c) {
  json a = json::array();
  for (const auto& g : c.generators()) {
    json coeffs = json::array();
    for (const auto& x : g.coeffs()) coeffs.push_back(rat_str(x));
    a.push_back(coeffs);
  }
  return a;
}

json prediction_json(const pred::Prediction& p) {
  return {{"alpha", rat_str(p.alpha)}, {"winners", p.winners}};
}

json estimate_json(const approx::ApproxEstimate& e) {
  json records = json::array();
  for (const auto& r : e.records) {
    json rec;
    rec["point"] = point_json(r.point);
    rec["dist_num"] = int_json(r.dist.get_num());
    rec["dist_den"] = int_json(r.dist.get_den());
    rec["height"] = int_json(r.height);
    rec["neg_log_dist"] = r.neg_log_dist;
    rec["log_height"] = r.log_height;
    rec["gamma"] = r.gamma;
    records.push_back(rec);
  }
  json j;
  j["records"] = records;
  j["tail_median_gamma"] = e.tail_median_gamma;
  j["slope_fit"] = e.slope_fit;
  j["max_height"] = int_json(e.max_height_searched);
  j["empty"] = e.empty;
  j["insufficient"] = e.insufficient;
  return j;
}

std::string estimate_csv(const approx::ApproxEstimate& e) {
  std::string out = "point,dist_num,dist_den,height,neg_log_dist,log_height,gamma\n";
  for (const auto& r : e.records) {
    out += r.point.str();
    out += ',' + r.dist.get_num().get_str();
    out += ',' + r.dist.get_den().get_str();
    out += ',' + r.height.get_str();
    out += ',' + double_str(r.neg_log_dist);
    out += ',' + double_str(r.log_height);
    out += ',' + double_str(r.gamma);
    out += '\n';
  }
  return out;
}

std::string points_csv(const std::vector<ProjPoint>& points) {
  std::string out = "point\n";
  for (const auto& p : points) {
    out += p.str();
    out += '\n';
  }
  return out;
}

json checks_json(const std::vector<fix::CheckResult>& checks) {
  json a = json::array();
  for (const auto& c : checks)
    a.push_back({{"detail", c.detail}, {"name", c.name}, {"pass", c.pass}});
  return a;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

ModelScenario parse_model_scenario(const json& j) {
  if (!j.is_object()) fail(Errc::invalid_configuration, "scenario must be a JSON object");
  std::string type = require_field(j, "type", "type").get<std::string>();
  ModelScenario m;
  if (type == "blowup_p2") {
    m.type = ModelScenario::Type::blowup_p2;
    const json& cls = require_field(j, "class", "class");
    m.degree = require_long(require_field(cls, "a", "class.a"), "class.a");
    if (m.degree < 1) fail(Errc::invalid_configuration, "class.a must be at least 1");
    const json& points = require_field(j, "points", "points");
    const json& mults = require_field(cls, "b", "class.b");
    if (!points.is_array() || !mults.is_array() || points.size() != mults.size())
      fail(Errc::invalid_configuration, "points and class.b must be arrays of equal length");
    for (size_t i = 0; i < points.size(); ++i) {
      long b = require_long(mults[i], "class.b");
      if (b < 1) fail(Errc::invalid_configuration, "multiplicities must be at least 1");
      m.base_points.emplace_back(point_from(points[i], "points"), b);
    }
    for (size_t i = 0; i < m.base_points.size(); ++i)
      for (size_t k = i + 1; k < m.base_points.size(); ++k)
        if (m.base_points[i].first == m.base_points[k].first)
          fail(Errc::invalid_configuration, "base points must be distinct");
    if (j.contains("target")) m.target = point_from(j["target"], "target");
    return m;
  }
  if (type == "hirzebruch") {
    m.type = ModelScenario::Type::hirzebruch;
    m.n = require_long(require_field(j, "n", "n"), "n");
    if (m.n < 0) fail(Errc::invalid_configuration, "n must be nonnegative");
    const json& cls = require_field(j, "class", "class");
    if (!cls.is_array() || cls.size() != 2)
      fail(Errc::invalid_configuration, "class must be the pair [a, b]");
    m.class_a = require_long(cls[0], "class[0]");
    m.class_b = require_long(cls[1], "class[1]");
    if (j.contains("target")) {
      const json& t = j["target"];
      m.fiber_x = point_from(require_field(t, "x", "target.x"), "target.x");
      m.section_y = point_from(require_field(t, "y", "target.y"), "target.y");
    }
    return m;
  }
  if (type == "product") {
    m.type = ModelScenario::Type::product;
    const json& bd = require_field(j, "bidegree", "bidegree");
    if (!bd.is_array() || bd.size() != 2)
      fail(Errc::invalid_configuration, "bidegree must be the pair [a, b]");
    m.bidegree_a = require_long(bd[0], "bidegree[0]");
    m.bidegree_b = require_long(bd[1], "bidegree[1]");
    if (m.bidegree_a < 0 || m.bidegree_b < 0 || (m.bidegree_a == 0 && m.bidegree_b == 0))
      fail(Errc::invalid_configuration, "bidegree entries must be nonnegative, not both zero");
    if (j.contains("target")) {
      const json& t = j["target"];
      if (!t.is_array() || t.size() != 2)
        fail(Errc::invalid_configuration, "target must be a pair of points");
      m.target_first = point_from(t[0], "target[0]");
      m.target_second = point_from(t[1], "target[1]");
    }
    return m;
  }
  fail(Errc::invalid_configuration, "unknown scenario type '" + type + "'");
}

PredictorScenario parse_predictor_scenario(const json& j, const lat::Preset* preset) {
  if (!j.is_object()) fail(Errc::invalid_configuration, "scenario must be a JSON object");
  const json& ctx = require_field(j, "context", "context");

  PredictorScenario s;
  if (preset) {
    s.context.lattice = preset->lattice;
  } else {
    const json& lj = require_field(ctx, "lattice", "context.lattice (no preset given)");
    std::vector<std::string> labels =
        require_field(lj, "labels", "lattice.labels").get<std::vector<std::string>>();
    json gram = require_field(lj, "gram", "lattice.gram");
    std::vector<std::vector<Int>> rows;
    for (const auto& row : gram) rows.push_back(int_vector(row, "lattice.gram"));
    s.context.lattice = std::make_shared<const lat::NSLattice>(labels, rows);
  }

  auto class_from = [&](const json& c, const std::string& where) -> lat::DivisorClass {
    if (c.is_string()) {
      if (!preset)
        fail(Errc::invalid_configuration,
             "class expressions in '" + where + "' need a preset");
      return lat::parse_class_expr(*preset, c.get<std::string>());
    }
    return lat::DivisorClass(s.context.lattice, rat_vector(c, where));
  };

  const json& cands = require_field(ctx, "candidates", "context.candidates");
  if (!cands.is_array() || cands.empty())
    fail(Errc::invalid_configuration, "context.candidates must be a nonempty array");
  for (const auto& c : cands) {
    pred::Candidate cand{require_field(c, "label", "candidate.label").get<std::string>(),
                         class_from(require_field(c, "class", "candidate.class"),
                                    "candidate.class"),
                         1};
    if (c.contains("mult")) cand.mult = require_long(c["mult"], "candidate.mult");
    s.context.candidates.push_back(std::move(cand));
  }

  if (ctx.contains("effective")) {
    for (const auto& e : ctx["effective"])
      s.context.effective_gens.push_back(class_from(e, "context.effective"));
  } else if (preset) {
    for (const auto& e : preset->effective)
      s.context.effective_gens.push_back(lat::parse_class_expr(*preset, e));
  } else {
    fail(Errc::invalid_configuration, "context.effective is required without a preset");
  }

  if (ctx.contains("facts")) {
    for (const auto& f : ctx["facts"])
      s.context.facts.push_back(
          {require_field(f, "candidate", "fact.candidate").get<std::string>(),
           class_from(require_field(f, "effective", "fact.effective"), "fact.effective")});
  }

  if (j.contains("divisor")) s.divisor = class_from(j["divisor"], "divisor");
  return s;
}

}  // namespace io
}  // namespace rapprox
