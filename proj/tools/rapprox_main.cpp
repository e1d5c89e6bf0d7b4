// Scenario runner: lattice and cone reports, predictions, enumeration,
// empirical approximation estimates, and the fixture verification suite.
// Data goes to stdout (or --out); logs go to stderr.  Exit codes: 0 ok,
// 1 fixture failure, 2 usage or scenario error.

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "rapprox/cones.hpp"
#include "rapprox/fixtures.hpp"
#include "rapprox/io.hpp"
#include "rapprox/surfaces.hpp"

namespace {

using namespace rapprox;
using nlohmann::json;

struct OutputOptions {
  std::string format = "json";
  std::string out_path;
};

void add_output_options(CLI::App* cmd, OutputOptions& opts, bool csv_allowed) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember(csv_allowed ? std::vector<std::string>{"json", "csv"}
                                        : std::vector<std::string>{"json"}));
  cmd->add_option("--out", opts.out_path, "Write the report to this file instead of stdout");
}

void emit(const OutputOptions& opts, const std::string& payload) {
  if (opts.out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(opts.out_path, std::ios::binary);
  if (!f) fail(Errc::invalid_configuration, "cannot open output file '" + opts.out_path + "'");
  f << payload;
}

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::invalid_configuration, "cannot open scenario file '" + path + "'");
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    fail(Errc::invalid_configuration, std::string("scenario is not valid JSON: ") + e.what());
  }
  return j;
}

ProjPoint parse_point_arg(const std::string& text) {
  std::vector<Int> coords;
  std::string cur;
  for (char ch : text + ":") {
    if (ch == ':') {
      if (cur.empty()) fail(Errc::invalid_configuration, "empty coordinate in '" + text + "'");
      coords.emplace_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return ProjPoint::normalize(coords);
}

// ---------------------------------------------------------------------------
// lattice

int run_lattice(const std::string& preset_name, const std::string& scenario_path,
                const std::string& point_arg, const OutputOptions& opts) {
  if (!scenario_path.empty()) {
    io::ModelScenario m = io::parse_model_scenario(load_json_file(scenario_path));
    json j;
    if (m.type == io::ModelScenario::Type::blowup_p2) {
      surf::LinearSystem sys = surf::linear_system_basis(m.degree, m.base_points);
      j["type"] = "blowup_p2";
      j["degree"] = m.degree;
      j["dimension"] = sys.dim();
      j["non_generic"] = sys.non_generic;
      json exps = json::array();
      for (const auto& e : sys.exponents) exps.push_back({e[0], e[1], e[2]});
      j["exponents"] = exps;
      json forms = json::array();
      for (const auto& f : sys.forms) forms.push_back(io::coords_json(f));
      j["forms"] = forms;
      std::optional<ProjPoint> target = m.target;
      if (!point_arg.empty()) target = parse_point_arg(point_arg);
      if (target) {
        j["target"] = io::point_json(*target);
        j["target_values"] = io::coords_json(surf::system_values(*target, sys));
        j["target_height"] = io::int_json(surf::height_via_system(*target, sys));
        j["target_image"] = io::point_json(surf::embed_via_system(*target, sys));
      }
    } else if (m.type == io::ModelScenario::Type::hirzebruch) {
      if (!m.fiber_x || !m.section_y)
        fail(Errc::invalid_configuration, "hirzebruch lattice reports need a target point");
      surf::HirzebruchModel pt = surf::make_hirzebruch_point(m.n, *m.fiber_x, *m.section_y);
      j["type"] = "hirzebruch";
      j["n"] = m.n;
      j["class"] = {m.class_a, m.class_b};
      j["values"] = io::coords_json(surf::cox_values(pt, m.class_a, m.class_b));
      j["height"] = io::int_json(surf::cox_height(pt, m.class_a, m.class_b));
      j["image"] = io::point_json(surf::cox_embed(pt, m.class_a, m.class_b));
    } else {
      fail(Errc::invalid_configuration,
           "product models have no lattice report; use the alpha task");
    }
    emit(opts, io::dump(j));
    return 0;
  }
  if (preset_name.empty())
    fail(Errc::invalid_configuration, "lattice needs --preset or --scenario");
  emit(opts, io::dump(io::lattice_json(lat::parse_preset(preset_name))));
  return 0;
}

// ---------------------------------------------------------------------------
// cones

int run_cones(const std::string& mode, const std::string& preset_name,
              const std::string& divisor_expr, const OutputOptions& opts) {
  if (preset_name.empty()) fail(Errc::invalid_configuration, "cones needs --preset");
  lat::Preset p = lat::parse_preset(preset_name);
  cone::Cone eff = cone::cone_from_exprs(p, p.effective);
  cone::Cone dual = cone::dual_cone(eff);
  json j;
  if (mode == "dual") {
    j["preset"] = p.name;
    j["rays"] = io::rays_json(dual);
    j["count"] = dual.generators().size();
  } else {
    cone::Cone nef = cone::cone_from_exprs(p, p.nef);
    j["preset"] = p.name;
    j["effective_generators"] = io::rays_json(eff);
    j["nef_rays"] = io::rays_json(nef);
    j["dual_pair"] = cone::is_dual_pair(eff, nef);
    if (!divisor_expr.empty()) {
      lat::DivisorClass d = lat::parse_class_expr(p, divisor_expr);
      std::vector<lat::DivisorClass> eff_gens;
      for (const auto& e : p.effective) eff_gens.push_back(lat::parse_class_expr(p, e));
      json dj;
      json coeffs = json::array();
      for (const auto& c : d.coeffs()) coeffs.push_back(io::rat_str(c));
      dj["coeffs"] = coeffs;
      dj["nef"] = cone::contains(nef, d);
      dj["ample"] = cone::nakai_ample(d, eff_gens);
      j["divisor"] = dj;
    }
  }
  emit(opts, io::dump(j));
  return 0;
}

// ---------------------------------------------------------------------------
// predict

int run_predict(const std::string& preset_name, const std::string& scenario_path,
                const std::string& divisor_expr, const OutputOptions& opts) {
  if (scenario_path.empty()) fail(Errc::invalid_configuration, "predict needs --scenario");
  std::optional<lat::Preset> preset;
  if (!preset_name.empty()) preset = lat::parse_preset(preset_name);
  io::PredictorScenario s =
      io::parse_predictor_scenario(load_json_file(scenario_path), preset ? &*preset : nullptr);
  std::optional<lat::DivisorClass> divisor = s.divisor;
  if (!divisor_expr.empty()) {
    if (!preset) fail(Errc::invalid_configuration, "--divisor expressions need --preset");
    divisor = lat::parse_class_expr(*preset, divisor_expr);
  }
  if (!divisor)
    fail(Errc::invalid_configuration, "predict needs a divisor (scenario field or --divisor)");
  emit(opts, io::dump(io::prediction_json(pred::predict_alpha(s.context, *divisor))));
  return 0;
}

// ---------------------------------------------------------------------------
// enumerate

int run_enumerate(const std::string& space, long max_height, bool count_only,
                  const OutputOptions& opts) {
  if (max_height < 1) fail(Errc::invalid_configuration, "--max-height must be at least 1");
  if (count_only) {
    Int n = space == "p1" ? approx::count_p1(max_height) : approx::count_p2(max_height);
    json j;
    j["space"] = space;
    j["max_height"] = max_height;
    j["count"] = io::int_json(n);
    emit(opts, io::dump(j));
    return 0;
  }
  std::vector<ProjPoint> points;
  auto sink = [&](const ProjPoint& p) { points.push_back(p); };
  if (space == "p1")
    approx::enumerate_p1(max_height, sink);
  else
    approx::enumerate_p2(max_height, sink);
  if (opts.format == "csv") {
    emit(opts, io::points_csv(points));
    return 0;
  }
  json j;
  j["space"] = space;
  j["max_height"] = max_height;
  j["count"] = points.size();
  json arr = json::array();
  for (const auto& p : points) arr.push_back(io::point_json(p));
  j["points"] = arr;
  emit(opts, io::dump(j));
  return 0;
}

// ---------------------------------------------------------------------------
// alpha

int emit_estimate(const approx::ApproxEstimate& est, json extra, const OutputOptions& opts) {
  if (opts.format == "csv") {
    emit(opts, io::estimate_csv(est));
    return 0;
  }
  json j = io::estimate_json(est);
  j.update(extra);
  emit(opts, io::dump(j));
  return 0;
}

int run_alpha_model(const io::ModelScenario& m, long max_height, const OutputOptions& opts) {
  if (m.type == io::ModelScenario::Type::blowup_p2) {
    if (!m.target) fail(Errc::invalid_configuration, "blowup_p2 alpha needs a target point");
    surf::LinearSystem sys = surf::linear_system_basis(m.degree, m.base_points);
    if (sys.dim() < 2)
      fail(Errc::invalid_configuration, "the linear system does not embed: dimension below 2");
    for (const auto& [bp, mult] : m.base_points)
      if (bp == *m.target)
        fail(Errc::invalid_configuration, "the target must lie off the base locus");
    ProjPoint image = surf::embed_via_system(*m.target, sys);
    approx::Frontier frontier;
    // The full-enumeration scan with per-point system evaluation is the
    // slow path; cap it so a stray bound cannot run for hours.
    long bound = max_height > 0 ? std::min(max_height, 2000L) : 200;
    approx::enumerate_p2(bound, [&](const ProjPoint& q) {
      if (q == *m.target) return;
      for (const auto& [bp, mult] : m.base_points)
        if (q == bp) return;
      frontier.insert(q, distance(image, surf::embed_via_system(q, sys)),
                      surf::height_via_system(q, sys));
    });
    json extra;
    extra["model"] = "blowup_p2";
    extra["target"] = io::point_json(*m.target);
    if (bound != max_height) extra["max_height_clamped"] = bound;
    return emit_estimate(approx::empirical_alpha(frontier, bound), extra, opts);
  }
  if (m.type == io::ModelScenario::Type::product) {
    if (!m.target_first || !m.target_second)
      fail(Errc::invalid_configuration, "product alpha needs a pair of target points");
    if (max_height < 1) max_height = 500;
    approx::Frontier first = approx::frontier_p1(*m.target_first, max_height);
    approx::Frontier second = approx::frontier_p1(*m.target_second, max_height);
    json j;
    j["model"] = "product";
    j["bidegree"] = {m.bidegree_a, m.bidegree_b};
    j["max_height"] = max_height;
    j["min_offaxis_gamma"] = approx::product_min_gamma(first, second);
    surf::PairPoint target{*m.target_first, *m.target_second};
    // Axis witness: move only the first factor to its best frontier record.
    if (!first.entries().empty()) {
      const approx::FrontierEntry& e = first.entries().back();
      surf::HeightDistance hd = surf::product_height_and_distance(
          target, {e.point, *m.target_second}, m.bidegree_a, m.bidegree_b);
      j["axis_dist_height"] = io::rat_str(Rat(hd.height) * hd.distance);
    }
    emit(opts, io::dump(j));
    return 0;
  }
  fail(Errc::invalid_configuration, "hirzebruch models have no alpha task; use lattice");
}

int run_alpha(const std::string& preset_name, const std::string& scenario_path,
              const std::string& point_arg, long max_height, const std::string& metric_name,
              const OutputOptions& opts) {
  approx::Metric metric =
      metric_name == "affine" ? approx::Metric::affine_chart : approx::Metric::projective;
  if (!scenario_path.empty())
    return run_alpha_model(io::parse_model_scenario(load_json_file(scenario_path)), max_height,
                           opts);
  if (preset_name.empty()) fail(Errc::invalid_configuration, "alpha needs --preset or --scenario");

  auto curve_estimate = [&](const curves::ParamCurve& curve, const ProjPoint& param,
                            long param_height) {
    ProjPoint target = curves::evaluate(curve, param);
    approx::ApproxEstimate est =
        approx::empirical_alpha(approx::frontier_curve(curve, target, param_height),
                                Int(param_height));
    json extra;
    extra["target"] = io::point_json(target);
    extra["alpha_exact"] = io::rat_str(curves::alpha_along_curve(curve, param));
    return emit_estimate(est, extra, opts);
  };

  auto form = [](std::vector<Int> c) { return curves::BinaryForm(std::move(c)); };
  if (preset_name == "line") {
    long bound = max_height > 0 ? max_height : 10000;
    ProjPoint target = ProjPoint::normalize(std::vector<Int>{0, 1});
    approx::ApproxEstimate est =
        approx::empirical_alpha(approx::frontier_p1(target, bound, metric), Int(bound));
    json extra;
    extra["target"] = io::point_json(target);
    return emit_estimate(est, extra, opts);
  }
  if (preset_name == "cusp") {
    curves::ParamCurve cusp({form({0, 0, 1, 0}), form({0, 0, 0, 1}), form({1, 0, 0, 0})});
    return curve_estimate(cusp, ProjPoint::normalize(std::vector<Int>{1, 0}),
                          max_height > 0 ? max_height : 1000);
  }
  if (preset_name == "twisted") {
    curves::ParamCurve tw(
        {form({1, 0, 0, 0}), form({0, 1, 0, 0}), form({0, 0, 1, 0}), form({0, 0, 0, 1})});
    return curve_estimate(tw, ProjPoint::normalize(std::vector<Int>{0, 1}),
                          max_height > 0 ? max_height : 1000);
  }
  if (preset_name == "p1" || preset_name == "p2") {
    if (point_arg.empty())
      fail(Errc::invalid_configuration, "alpha --preset " + preset_name + " needs --point");
    ProjPoint target = parse_point_arg(point_arg);
    long bound = max_height > 0 ? max_height : 1000;
    approx::Frontier f = preset_name == "p1" ? approx::frontier_p1(target, bound, metric)
                                             : approx::frontier_p2(target, bound);
    json extra;
    extra["target"] = io::point_json(target);
    return emit_estimate(approx::empirical_alpha(f, Int(bound)), extra, opts);
  }
  fail(Errc::invalid_configuration,
       "unknown alpha preset '" + preset_name + "' (line, cusp, twisted, p1, p2)");
}

// ---------------------------------------------------------------------------
// verify

int run_verify(const std::string& suite, const OutputOptions& opts) {
  std::vector<fix::CheckResult> checks;
  if (suite == "all")
    checks = fix::run_all_checks();
  else if (suite == "dualpairs")
    checks = fix::check_dual_pairs();
  else if (suite == "tables")
    checks = fix::check_intersection_tables();
  else if (suite == "bitduality")
    checks = fix::check_blowup_duality();
  else if (suite == "fibertrees")
    checks = fix::check_fiber_trees();
  else if (suite == "subcones")
    checks = fix::check_subcone_conclusions();
  else
    fail(Errc::invalid_configuration,
         "unknown suite '" + suite +
             "' (all, dualpairs, tables, bitduality, fibertrees, subcones)");

  json j;
  j["suite"] = suite;

  // Every preset family must be exercised by the dual-pair fixtures.
  if (suite == "all" || suite == "dualpairs") {
    std::set<std::string> covered;
    for (const auto& c : checks)
      if (c.name.rfind("dual:", 0) == 0) {
        std::string name = c.name.substr(5);
        covered.insert(name.substr(0, name.find(':')));
      }
    std::string missing;
    for (const auto& entry : lat::preset_catalog()) {
      std::string family = entry.substr(0, entry.find_first_of(":<"));
      if (!covered.count(family)) missing += family + " ";
    }
    checks.push_back({"coverage:presets", missing.empty(),
                      missing.empty() ? "" : "families not exercised: " + missing});

    json rays;
    for (const auto& c : checks)
      if (c.name.rfind("dual:", 0) == 0) {
        lat::Preset p = lat::parse_preset(c.name.substr(5));
        rays[p.name] = io::rays_json(cone::cone_from_exprs(p, p.nef));
      }
    j["nef_rays"] = rays;
  }

  size_t failures = fix::count_failures(checks);
  j["checks"] = io::checks_json(checks);
  j["total"] = checks.size();
  j["failures"] = failures;
  emit(opts, io::dump(j));
  if (failures) {
    std::cerr << failures << " of " << checks.size() << " checks failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("RAPPROX_THREADS")) {
    int n = std::atoi(threads);
    if (n > 0) omp_set_num_threads(n);
  }

  CLI::App app{"Exact-arithmetic toolkit for rational approximation constants on surfaces"};
  app.require_subcommand(1);

  std::string preset, scenario, divisor, point, mode = "summary", space = "p1", suite = "all";
  std::string metric = "projective";
  long max_height = 0;
  bool count_only = false;
  OutputOptions lattice_opts, cones_opts, predict_opts, enum_opts, alpha_opts, verify_opts;

  CLI::App* lattice = app.add_subcommand("lattice", "Lattice or model report");
  lattice->add_option("--preset", preset, "Preset name, e.g. case3:2 or blowupP2:4");
  lattice->add_option("--scenario", scenario, "Model scenario JSON file");
  lattice->add_option("--point", point, "Evaluation point, colon-joined");
  add_output_options(lattice, lattice_opts, false);

  CLI::App* cones = app.add_subcommand("cones", "Effective and nef cone report");
  cones->add_option("mode", mode, "summary or dual")
      ->check(CLI::IsMember({"summary", "dual"}));
  cones->add_option("--preset", preset, "Preset name");
  cones->add_option("--divisor", divisor, "Class expression to test for nef/ample");
  add_output_options(cones, cones_opts, false);

  CLI::App* predict = app.add_subcommand("predict", "Approximation-constant prediction");
  predict->add_option("--preset", preset, "Preset supplying the lattice and class names");
  predict->add_option("--scenario", scenario, "Predictor scenario JSON file")->required();
  predict->add_option("--divisor", divisor, "Divisor class expression (overrides the scenario)");
  add_output_options(predict, predict_opts, false);

  CLI::App* enumerate = app.add_subcommand("enumerate", "Rational points of bounded height");
  enumerate->add_option("--space", space, "p1 or p2")->check(CLI::IsMember({"p1", "p2"}));
  enumerate->add_option("--max-height", max_height, "Height bound")->required();
  enumerate->add_flag("--count", count_only, "Report the exact count only");
  add_output_options(enumerate, enum_opts, true);

  CLI::App* alpha = app.add_subcommand("alpha", "Empirical approximation-constant estimate");
  alpha->add_option("--preset,--curve", preset, "line, cusp, twisted, p1, or p2");
  alpha->add_option("--scenario", scenario, "Model scenario JSON file");
  alpha->add_option("--point", point, "Target point for the p1/p2 presets");
  alpha->add_option("--max-height", max_height, "Height bound (parameter height on curves)");
  alpha->add_option("--metric", metric, "projective or affine")
      ->check(CLI::IsMember({"projective", "affine"}));
  add_output_options(alpha, alpha_opts, true);

  CLI::App* verify = app.add_subcommand("verify", "Run the fixture suites");
  verify->add_option("--scenario,--suite", suite,
                     "all, dualpairs, tables, bitduality, fibertrees, subcones");
  add_output_options(verify, verify_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (lattice->parsed()) return run_lattice(preset, scenario, point, lattice_opts);
    if (cones->parsed()) return run_cones(mode, preset, divisor, cones_opts);
    if (predict->parsed()) return run_predict(preset, scenario, divisor, predict_opts);
    if (enumerate->parsed()) return run_enumerate(space, max_height, count_only, enum_opts);
    if (alpha->parsed())
      return run_alpha(preset, scenario, point, max_height, metric, alpha_opts);
    if (verify->parsed()) return run_verify(suite, verify_opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
