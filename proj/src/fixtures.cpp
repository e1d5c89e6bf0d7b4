#include "rapprox/fixtures.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>

#include "rapprox/cones.hpp"
#include "rapprox/nslattice.hpp"
#include "rapprox/predictor.hpp"

namespace rapprox {
namespace fix {
namespace {

using cone::Cone;
using lat::DivisorClass;
using lat::Preset;

void report(std::vector<CheckResult>& out, const std::string& name, bool pass,
            const std::string& detail = "") {
  out.push_back({name, pass, pass ? std::string() : detail});
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) {
    if (!s.empty()) s += ", ";
    s += x;
  }
  return s;
}

pred::PointContext context_for(const Preset& p,
                               const std::vector<std::pair<std::string, std::string>>& catalog) {
  pred::PointContext ctx;
  ctx.lattice = p.lattice;
  for (const auto& [label, expr] : catalog)
    ctx.candidates.push_back({label, lat::parse_class_expr(p, expr), 1});
  for (const auto& e : p.effective) ctx.effective_gens.push_back(lat::parse_class_expr(p, e));
  return ctx;
}

// ---------------------------------------------------------------------------
// Subcone conclusion fixtures.  Each claim names the curve of minimal degree
// on a displayed cone; `exact` additionally asserts that the display is the
// entire minimal-degree cell inside the parent cone.

struct ConeClaim {
  std::vector<std::string> gens;
  std::string winner;
  bool exact = false;
};

struct SubconeFixture {
  std::string name;
  std::string preset;
  std::vector<std::pair<std::string, std::string>> catalog;  // label -> class expr
  std::vector<std::string> parent;                           // empty: the preset nef list
  std::vector<ConeClaim> claims;
  bool cover = false;  // the claim cones absorb every ray of every cell
};

void run_subcone_fixture(const SubconeFixture& f, std::vector<CheckResult>& out) {
  Preset p = lat::parse_preset(f.preset);
  pred::PointContext ctx = context_for(p, f.catalog);
  Cone parent = cone::cone_from_exprs(p, f.parent.empty() ? p.nef : f.parent);

  bool need_cells = f.cover;
  for (const auto& c : f.claims) need_cells = need_cells || c.exact;
  std::vector<pred::CellPrediction> cells;
  if (need_cells) cells = pred::predict_over_cone(ctx, parent);

  std::vector<Cone> claim_cones;
  for (const auto& claim : f.claims) {
    std::vector<DivisorClass> gens;
    gens.reserve(claim.gens.size());
    for (const auto& g : claim.gens) gens.push_back(lat::parse_class_expr(p, g));
    claim_cones.emplace_back(p.lattice, gens);
    const Cone& display = claim_cones.back();
    std::string base = f.name + "/" + claim.winner;

    const DivisorClass* winner = nullptr;
    for (const auto& cand : ctx.candidates)
      if (cand.label == claim.winner) winner = &cand.cls;
    if (!winner) {
      report(out, base, false, "winner is not in the catalog");
      continue;
    }

    // Minimality against the whole catalog at every displayed generator;
    // degrees are linear, so this bounds the winner on the whole cone.
    bool minimal = true;
    std::ostringstream mwhy;
    for (size_t gi = 0; gi < gens.size() && minimal; ++gi) {
      Rat wdeg = lat::intersect(gens[gi], *winner);
      for (const auto& cand : ctx.candidates) {
        Rat cdeg = lat::intersect(gens[gi], cand.cls);
        if (wdeg > cdeg) {
          minimal = false;
          mwhy << "degree " << wdeg.get_str() << " beats " << cand.label << "'s "
               << cdeg.get_str() << " at " << claim.gens[gi];
          break;
        }
      }
    }
    report(out, base + ":minimal", minimal, mwhy.str());

    // Strict win at the generator sum, an interior point of the display.
    DivisorClass sum = gens[0];
    for (size_t gi = 1; gi < gens.size(); ++gi) sum = sum + gens[gi];
    pred::Prediction pr = pred::predict_alpha(ctx, sum);
    bool interior = pr.winners == std::vector<std::string>{claim.winner};
    report(out, base + ":interior", interior, "interior winners: " + join(pr.winners));

    if (!claim.exact) continue;
    const pred::CellPrediction* cell = nullptr;
    for (const auto& c : cells)
      if (c.owner == claim.winner) cell = &c;
    bool eq = cell != nullptr;
    std::ostringstream ewhy;
    if (!cell) {
      ewhy << "no cell owned by " << claim.winner;
    } else {
      for (const auto& ray : cell->cell.generators())
        if (!cone::contains(display, ray)) {
          eq = false;
          ewhy << "cell ray " << ray.str() << " outside the display; ";
        }
      for (size_t gi = 0; gi < gens.size(); ++gi)
        if (!cone::contains(cell->cell, gens[gi])) {
          eq = false;
          ewhy << "generator " << claim.gens[gi] << " outside the cell; ";
        }
    }
    report(out, base + ":cell", eq, ewhy.str());
  }

  if (f.cover) {
    bool covered = true;
    std::ostringstream cwhy;
    for (const auto& c : cells)
      for (const auto& ray : c.cell.generators()) {
        bool in = false;
        for (const auto& cc : claim_cones) in = in || cone::contains(cc, ray);
        if (!in) {
          covered = false;
          cwhy << "cell(" << c.owner << ") ray " << ray.str() << " uncovered; ";
        }
      }
    report(out, f.name + ":coverage", covered, cwhy.str());
  }
}

// Degree window of one curve against a list of cone generators; the quick
// argument that a curve wins outright everywhere.
struct RangeCheck {
  std::string name;
  std::string preset;
  std::string curve;
  std::vector<std::string> cone;  // empty: the preset nef list
  long lo = 0;
  long hi = 1;
};

void run_range_check(const RangeCheck& r, std::vector<CheckResult>& out) {
  Preset p = lat::parse_preset(r.preset);
  DivisorClass c = lat::parse_class_expr(p, r.curve);
  const std::vector<std::string>& gens = r.cone.empty() ? p.nef : r.cone;
  bool ok = true;
  std::ostringstream why;
  for (const auto& g : gens) {
    Rat d = lat::intersect(lat::parse_class_expr(p, g), c);
    if (d < r.lo || d > r.hi) {
      ok = false;
      why << "degree " << d.get_str() << " at " << g << " outside [" << r.lo << ", " << r.hi
          << "]";
      break;
    }
  }
  report(out, r.name + ":range", ok, why.str());
}

// ---------------------------------------------------------------------------
// Fixture tables, one family per function.

void add_two_point(std::vector<SubconeFixture>& out) {
  // General position: the two lines through the point and one center split
  // the nef cone along L + (common ray 2L-E1-E2).
  out.push_back({"blowupP2:2/general",
                 "blowupP2:2",
                 {{"L1", "L1"}, {"L2", "L2"}},
                 {},
                 {{{"L", "L1", "L1+L2"}, "L1", true}, {{"L", "L2", "L1+L2"}, "L2", true}},
                 false});
  // On the meeting point of the center line with one exceptional curve; the
  // displayed cones are proper subcones of the true cells.
  for (int i = 1; i <= 2; ++i) {
    std::string e = "E" + std::to_string(i);
    out.push_back({"blowupP2:2/S-" + e,
                   "blowupP2:2",
                   {{"S", "S"}, {e, e}},
                   {},
                   {{{"L", "2L-" + e, "3L-E1-E2"}, e, false},
                    {{"L-" + e, "2L-" + e, "2L-E1-E2", "3L-E1-E2"}, "S", false}},
                   false});
  }
}

void add_two_fibre(std::vector<SubconeFixture>& out) {
  // Two fibrations, general position: each fibre through the point owns one
  // of the two cells meeting along D1, D1', and the cut ray F+D0.
  out.push_back({"case1:2/general",
                 "case1:2",
                 {{"F", "F"}, {"D0", "D0"}},
                 {},
                 {{{"F", "D2", "D1", "D1'", "F+D0"}, "F", true},
                  {{"D0", "F+D0", "D1", "D1'"}, "D0", true}},
                 true});
}

void add_three_point(std::vector<SubconeFixture>& out) {
  const std::string pre = "blowupP2:3";
  const std::vector<std::string> a1 = {"L", "L1", "L1+L2", "L1+L3", "F"};
  // General position: the three fibre cells permute the a1 pattern.
  out.push_back({pre + "/general",
                 pre,
                 {{"L1", "L1"}, {"L2", "L2"}, {"L3", "L3"}},
                 {},
                 {{a1, "L1", true},
                  {{"L", "L2", "L1+L2", "L2+L3", "F"}, "L2", true},
                  {{"L", "L3", "L1+L3", "L2+L3", "F"}, "L3", true}},
                 false});
  // Every special position is analyzed inside the first fibre cell a1.
  out.push_back({pre + "/E1",
                 pre,
                 {{"E1", "E1"}, {"L1", "L1"}},
                 a1,
                 {{{"L", "L+L1", "L1+L2", "L1+L3", "F"}, "E1", true},
                  {{"L+L1", "L1", "L1+L2", "L1+L3", "F"}, "L1", true}},
                 false});
  out.push_back({pre + "/E2", pre, {{"E2", "E2"}, {"L2", "L2"}}, a1, {{a1, "E2", false}}, false});
  out.push_back({pre + "/E3", pre, {{"E3", "E3"}, {"L3", "L3"}}, a1, {{a1, "E3", false}}, false});
  out.push_back(
      {pre + "/S12", pre, {{"L12", "L12"}, {"L3", "L3"}}, a1, {{a1, "L12", false}}, false});
  out.push_back(
      {pre + "/S13", pre, {{"L13", "L13"}, {"L2", "L2"}}, a1, {{a1, "L13", false}}, false});
  out.push_back({pre + "/S23",
                 pre,
                 {{"L23", "L23"}, {"L1", "L1"}},
                 a1,
                 {{{"F", "L", "L1+L2", "L1+L3", "F+L1"}, "L23", true},
                  {{"L1", "L", "L1+L2", "L1+L3", "F+L1"}, "L1", true}},
                 false});
  out.push_back({pre + "/E1-S12",
                 pre,
                 {{"E1", "E1"}, {"L12", "L12"}},
                 a1,
                 {{{"L+L1", "L+F", "L+L1+L2", "L1+L3", "L1", "L1+L2", "F"}, "L12", true},
                  {{"L", "L+L1", "L+L1+L2", "L1+L3", "L+F"}, "E1", true}},
                 false});
  out.push_back({pre + "/E1-S13",
                 pre,
                 {{"E1", "E1"}, {"L13", "L13"}},
                 a1,
                 {{{"L+L1", "L+F", "L+L1+L3", "L1+L2", "L1", "L1+L3", "F"}, "L13", true},
                  {{"L", "L+L1", "L+L1+L3", "L1+L2", "L+F"}, "E1", true}},
                 false});
  out.push_back({pre + "/E2-S12",
                 pre,
                 {{"E2", "E2"}, {"L12", "L12"}},
                 a1,
                 {{{"L", "L1", "L1+L3", "L+L1+L2", "L+F", "F+L1+L3"}, "E2", true},
                  {{"F", "L1", "L1+L2", "L+F", "L+L1+L2", "F+L1+L3"}, "L12", true}},
                 false});
  out.push_back({pre + "/E3-S13",
                 pre,
                 {{"E3", "E3"}, {"L13", "L13"}},
                 a1,
                 {{{"L", "L1", "L1+L2", "L+L1+L3", "L+F", "F+L1+L2"}, "E3", true},
                  {{"F", "L1", "L1+L3", "L+F", "L+L1+L3", "F+L1+L2"}, "L13", true}},
                 false});
  out.push_back({pre + "/E2-S23",
                 pre,
                 {{"E2", "E2"}, {"L23", "L23"}},
                 a1,
                 {{{"L", "L1", "L1+L3", "L1+L2", "F+L", "F+L1", "F+L1+L3"}, "E2", true},
                  {{"F", "F+L", "L1+L2", "F+L1", "F+L1+L3"}, "L23", true}},
                 false});
  out.push_back({pre + "/E3-S23",
                 pre,
                 {{"E3", "E3"}, {"L23", "L23"}},
                 a1,
                 {{{"L", "L1", "L1+L2", "L1+L3", "F+L", "F+L1", "F+L1+L2"}, "E3", true},
                  {{"F", "F+L", "L1+L3", "F+L1", "F+L1+L2"}, "L23", true}},
                 false});
}

void add_case2(std::vector<SubconeFixture>& out, std::vector<RangeCheck>& ranges) {
  for (long n : {2L, 3L}) {
    const std::string pre = "case2:" + std::to_string(n);
    out.push_back(
        {pre + "/general", pre, {{"F", "F"}}, {}, {{{"F", "D1", "D2", "D3"}, "F", true}}, false});
    ranges.push_back({pre + "/general", pre, "F", {}, 0, 1});
    out.push_back({pre + "/S",
                   pre,
                   {{"S", "S"}, {"F", "F"}},
                   {},
                   {{{"D1", "D2", "D3", "F+D1", "F+D2", "F+D3"}, "S", true},
                    {{"F", "F+D1", "F+D2", "F+D3"}, "F", true}},
                   false});
    for (const std::string c : {"E1", "E2", "F1"}) {
      out.push_back({pre + "/" + c,
                     pre,
                     {{c, c}},
                     {},
                     {{{"F", "D1", "D2", "D3"}, c, true}},
                     false});
      ranges.push_back({pre + "/" + c, pre, c, {}, 0, 1});
    }
    out.push_back({pre + "/S-F1",
                   pre,
                   {{"S", "S"}, {"F1", "F1"}},
                   {},
                   {{{"F", "F+D1", "D2", "D3"}, "F1", true},
                    {{"D1", "F+D1", "D2", "D3"}, "S", true}},
                   false});
    out.push_back({pre + "/F1-E1",
                   pre,
                   {{"F1", "F1"}, {"E1", "E1"}},
                   {},
                   {{{"F", "D1+D2", "D2", "D3"}, "F1", true},
                    {{"F", "D1", "D1+D2", "D3"}, "E1", true}},
                   false});
    out.push_back({pre + "/F1-E2",
                   pre,
                   {{"F1", "F1"}, {"E2", "E2"}},
                   {},
                   {{{"F", "D1+D3", "D2", "D3"}, "F1", true},
                    {{"F", "D1", "D1+D3", "D2"}, "E2", true}},
                   false});
  }

  // n = 1: the sections of the two extra fibrations compete, and all special
  // positions are analyzed inside the general-position cell a.
  const std::string pre = "case2:1";
  const std::vector<std::string> a = {"F", "D1", "F+D2", "F+D3", "F+D2+D3"};
  out.push_back({pre + "/general",
                 pre,
                 {{"F", "F"}, {"D2", "D2"}, {"D3", "D3"}},
                 {},
                 {{a, "F", true}},
                 false});
  out.push_back({pre + "/S",
                 pre,
                 {{"S", "S"}, {"F", "F"}},
                 a,
                 {{{"D1", "F+D1", "F+D2", "F+D3", "F+D2+D3"}, "S", true},
                  {{"F", "F+D1", "F+D2", "F+D3"}, "F", true}},
                 false});
  out.push_back({pre + "/E1", pre, {{"E1", "E1"}, {"D2", "D2"}}, a, {{a, "E1", false}}, false});
  out.push_back({pre + "/E2", pre, {{"E2", "E2"}, {"D3", "D3"}}, a, {{a, "E2", false}}, false});
  out.push_back({pre + "/F1", pre, {{"F1", "F1"}}, a, {{a, "F1", true}}, false});
  ranges.push_back({pre + "/F1", pre, "F1", a, 0, 1});
  out.push_back({pre + "/F1-E1",
                 pre,
                 {{"F1", "F1"}, {"E1", "E1"}},
                 a,
                 {{{"F", "D1", "F+D3", "F+D1+D2", "F+D1+D2+D3"}, "E1", true},
                  {{"F", "F+D2", "F+D3", "F+D2+D3", "F+D1+D2", "F+D1+D2+D3"}, "F1", true}},
                 false});
  out.push_back({pre + "/F1-E2",
                 pre,
                 {{"F1", "F1"}, {"E2", "E2"}},
                 a,
                 {{{"F", "D1", "F+D2", "F+D1+D3", "F+D1+D2+D3"}, "E2", true},
                  {{"F", "F+D2", "F+D3", "F+D2+D3", "F+D1+D3", "F+D1+D2+D3"}, "F1", true}},
                 false});
}

void add_case3(std::vector<SubconeFixture>& out, std::vector<RangeCheck>& ranges) {
  {
    const std::string pre = "case3:3";
    out.push_back(
        {pre + "/general", pre, {{"F", "F"}}, {}, {{{"F", "D1", "D2", "D3"}, "F", true}}, false});
    ranges.push_back({pre + "/general", pre, "F", {}, 0, 1});
    out.push_back({pre + "/S",
                   pre,
                   {{"S", "S"}, {"F", "F"}},
                   {},
                   {{{"F", "F+D1", "F+D2", "F+D3"}, "F", true},
                    {{"D1", "F+D1", "D2", "F+D2", "D3", "F+D3"}, "S", true}},
                   false});
    for (const std::string c : {"E1", "E2", "E3"}) {
      out.push_back(
          {pre + "/" + c, pre, {{c, c}}, {}, {{{"F", "D1", "D2", "D3"}, c, true}}, false});
      ranges.push_back({pre + "/" + c, pre, c, {}, 0, 1});
    }
    out.push_back({pre + "/S-E1",
                   pre,
                   {{"S", "S"}, {"E1", "E1"}},
                   {},
                   {{{"F", "D1", "D2", "F+D3"}, "E1", true},
                    {{"D1", "D2", "D3", "F+D3"}, "S", true}},
                   false});
    out.push_back({pre + "/E1-E2",
                   pre,
                   {{"E1", "E1"}, {"E2", "E2"}},
                   {},
                   {{{"F", "D1", "D3", "D2+D3"}, "E2", true},
                    {{"F", "D1", "D2", "D2+D3"}, "E1", true}},
                   false});
    out.push_back({pre + "/E2-E3",
                   pre,
                   {{"E2", "E2"}, {"E3", "E3"}},
                   {},
                   {{{"F", "D2", "D3", "D1+D2"}, "E3", true},
                    {{"F", "D1", "D3", "D1+D2"}, "E2", true}},
                   false});
  }
  {
    // n = 2: D1 is a second fibration, so its fibre joins the catalog.
    const std::string pre = "case3:2";
    const std::vector<std::string> a = {"F", "F+D1", "D2", "D3", "D1+D3"};
    out.push_back({pre + "/general",
                   pre,
                   {{"F", "F"}, {"D1", "D1"}},
                   {},
                   {{a, "F", true}, {{"D1", "F+D1", "D2", "D1+D3"}, "D1", true}},
                   true});
    out.push_back({pre + "/S",
                   pre,
                   {{"S", "S"}, {"F", "F"}},
                   {},
                   {{{"D1", "F+D1", "D2", "D1+D3"}, "S", false},
                    {{"D1+D3", "D2", "D3", "F+D1", "F+D2", "F+D3"}, "S", false},
                    {{"F", "F+D1", "F+D2", "F+D3"}, "F", true}},
                   true});
    for (const std::string c : {"E1", "E2"}) {
      out.push_back(
          {pre + "/" + c, pre, {{c, c}}, {}, {{{"F", "D1", "D2", "D3"}, c, true}}, false});
      ranges.push_back({pre + "/" + c, pre, c, {}, 0, 1});
    }
    out.push_back({pre + "/E3",
                   pre,
                   {{"E3", "E3"}, {"D1", "D1"}},
                   {},
                   {{a, "E3", false},
                    {{"D2", "D1+D3", "F+D1", "D1+D2", "2D1+D3"}, "E3", false},
                    {{"D1", "F+D1", "D1+D2", "2D1+D3"}, "D1", true}},
                   true});
    ranges.push_back({pre + "/E3", pre, "E3", a, 0, 1});
    out.push_back({pre + "/S-E1",
                   pre,
                   {{"S", "S"}, {"E1", "E1"}},
                   {},
                   {{{"F+D3", "D1", "D2", "D3"}, "S", true},
                    {{"F", "D1", "D2", "F+D3"}, "E1", true}},
                   false});
    out.push_back({pre + "/E1-E2",
                   pre,
                   {{"E1", "E1"}, {"E2", "E2"}},
                   {},
                   {{{"F", "D1", "D2", "D2+D3"}, "E1", true},
                    {{"F", "D1", "D3", "D2+D3"}, "E2", true}},
                   false});
    out.push_back({pre + "/E2-E3",
                   pre,
                   {{"E2", "E2"}, {"E3", "E3"}},
                   {},
                   {{{"F", "D1", "D3", "D1+D2"}, "E2", true},
                    {{"F", "D2", "D3", "D1+D2"}, "E3", true}},
                   false});
  }
}

void add_case3_multiple(std::vector<SubconeFixture>& out, std::vector<RangeCheck>& ranges) {
  for (long n : {2L, 3L}) {
    const std::string pre = "case3:" + std::to_string(n) + ":multiple";
    out.push_back(
        {pre + "/general", pre, {{"F", "F"}}, {}, {{{"F", "D1", "D2", "D3"}, "F", true}}, false});
    // The fibre meets D2 twice; the effective extension handles that ray.
    ranges.push_back({pre + "/general", pre, "F", {}, 0, 2});
    out.push_back({pre + "/S",
                   pre,
                   {{"S", "S"}, {"F", "F"}},
                   {},
                   {{{"D1", "D2", "D3", "F+D1", "F+D3", "2F+D2"}, "S", true},
                    {{"F", "F+D1", "F+D3", "2F+D2"}, "F", true}},
                   false});
    for (const std::string c : {"E1", "E2", "E3"}) {
      out.push_back(
          {pre + "/" + c, pre, {{c, c}}, {}, {{{"F", "D1", "D2", "D3"}, c, true}}, false});
      ranges.push_back({pre + "/" + c, pre, c, {}, 0, 1});
    }
    out.push_back({pre + "/S-E1",
                   pre,
                   {{"S", "S"}, {"E1", "E1"}},
                   {},
                   {{{"F+D1", "D2", "D3", "F"}, "E1", true},
                    {{"D1", "D2", "D3", "F+D1"}, "S", true}},
                   false});
    out.push_back({pre + "/E1-E2",
                   pre,
                   {{"E1", "E1"}, {"E2", "E2"}},
                   {},
                   {{{"F", "D1", "D3", "D1+D2"}, "E2", true},
                    {{"F", "D2", "D3", "D1+D2"}, "E1", true}},
                   false});
    out.push_back({pre + "/E2-E3",
                   pre,
                   {{"E2", "E2"}, {"E3", "E3"}},
                   {},
                   {{{"F", "D1", "D2", "D2+D3"}, "E3", true},
                    {{"F", "D1", "D3", "D2+D3"}, "E2", true}},
                   false});
  }
}

void add_four_point(std::vector<SubconeFixture>& out) {
  const std::string pre = "blowupP2:4";
  auto li = [](int i) { return "L" + std::to_string(i); };
  auto di = [](int i) { return "D" + std::to_string(i); };
  const std::vector<std::string> b = {"D",    "D+L",  "D1",   "D2",   "D3",
                                      "D4",   "D+L1", "D+L2", "D+L3", "D+L4"};
  auto bi = [&](int i) {
    std::vector<std::string> g = {"L", "D+L", li(i)};
    for (int j = 1; j <= 4; ++j)
      if (j != i) g.push_back(li(i) + "+" + li(j));
    g.push_back("D+" + li(i));
    for (int j = 1; j <= 4; ++j)
      if (j != i) g.push_back(di(j));
    return g;
  };
  {
    SubconeFixture f{pre + "/general",
                     pre,
                     {{"L1", "L1"}, {"L2", "L2"}, {"L3", "L3"}, {"L4", "L4"}, {"D", "D"}},
                     {},
                     {},
                     false};
    f.claims.push_back({b, "D", true});
    for (int i = 1; i <= 4; ++i) f.claims.push_back({bi(i), li(i), true});
    out.push_back(std::move(f));
  }
  const std::vector<std::pair<std::string, std::string>> on_e1 = {
      {"E1", "E1"}, {"L1", "L1"}, {"D", "D"}};
  // Away from the first line cell the exceptional curve wins outright.
  out.push_back({pre + "/E1-far",
                 pre,
                 on_e1,
                 {},
                 {{bi(2), "E1", false}, {bi(3), "E1", false}, {bi(4), "E1", false}},
                 false});
  out.push_back({pre + "/E1-line",
                 pre,
                 on_e1,
                 bi(1),
                 {{{"L+L1", "L1", "L1+L2", "L1+L3", "L1+L4", "D2", "D3", "D4", "D+L1"}, "L1",
                   true},
                  {{"L", "L+L1", "L1+L2", "L1+L3", "L1+L4", "D2", "D3", "D4", "D+L"}, "E1",
                   true}},
                 true});
  out.push_back({pre + "/E1-conic",
                 pre,
                 on_e1,
                 b,
                 {{{"D1", "D2", "D3", "D4", "L+D", "L2+D", "L3+D", "L4+D", "D1+D"}, "E1", true},
                  {{"D", "D2", "D3", "D4", "L1+D", "L2+D", "L3+D", "L4+D", "D1+D"}, "D", true}},
                 true});
  out.push_back({pre + "/E1-S12",
                 pre,
                 {{"E1", "E1"}, {"L12", "L12"}},
                 {},
                 {{{"L", "L+L1", "L2", "L3", "L4", "L1+L3", "L1+L4", "D1", "D2", "D3+L4",
                    "D4+L3", "D+L3", "D+L4", "D+D1"},
                   "E1", true},
                  {{"L1", "L2", "L+L1", "L1+L3", "L1+L4", "D2", "D3", "D4", "D", "D3+L4",
                    "D4+L3", "D+L3", "D+L4", "D+D1"},
                   "L12", true}},
                 false});
}

void add_five_point(std::vector<SubconeFixture>& out) {
  const std::string pre = "blowupP2:5";
  auto li = [](int i) { return "L" + std::to_string(i); };
  auto ci = [](int i) { return "C" + std::to_string(i); };
  auto bi = [](int i) { return "B" + std::to_string(i); };
  auto lij = [](int i, int j) {
    if (i > j) std::swap(i, j);
    return "L" + std::to_string(i) + std::to_string(j);
  };
  auto others = [](int i) {
    std::vector<int> v;
    for (int j = 1; j <= 5; ++j)
      if (j != i) v.push_back(j);
    return v;
  };
  auto cellM = [&](int i) {
    std::vector<std::string> g = {"L", li(i)};
    for (int j : others(i)) g.push_back(li(i) + "+" + li(j));
    for (int j : others(i)) g.push_back(li(i) + "+" + ci(j));
    for (int j : others(i))
      for (int k : others(i))
        if (j < k) g.push_back(lij(j, k));
    g.push_back(bi(i));
    for (int j : others(i)) g.push_back("L+" + ci(j));
    g.push_back(li(i) + "+" + ci(i));
    for (int j : others(i)) g.push_back(bi(i) + "+" + li(j));
    return g;
  };
  auto cellN = [&](int i) {
    std::vector<std::string> g = {ci(i)};
    for (int j : others(i)) g.push_back(ci(i) + "+" + li(j));
    for (int j : others(i)) g.push_back(ci(i) + "+" + lij(i, j));
    for (int j : others(i)) g.push_back(lij(i, j));
    for (int j : others(i)) g.push_back(bi(j));
    g.push_back("L+" + ci(i));
    g.push_back(li(i) + "+" + ci(i));
    for (int j : others(i))
      for (int k : others(i))
        if (j < k) g.push_back(ci(i) + "+" + lij(j, k));
    g.push_back(i == 2 ? "B1+C1" : "B2+C2");
    // Ridges where a second conic ties; the published list omits these.
    for (int j : others(i)) g.push_back(ci(i) + "+" + ci(j));
    return g;
  };
  auto cellR = [&](int i) {
    std::vector<std::string> g = {"L", li(i)};
    for (int j : others(i)) g.push_back(li(i) + "+" + li(j));
    for (int j : others(i))
      for (int k : others(i))
        if (j < k) g.push_back(lij(j, k));
    for (int j : others(i)) g.push_back(li(i) + "+" + ci(j));
    g.push_back(li(i) + "+" + bi(i));
    for (int j : others(i)) g.push_back("L+" + ci(j));
    g.push_back("L+" + li(i) + "+" + ci(i));
    return g;
  };
  auto cellRp = [&](int i) {
    std::vector<std::string> g;
    for (int j : others(i))
      for (int k : others(i))
        if (j < k) g.push_back(lij(j, k));
    g.push_back(li(i) + "+" + ci(i));
    for (int j : others(i)) g.push_back(li(i) + "+" + ci(j));
    g.push_back(bi(i));
    for (int j : others(i)) g.push_back(bi(i) + "+" + li(j));
    g.push_back(bi(i) + "+" + li(i));
    g.push_back("L+" + li(i) + "+" + ci(i));
    for (int j : others(i)) g.push_back("L+" + ci(j));
    return g;
  };

  {
    SubconeFixture f{pre + "/general", pre, {}, {}, {}, false};
    for (int i = 1; i <= 5; ++i) f.catalog.push_back({li(i), li(i)});
    for (int i = 1; i <= 5; ++i) f.catalog.push_back({ci(i), ci(i)});
    for (int i = 1; i <= 5; ++i) f.claims.push_back({cellM(i), li(i), true});
    for (int i = 1; i <= 5; ++i) f.claims.push_back({cellN(i), ci(i), true});
    out.push_back(std::move(f));
  }
  std::vector<std::pair<std::string, std::string>> on_e = {{"E", "E"}};
  for (int i = 1; i <= 5; ++i) on_e.push_back({li(i), li(i)});
  for (int i : {1, 2}) {
    out.push_back({pre + "/E-line" + std::to_string(i),
                   pre,
                   on_e,
                   cellM(i),
                   {{cellR(i), li(i), true}, {cellRp(i), "E", true}},
                   true});
  }
  {
    SubconeFixture f{pre + "/E-conics", pre, on_e, {}, {}, false};
    for (int i = 1; i <= 5; ++i) f.claims.push_back({cellN(i), "E", false});
    out.push_back(std::move(f));
  }
  {
    // On the conic and one exceptional curve; the displayed generator lists
    // are not complete cell descriptions, so only the winner checks run.
    std::vector<std::string> j1 = {"L+L1", "L1"};
    for (int j = 2; j <= 5; ++j) j1.push_back("L1+" + li(j));
    for (int j = 2; j <= 5; ++j)
      for (int k = j + 1; k <= 5; ++k) j1.push_back(lij(j, k));
    for (int j = 2; j <= 5; ++j) j1.push_back("L1+" + ci(j));
    j1.push_back("L1+B1");

    std::vector<std::string> j2 = {"L"};
    for (int j = 2; j <= 5; ++j) j2.push_back(li(j));
    j2.push_back("L+L1");
    j2.push_back("C1");
    for (int j = 2; j <= 5; ++j) j2.push_back("L1+" + li(j));
    for (int j = 2; j <= 5; ++j) j2.push_back(lij(1, j));
    for (int j = 2; j <= 5; ++j)
      for (int k = j + 1; k <= 5; ++k) j2.push_back(lij(j, k));
    for (int j = 2; j <= 5; ++j)
      for (int k = 2; k <= 5; ++k)
        if (j != k) j2.push_back(li(j) + "+" + ci(k));
    for (int j = 2; j <= 5; ++j) j2.push_back(lij(1, j) + "+" + ci(j));
    for (int j = 2; j <= 5; ++j) j2.push_back(li(j) + "+" + bi(j));

    std::vector<std::string> j3 = {"L1+B1", "C1"};
    for (int j = 2; j <= 5; ++j)
      for (int k = j + 1; k <= 5; ++k) j3.push_back(lij(j, k));
    for (int j = 2; j <= 5; ++j) j3.push_back("L1+" + ci(j));
    for (int j = 2; j <= 5; ++j)
      for (int k = 2; k <= 5; ++k)
        if (j != k) j3.push_back(li(j) + "+" + ci(k));
    for (int j = 2; j <= 5; ++j) j3.push_back(bi(j));
    for (int j = 2; j <= 5; ++j) j3.push_back(lij(1, j) + "+" + ci(j));
    for (int j = 2; j <= 5; ++j) j3.push_back(li(j) + "+" + bi(j));

    out.push_back({pre + "/E-E1",
                   pre,
                   {{"E", "E"}, {"E1", "E1"}, {"L1", "L1"}},
                   {},
                   {{j1, "L1", false}, {j2, "E1", false}, {j3, "E", false}},
                   false});
  }
}

// Bespoke blocks that do not fit the claim pattern.

void check_two_fibre_special(std::vector<CheckResult>& out) {
  // All five negative curves compete; the five cells meet at the central
  // all-ties ray and every cell ray stays inside the allowance set.
  Preset p = lat::parse_preset("case1:2");
  pred::PointContext ctx = context_for(
      p, {{"S", "S"}, {"E1", "E1"}, {"E2", "E2"}, {"F1", "F1"}, {"F2", "F2"}});
  Cone nef = cone::cone_from_exprs(p, p.nef);
  auto cells = pred::predict_over_cone(ctx, nef);

  std::set<std::string> owners;
  for (const auto& c : cells) owners.insert(c.owner);
  bool five = cells.size() == 5 && owners == std::set<std::string>{"E1", "E2", "F1", "F2", "S"};
  std::ostringstream owho;
  for (const auto& o : owners) owho << o << " ";
  report(out, "case1:2/special:cells", five,
         "got " + std::to_string(cells.size()) + " cells owned by " + owho.str());

  const std::vector<std::string> allow = {"F",    "D0",   "D1",   "D1'",     "D2",
                                          "F+D0", "F+D1", "F+D1'", "F+D2+D0"};
  std::set<std::vector<Int>> allowed;
  for (const auto& t : allow) allowed.insert(primitive_ray(lat::parse_class_expr(p, t).coeffs()));
  bool rays_ok = true;
  std::ostringstream rwhy;
  for (const auto& c : cells)
    for (const auto& ray : c.cell.generators())
      if (!allowed.count(primitive_ray(ray.coeffs()))) {
        rays_ok = false;
        rwhy << "cell(" << c.owner << ") ray " << ray.str() << " not allowed; ";
      }
  report(out, "case1:2/special:rays", rays_ok, rwhy.str());

  bool degs_ok = true;
  std::ostringstream dwhy;
  for (const auto& t : allow) {
    DivisorClass d = lat::parse_class_expr(p, t);
    for (const auto& cand : ctx.candidates) {
      Rat deg = lat::intersect(d, cand.cls);
      if (deg < 0 || deg > 1) {
        degs_ok = false;
        dwhy << cand.label << " has degree " << deg.get_str() << " at " << t << "; ";
      }
    }
  }
  report(out, "case1:2/special:degrees", degs_ok, dwhy.str());
}

void check_section_fibre_split(std::vector<CheckResult>& out) {
  // n = 1 meeting point of the section and the fibre component: the two
  // curves split the general-position cell with the fibre classes at the
  // section's corner and the fibre component at the opposite one.
  Preset p = lat::parse_preset("case2:1");
  pred::PointContext ctx = context_for(p, {{"S", "S"}, {"F1", "F1"}});
  Cone a = cone::cone_from_exprs(p, {"F", "D1", "F+D2", "F+D3", "F+D2+D3"});
  auto cells = pred::predict_over_cone(ctx, a);
  std::set<std::string> owners;
  for (const auto& c : cells) owners.insert(c.owner);
  bool ok = owners == std::set<std::string>{"F1", "S"};
  const Cone *s_cell = nullptr, *f1_cell = nullptr;
  for (const auto& c : cells) {
    if (c.owner == "S") s_cell = &c.cell;
    if (c.owner == "F1") f1_cell = &c.cell;
  }
  ok = ok && s_cell && f1_cell && cone::contains(*f1_cell, lat::parse_class_expr(p, "F")) &&
       cone::contains(*s_cell, lat::parse_class_expr(p, "D1"));
  report(out, "case2:1/S-F1:split", ok, "owners or corner assignment wrong");
}

void check_multiple_fibre_extension(std::vector<CheckResult>& out) {
  // The fibre is disjoint from the last component, so the win extends from
  // twice the fibration class of the third contraction to the D2 ray.
  for (long n : {2L, 3L}) {
    Preset p = lat::parse_preset("case3:" + std::to_string(n) + ":multiple");
    pred::PointContext ctx = context_for(p, {{"F", "F"}});
    ctx.facts.push_back({"F", lat::parse_class_expr(p, "E3")});
    bool ident = lat::parse_class_expr(p, "2D3+E3") == lat::parse_class_expr(p, "D2");
    bool extended = pred::add_effective_rule(ctx, lat::parse_class_expr(p, "2D3"),
                                             lat::parse_class_expr(p, "E3"));
    report(out, "case3:" + std::to_string(n) + ":multiple/general:extension", ident && extended,
           ident ? "extension rule rejected the fibre" : "2D3+E3 is not the D2 ray");
  }
}

std::string bitstring(long mask, long k) {
  std::string s;
  for (long i = 0; i < k; ++i) s += ((mask >> i) & 1) ? '1' : '0';
  return s;
}

}  // namespace

std::vector<CheckResult> check_dual_pairs() {
  std::vector<CheckResult> out;
  std::vector<std::string> names;
  for (long n = 0; n <= 5; ++n) names.push_back("hirzebruch:" + std::to_string(n));
  for (long n = 2; n <= 6; ++n)
    for (long k = 1; k < n; ++k)
      names.push_back("simplefibres:" + std::to_string(n) + ":" + std::to_string(k));
  for (long r = 2; r <= 5; ++r) names.push_back("blowupP2:" + std::to_string(r));
  names.push_back("case1:2");
  for (long n = 1; n <= 4; ++n) names.push_back("case2:" + std::to_string(n));
  for (long n = 2; n <= 4; ++n) names.push_back("case3:" + std::to_string(n));
  for (long n = 1; n <= 4; ++n) names.push_back("case3:" + std::to_string(n) + ":multiple");
  names.push_back("k3QuarticLine");

  const std::map<std::string, size_t> nef_rays = {
      {"blowupP2:3", 5}, {"case1:2", 5}, {"blowupP2:4", 10}, {"blowupP2:5", 26}};
  for (const auto& name : names) {
    Preset p = lat::parse_preset(name);
    Cone eff = cone::cone_from_exprs(p, p.effective);
    Cone nef = cone::cone_from_exprs(p, p.nef);
    bool ok = cone::is_dual_pair(eff, nef);
    std::string why = "effective and nef generators are not a dual pair";
    auto it = nef_rays.find(name);
    if (ok && it != nef_rays.end() && nef.generators().size() != it->second) {
      ok = false;
      why = "expected " + std::to_string(it->second) + " nef rays, got " +
            std::to_string(nef.generators().size());
    }
    report(out, "dual:" + name, ok, why);
  }
  return out;
}

std::vector<CheckResult> check_intersection_tables() {
  struct Table {
    std::string preset;
    std::vector<std::string> order;
    std::vector<std::vector<long>> want;
  };
  std::vector<Table> tables;
  tables.push_back({"blowupP2:4",
                    {"L", "L1", "L2", "L3", "L4", "D1", "D2", "D3", "D4", "D"},
                    {{1, 1, 1, 1, 1, 2, 2, 2, 2, 2},
                     {1, 0, 1, 1, 1, 2, 1, 1, 1, 1},
                     {1, 1, 0, 1, 1, 1, 2, 1, 1, 1},
                     {1, 1, 1, 0, 1, 1, 1, 2, 1, 1},
                     {1, 1, 1, 1, 0, 1, 1, 1, 2, 1},
                     {2, 2, 1, 1, 1, 1, 2, 2, 2, 1},
                     {2, 1, 2, 1, 1, 2, 1, 2, 2, 1},
                     {2, 1, 1, 2, 1, 2, 2, 1, 2, 1},
                     {2, 1, 1, 1, 2, 2, 2, 2, 1, 1},
                     {2, 1, 1, 1, 1, 1, 1, 1, 1, 0}}});
  tables.push_back({"case1:2",
                    {"F", "D2", "D1", "D1'", "D0"},
                    {{0, 1, 1, 1, 1},
                     {1, 2, 2, 2, 2},
                     {1, 2, 1, 2, 1},
                     {1, 2, 2, 1, 1},
                     {1, 2, 1, 1, 0}}});
  tables.push_back({"blowupP2:3",
                    {"L", "L1", "L2", "L3", "F"},
                    {{1, 1, 1, 1, 2},
                     {1, 0, 1, 1, 1},
                     {1, 1, 0, 1, 1},
                     {1, 1, 1, 0, 1},
                     {2, 1, 1, 1, 1}}});
  for (long n = 1; n <= 4; ++n)
    tables.push_back({"case2:" + std::to_string(n),
                      {"F", "D1", "D2", "D3"},
                      {{0, 1, 1, 1}, {1, n, n, n}, {1, n, n - 1, n}, {1, n, n, n - 1}}});
  for (long n = 2; n <= 4; ++n)
    tables.push_back({"case3:" + std::to_string(n),
                      {"F", "D1", "D2", "D3"},
                      {{0, 1, 1, 1}, {1, n - 2, n - 1, n}, {1, n - 1, n - 1, n}, {1, n, n, n}}});
  for (long n = 1; n <= 4; ++n)
    tables.push_back({"case3:" + std::to_string(n) + ":multiple",
                      {"F", "D1", "D2", "D3"},
                      {{0, 1, 2, 1},
                       {1, n, 2 * n, n},
                       {2, 2 * n, 4 * n - 2, 2 * n - 1},
                       {1, n, 2 * n - 1, n - 1}}});

  std::vector<CheckResult> out;
  for (const auto& t : tables) {
    Preset p = lat::parse_preset(t.preset);
    std::vector<DivisorClass> cls;
    for (const auto& label : t.order) cls.push_back(lat::parse_class_expr(p, label));
    bool ok = true;
    std::ostringstream why;
    for (size_t i = 0; i < cls.size() && ok; ++i)
      for (size_t j = 0; j < cls.size(); ++j) {
        Rat got = lat::intersect(cls[i], cls[j]);
        if (got != t.want[i][j]) {
          ok = false;
          why << t.order[i] << "." << t.order[j] << " = " << got.get_str() << ", expected "
              << t.want[i][j];
          break;
        }
      }
    report(out, "table:" + t.preset, ok, why.str());
  }
  return out;
}

std::vector<CheckResult> check_blowup_duality() {
  std::vector<CheckResult> out;
  for (long n = 2; n <= 6; ++n)
    for (long k = 1; k < n; ++k) {
      Preset p = lat::parse_preset("simplefibres:" + std::to_string(n) + ":" + std::to_string(k));
      bool ok = true;
      std::ostringstream why;
      for (long a = 0; a < (1L << k) && ok; ++a)
        for (long b = 0; b < (1L << k); ++b) {
          Rat got = lat::intersect(lat::parse_class_expr(p, "D" + bitstring(a, k)),
                                   lat::parse_class_expr(p, "D" + bitstring(b, k)));
          long want = n - std::popcount(static_cast<unsigned long>(a & b));
          if (got != want) {
            ok = false;
            why << "D" << bitstring(a, k) << ".D" << bitstring(b, k) << " = " << got.get_str()
                << ", expected " << want;
            break;
          }
        }
      report(out, "bitdual:" + std::to_string(n) + ":" + std::to_string(k), ok, why.str());
    }
  return out;
}

std::vector<CheckResult> check_fiber_trees(unsigned seed, int trees) {
  std::vector<CheckResult> out;
  Rng rng(seed);
  for (int trial = 0; trial < trees; ++trial) {
    lat::GrownTree g = lat::random_fiber_tree(rng, 8);
    const lat::FiberTree& t = g.tree;
    size_t m = t.nodes.size();
    bool ok = true;
    std::ostringstream why;
    auto note = [&](const std::string& msg) {
      ok = false;
      why << msg << "; ";
    };

    if (lat::fiber_multiplicities(t) != g.mults) note("solved multiplicities disagree");
    if (t.n <= static_cast<long>(m)) note("section parameter not above the component count");

    // Every ancestor pair is comparable with an effective fiber-supported
    // witness; adjacent pairs also satisfy the exact subtree identity.
    for (size_t i = 0; i < m && ok; ++i)
      for (int j = t.nodes[i].parent; j >= 0; j = t.nodes[static_cast<size_t>(j)].parent) {
        lat::ComparisonWitness w = lat::verify_multiple_gens(t, i, static_cast<size_t>(j));
        if (!w.comparable || !w.supported_on_fiber || !w.effective) {
          note("comparison failed for pair (" + std::to_string(i) + ", " + std::to_string(j) +
               ")");
          break;
        }
        if (j == t.nodes[i].parent && (!w.adjacent || !w.adjacency_identity)) {
          note("adjacency identity failed for pair (" + std::to_string(i) + ", " +
               std::to_string(j) + ")");
          break;
        }
      }

    // Every legal contraction: dual classes and the fiber class pull back.
    int contracted = 0;
    for (size_t idx = 1; idx < m && ok; ++idx) {
      if (t.nodes[idx].self != -1) continue;
      size_t neighbors = 1;  // the parent
      for (const auto& node : t.nodes) neighbors += node.parent == static_cast<int>(idx);
      if (neighbors > 2) continue;
      lat::FiberTree after = lat::blowdown(t, idx);
      auto before_dual = lat::dual_basis(lat::tree_lattice(t));
      auto after_dual = lat::dual_basis(lat::tree_lattice(after));
      if (lat::pullback_class(t, idx, after_dual[0]) != before_dual[0])
        note("section dual moved under contraction of " + std::to_string(idx));
      for (size_t k = 0; k + 1 < m && ok; ++k) {
        size_t orig = k < idx ? k : k + 1;
        if (lat::pullback_class(t, idx, after_dual[k + 1]) != before_dual[orig + 1])
          note("dual of component " + std::to_string(orig) + " moved under contraction of " +
               std::to_string(idx));
      }
      if (ok && lat::pullback_class(t, idx, lat::fiber_class(after)) != lat::fiber_class(t))
        note("fiber class not preserved under contraction of " + std::to_string(idx));
      ++contracted;
    }
    if (ok && m >= 2 && contracted == 0) note("no legal contraction found");

    std::string id = std::to_string(trial);
    if (id.size() < 2) id = "0" + id;
    report(out, "tree:" + id, ok, why.str());
  }
  return out;
}

std::vector<CheckResult> check_subcone_conclusions() {
  std::vector<SubconeFixture> fixtures;
  std::vector<RangeCheck> ranges;
  add_two_point(fixtures);
  add_two_fibre(fixtures);
  add_three_point(fixtures);
  add_case2(fixtures, ranges);
  add_case3(fixtures, ranges);
  add_case3_multiple(fixtures, ranges);
  add_four_point(fixtures);
  add_five_point(fixtures);

  std::vector<CheckResult> out;
  for (const auto& f : fixtures) run_subcone_fixture(f, out);
  for (const auto& r : ranges) run_range_check(r, out);
  check_two_fibre_special(out);
  check_section_fibre_split(out);
  check_multiple_fibre_extension(out);
  return out;
}

std::vector<CheckResult> run_all_checks() {
  std::vector<CheckResult> out;
  for (auto group : {check_dual_pairs(), check_intersection_tables(), check_blowup_duality(),
                     check_fiber_trees(), check_subcone_conclusions()})
    out.insert(out.end(), group.begin(), group.end());
  return out;
}

size_t count_failures(const std::vector<CheckResult>& results) {
  size_t n = 0;
  for (const auto& r : results) n += !r.pass;
  return n;
}

}  // namespace fix
}  // namespace rapprox
