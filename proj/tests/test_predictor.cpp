#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "rapprox/cones.hpp"
#include "rapprox/nslattice.hpp"
#include "rapprox/predictor.hpp"

using rapprox::Error;
using rapprox::Int;
using rapprox::make_rat;
using rapprox::Rat;
using rapprox::Rng;
using rapprox::cone::Cone;
using rapprox::cone::cone_from_exprs;
using rapprox::cone::contains;
using rapprox::lat::DivisorClass;
using rapprox::lat::parse_class_expr;
using rapprox::lat::Preset;
using rapprox::pred::add_effective_rule;
using rapprox::pred::Candidate;
using rapprox::pred::CellPrediction;
using rapprox::pred::DisjointFact;
using rapprox::pred::PointContext;
using rapprox::pred::predict_alpha;
using rapprox::pred::predict_over_cone;
using rapprox::pred::Prediction;

namespace {

// Catalog rows as (label, class expression, multiplicity).
struct Row {
  std::string label;
  std::string expr;
  long mult = 1;
};

PointContext make_ctx(const Preset& p, const std::vector<Row>& rows) {
  PointContext ctx;
  ctx.lattice = p.lattice;
  for (const Row& r : rows)
    ctx.candidates.push_back(Candidate{r.label, parse_class_expr(p, r.expr), Int(r.mult)});
  for (const std::string& name : p.effective)
    ctx.effective_gens.push_back(parse_class_expr(p, name));
  return ctx;
}

bool has_winner(const Prediction& pr, const std::string& label) {
  return std::find(pr.winners.begin(), pr.winners.end(), label) != pr.winners.end();
}

const CellPrediction& cell_owned_by(const std::vector<CellPrediction>& cells,
                                    const std::string& owner) {
  for (const CellPrediction& c : cells)
    if (c.owner == owner) return c;
  REQUIRE(false);
  return cells.front();
}

}  // namespace

TEST_CASE("fiber wins on a Hirzebruch surface") {
  Preset p = rapprox::lat::preset_hirzebruch(2);
  PointContext ctx = make_ctx(p, {{"fiber", "F"}, {"section-image", "S+2F"}});

  Prediction pr = predict_alpha(ctx, parse_class_expr(p, "S+3F"));
  CHECK(pr.alpha == 1);
  CHECK(pr.winners == std::vector<std::string>{"fiber"});

  // The loser's degree is 3, not part of the minimum.
  CHECK(rapprox::lat::intersect(parse_class_expr(p, "S+3F"), parse_class_expr(p, "S+2F")) == 3);

  // Boundary classes are rejected with the violated inequality named.
  CHECK_THROWS_WITH_AS(predict_alpha(ctx, parse_class_expr(p, "S+2F")),
                       doctest::Contains("degree against"), Error);
  CHECK_THROWS_WITH_AS(predict_alpha(ctx, parse_class_expr(p, "F")),
                       doctest::Contains("self-intersection"), Error);
  CHECK_THROWS_WITH_AS(predict_alpha(ctx, parse_class_expr(p, "S")),
                       doctest::Contains("not ample"), Error);
}

TEST_CASE("five-way tie on the four-point blowup of the plane") {
  Preset p = rapprox::lat::preset_blowup_p2(4);
  PointContext ctx = make_ctx(p, {{"L", "L"},
                                  {"L-E1", "L-E1"},
                                  {"L-E2", "L-E2"},
                                  {"L-E3", "L-E3"},
                                  {"L-E4", "L-E4"},
                                  {"conic", "2L-E1-E2-E3-E4"}});

  Prediction pr = predict_alpha(ctx, parse_class_expr(p, "3L-E1-E2-E3-E4"));
  CHECK(pr.alpha == 2);
  CHECK(pr.winners == std::vector<std::string>{"L-E1", "L-E2", "L-E3", "L-E4", "conic"});
}

TEST_CASE("a multiplicity-two branch beats a lower-degree smooth curve") {
  Preset p = rapprox::lat::preset_blowup_p2(0);
  PointContext cusped = make_ctx(p, {{"conic", "2L"}, {"cuspidal-cubic", "3L", 2}});
  Prediction pr = predict_alpha(cusped, parse_class_expr(p, "L"));
  CHECK(pr.alpha == make_rat(3, 2));
  CHECK(pr.winners == std::vector<std::string>{"cuspidal-cubic"});

  PointContext smooth = make_ctx(p, {{"conic", "2L"}});
  CHECK(predict_alpha(smooth, parse_class_expr(p, "L")).alpha == 2);
}

TEST_CASE("scaling invariance and winner convexity") {
  Preset p = rapprox::lat::preset_blowup_p2(4);
  PointContext ctx = make_ctx(p, {{"L", "L"},
                                  {"L-E1", "L-E1"},
                                  {"L-E2", "L-E2"},
                                  {"L-E3", "L-E3"},
                                  {"L-E4", "L-E4"},
                                  {"conic", "2L-E1-E2-E3-E4"}});
  DivisorClass d1 = parse_class_expr(p, "3L-E1-E2-E3-E4");
  DivisorClass d2 = parse_class_expr(p, "5L-2E1-E2-E3-E4");

  Prediction base = predict_alpha(ctx, d1);
  for (long k : {2L, 3L, 7L}) {
    Prediction scaled = predict_alpha(ctx, d1 * Int(k));
    CHECK(scaled.alpha == base.alpha * Rat(k));
    CHECK(scaled.winners == base.winners);
  }

  // d2 singles out one of d1's winners; every positive combination keeps it.
  Prediction other = predict_alpha(ctx, d2);
  CHECK(other.alpha == 3);
  CHECK(other.winners == std::vector<std::string>{"L-E1"});
  Rng rng(401);
  for (int trial = 0; trial < 25; ++trial) {
    Int a(rng.range(1, 9));
    Int b(rng.range(1, 9));
    Prediction mix = predict_alpha(ctx, d1 * a + d2 * b);
    CHECK(has_winner(mix, "L-E1"));
    CHECK(mix.alpha == Rat(a) * base.alpha + Rat(b) * other.alpha);
  }
}

TEST_CASE("catalog and divisor validation") {
  Preset p = rapprox::lat::preset_hirzebruch(2);
  PointContext ctx = make_ctx(p, {{"fiber", "F"}});
  DivisorClass ample = parse_class_expr(p, "S+3F");

  PointContext empty = ctx;
  empty.candidates.clear();
  CHECK_THROWS_WITH_AS(predict_alpha(empty, ample), doctest::Contains("empty"), Error);

  PointContext zero_mult = ctx;
  zero_mult.candidates[0].mult = 0;
  CHECK_THROWS_WITH_AS(predict_alpha(zero_mult, ample), doctest::Contains("multiplicity"), Error);

  PointContext dup = ctx;
  dup.candidates.push_back(dup.candidates[0]);
  CHECK_THROWS_WITH_AS(predict_alpha(dup, ample), doctest::Contains("duplicate"), Error);

  Preset q = rapprox::lat::preset_blowup_p2(2);
  PointContext alien = ctx;
  alien.candidates.push_back(Candidate{"line", parse_class_expr(q, "L"), Int(1)});
  CHECK_THROWS_WITH_AS(predict_alpha(alien, ample), doctest::Contains("different lattice"), Error);
  CHECK_THROWS_WITH_AS(predict_alpha(ctx, parse_class_expr(q, "L")),
                       doctest::Contains("different lattice"), Error);

  PointContext stray_fact = ctx;
  stray_fact.facts.push_back(DisjointFact{"nobody", parse_class_expr(p, "S")});
  CHECK_THROWS_WITH_AS(predict_alpha(stray_fact, ample), doctest::Contains("unknown"), Error);

  PointContext no_gens = ctx;
  no_gens.effective_gens.clear();
  CHECK_THROWS_WITH_AS(predict_alpha(no_gens, ample), doctest::Contains("effective"), Error);
}

TEST_CASE("nef subdivision splits a reducible-fibre surface into two cells") {
  Preset p = rapprox::lat::preset_case2(3);
  PointContext ctx = make_ctx(p, {{"S", "S"}, {"F1", "F1"}});
  Cone nef = cone_from_exprs(p, p.nef);

  std::vector<CellPrediction> cells = predict_over_cone(ctx, nef);
  REQUIRE(cells.size() == 2);

  const CellPrediction& fibre_side = cell_owned_by(cells, "F1");
  CHECK(fibre_side.winners == std::vector<std::string>{"F1"});
  CHECK(contains(fibre_side.cell, parse_class_expr(p, "F")));
  CHECK(contains(fibre_side.cell, parse_class_expr(p, "D2")));
  CHECK(contains(fibre_side.cell, parse_class_expr(p, "D3")));
  CHECK_FALSE(contains(fibre_side.cell, parse_class_expr(p, "D1")));

  const CellPrediction& section_side = cell_owned_by(cells, "S");
  CHECK(section_side.winners == std::vector<std::string>{"S"});
  CHECK(contains(section_side.cell, parse_class_expr(p, "D1")));
  CHECK(contains(section_side.cell, parse_class_expr(p, "D2")));
  CHECK(contains(section_side.cell, parse_class_expr(p, "D3")));
  CHECK_FALSE(contains(section_side.cell, parse_class_expr(p, "F")));
}

TEST_CASE("nef subdivision on the three-point blowup") {
  Preset p = rapprox::lat::preset_blowup_p2(3);
  PointContext ctx = make_ctx(p, {{"E1", "E1"}, {"L-E1-E2", "L-E1-E2"}});
  Cone nef = cone_from_exprs(p, p.nef);

  std::vector<CellPrediction> cells = predict_over_cone(ctx, nef);
  REQUIRE(cells.size() == 2);

  const CellPrediction& exceptional = cell_owned_by(cells, "E1");
  CHECK(exceptional.winners == std::vector<std::string>{"E1"});
  CHECK(contains(exceptional.cell, parse_class_expr(p, "L")));
  CHECK(contains(exceptional.cell, parse_class_expr(p, "L-E3")));
  CHECK(contains(exceptional.cell, parse_class_expr(p, "L-E2")));
  CHECK_FALSE(contains(exceptional.cell, parse_class_expr(p, "L-E1")));
  CHECK_FALSE(contains(exceptional.cell, parse_class_expr(p, "2L-E1-E2-E3")));

  const CellPrediction& line = cell_owned_by(cells, "L-E1-E2");
  CHECK(line.winners == std::vector<std::string>{"L-E1-E2"});
  CHECK(contains(line.cell, parse_class_expr(p, "L-E1")));
  CHECK(contains(line.cell, parse_class_expr(p, "2L-E1-E2-E3")));
  CHECK(contains(line.cell, parse_class_expr(p, "L-E2")));
  CHECK_FALSE(contains(line.cell, parse_class_expr(p, "L")));
  CHECK_FALSE(contains(line.cell, parse_class_expr(p, "L-E3")));
}

TEST_CASE("a single candidate owns the whole nef cone") {
  Preset p = rapprox::lat::preset_case2(3);
  PointContext ctx = make_ctx(p, {{"S", "S"}});
  Cone nef = cone_from_exprs(p, p.nef);

  std::vector<CellPrediction> cells = predict_over_cone(ctx, nef);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].owner == "S");
  CHECK(cells[0].winners == std::vector<std::string>{"S"});
  CHECK(cells[0].cell == nef);
}

TEST_CASE("multiplicity weighting erases a cell entirely") {
  Preset p = rapprox::lat::preset_blowup_p2(0);
  PointContext ctx = make_ctx(p, {{"conic", "2L"}, {"cuspidal-cubic", "3L", 2}});
  Cone nef = cone_from_exprs(p, p.nef);

  // 3/2 per unit beats 2 per unit on the entire ray, so the conic's cell is
  // the zero cone and is dropped.
  std::vector<CellPrediction> cells = predict_over_cone(ctx, nef);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].owner == "cuspidal-cubic");
  CHECK(cells[0].winners == std::vector<std::string>{"cuspidal-cubic"});
  CHECK(cells[0].cell == nef);
}

TEST_CASE("effective extension keeps a fibre-component winner") {
  Preset p = rapprox::lat::preset_simple_fibres(3, 1);
  PointContext ctx = make_ctx(p, {{"E1", "E1"}, {"F1", "F1"}});
  ctx.facts.push_back(DisjointFact{"E1", parse_class_expr(p, "S")});
  DivisorClass fibre = parse_class_expr(p, "F");

  // Under F both components have degree zero; adding the section leaves E1
  // at zero but lifts F1 to one, so the covered winner survives.
  CHECK(add_effective_rule(ctx, fibre, parse_class_expr(p, "S")));

  // The zero class extends trivially, no fact needed.
  CHECK(add_effective_rule(ctx, fibre, parse_class_expr(p, "S-S")));

  // Facts are matched exactly: 2S is a different class, and E1 has no fact.
  CHECK_THROWS_WITH_AS(add_effective_rule(ctx, fibre, parse_class_expr(p, "2S")),
                       doctest::Contains("no recorded"), Error);
  CHECK_THROWS_WITH_AS(add_effective_rule(ctx, fibre, parse_class_expr(p, "E1")),
                       doctest::Contains("no recorded"), Error);

  // A recorded fact that fails C.E = 0 is rejected, not trusted.
  PointContext lying = ctx;
  lying.facts = {DisjointFact{"E1", parse_class_expr(p, "F1")}};
  CHECK_THROWS_WITH_AS(add_effective_rule(lying, fibre, parse_class_expr(p, "F1")),
                       doctest::Contains("false"), Error);
}

TEST_CASE("effective extension can dethrone the winner") {
  Preset p = rapprox::lat::preset_blowup_p2(3);
  PointContext ctx = make_ctx(p, {{"E3", "E3"}, {"L-E1-E2", "L-E1-E2"}});
  DivisorClass d = parse_class_expr(p, "4L-E1-E2-E3");
  ctx.facts.push_back(DisjointFact{"E3", parse_class_expr(p, "L-E1-E2")});
  ctx.facts.push_back(DisjointFact{"E3", parse_class_expr(p, "2L-2E1-2E2")});

  Prediction before = predict_alpha(ctx, d);
  CHECK(before.alpha == 1);
  CHECK(before.winners == std::vector<std::string>{"E3"});

  // One copy of the line only ties the degrees; two copies push the line's
  // degree below the exceptional curve's, and the old winner loses.
  CHECK(add_effective_rule(ctx, d, parse_class_expr(p, "L-E1-E2")));
  CHECK_FALSE(add_effective_rule(ctx, d, parse_class_expr(p, "2L-2E1-2E2")));
}
