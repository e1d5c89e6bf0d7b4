#include "rapprox/predictor.hpp"

#include <algorithm>
#include <set>

namespace rapprox {
namespace pred {
namespace {

void check_context(const PointContext& ctx) {
  if (!ctx.lattice) fail(Errc::precondition, "context needs a lattice");
  if (ctx.candidates.empty()) fail(Errc::degenerate_input, "empty candidate catalog");
  std::set<std::string> seen;
  for (const Candidate& c : ctx.candidates) {
    if (c.label.empty()) fail(Errc::invalid_configuration, "candidate with an empty label");
    if (!seen.insert(c.label).second)
      fail(Errc::invalid_configuration, "duplicate candidate label " + c.label);
    if (c.mult < 1) fail(Errc::precondition, "branch multiplicity below 1 for " + c.label);
    if (!(*c.cls.lattice() == *ctx.lattice))
      fail(Errc::lattice_mismatch, "candidate " + c.label + " lives on a different lattice");
  }
  for (const DisjointFact& f : ctx.facts) {
    if (!seen.count(f.candidate))
      fail(Errc::invalid_configuration, "disjointness fact for unknown candidate " + f.candidate);
    if (!(*f.effective.lattice() == *ctx.lattice))
      fail(Errc::lattice_mismatch, "disjointness fact on a different lattice");
  }
  for (const DivisorClass& g : ctx.effective_gens)
    if (!(*g.lattice() == *ctx.lattice))
      fail(Errc::lattice_mismatch, "effective generator on a different lattice");
}

void check_same_lattice(const PointContext& ctx, const DivisorClass& d, const char* what) {
  if (!(*d.lattice() == *ctx.lattice))
    fail(Errc::lattice_mismatch, std::string(what) + " on a different lattice");
}

Rat weighted_degree(const Candidate& c, const DivisorClass& d) {
  return lat::intersect(d, c.cls) / Rat(c.mult);
}

// Argmin of the weighted degrees; no ampleness gate.  Winners label-sorted.
Prediction argmin_prediction(const PointContext& ctx, const DivisorClass& d) {
  Prediction out;
  bool first = true;
  for (const Candidate& c : ctx.candidates) {
    Rat deg = weighted_degree(c, d);
    if (first || deg < out.alpha) {
      out.alpha = deg;
      out.winners.clear();
    }
    if (deg == out.alpha) out.winners.push_back(c.label);
    first = false;
  }
  std::sort(out.winners.begin(), out.winners.end());
  return out;
}

void require_ample(const PointContext& ctx, const DivisorClass& d) {
  if (cone::nakai_ample(d, ctx.effective_gens)) return;
  Rat self = lat::intersect(d, d);
  if (!(self > 0))
    fail(Errc::precondition, "divisor " + d.str() + " is not ample: self-intersection " +
                                 self.get_str() + " is not positive");
  for (const DivisorClass& g : ctx.effective_gens)
    if (!(lat::intersect(d, g) > 0))
      fail(Errc::precondition,
           "divisor " + d.str() + " is not ample: degree against " + g.str() + " is not positive");
  fail(Errc::invalid_configuration, "ampleness test failed without a certificate");
}

bool is_zero_class(const DivisorClass& d) {
  const std::vector<Rat>& c = d.coeffs();
  return std::all_of(c.begin(), c.end(), [](const Rat& x) { return x == 0; });
}

}  // namespace

Prediction predict_alpha(const PointContext& ctx, const DivisorClass& divisor) {
  check_context(ctx);
  check_same_lattice(ctx, divisor, "divisor");
  require_ample(ctx, divisor);
  Prediction out = argmin_prediction(ctx, divisor);
  if (!(out.alpha > 0))
    fail(Errc::invalid_configuration,
         "catalog curve with nonpositive degree under an ample divisor; "
         "the effective generator list must be missing a negative curve");
  return out;
}

std::vector<CellPrediction> predict_over_cone(const PointContext& ctx, const Cone& nef) {
  check_context(ctx);
  if (!(*nef.lattice() == *ctx.lattice))
    fail(Errc::lattice_mismatch, "cone over a different lattice");

  // Weight each class by 1/m so minimal degree means minimal (D.C)/m.
  std::vector<DivisorClass> scaled;
  scaled.reserve(ctx.candidates.size());
  for (const Candidate& c : ctx.candidates) {
    std::vector<Rat> q = c.cls.coeffs();
    for (Rat& x : q) x /= Rat(c.mult);
    scaled.emplace_back(ctx.lattice, std::move(q));
  }

  std::vector<CellPrediction> out;
  for (const cone::MinDegreeCell& mc : cone::subdivide_by_min_degree(nef, scaled)) {
    const std::vector<DivisorClass>& rays = mc.cell.generators();
    DivisorClass interior = rays[0];
    for (size_t i = 1; i < rays.size(); ++i) interior = interior + rays[i];

    Prediction at = argmin_prediction(ctx, interior);
    const std::string& owner = ctx.candidates[mc.candidate].label;
    if (!std::binary_search(at.winners.begin(), at.winners.end(), owner))
      fail(Errc::invalid_configuration, "cell owner " + owner + " loses at its interior sample");

    // Winner constancy across the cell: degrees are linear, so the winner
    // set just inside a ray is the lexicographic argmin of the degree pair
    // (at the ray, at the interior sample).  The owner must be in it, i.e.
    // no candidate may beat the owner's pair strictly.
    std::vector<Rat> deg_in;
    deg_in.reserve(ctx.candidates.size());
    for (const Candidate& c : ctx.candidates) deg_in.push_back(weighted_degree(c, interior));
    for (const DivisorClass& r : rays) {
      Rat owner_ray = weighted_degree(ctx.candidates[mc.candidate], r);
      for (size_t k = 0; k < ctx.candidates.size(); ++k) {
        Rat dk = weighted_degree(ctx.candidates[k], r);
        if (dk < owner_ray || (dk == owner_ray && deg_in[k] < deg_in[mc.candidate]))
          fail(Errc::invalid_configuration,
               "cell owner " + owner + " loses just inside the ray " + r.str());
      }
    }

    out.push_back(CellPrediction{owner, mc.cell, std::move(at.winners)});
  }
  return out;
}

bool add_effective_rule(const PointContext& ctx, const DivisorClass& divisor,
                        const DivisorClass& effective) {
  check_context(ctx);
  check_same_lattice(ctx, divisor, "divisor");
  check_same_lattice(ctx, effective, "effective class");
  if (is_zero_class(effective)) return true;

  Prediction before = argmin_prediction(ctx, divisor);
  std::vector<const Candidate*> covered;
  for (const std::string& label : before.winners)
    for (const DisjointFact& f : ctx.facts) {
      if (f.candidate != label || !(f.effective == effective)) continue;
      for (const Candidate& c : ctx.candidates)
        if (c.label == label) covered.push_back(&c);
      break;
    }
  if (covered.empty())
    fail(Errc::precondition,
         "no recorded disjointness fact between a winner and the effective class");
  for (const Candidate* c : covered)
    if (lat::intersect(c->cls, effective) != 0)
      fail(Errc::invalid_configuration, "recorded disjointness fact is false: " + c->label +
                                            " meets " + effective.str());

  Prediction after = argmin_prediction(ctx, divisor + effective);
  for (const Candidate* c : covered)
    if (std::binary_search(after.winners.begin(), after.winners.end(), c->label)) return true;
  return false;
}

}  // namespace pred
}  // namespace rapprox
