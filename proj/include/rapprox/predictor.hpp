#pragma once

// Conjectural approximation constants on a surface.  Given a catalog of
// rational curves through a point, each with its branch multiplicity m at
// the point, the predicted constant for an ample divisor D is the minimum
// of D.C/m over the catalog.  Subcone analysis locates the winning curve
// across a nef cone, and an effective-extension rule transports a winner
// from D to D+E when the winner is disjoint from E.  The catalog is the
// caller's responsibility: the predictor does not discover curves.

#include <string>
#include <vector>

#include "rapprox/cones.hpp"
#include "rapprox/nslattice.hpp"
#include "rapprox/numeric.hpp"

namespace rapprox {
namespace pred {

using cone::Cone;
using lat::DivisorClass;
using lat::LatticePtr;

struct Candidate {
  std::string label;
  DivisorClass cls;  // class of the curve
  Int mult = 1;      // branch multiplicity at the point, >= 1
};

// Recorded geometric fact: the named candidate is disjoint from the
// effective class (C.E = 0).  add_effective_rule refuses to extend a
// prediction without one; the lattice cannot see disjointness on its own.
struct DisjointFact {
  std::string candidate;
  DivisorClass effective;
};

struct PointContext {
  LatticePtr lattice;
  std::vector<Candidate> candidates;
  // The scenario's negative-curve list, used by the Nakai ampleness gate.
  std::vector<DivisorClass> effective_gens;
  std::vector<DisjointFact> facts;
};

struct Prediction {
  Rat alpha;                         // min over the catalog of (D.C)/m
  std::vector<std::string> winners;  // every minimizer, sorted by label
};

// One cell of a nef-cone subdivision: the region where `owner` has minimal
// weighted degree, with the winner set at an interior sample point.
struct CellPrediction {
  std::string owner;
  Cone cell;
  std::vector<std::string> winners;
};

// Exact minimum of (divisor.C)/m over the catalog with the full argmin set.
// The divisor must pass the Nakai test against ctx.effective_gens; a failure
// names the violated class.  The catalog must be nonempty with distinct
// labels and multiplicities >= 1.
Prediction predict_alpha(const PointContext& ctx, const DivisorClass& divisor);

// Subdivides the nef cone by which candidate has minimal weighted degree and
// reports the winner set at an interior sample of each cell.  The owner is
// verified minimal at every cell ray perturbed inward (degrees are linear,
// so that argmin is the lexicographic argmin of the degree pair at the ray
// and at the interior sample); zero cells are omitted.  No ampleness gate:
// cells reach the nef boundary.
std::vector<CellPrediction> predict_over_cone(const PointContext& ctx, const Cone& nef);

// True iff a winner under `divisor` covered by a recorded disjointness fact
// for `effective` is still a winner under divisor + effective.  A zero class
// is trivially true; otherwise a fact for some winner must be recorded and
// is verified (C.E = 0 recomputed) before the degrees are compared.  No
// ampleness gate: the rule exists to reach divisors outside the ample cone.
bool add_effective_rule(const PointContext& ctx, const DivisorClass& divisor,
                        const DivisorClass& effective);

}  // namespace pred
}  // namespace rapprox
