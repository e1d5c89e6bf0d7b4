#pragma once

// Exact rational polyhedral cones over a Neron-Severi lattice: duality by
// double description, membership with Farkas certificates, Nakai ampleness,
// and subdivision by minimal degree.  All comparisons are bit-exact on
// canonical primitive rays.

#include <memory>
#include <optional>
#include <vector>

#include "rapprox/nslattice.hpp"

namespace rapprox {
namespace cone {

using lat::DivisorClass;
using lat::LatticePtr;

// Double description beyond small rank is out of scope; the largest fixture
// lattice has rank 6.
inline constexpr size_t kMaxRank = 10;

class Cone {
public:
  // Canonicalizes the generators: primitive integer rays (gcd 1, direction
  // kept), deduplicated, sorted.  Zero generators and mixed lattices are
  // rejected.  An empty list is the zero cone.
  Cone(LatticePtr lattice, std::vector<DivisorClass> generators);

  const LatticePtr& lattice() const { return lattice_; }
  const std::vector<DivisorClass>& generators() const { return gens_; }

  // Dimension of the linear span of the generators.
  size_t dim() const;
  bool full_dimensional() const { return dim() == lattice_->rank(); }

  // Same lattice and identical canonical generator list.
  bool operator==(const Cone& o) const;
  bool operator!=(const Cone& o) const { return !(*this == o); }

private:
  friend const std::vector<std::vector<Rat>>& dual_gens_of(const Cone& c);
  LatticePtr lattice_;
  std::vector<DivisorClass> gens_;
  struct Cache;
  std::shared_ptr<Cache> cache_;  // dual rays, shared across copies
};

// Extremal rays of {y : x.y >= 0 under the lattice pairing, for every
// generator x}.  When the input does not span the lattice the dual has
// lineality directions; these are returned as +-pairs of generators.
// Fails on the zero cone.
Cone dual_cone(const Cone& c);

struct Membership {
  bool inside = false;
  // Present exactly when outside: a class y with y.g >= 0 for every
  // generator g of the cone but y.d < 0.
  std::optional<DivisorClass> certificate;
};

// Exact test: is d a nonnegative rational combination of the generators?
Membership membership(const Cone& c, const DivisorClass& d);
bool contains(const Cone& c, const DivisorClass& d);

// Extremal rays of a's dual equal b's extremal rays, and symmetrically.
bool is_dual_pair(const Cone& a, const Cone& b);

// Numerical ampleness test: d.d > 0 and d.C > 0 for every listed class.
// The caller warrants that the list contains every negative curve.
bool nakai_ample(const DivisorClass& d, const std::vector<DivisorClass>& effective_gens);

struct MinDegreeCell {
  size_t candidate;  // index into the candidate list
  Cone cell;
};

// Cell k = nef intersected with {D : (candidates[k] - candidates[j]).D <= 0
// for all j}: the region where candidate k has minimal degree.  Cells cover
// the nef cone; zero cells are omitted.
std::vector<MinDegreeCell> subdivide_by_min_degree(const Cone& nef,
                                                   const std::vector<DivisorClass>& candidates);

// Sum of the generators; strictly interior for a full-dimensional cone.
DivisorClass sample_interior(const Cone& c);

// Cone spanned by the named classes or expressions of a preset (used for the
// effective and nef generator lists).
Cone cone_from_exprs(const lat::Preset& p, const std::vector<std::string>& exprs);

}  // namespace cone
}  // namespace rapprox
