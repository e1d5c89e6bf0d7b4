#pragma once

// Integral lattices with a symmetric intersection form, divisor classes,
// exact dual bases, and the reducible-fiber trees whose component
// multiplicities the lattice determines.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rapprox/linalg.hpp"
#include "rapprox/numeric.hpp"

namespace rapprox {
namespace lat {

class NSLattice {
public:
  // Symmetric integer Gram matrix with nonzero determinant.
  NSLattice(std::vector<std::string> labels, std::vector<std::vector<Int>> gram);

  size_t rank() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<Int>>& gram() const { return gram_; }

  Signature signature() const;
  bool hodge_signature() const;  // (1, rank-1)

  bool operator==(const NSLattice& o) const {
    return labels_ == o.labels_ && gram_ == o.gram_;
  }

private:
  std::vector<std::string> labels_;
  std::vector<std::vector<Int>> gram_;
};

using LatticePtr = std::shared_ptr<const NSLattice>;

class DivisorClass {
public:
  DivisorClass(LatticePtr lattice, std::vector<Rat> coeffs);
  DivisorClass(LatticePtr lattice, std::vector<Int> coeffs);

  const LatticePtr& lattice() const { return lat_; }
  const std::vector<Rat>& coeffs() const { return c_; }
  bool is_integral() const;
  bool is_zero() const;

  DivisorClass operator+(const DivisorClass& o) const;
  DivisorClass operator-(const DivisorClass& o) const;
  DivisorClass operator*(const Int& k) const;
  bool operator==(const DivisorClass& o) const;

  std::string str() const;  // coefficients against the lattice labels

private:
  std::vector<Rat> c_;
  LatticePtr lat_;
};

// Exact intersection number via the Gram form.
Rat intersect(const DivisorClass& a, const DivisorClass& b);

// Classes D_i with D_i . E_j = delta_ij against the lattice basis.
std::vector<DivisorClass> dual_basis(const LatticePtr& lattice);

// ---------------------------------------------------------------------------
// Presets: the lattices of the studied surfaces, with their named classes and
// the generator labels of the effective and nef cones.

struct Preset {
  std::string name;  // canonical "family:params" spelling
  LatticePtr lattice;
  std::map<std::string, DivisorClass> classes;
  std::vector<std::string> class_order;  // insertion order for display
  std::vector<std::string> effective;    // labels of effective-cone generators
  std::vector<std::string> nef;          // labels of nef-cone generators
};

Preset preset_hirzebruch(long n);
Preset preset_simple_fibres(long n, long k);
Preset preset_case1(long n);
Preset preset_case2(long n);
Preset preset_case3(long n, bool multiple);
Preset preset_blowup_p2(long r);
Preset preset_k3_quartic_line();

// "family:params" spellings, e.g. "hirzebruch:2", "simplefibres:3:2",
// "case3:2:multiple", "blowup_p2:4", "k3_quartic_line".
Preset parse_preset(const std::string& spelled);
std::vector<std::string> preset_catalog();

// Linear combinations written over named classes, e.g. "2F+S-E2-2E3".
DivisorClass parse_class_expr(const Preset& preset, const std::string& expr);

// ---------------------------------------------------------------------------
// Reducible fibers of a fibration over P^1, as component trees rooted at the
// component that meets the section.

struct FiberTree {
  struct Node {
    std::string label;
    long self = -1;  // self-intersection
    int parent = -1; // -1 for the root; parents precede children
  };
  long n = 2;  // the section has self-intersection -n
  std::vector<Node> nodes;
};

void validate(const FiberTree& t);

// Lattice with basis (S, components...) in tree order.
LatticePtr tree_lattice(const FiberTree& t);

// Component multiplicities: the fiber class F = sum m_i E_i is determined by
// F.E_i = 0 for all i and m_root = 1; entries must come out positive
// integers, else the configuration is rejected.
std::vector<Int> fiber_multiplicities(const FiberTree& t);

DivisorClass fiber_class(const FiberTree& t);

struct ComparisonWitness {
  bool comparable = false;     // ancestor relation held
  bool adjacent = false;       // j is the parent of i
  bool supported_on_fiber = false;  // no section coefficient
  bool effective = false;      // nonnegative component coefficients
  bool adjacency_identity = false;  // exact subtree-sum identity (adjacent pairs)
  std::vector<Rat> witness;    // m_i D_j - m_j D_i in lattice coordinates
};

// The pair (i, j) uses tree indices; requires E_j on the root path of E_i.
ComparisonWitness verify_multiple_gens(const FiberTree& t, size_t i, size_t j);

// Contract component idx (a -1-curve away from the section, meeting at most
// two other components).  Children reattach to the parent; the neighbors
// gain one in self-intersection.
FiberTree blowdown(const FiberTree& t, size_t idx);

// Pullback of a class on the blown-down lattice: coefficients are kept and
// the contracted component receives the sum of its former neighbors'.
DivisorClass pullback_class(const FiberTree& before, size_t idx, const DivisorClass& on_after);

// Random valid configuration grown by smooth-point and node blowups; the
// returned multiplicities are tracked independently of fiber_multiplicities.
struct GrownTree {
  FiberTree tree;
  std::vector<Int> mults;
};
GrownTree random_fiber_tree(Rng& rng, size_t max_components);

}  // namespace lat
}  // namespace rapprox
