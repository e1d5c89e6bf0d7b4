#include "rapprox/cones.hpp"

#include <algorithm>
#include <mutex>

#include "rapprox/linalg.hpp"

namespace rapprox {
namespace cone {

namespace {

Rat dot_rr(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Standard-coordinate normal of the pairing constraint x . (.) >= 0.
std::vector<Rat> pairing_normal(const lat::NSLattice& l, const std::vector<Rat>& x) {
  size_t n = l.rank();
  std::vector<Rat> row(n, Rat(0));
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < n; ++i) row[j] += x[i] * Rat(l.gram()[i][j]);
  return row;
}

std::vector<Rat> canon_ray(const std::vector<Rat>& v) { return to_rat(primitive_ray(v)); }

// Double description state: the current cone is cone(rays) + span(lin).
struct DDState {
  std::vector<std::vector<Rat>> rays;
  std::vector<std::vector<Rat>> lin;
};

using Mask = std::uint64_t;

// Extremal rays and lineality basis of {y : row . y >= 0 for every row}.
// Rays are kept primitive; adjacency is the standard minimal-ray test (no
// third ray's tight set contains the intersection of the pair's tight sets).
DDState dd_cone(const std::vector<std::vector<Rat>>& rows, size_t n) {
  if (rows.size() > 64) fail(Errc::precondition, "too many inequalities for the cone engine");
  DDState s;
  for (size_t i = 0; i < n; ++i) {
    std::vector<Rat> e(n, Rat(0));
    e[i] = 1;
    s.lin.push_back(std::move(e));
  }

  std::vector<std::vector<Rat>> done;
  auto tight_mask = [&done](const std::vector<Rat>& r) {
    Mask m = 0;
    for (size_t i = 0; i < done.size(); ++i)
      if (dot_rr(done[i], r) == 0) m |= Mask(1) << i;
    return m;
  };

  for (const auto& row : rows) {
    size_t hit = s.lin.size();
    for (size_t k = 0; k < s.lin.size(); ++k)
      if (dot_rr(row, s.lin[k]) != 0) {
        hit = k;
        break;
      }
    if (hit != s.lin.size()) {
      // Absorb one lineality direction into a ray tight nowhere on this row.
      std::vector<Rat> l0 = s.lin[hit];
      Rat v0 = dot_rr(row, l0);
      if (v0 < 0) {
        for (Rat& x : l0) x = -x;
        v0 = -v0;
      }
      std::vector<std::vector<Rat>> nlin;
      for (size_t k = 0; k < s.lin.size(); ++k) {
        if (k == hit) continue;
        Rat c = dot_rr(row, s.lin[k]) / v0;
        std::vector<Rat> l = s.lin[k];
        for (size_t i = 0; i < n; ++i) l[i] -= c * l0[i];
        nlin.push_back(std::move(l));
      }
      for (auto& r : s.rays) {
        Rat c = dot_rr(row, r) / v0;
        for (size_t i = 0; i < n; ++i) r[i] -= c * l0[i];
        r = canon_ray(r);
      }
      s.lin = std::move(nlin);
      s.rays.push_back(canon_ray(l0));
    } else {
      std::vector<size_t> plus, zero, minus;
      std::vector<Rat> val(s.rays.size());
      for (size_t k = 0; k < s.rays.size(); ++k) {
        val[k] = dot_rr(row, s.rays[k]);
        (val[k] > 0 ? plus : val[k] < 0 ? minus : zero).push_back(k);
      }
      if (!minus.empty()) {
        std::vector<Mask> tight(s.rays.size());
        for (size_t k = 0; k < s.rays.size(); ++k) tight[k] = tight_mask(s.rays[k]);
        std::vector<std::vector<Rat>> next;
        for (size_t k : plus) next.push_back(s.rays[k]);
        for (size_t k : zero) next.push_back(s.rays[k]);
        for (size_t p : plus)
          for (size_t q : minus) {
            Mask common = tight[p] & tight[q];
            bool adjacent = true;
            for (size_t k = 0; k < s.rays.size() && adjacent; ++k)
              if (k != p && k != q && (tight[k] & common) == common) adjacent = false;
            if (!adjacent) continue;
            std::vector<Rat> w(n);
            for (size_t i = 0; i < n; ++i) w[i] = val[p] * s.rays[q][i] - val[q] * s.rays[p][i];
            next.push_back(canon_ray(w));
          }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        s.rays = std::move(next);
      }
    }
    done.push_back(row);
  }
  return s;
}

std::vector<std::vector<Rat>> dual_generator_vectors(const lat::NSLattice& l,
                                                     const std::vector<DivisorClass>& gens) {
  std::vector<std::vector<Rat>> rows;
  rows.reserve(gens.size());
  for (const auto& g : gens) rows.push_back(pairing_normal(l, g.coeffs()));
  DDState s = dd_cone(rows, l.rank());
  std::vector<std::vector<Rat>> out = s.rays;
  for (const auto& l0 : s.lin) {
    out.push_back(canon_ray(l0));
    std::vector<Rat> neg(l0.size());
    for (size_t i = 0; i < l0.size(); ++i) neg[i] = -l0[i];
    out.push_back(canon_ray(neg));
  }
  return out;
}

}  // namespace

struct Cone::Cache {
  std::once_flag flag;
  std::vector<std::vector<Rat>> dual;
};

Cone::Cone(LatticePtr lattice, std::vector<DivisorClass> generators)
    : lattice_(std::move(lattice)), cache_(std::make_shared<Cache>()) {
  if (!lattice_) fail(Errc::precondition, "cone needs a lattice");
  if (lattice_->rank() > kMaxRank) fail(Errc::precondition, "lattice rank exceeds the cone engine cap");
  std::vector<std::vector<Int>> rays;
  for (const auto& g : generators) {
    if (!(*g.lattice() == *lattice_)) fail(Errc::lattice_mismatch, "generator from a different lattice");
    std::vector<Int> r = primitive_ray(g.coeffs());
    bool zero = std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; });
    if (zero) fail(Errc::degenerate_input, "zero generator");
    rays.push_back(std::move(r));
  }
  std::sort(rays.begin(), rays.end(), lex_less);
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  for (auto& r : rays) gens_.emplace_back(lattice_, to_rat(r));
}

size_t Cone::dim() const {
  if (gens_.empty()) return 0;
  MatQ m;
  for (const auto& g : gens_) m.push_back(g.coeffs());
  return rank(m);
}

bool Cone::operator==(const Cone& o) const {
  if (!(*lattice_ == *o.lattice_)) return false;
  if (gens_.size() != o.gens_.size()) return false;
  for (size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].coeffs() != o.gens_[i].coeffs()) return false;
  return true;
}

const std::vector<std::vector<Rat>>& dual_gens_of(const Cone& c) {
  std::call_once(c.cache_->flag, [&c] {
    c.cache_->dual = dual_generator_vectors(*c.lattice_, c.gens_);
  });
  return c.cache_->dual;
}

Cone dual_cone(const Cone& c) {
  if (c.generators().empty()) fail(Errc::degenerate_input, "dual of the zero cone");
  const auto& vecs = dual_gens_of(c);
  std::vector<DivisorClass> gens;
  gens.reserve(vecs.size());
  for (const auto& v : vecs) gens.emplace_back(c.lattice(), v);
  return Cone(c.lattice(), std::move(gens));
}

Membership membership(const Cone& c, const DivisorClass& d) {
  if (!(*d.lattice() == *c.lattice())) fail(Errc::lattice_mismatch, "class from a different lattice");
  Membership out;
  for (const auto& y : dual_gens_of(c)) {
    DivisorClass yc(c.lattice(), y);
    if (intersect(yc, d) < 0) {
      out.certificate = std::move(yc);
      return out;
    }
  }
  out.inside = true;
  return out;
}

bool contains(const Cone& c, const DivisorClass& d) { return membership(c, d).inside; }

bool is_dual_pair(const Cone& a, const Cone& b) {
  if (!(*a.lattice() == *b.lattice())) fail(Errc::lattice_mismatch, "cones over different lattices");
  if (a.generators().empty() || b.generators().empty())
    fail(Errc::degenerate_input, "dual pairing against the zero cone");
  // Compare extremal rays so redundant generator lists still pair correctly.
  Cone da = dual_cone(a);
  Cone db = dual_cone(b);
  return dual_cone(db) == da && dual_cone(da) == db;
}

bool nakai_ample(const DivisorClass& d, const std::vector<DivisorClass>& effective_gens) {
  if (effective_gens.empty()) fail(Errc::precondition, "empty effective generator list");
  if (intersect(d, d) <= 0) return false;
  for (const auto& c : effective_gens)
    if (intersect(d, c) <= 0) return false;
  return true;
}

std::vector<MinDegreeCell> subdivide_by_min_degree(const Cone& nef,
                                                   const std::vector<DivisorClass>& candidates) {
  if (candidates.empty()) fail(Errc::precondition, "no candidates to subdivide by");
  for (const auto& c : candidates)
    if (!(*c.lattice() == *nef.lattice())) fail(Errc::lattice_mismatch, "candidate from a different lattice");

  const auto& l = *nef.lattice();
  std::vector<std::vector<Rat>> nef_rows;
  for (const auto& y : dual_gens_of(nef)) nef_rows.push_back(pairing_normal(l, y));

  std::vector<MinDegreeCell> out;
  for (size_t k = 0; k < candidates.size(); ++k) {
    std::vector<std::vector<Rat>> rows = nef_rows;
    for (size_t j = 0; j < candidates.size(); ++j) {
      if (j == k) continue;
      std::vector<Rat> diff(l.rank());
      for (size_t i = 0; i < l.rank(); ++i)
        diff[i] = candidates[j].coeffs()[i] - candidates[k].coeffs()[i];
      rows.push_back(pairing_normal(l, diff));
    }
    DDState s = dd_cone(rows, l.rank());
    std::vector<DivisorClass> gens;
    for (const auto& r : s.rays) gens.emplace_back(nef.lattice(), r);
    for (const auto& v : s.lin) {
      gens.emplace_back(nef.lattice(), v);
      std::vector<Rat> neg(v.size());
      for (size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
      gens.emplace_back(nef.lattice(), neg);
    }
    if (gens.empty()) continue;
    out.push_back({k, Cone(nef.lattice(), std::move(gens))});
  }
  return out;
}

DivisorClass sample_interior(const Cone& c) {
  if (!c.full_dimensional()) fail(Errc::degenerate_input, "interior sample of a lower-dimensional cone");
  std::vector<Rat> sum(c.lattice()->rank(), Rat(0));
  for (const auto& g : c.generators())
    for (size_t i = 0; i < sum.size(); ++i) sum[i] += g.coeffs()[i];
  return DivisorClass(c.lattice(), to_rat(primitive_ray(sum)));
}

Cone cone_from_exprs(const lat::Preset& p, const std::vector<std::string>& exprs) {
  std::vector<DivisorClass> gens;
  gens.reserve(exprs.size());
  for (const auto& e : exprs) gens.push_back(lat::parse_class_expr(p, e));
  return Cone(p.lattice, std::move(gens));
}

}  // namespace cone
}  // namespace rapprox
