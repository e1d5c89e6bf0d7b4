#include "rapprox/nslattice.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rapprox {
namespace lat {
namespace {

bool valid_label(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
  }
  return true;
}

MatQ gram_as_q(const NSLattice& l) {
  MatQ m(l.rank(), std::vector<Rat>(l.rank()));
  for (size_t i = 0; i < l.rank(); ++i)
    for (size_t j = 0; j < l.rank(); ++j) m[i][j] = Rat(l.gram()[i][j]);
  return m;
}

bool same_lattice(const LatticePtr& a, const LatticePtr& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace

NSLattice::NSLattice(std::vector<std::string> labels, std::vector<std::vector<Int>> gram)
    : labels_(std::move(labels)), gram_(std::move(gram)) {
  size_t n = labels_.size();
  if (n == 0) fail(Errc::invalid_configuration, "lattice needs at least one basis class");
  for (const auto& l : labels_) {
    if (!valid_label(l)) fail(Errc::invalid_configuration, "bad basis label '" + l + "'");
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (labels_[i] == labels_[j]) fail(Errc::invalid_configuration, "duplicate basis label '" + labels_[i] + "'");
  if (gram_.size() != n) fail(Errc::invalid_configuration, "gram size does not match basis size");
  for (const auto& row : gram_) {
    if (row.size() != n) fail(Errc::invalid_configuration, "gram matrix is not square");
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < i; ++j)
      if (gram_[i][j] != gram_[j][i]) fail(Errc::invalid_configuration, "gram matrix is not symmetric");
  if (rapprox::rank(gram_as_q(*this)) != n) fail(Errc::singular_gram, "gram matrix is singular");
}

Signature NSLattice::signature() const { return symmetric_signature(gram_as_q(*this)); }

bool NSLattice::hodge_signature() const {
  Signature s = signature();
  return s.positive == 1 && s.zero == 0 && s.negative == static_cast<int>(rank()) - 1;
}

DivisorClass::DivisorClass(LatticePtr lattice, std::vector<Rat> coeffs)
    : c_(std::move(coeffs)), lat_(std::move(lattice)) {
  if (!lat_) fail(Errc::invalid_configuration, "divisor class needs a lattice");
  if (c_.size() != lat_->rank()) fail(Errc::dimension_mismatch, "coefficient count does not match lattice rank");
}

DivisorClass::DivisorClass(LatticePtr lattice, std::vector<Int> coeffs)
    : DivisorClass(std::move(lattice), to_rat(coeffs)) {}

bool DivisorClass::is_integral() const {
  for (const Rat& x : c_)
    if (x.get_den() != 1) return false;
  return true;
}

bool DivisorClass::is_zero() const {
  for (const Rat& x : c_)
    if (x != 0) return false;
  return true;
}

DivisorClass DivisorClass::operator+(const DivisorClass& o) const {
  if (!same_lattice(lat_, o.lat_)) fail(Errc::lattice_mismatch, "adding classes on different lattices");
  std::vector<Rat> r(c_);
  for (size_t i = 0; i < r.size(); ++i) r[i] += o.c_[i];
  return DivisorClass(lat_, std::move(r));
}

DivisorClass DivisorClass::operator-(const DivisorClass& o) const {
  if (!same_lattice(lat_, o.lat_)) fail(Errc::lattice_mismatch, "subtracting classes on different lattices");
  std::vector<Rat> r(c_);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= o.c_[i];
  return DivisorClass(lat_, std::move(r));
}

DivisorClass DivisorClass::operator*(const Int& k) const {
  std::vector<Rat> r(c_);
  for (Rat& x : r) x *= Rat(k);
  return DivisorClass(lat_, std::move(r));
}

bool DivisorClass::operator==(const DivisorClass& o) const {
  return same_lattice(lat_, o.lat_) && c_ == o.c_;
}

std::string DivisorClass::str() const {
  std::ostringstream out;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    Rat a = c_[i];
    if (first) {
      if (a < 0) out << "-";
    } else {
      out << (a < 0 ? " - " : " + ");
    }
    Rat mag = abs(a);
    if (mag != 1) out << mag.get_str() << "*";
    out << lat_->labels()[i];
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

Rat intersect(const DivisorClass& a, const DivisorClass& b) {
  if (!same_lattice(a.lattice(), b.lattice())) fail(Errc::lattice_mismatch, "pairing classes on different lattices");
  const auto& g = a.lattice()->gram();
  Rat total = 0;
  for (size_t i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()[i] == 0) continue;
    Rat row = 0;
    for (size_t j = 0; j < b.coeffs().size(); ++j) {
      if (b.coeffs()[j] == 0) continue;
      row += Rat(g[i][j]) * b.coeffs()[j];
    }
    total += a.coeffs()[i] * row;
  }
  return total;
}

std::vector<DivisorClass> dual_basis(const LatticePtr& lattice) {
  if (!lattice) fail(Errc::invalid_configuration, "dual basis needs a lattice");
  MatQ inv = inverse(gram_as_q(*lattice));
  std::vector<DivisorClass> out;
  out.reserve(lattice->rank());
  for (size_t i = 0; i < lattice->rank(); ++i) {
    std::vector<Rat> col(lattice->rank());
    for (size_t j = 0; j < lattice->rank(); ++j) col[j] = inv[j][i];
    out.emplace_back(lattice, std::move(col));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

struct PresetBuilder {
  Preset p;

  void lattice(std::vector<std::string> labels, std::vector<std::vector<Int>> gram) {
    p.lattice = std::make_shared<NSLattice>(std::move(labels), std::move(gram));
    // Basis classes are named after themselves.
    for (size_t i = 0; i < p.lattice->rank(); ++i) {
      std::vector<Rat> c(p.lattice->rank());
      c[i] = 1;
      add(p.lattice->labels()[i], std::move(c));
    }
  }

  void add(const std::string& label, std::vector<Rat> coeffs) {
    if (p.classes.count(label)) fail(Errc::invalid_configuration, "duplicate class label '" + label + "'");
    p.classes.emplace(label, DivisorClass(p.lattice, std::move(coeffs)));
    p.class_order.push_back(label);
  }

  void add(const std::string& label, const DivisorClass& d) { add(label, std::vector<Rat>(d.coeffs())); }
};

std::vector<Rat> coeffs4(long a, long b, long c, long d) {
  return {Rat(a), Rat(b), Rat(c), Rat(d)};
}

}  // namespace

Preset preset_hirzebruch(long n) {
  if (n < 0) fail(Errc::precondition, "hirzebruch needs n >= 0");
  PresetBuilder b;
  b.p.name = "hirzebruch:" + std::to_string(n);
  b.lattice({"S", "F"}, {{-n, 1}, {1, 0}});
  b.add("D", {Rat(1), Rat(n)});
  b.p.effective = {"S", "F"};
  b.p.nef = {"F", "D"};
  return b.p;
}

Preset preset_simple_fibres(long n, long k) {
  // Blowup of the n-th Hirzebruch surface at k points in distinct fibres,
  // none on the (-n)-section; needs k < n.  Basis (S, F, E_1..E_k).
  if (n < 2 || k < 1 || k >= n) fail(Errc::precondition, "simplefibres needs n >= 2 and 1 <= k < n");
  if (n > 9) fail(Errc::precondition, "simplefibres supports n <= 9");
  size_t rank = static_cast<size_t>(k) + 2;
  std::vector<std::string> labels = {"S", "F"};
  for (long i = 1; i <= k; ++i) labels.push_back("E" + std::to_string(i));
  std::vector<std::vector<Int>> gram(rank, std::vector<Int>(rank, 0));
  gram[0][0] = -n;
  gram[0][1] = gram[1][0] = 1;
  for (size_t i = 2; i < rank; ++i) gram[i][i] = -1;
  PresetBuilder b;
  b.p.name = "simplefibres:" + std::to_string(n) + ":" + std::to_string(k);
  b.lattice(std::move(labels), std::move(gram));
  b.p.effective = {"S"};
  for (long i = 1; i <= k; ++i) {
    // F_i is the fibre component through the i-th point that meets S.
    std::vector<Rat> fi(rank);
    fi[1] = 1;
    fi[static_cast<size_t>(i) + 1] = -1;
    b.add("F" + std::to_string(i), std::move(fi));
    b.p.effective.push_back("E" + std::to_string(i));
    b.p.effective.push_back("F" + std::to_string(i));
  }
  b.p.nef = {"F"};
  for (long mask = 0; mask < (1L << k); ++mask) {
    std::vector<Rat> d(rank);
    d[0] = 1;
    d[1] = n;
    std::string bits;
    for (long i = 0; i < k; ++i) {
      bool on = (mask >> i) & 1;
      bits += on ? '1' : '0';
      if (on) d[static_cast<size_t>(i) + 2] = -1;
    }
    b.add("D" + bits, std::move(d));
    b.p.nef.push_back("D" + bits);
  }
  return b.p;
}

Preset preset_case1(long n) {
  // Two reducible fibres of two components each; E_2, F_2 miss the section.
  // Basis (F, E2, F2, S).  For n = 1 the surface is the three-point blowup
  // of the plane and its effective cone picks up a sixth generator, so that
  // shape lives under blowupP2(3) instead.
  if (n < 2) fail(Errc::precondition, "case1 needs n >= 2; use blowupP2:3 for the n = 1 surface");
  PresetBuilder b;
  b.p.name = "case1:" + std::to_string(n);
  b.lattice({"F", "E2", "F2", "S"},
            {{0, 0, 0, 1}, {0, -1, 0, 0}, {0, 0, -1, 0}, {1, 0, 0, -n}});
  b.add("E1", coeffs4(1, -1, 0, 0));
  b.add("F1", coeffs4(1, 0, -1, 0));
  b.add("D2", coeffs4(n, 0, 0, 1));
  b.add("D1", coeffs4(n, -1, 0, 1));
  b.add("D1'", coeffs4(n, 0, -1, 1));
  b.add("D0", coeffs4(n, -1, -1, 1));
  b.p.effective = {"S", "E1", "E2", "F1", "F2"};
  b.p.nef = {"F", "D2", "D1", "D1'", "D0"};
  return b.p;
}

Preset preset_case2(long n) {
  // One reducible fibre of three components in an F shape: F1 meets the
  // section and both E_i.  Basis (S, E1, E2, F).
  if (n < 1) fail(Errc::precondition, "case2 needs n >= 1");
  PresetBuilder b;
  b.p.name = "case2:" + std::to_string(n);
  b.lattice({"S", "E1", "E2", "F"},
            {{-n, 0, 0, 1}, {0, -1, 0, 0}, {0, 0, -1, 0}, {1, 0, 0, 0}});
  b.add("F1", coeffs4(0, -1, -1, 1));
  b.add("D1", coeffs4(1, 0, 0, n));
  b.add("D2", coeffs4(1, -1, 0, n));
  b.add("D3", coeffs4(1, 0, -1, n));
  b.p.effective = {"S", "F1", "E1", "E2"};
  b.p.nef = {"F", "D1", "D2", "D3"};
  return b.p;
}

Preset preset_case3(long n, bool multiple) {
  // One reducible fibre of three components in an H shape: E1 meets the
  // section, E2 is the crossbar, E3 hangs off E2.  Basis (S, E2, E3, F).
  // With `multiple` the crossbar enters the fibre with multiplicity two
  // (F = E1 + 2 E2 + E3), which changes the self-intersections.
  if (multiple ? n < 1 : n < 2)
    fail(Errc::precondition, multiple ? "case3 multiple needs n >= 1" : "case3 needs n >= 2");
  PresetBuilder b;
  b.p.name = "case3:" + std::to_string(n) + (multiple ? ":multiple" : "");
  if (multiple) {
    b.lattice({"S", "E2", "E3", "F"},
              {{-n, 0, 0, 1}, {0, -1, 1, 0}, {0, 1, -2, 0}, {1, 0, 0, 0}});
    b.add("E1", coeffs4(0, -2, -1, 1));
    b.add("D1", coeffs4(1, 0, 0, n));
    b.add("D2", coeffs4(2, -2, -1, 2 * n));
    b.add("D3", coeffs4(1, -1, -1, n));
  } else {
    b.lattice({"S", "E2", "E3", "F"},
              {{-n, 0, 0, 1}, {0, -2, 1, 0}, {0, 1, -1, 0}, {1, 0, 0, 0}});
    b.add("E1", coeffs4(0, -1, -1, 1));
    b.add("D1", coeffs4(1, -1, -2, n));
    b.add("D2", coeffs4(1, -1, -1, n));
    b.add("D3", coeffs4(1, 0, 0, n));
  }
  b.p.effective = {"S", "E1", "E2", "E3"};
  b.p.nef = {"F", "D1", "D2", "D3"};
  return b.p;
}

Preset preset_blowup_p2(long r) {
  // Plane blown up at r general points; basis (L, E_1..E_r).
  if (r < 0 || r > 5) fail(Errc::precondition, "blowupP2 needs 0 <= r <= 5");
  size_t rank = static_cast<size_t>(r) + 1;
  std::vector<std::string> labels = {"L"};
  for (long i = 1; i <= r; ++i) labels.push_back("E" + std::to_string(i));
  std::vector<std::vector<Int>> gram(rank, std::vector<Int>(rank, 0));
  gram[0][0] = 1;
  for (size_t i = 1; i < rank; ++i) gram[i][i] = -1;
  PresetBuilder b;
  b.p.name = "blowupP2:" + std::to_string(r);
  b.lattice(std::move(labels), std::move(gram));

  auto cls = [&](long l0, std::vector<long> drop) {
    std::vector<Rat> c(rank);
    c[0] = l0;
    for (long i : drop) c[static_cast<size_t>(i)] -= 1;
    return c;
  };

  for (long i = 1; i <= r; ++i) b.add("L" + std::to_string(i), cls(1, {i}));
  if (r == 2) b.add("S", cls(1, {1, 2}));
  if (r >= 3) {
    for (long i = 1; i <= r; ++i)
      for (long j = i + 1; j <= r; ++j)
        if (r < 5) b.add("L" + std::to_string(i) + std::to_string(j), cls(1, {i, j}));
    std::vector<long> all;
    for (long i = 1; i <= r; ++i) all.push_back(i);
    if (r == 3) b.add("F", cls(2, all));
    if (r == 4) {
      b.add("D", cls(2, all));
      for (long i = 1; i <= 4; ++i) {
        auto c = cls(2, all);
        c[static_cast<size_t>(i)] += 1;
        b.add("D" + std::to_string(i), std::move(c));
      }
    }
    if (r == 5) {
      b.add("E", cls(2, all));
      // C_i = E + E_i, B_i = E + L - E_i, L_ij = E + E_i + E_j: the conic
      // names from the five-point nef description.
      for (long i = 1; i <= 5; ++i) {
        auto c = cls(2, all);
        c[static_cast<size_t>(i)] += 1;
        b.add("C" + std::to_string(i), std::move(c));
      }
      for (long i = 1; i <= 5; ++i) {
        auto c = cls(3, all);
        c[static_cast<size_t>(i)] -= 1;
        b.add("B" + std::to_string(i), std::move(c));
      }
      for (long i = 1; i <= 5; ++i)
        for (long j = i + 1; j <= 5; ++j) {
          auto c = cls(2, all);
          c[static_cast<size_t>(i)] += 1;
          c[static_cast<size_t>(j)] += 1;
          b.add("L" + std::to_string(i) + std::to_string(j), std::move(c));
        }
    }
  }

  for (long i = 1; i <= r; ++i) b.p.effective.push_back("E" + std::to_string(i));
  for (long i = 1; i <= r; ++i)
    for (long j = i + 1; j <= r; ++j)
      b.p.effective.push_back("L-E" + std::to_string(i) + "-E" + std::to_string(j));
  if (r == 5) b.p.effective.push_back("E");
  if (r == 0) b.p.effective = {"L"};
  if (r == 1) b.p.effective = {"E1", "L1"};

  b.p.nef = {"L"};
  for (long i = 1; i <= r; ++i) b.p.nef.push_back("L" + std::to_string(i));
  if (r == 3) b.p.nef.push_back("F");
  if (r == 4) {
    b.p.nef.push_back("D");
    for (long i = 1; i <= 4; ++i) b.p.nef.push_back("D" + std::to_string(i));
  }
  if (r == 5) {
    for (long i = 1; i <= 5; ++i)
      for (long j = i + 1; j <= 5; ++j) b.p.nef.push_back("L" + std::to_string(i) + std::to_string(j));
    for (long i = 1; i <= 5; ++i) b.p.nef.push_back("C" + std::to_string(i));
    for (long i = 1; i <= 5; ++i) b.p.nef.push_back("B" + std::to_string(i));
  }
  return b.p;
}

Preset preset_k3_quartic_line() {
  // Quartic surface in P^3 containing a line L; E is the elliptic pencil
  // cut by planes through L.  Basis (E, L).
  PresetBuilder b;
  b.p.name = "k3QuarticLine";
  b.lattice({"E", "L"}, {{0, 3}, {3, -2}});
  b.add("D", {Rat(2), Rat(3)});
  b.add("H", {Rat(1), Rat(1)});
  b.p.effective = {"E", "L"};
  b.p.nef = {"E", "D"};
  return b.p;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

long parse_long(const std::string& s) {
  if (s.empty()) fail(Errc::precondition, "empty preset parameter");
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    fail(Errc::precondition, "bad preset parameter '" + s + "'");
  }
  if (pos != s.size()) fail(Errc::precondition, "bad preset parameter '" + s + "'");
  return v;
}

}  // namespace

Preset parse_preset(const std::string& spelled) {
  auto parts = split(spelled, ':');
  const std::string& family = parts[0];
  size_t argc = parts.size() - 1;
  auto want = [&](size_t n) {
    if (argc != n)
      fail(Errc::precondition, "preset '" + family + "' takes " + std::to_string(n) + " parameter(s)");
  };
  if (family == "hirzebruch") {
    want(1);
    return preset_hirzebruch(parse_long(parts[1]));
  }
  if (family == "simplefibres") {
    want(2);
    return preset_simple_fibres(parse_long(parts[1]), parse_long(parts[2]));
  }
  if (family == "case1") {
    want(1);
    return preset_case1(parse_long(parts[1]));
  }
  if (family == "case2") {
    want(1);
    return preset_case2(parse_long(parts[1]));
  }
  if (family == "case3") {
    if (argc == 2 && parts[2] == "multiple") return preset_case3(parse_long(parts[1]), true);
    want(1);
    return preset_case3(parse_long(parts[1]), false);
  }
  if (family == "blowupP2" || family == "blowup_p2") {
    want(1);
    return preset_blowup_p2(parse_long(parts[1]));
  }
  if (family == "k3QuarticLine" || family == "k3_quartic_line") {
    want(0);
    return preset_k3_quartic_line();
  }
  fail(Errc::invalid_configuration, "unknown preset family '" + family + "'");
}

std::vector<std::string> preset_catalog() {
  return {
      "hirzebruch:<n>",        "simplefibres:<n>:<k>", "case1:<n>",
      "case2:<n>",             "case3:<n>[:multiple]", "blowupP2:<r>",
      "k3QuarticLine",
  };
}

// ---------------------------------------------------------------------------
// Class expressions

namespace {

struct ExprParser {
  const Preset& preset;
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos == s.size();
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  Int number() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail(Errc::invalid_configuration, "expected a number in class expression '" + s + "'");
    return Int(s.substr(start, pos - start));
  }

  const DivisorClass& named() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\''))
      ++pos;
    std::string name = s.substr(start, pos - start);
    auto it = preset.classes.find(name);
    if (it == preset.classes.end())
      fail(Errc::invalid_configuration, "unknown class '" + name + "' in expression '" + s + "'");
    return it->second;
  }

  // term := [rational ['*']] label | rational
  void term(std::vector<Rat>& acc, int sign) {
    Rat coeff = sign;
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Int num = number();
      Int den = 1;
      if (peek() == '/') {
        ++pos;
        den = number();
      }
      coeff *= make_rat(num, den);
      if (peek() == '*') ++pos;
      c = peek();
      if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') {
        fail(Errc::invalid_configuration, "expected a class name in expression '" + s + "'");
      }
    }
    const DivisorClass& d = named();
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += coeff * d.coeffs()[i];
  }

  DivisorClass run() {
    std::vector<Rat> acc(preset.lattice->rank());
    int sign = 1;
    if (peek() == '-') {
      sign = -1;
      ++pos;
    } else if (peek() == '+') {
      ++pos;
    }
    term(acc, sign);
    while (!at_end()) {
      char c = peek();
      if (c == '+') {
        sign = 1;
      } else if (c == '-') {
        sign = -1;
      } else {
        fail(Errc::invalid_configuration, "expected + or - in expression '" + s + "'");
      }
      ++pos;
      term(acc, sign);
    }
    return DivisorClass(preset.lattice, std::move(acc));
  }
};

}  // namespace

DivisorClass parse_class_expr(const Preset& preset, const std::string& expr) {
  ExprParser p{preset, expr};
  return p.run();
}

// ---------------------------------------------------------------------------
// Fiber trees

void validate(const FiberTree& t) {
  size_t m = t.nodes.size();
  if (m == 0) fail(Errc::invalid_configuration, "fiber tree needs at least one component");
  if (t.n <= static_cast<long>(m)) fail(Errc::invalid_configuration, "fiber tree needs section parameter n above the component count");
  if (t.nodes[0].parent != -1) fail(Errc::invalid_configuration, "first component must be the root");
  for (size_t i = 1; i < m; ++i) {
    int p = t.nodes[i].parent;
    if (p < 0 || static_cast<size_t>(p) >= i)
      fail(Errc::invalid_configuration, "parents must precede children in the component order");
  }
  for (size_t i = 0; i < m; ++i) {
    if (!valid_label(t.nodes[i].label)) fail(Errc::invalid_configuration, "bad component label");
    long self = t.nodes[i].self;
    if (m == 1 ? self != 0 : self > -1)
      fail(Errc::invalid_configuration, "component self-intersections must be negative (zero for an irreducible fibre)");
  }
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      if (t.nodes[i].label == t.nodes[j].label)
        fail(Errc::invalid_configuration, "duplicate component label '" + t.nodes[i].label + "'");
}

LatticePtr tree_lattice(const FiberTree& t) {
  validate(t);
  size_t m = t.nodes.size();
  std::vector<std::string> labels = {"S"};
  for (const auto& node : t.nodes) labels.push_back(node.label);
  std::vector<std::vector<Int>> gram(m + 1, std::vector<Int>(m + 1, 0));
  gram[0][0] = -t.n;
  gram[0][1] = gram[1][0] = 1;  // only the root component meets the section
  for (size_t i = 0; i < m; ++i) {
    gram[i + 1][i + 1] = t.nodes[i].self;
    if (t.nodes[i].parent >= 0) {
      size_t p = static_cast<size_t>(t.nodes[i].parent);
      gram[i + 1][p + 1] = gram[p + 1][i + 1] = 1;
    }
  }
  return std::make_shared<NSLattice>(std::move(labels), std::move(gram));
}

std::vector<Int> fiber_multiplicities(const FiberTree& t) {
  validate(t);
  size_t m = t.nodes.size();
  MatQ g(m, std::vector<Rat>(m));
  for (size_t i = 0; i < m; ++i) {
    g[i][i] = Rat(t.nodes[i].self);
    if (t.nodes[i].parent >= 0) {
      size_t p = static_cast<size_t>(t.nodes[i].parent);
      g[i][p] = g[p][i] = 1;
    }
  }
  auto ker = kernel_basis(g, m);
  if (ker.size() != 1)
    fail(Errc::invalid_configuration, "component pairing does not determine a unique fibre class");
  std::vector<Rat> v = ker[0];
  if (v[0] == 0) fail(Errc::invalid_configuration, "fibre class misses the root component");
  // Normalize so the root has multiplicity one.
  Rat root = v[0];
  std::vector<Int> mults;
  mults.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    Rat mi = v[i] / root;
    if (mi.get_den() != 1 || mi <= 0)
      fail(Errc::invalid_configuration, "fibre multiplicities must be positive integers");
    mults.push_back(mi.get_num());
  }
  return mults;
}

DivisorClass fiber_class(const FiberTree& t) {
  auto mults = fiber_multiplicities(t);
  auto lattice = tree_lattice(t);
  std::vector<Rat> c(t.nodes.size() + 1);
  for (size_t i = 0; i < mults.size(); ++i) c[i + 1] = Rat(mults[i]);
  return DivisorClass(lattice, std::move(c));
}

namespace {

bool is_ancestor_or_self(const FiberTree& t, size_t anc, size_t node) {
  // Walks rootward from `node`.
  size_t cur = node;
  while (true) {
    if (cur == anc) return true;
    int p = t.nodes[cur].parent;
    if (p < 0) return false;
    cur = static_cast<size_t>(p);
  }
}

std::vector<char> subtree_mask(const FiberTree& t, size_t root) {
  std::vector<char> in(t.nodes.size(), 0);
  in[root] = 1;
  // Parents precede children, so one forward pass settles membership.
  for (size_t i = root + 1; i < t.nodes.size(); ++i) {
    int p = t.nodes[i].parent;
    if (p >= 0 && in[static_cast<size_t>(p)]) in[i] = 1;
  }
  return in;
}

}  // namespace

ComparisonWitness verify_multiple_gens(const FiberTree& t, size_t i, size_t j) {
  validate(t);
  size_t m = t.nodes.size();
  if (i >= m || j >= m) fail(Errc::precondition, "component index out of range");
  if (!is_ancestor_or_self(t, j, i))
    fail(Errc::precondition, "second component must lie on the root path of the first");

  auto mults = fiber_multiplicities(t);
  auto lattice = tree_lattice(t);
  auto duals = dual_basis(lattice);

  ComparisonWitness w;
  w.comparable = true;
  w.adjacent = i != j && t.nodes[i].parent == static_cast<int>(j);

  DivisorClass diff = duals[j + 1] * mults[i] - duals[i + 1] * mults[j];
  w.witness = diff.coeffs();
  w.supported_on_fiber = w.witness[0] == 0;
  w.effective = true;
  for (const Rat& x : w.witness)
    if (x < 0) w.effective = false;

  if (w.adjacent) {
    auto in = subtree_mask(t, i);
    w.adjacency_identity = w.witness[0] == 0;
    for (size_t k = 0; k < m && w.adjacency_identity; ++k) {
      Rat expect = in[k] ? Rat(mults[k]) : Rat(0);
      if (w.witness[k + 1] != expect) w.adjacency_identity = false;
    }
  }
  return w;
}

FiberTree blowdown(const FiberTree& t, size_t idx) {
  validate(t);
  size_t m = t.nodes.size();
  if (idx >= m) fail(Errc::precondition, "component index out of range");
  if (idx == 0) fail(Errc::precondition, "cannot contract the component meeting the section");
  if (t.nodes[idx].self != -1) fail(Errc::precondition, "only (-1)-components contract");
  std::vector<size_t> children;
  for (size_t k = 0; k < m; ++k)
    if (k != idx && t.nodes[k].parent == static_cast<int>(idx)) children.push_back(k);
  if (children.size() > 1)
    fail(Errc::precondition, "component meets more than two others; contraction would leave a cycle");

  size_t parent = static_cast<size_t>(t.nodes[idx].parent);
  FiberTree out;
  out.n = t.n;
  for (size_t k = 0; k < m; ++k) {
    if (k == idx) continue;
    FiberTree::Node node = t.nodes[k];
    if (k == parent || (!children.empty() && k == children[0])) node.self += 1;
    if (node.parent == static_cast<int>(idx)) node.parent = static_cast<int>(parent);
    if (node.parent > static_cast<int>(idx)) node.parent -= 1;
    out.nodes.push_back(node);
  }
  validate(out);
  return out;
}

DivisorClass pullback_class(const FiberTree& before, size_t idx, const DivisorClass& on_after) {
  validate(before);
  FiberTree after = blowdown(before, idx);
  auto after_lattice = tree_lattice(after);
  if (!(*on_after.lattice() == *after_lattice))
    fail(Errc::lattice_mismatch, "class does not live on the contracted-tree lattice");

  size_t m = before.nodes.size();
  std::vector<Rat> c(m + 1);
  c[0] = on_after.coeffs()[0];
  for (size_t k = 0, pos = 1; k < m; ++k) {
    if (k == idx) continue;
    c[k + 1] = on_after.coeffs()[pos++];
  }
  // The contracted coordinate is the sum over the components that met it.
  Rat total = 0;
  size_t parent = static_cast<size_t>(before.nodes[idx].parent);
  total += c[parent + 1];
  for (size_t k = 0; k < m; ++k)
    if (k != idx && before.nodes[k].parent == static_cast<int>(idx)) total += c[k + 1];
  c[idx + 1] = total;
  return DivisorClass(tree_lattice(before), std::move(c));
}

GrownTree random_fiber_tree(Rng& rng, size_t max_components) {
  if (max_components < 1) fail(Errc::precondition, "need at least one component");
  size_t target = 1 + static_cast<size_t>(rng.below(max_components));

  // Grow with free-form parent pointers, canonicalize at the end.
  struct Raw {
    long self;
    int parent;
  };
  std::vector<Raw> nodes = {{0, -1}};
  std::vector<Int> mults = {Int(1)};

  while (nodes.size() < target) {
    // Moves: blow up a smooth point of a multiplicity-one component
    // (keeps every leaf at multiplicity one), or the crossing point of an
    // adjacent pair (the new component picks up the sum of their
    // multiplicities).
    struct Move {
      bool edge;
      size_t a;  // component, or child end of the edge
    };
    std::vector<Move> moves;
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (mults[i] == 1) moves.push_back({false, i});
      if (nodes[i].parent >= 0) moves.push_back({true, i});
    }
    const Move& mv = moves[rng.below(moves.size())];
    if (!mv.edge) {
      nodes[mv.a].self -= 1;
      nodes.push_back({-1, static_cast<int>(mv.a)});
      mults.push_back(1);
    } else {
      size_t c = mv.a;
      size_t p = static_cast<size_t>(nodes[c].parent);
      nodes[c].self -= 1;
      nodes[p].self -= 1;
      nodes.push_back({-1, static_cast<int>(p)});
      nodes[c].parent = static_cast<int>(nodes.size() - 1);
      mults.push_back(mults[c] + mults[p]);
    }
  }

  // Breadth-first renumbering so parents precede children.
  size_t m = nodes.size();
  std::vector<std::vector<size_t>> kids(m);
  size_t root = 0;
  for (size_t i = 0; i < m; ++i) {
    if (nodes[i].parent >= 0)
      kids[static_cast<size_t>(nodes[i].parent)].push_back(i);
    else
      root = i;
  }
  std::vector<size_t> order = {root};
  for (size_t head = 0; head < order.size(); ++head)
    for (size_t k : kids[order[head]]) order.push_back(k);
  std::vector<size_t> where(m);
  for (size_t pos = 0; pos < m; ++pos) where[order[pos]] = pos;

  GrownTree out;
  out.tree.n = static_cast<long>(m) + 1 + static_cast<long>(rng.below(3));
  out.tree.nodes.resize(m);
  out.mults.resize(m);
  for (size_t pos = 0; pos < m; ++pos) {
    size_t old = order[pos];
    out.tree.nodes[pos].label = "E" + std::to_string(pos + 1);
    out.tree.nodes[pos].self = nodes[old].self;
    out.tree.nodes[pos].parent = nodes[old].parent < 0 ? -1 : static_cast<int>(where[static_cast<size_t>(nodes[old].parent)]);
    out.mults[pos] = mults[old];
  }
  validate(out.tree);
  return out;
}

}  // namespace lat
}  // namespace rapprox
