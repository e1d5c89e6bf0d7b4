#pragma once

// Exact arithmetic primitives shared by every module.  All geometric
// quantities are mpz/mpq; doubles appear only in reports (log columns,
// regression slopes) and never feed back into exact decisions.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rapprox {

using Int = mpz_class;
using Rat = mpq_class;

enum class Errc {
  invalid_point,
  dimension_mismatch,
  lattice_mismatch,
  singular_gram,
  invalid_configuration,
  precondition,
  degenerate_input,
  unsupported,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) fail(Errc::degenerate_input, "rational with zero denominator");
  Rat r;
  r.get_num() = num;
  r.get_den() = den;
  r.canonicalize();
  return r;
}

inline Int gcd_all(const std::vector<Int>& v) {
  Int g = 0;
  for (const Int& x : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

// Scales to integer entries, divides by the gcd, and makes the first nonzero
// entry positive.  Returns the zero vector unchanged.
std::vector<Int> primitive_signed(const std::vector<Rat>& v);

// Positive scaling only: integer entries divided by their gcd, sign kept.
// This is the canonical form for cone ray directions.
std::vector<Int> primitive_ray(const std::vector<Rat>& v);

inline std::vector<Rat> to_rat(const std::vector<Int>& v) {
  std::vector<Rat> out;
  out.reserve(v.size());
  for (const Int& x : v) out.emplace_back(x);
  return out;
}

bool lex_less(const std::vector<Int>& a, const std::vector<Int>& b);

std::string join_ints(const std::vector<Int>& v, char sep);

// log of a positive rational via mpz_get_d_2exp, stable for operands far
// outside double range.
double log_int(const Int& x);
double log_rat(const Rat& x);

// Deterministic splitmix-style generator for property tests and tree
// sampling; fixed seeds keep runs reproducible.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // Uniform in [lo, hi] inclusive.
  long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

private:
  std::uint64_t state_;
};

}  // namespace rapprox
