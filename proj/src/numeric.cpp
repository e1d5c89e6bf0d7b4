#include "rapprox/numeric.hpp"

#include <cmath>
#include <sstream>

namespace rapprox {

namespace {

// Common denominator clearing: returns integer vector proportional to v.
std::vector<Int> clear_denominators(const std::vector<Rat>& v) {
  Int den = 1;
  for (const Rat& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
  std::vector<Int> out;
  out.reserve(v.size());
  for (const Rat& x : v) out.push_back(Int(x.get_num() * (den / x.get_den())));
  return out;
}

}  // namespace

std::vector<Int> primitive_ray(const std::vector<Rat>& v) {
  std::vector<Int> w = clear_denominators(v);
  Int g = gcd_all(w);
  if (g == 0) return w;
  for (Int& x : w) x /= g;
  return w;
}

std::vector<Int> primitive_signed(const std::vector<Rat>& v) {
  std::vector<Int> w = primitive_ray(v);
  for (const Int& x : w) {
    if (x == 0) continue;
    if (x < 0)
      for (Int& y : w) y = -y;
    break;
  }
  return w;
}

bool lex_less(const std::vector<Int>& a, const std::vector<Int>& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

std::string join_ints(const std::vector<Int>& v, char sep) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << sep;
    os << v[i].get_str();
  }
  return os.str();
}

double log_int(const Int& x) {
  if (x <= 0) fail(Errc::precondition, "log of nonpositive integer");
  long exp = 0;
  double d = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(d) + static_cast<double>(exp) * M_LN2;
}

double log_rat(const Rat& x) {
  if (x <= 0) fail(Errc::precondition, "log of nonpositive rational");
  return log_int(Int(x.get_num())) - log_int(Int(x.get_den()));
}

}  // namespace rapprox
