#include "rapprox/linalg.hpp"

#include "doctest.h"

using namespace rapprox;

namespace {

MatQ matq(std::vector<std::vector<long>> rows) {
  MatQ m;
  for (const auto& r : rows) {
    std::vector<Rat> row;
    for (long x : r) row.emplace_back(x);
    m.push_back(std::move(row));
  }
  return m;
}

}  // namespace

TEST_CASE("rref pivots and rank") {
  MatQ m = matq({{1, 2, 3}, {2, 4, 6}, {1, 1, 1}});
  CHECK(rank(m) == 2);
  auto pivots = rref(m);
  CHECK(pivots == std::vector<size_t>{0, 1});
  CHECK(m[0] == std::vector<Rat>{1, 0, -1});
  CHECK(m[1] == std::vector<Rat>{0, 1, 2});

  CHECK(rank(matq({{0, 0}, {0, 0}})) == 0);
  CHECK(rank(matq({{1, 0}, {0, 1}})) == 2);
}

TEST_CASE("kernel basis follows the free-column convention") {
  auto ker = kernel_basis(matq({{1, 1, 1}}), 3);
  REQUIRE(ker.size() == 2);
  CHECK(ker[0] == std::vector<Rat>{-1, 1, 0});
  CHECK(ker[1] == std::vector<Rat>{-1, 0, 1});

  CHECK(kernel_basis(matq({{1, 0}, {0, 1}}), 2).empty());
  CHECK(kernel_basis(MatQ{}, 2).size() == 2);
}

TEST_CASE("exact inverse") {
  MatQ inv = inverse(matq({{2, 1}, {1, 1}}));
  CHECK(inv == matq({{1, -1}, {-1, 2}}));
  CHECK_THROWS_AS(inverse(matq({{1, 1}, {1, 1}})), Error);

  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    size_t n = 2 + rng.below(3);
    MatQ m(n, std::vector<Rat>(n));
    for (auto& row : m)
      for (auto& x : row) x = make_rat(rng.range(-6, 6), rng.range(1, 4));
    if (rank(m) != n) continue;
    MatQ mi = inverse(m);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        Rat s = 0;
        for (size_t k = 0; k < n; ++k) s += m[i][k] * mi[k][j];
        CHECK(s == (i == j ? 1 : 0));
      }
  }
}

TEST_CASE("signatures of symmetric matrices") {
  auto sig = [](MatQ m) { return symmetric_signature(std::move(m)); };

  Signature s = sig(matq({{1, 0}, {0, -1}}));
  CHECK(s.positive == 1);
  CHECK(s.negative == 1);
  CHECK(s.zero == 0);

  s = sig(matq({{0, 1}, {1, 0}}));  // hyperbolic plane
  CHECK(s.positive == 1);
  CHECK(s.negative == 1);

  s = sig(matq({{0, 0}, {0, 0}}));
  CHECK(s.zero == 2);

  s = sig(matq({{2, 0}, {0, 3}}));
  CHECK(s.positive == 2);

  s = sig(matq({{-2, 1}, {1, 0}}));  // Hirzebruch pairing
  CHECK(s.positive == 1);
  CHECK(s.negative == 1);

  s = sig(matq({{0, 3}, {3, -2}}));
  CHECK(s.positive == 1);
  CHECK(s.negative == 1);

  // Rank-degenerate block mixing all three signs.
  s = sig(matq({{1, 0, 0}, {0, 0, 0}, {0, 0, -5}}));
  CHECK(s.positive == 1);
  CHECK(s.negative == 1);
  CHECK(s.zero == 1);
}

TEST_CASE("dot and mat_vec helpers") {
  CHECK(dot({Rat(1), Rat(2)}, {Rat(3), Rat(4)}) == 11);
  auto v = mat_vec(matq({{1, 2}, {3, 4}}), {Rat(1), Rat(1)});
  CHECK(v == std::vector<Rat>{3, 7});
}
