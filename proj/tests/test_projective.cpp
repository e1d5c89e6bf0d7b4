#include "rapprox/projective.hpp"

#include <algorithm>

#include "doctest.h"

using namespace rapprox;

namespace {

ProjPoint pt(std::vector<long> v) {
  std::vector<Int> c;
  for (long x : v) c.emplace_back(x);
  return ProjPoint::normalize(c);
}

}  // namespace

TEST_CASE("normalize produces the canonical primitive representative") {
  CHECK(pt({2, 4, 6}).coords() == std::vector<Int>{1, 2, 3});
  CHECK(pt({0, -3}).coords() == std::vector<Int>{0, 1});
  CHECK(pt({7, 0, 0}).coords() == std::vector<Int>{1, 0, 0});
  CHECK(pt({-2, 4}).coords() == std::vector<Int>{1, -2});

  CHECK_THROWS_WITH_AS(ProjPoint::normalize(std::vector<Int>{0, 0, 0}), doctest::Contains("zero"),
                       Error);
  CHECK_THROWS_AS(ProjPoint::normalize(std::vector<Int>{5}), Error);
}

TEST_CASE("normalize accepts rational input by clearing denominators") {
  std::vector<Rat> v = {make_rat(1, 2), make_rat(1, 3)};
  CHECK(ProjPoint::normalize(v).coords() == std::vector<Int>{3, 2});
}

TEST_CASE("normalize is idempotent on random points") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Int> raw(2 + rng.below(3));
    bool nonzero = false;
    for (Int& x : raw) {
      x = rng.range(-40, 40);
      if (x != 0) nonzero = true;
    }
    if (!nonzero) continue;
    ProjPoint p = ProjPoint::normalize(raw);
    CHECK(ProjPoint::normalize(p.coords()).coords() == p.coords());
    CHECK(gcd_all(p.coords()) == 1);
  }
}

TEST_CASE("height is the sup norm of the primitive representative") {
  CHECK(height(pt({1, 2, 3})) == 3);
  CHECK(height(pt({0, 1})) == 1);
  CHECK(height(pt({5, 1, 125})) == 125);
  CHECK(height(pt({-9, 2})) == 9);
}

TEST_CASE("height is invariant under coordinate permutation") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Int> raw = {rng.range(-50, 50), rng.range(-50, 50), rng.range(-50, 50)};
    if (raw[0] == 0 && raw[1] == 0 && raw[2] == 0) continue;
    std::vector<Int> rotated = {raw[2], raw[0], raw[1]};
    CHECK(height(ProjPoint::normalize(raw)) == height(ProjPoint::normalize(rotated)));
  }
}

TEST_CASE("distance matches the minor-ratio formula") {
  CHECK(distance(pt({0, 1}), pt({1, 10})) == make_rat(1, 10));
  CHECK(distance(pt({0, 0, 1}), pt({1, 1, 1})) == 1);
  CHECK(distance(pt({0, 0, 1}), pt({5, 1, 125})) == make_rat(1, 25));
  CHECK(distance(pt({1, 1, 1}), pt({1, 1, 1})) == 0);
  CHECK_THROWS_AS(distance(pt({1, 2}), pt({1, 2, 3})), Error);
}

TEST_CASE("distance is a bounded symmetric separating function") {
  Rng rng(13);
  std::vector<ProjPoint> sample;
  while (sample.size() < 40) {
    std::vector<Int> raw = {rng.range(-9, 9), rng.range(-9, 9), rng.range(-9, 9)};
    if (raw[0] == 0 && raw[1] == 0 && raw[2] == 0) continue;
    sample.push_back(ProjPoint::normalize(raw));
  }
  for (const auto& p : sample) {
    for (const auto& q : sample) {
      Rat d = distance(p, q);
      CHECK(d == distance(q, p));
      CHECK(d >= 0);
      CHECK(d <= 2);  // sharp for the minor-ratio formula, e.g. [1:-1] vs [1:1]
      CHECK((d == 0) == (p == q));
      if (!(p == q)) {
        // Exact floor: two distinct rational points cannot be closer than
        // the reciprocal height product.
        CHECK(d * Rat(height(p)) * Rat(height(q)) >= 1);
      }
    }
  }
}

TEST_CASE("affine chart distance agrees with the worked values") {
  CHECK(affine_chart_distance(pt({0, 1}), pt({1, 10}), 1) == make_rat(1, 10));
  CHECK(affine_chart_distance(pt({0, 0, 1}), pt({1, 1, 1}), 2) == 1);
  CHECK(affine_chart_distance(pt({0, 0, 1}), pt({5, 1, 125}), 2) == make_rat(1, 25));
  CHECK_THROWS_AS(affine_chart_distance(pt({0, 1}), pt({1, 1}), 0), Error);
  CHECK_THROWS_AS(affine_chart_distance(pt({1, 1}), pt({1, 1}), 2), Error);
}

TEST_CASE("chart and projective distances stay within bounded ratio near a point") {
  // Only exponents matter downstream; record that the ratio stays in a
  // narrow fixed window on a sample of nearby pairs in the chart z != 0.
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    long n = rng.range(30, 200);
    ProjPoint p = pt({rng.range(-3, 3), rng.range(-3, 3), 1});
    ProjPoint q = ProjPoint::normalize(
        std::vector<Int>{p.coords()[0] * n + rng.range(-2, 2), p.coords()[1] * n + rng.range(-2, 2), n});
    if (p == q || q.coords()[2] == 0) continue;
    Rat chart = affine_chart_distance(p, q, 2);
    Rat proj = distance(p, q);
    if (chart == 0) continue;
    Rat ratio = proj / chart;
    CHECK(ratio >= make_rat(1, 40));
    CHECK(ratio <= 40);
  }
}

TEST_CASE("line through two plane points") {
  CHECK(LineInP2::through(pt({0, 0, 1}), pt({1, 0, 1})).dual() == std::vector<Int>{0, 1, 0});
  CHECK(LineInP2::through(pt({0, 0, 1}), pt({1, 1, 1})).dual() == std::vector<Int>{1, -1, 0});
  CHECK(LineInP2::through(pt({1, 0, 0}), pt({0, 1, 0})).dual() == std::vector<Int>{0, 0, 1});
  CHECK_THROWS_AS(LineInP2::through(pt({1, 2, 3}), pt({2, 4, 6})), Error);

  LineInP2 l = LineInP2::through(pt({3, 5, 7}), pt({2, -1, 4}));
  CHECK(l.contains(pt({3, 5, 7})));
  CHECK(l.contains(pt({2, -1, 4})));
  CHECK(l.plucker_height() >= 1);
  CHECK_FALSE(l.contains(pt({1, 0, 0})));
}
