#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "magtorus/skewform.hpp"
#include "oracles.hpp"

using namespace magtorus;

namespace {

bool round_trip_ok(const SkewIntMatrix& m, const FrobeniusForm& f) {
  IntMat st = mat_transpose(f.s);
  IntMat prod = mat_mul(mat_mul(st, f.canonical.a), f.s);
  return prod == m.a;
}

bool canonical_shape_ok(const FrobeniusForm& f) {
  const int n = f.canonical.n, r = f.half_rank;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Int expect = 0;
      if (i < r && j == r + i) expect = -f.divisors[i];
      if (j < r && i == r + j) expect = f.divisors[j];
      if (f.canonical.a[i][j] != expect) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("rejects non-antisymmetric input") {
  IntMat bad{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(SkewIntMatrix{bad}, std::invalid_argument);
  IntMat diag{{1, 0}, {0, -1}};
  CHECK_THROWS_AS(SkewIntMatrix{diag}, std::invalid_argument);
}

TEST_CASE("zero matrix: r=0, S=identity, no divisors") {
  auto f = frobenius_normal_form(SkewIntMatrix::zero(3));
  CHECK(f.half_rank == 0);
  CHECK(f.divisors.empty());
  CHECK(f.s == identity_mat(3));
  CHECK(canonical_shape_ok(f));
}

TEST_CASE("already-canonical 2x2 [[0,-3],[3,0]]") {
  auto m = SkewIntMatrix::from_int({{0, -3}, {3, 0}});
  auto f = frobenius_normal_form(m);
  CHECK(f.half_rank == 1);
  REQUIRE(f.divisors.size() == 1);
  CHECK(f.divisors[0] == 3);
  CHECK(f.s == identity_mat(2));
  CHECK(round_trip_ok(m, f));
}

TEST_CASE("4x4 block example has divisors (1,2)") {
  auto m = SkewIntMatrix::from_int({{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 2}, {0, 0, -2, 0}});
  auto f = frobenius_normal_form(m);
  REQUIRE(f.divisors.size() == 2);
  CHECK(f.divisors[0] == 1);
  CHECK(f.divisors[1] == 2);
  CHECK(round_trip_ok(m, f));
  CHECK(canonical_shape_ok(f));
  // independent elementary-divisor oracle: Smith divisors come in pairs
  auto snf = oracle::smith_divisors(m.a);
  REQUIRE(snf.size() == 4);
  CHECK(snf[0] == 1);
  CHECK(snf[1] == 1);
  CHECK(snf[2] == 2);
  CHECK(snf[3] == 2);
}

TEST_CASE("divisor chains") {
  CHECK(validate_divisor_chain({Int(3), Int(6), Int(18), Int(18)}));  // the worked chain
  CHECK(validate_divisor_chain({}));
  CHECK_FALSE(validate_divisor_chain({Int(2), Int(3)}));
  CHECK_FALSE(validate_divisor_chain({Int(0), Int(2)}));
  CHECK_FALSE(validate_divisor_chain({Int(-1), Int(2)}));
}

TEST_CASE("random matrices: round trip, unimodularity, chain, rank, oracle") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + int(rng() % 8);
    auto m = oracle::random_skew(n, 9, rng);
    auto f = frobenius_normal_form(m);
    CAPTURE(trial);
    CAPTURE(n);
    REQUIRE(round_trip_ok(m, f));
    Int det = mat_det(f.s);
    REQUIRE((det == 1 || det == -1));
    REQUIRE(validate_divisor_chain(f.divisors));
    REQUIRE(canonical_shape_ok(f));
    // Smith oracle: divisors of an antisymmetric matrix pair up as (nu_j, nu_j)
    auto snf = oracle::smith_divisors(m.a);
    REQUIRE(snf.size() == 2 * f.divisors.size());
    for (std::size_t j = 0; j < f.divisors.size(); ++j) {
      REQUIRE(snf[2 * j] == f.divisors[j]);
      REQUIRE(snf[2 * j + 1] == f.divisors[j]);
    }
  }
}

TEST_CASE("idempotence: reducing the canonical form reproduces the divisors") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + int(rng() % 7);
    auto m = oracle::random_skew(n, 9, rng);
    auto f = frobenius_normal_form(m);
    auto f2 = frobenius_normal_form(f.canonical);
    CHECK(f2.divisors == f.divisors);
    CHECK(f2.canonical.a == f.canonical.a);
  }
}

TEST_CASE("pfaffian: 2x2 and the stated 4x4 sign convention") {
  auto m2 = SkewIntMatrix::from_int({{0, -3}, {3, 0}});
  CHECK(pfaffian_minor(m2, {0, 1}) == -3);

  auto m4 = SkewIntMatrix::from_int({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -2}, {0, 0, 2, 0}});
  // Pf = m01*m23 - m02*m13 + m03*m12
  CHECK(pfaffian_minor(m4, {0, 1, 2, 3}) == 2);
  CHECK(pfaffian_minor(m4, {0, 1, 2, 3}) == oracle::pfaffian_matchings(m4, {0, 1, 2, 3}));
}

TEST_CASE("pfaffian rejects bad axis sets") {
  auto m = SkewIntMatrix::from_int({{0, -3}, {3, 0}});
  CHECK_THROWS_AS(pfaffian_minor(m, {0}), std::invalid_argument);
  CHECK_THROWS_AS(pfaffian_minor(m, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(pfaffian_minor(m, {0, 2}), std::invalid_argument);
}

TEST_CASE("pfaffian properties: matches matching sum, Pf^2 = det") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 60; ++trial) {
    int half = 1 + int(rng() % 3);
    int n = 2 * half + int(rng() % 2);
    auto m = oracle::random_skew(n, 9, rng);
    std::vector<int> axes;
    for (int i = 0; i < 2 * half; ++i) axes.push_back(i);
    Int pf = pfaffian_minor(m, axes);
    CHECK(pf == oracle::pfaffian_matchings(m, axes));
    IntMat sub(2 * half, std::vector<Int>(2 * half));
    for (int i = 0; i < 2 * half; ++i)
      for (int j = 0; j < 2 * half; ++j) sub[i][j] = m.a[axes[i]][axes[j]];
    CHECK(pf * pf == mat_det(sub));
  }
}

TEST_CASE("unimodular inverse round trip") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + int(rng() % 5);
    auto m = oracle::random_skew(n, 9, rng);
    auto f = frobenius_normal_form(m);
    IntMat inv = mat_inverse_unimodular(f.s);
    CHECK(mat_mul(f.s, inv) == identity_mat(n));
    CHECK(mat_mul(inv, f.s) == identity_mat(n));
  }
}
