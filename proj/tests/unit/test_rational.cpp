#include <random>

#include "doctest.h"
#include "effmordell/error.hpp"
#include "effmordell/rational.hpp"
#include "support/fixtures.hpp"

using namespace effmordell;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an effmordell::Error");
  return ErrorCode::ParseError;
}

RationalVector vec(std::initializer_list<Rational> v) { return RationalVector(v); }

}  // namespace

TEST_CASE("rational stays reduced with positive denominator") {
  const Rational q(Integer(6), Integer(-4));
  CHECK(q.numerator() == -3);
  CHECK(q.denominator() == 2);
  CHECK(q.str() == "-3/2");
  CHECK(Rational(Integer(4), Integer(2)).str() == "2");
  CHECK(code_of([] { Rational(Integer(1), Integer(0)); }) == ErrorCode::InvalidParams);
}

TEST_CASE("rational arithmetic is exact") {
  const Rational a(Integer(1), Integer(3));
  const Rational b(Integer(1), Integer(6));
  CHECK(a + b == Rational(Integer(1), Integer(2)));
  CHECK(a * b == Rational(Integer(1), Integer(18)));
  CHECK(a - b == b);
  CHECK(a / b == Rational(2));
  CHECK(-a < b);
  CHECK((-a).abs() == a);
  CHECK(code_of([&] { return a / Rational(0); }) == ErrorCode::InvalidParams);
}

TEST_CASE("rational parse accepts p/q and rejects garbage") {
  CHECK(Rational::parse("  -10/4 ") == Rational(Integer(-5), Integer(2)));
  CHECK(Rational::parse("+7") == Rational(7));
  for (const char* bad : {"", "1/", "/2", "1/0", "a/b", "1/-2", "1.5", "1/2/3"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { Rational::parse(bad); }) == ErrorCode::ParseError);
  }
}

TEST_CASE("rational parse of render is the identity") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> dist(-1000000, 1000000);
  for (int i = 0; i < 500; ++i) {
    long den = dist(rng);
    if (den == 0) den = 1;
    Integer big_num = Integer(dist(rng)) * Integer(dist(rng)) * Integer(dist(rng));
    const Rational q(big_num, Integer(den));
    CHECK(Rational::parse(q.str()) == q);
  }
}

TEST_CASE("solve_exact spec examples") {
  const auto id = RationalMatrix::identity(2);
  CHECK(solve_exact(id, vec({3, 5})) == vec({3, 5}));
  const auto a = RationalMatrix::from_rows({{2, 1}, {1, 3}});
  CHECK(solve_exact(a, vec({5, 10})) == vec({1, 3}));
}

TEST_CASE("solve_exact on the augmented example fibre gives Xi_1") {
  const auto f = testing::example_fibre();
  std::vector<Rational> entries(f.intersection.entries().begin(), f.intersection.entries().end());
  for (int j = 0; j < 9; ++j) entries.emplace_back(1);
  const RationalMatrix aug(10, 9, entries);
  const auto b = solve_exact(aug, vec({-2, 0, 0, 0, 0, 0, 1, 0, 0, 0}));
  CHECK(bilinear_form(b, f.intersection, b) == Rational(-2));
}

TEST_CASE("solve_exact error paths") {
  SUBCASE("singular square") {
    const auto a = RationalMatrix::from_rows({{1, 2}, {2, 4}});
    CHECK(code_of([&] { solve_exact(a, vec({1, 2})); }) == ErrorCode::NonUniqueSolution);
    CHECK(code_of([&] { solve_exact(a, vec({1, 3})); }) == ErrorCode::NoSolution);
  }
  SUBCASE("inconsistent overdetermined") {
    const auto a = RationalMatrix::from_rows({{1, 0}, {0, 1}, {1, 1}});
    CHECK(solve_exact(a, vec({1, 2, 3})) == vec({1, 2}));
    CHECK(code_of([&] { solve_exact(a, vec({1, 2, 4})); }) == ErrorCode::NoSolution);
  }
  SUBCASE("underdetermined") {
    const auto a = RationalMatrix::from_rows({{1, 1}});
    CHECK(code_of([&] { solve_exact(a, vec({1})); }) == ErrorCode::NonUniqueSolution);
  }
  SUBCASE("length mismatch") {
    CHECK(code_of([] { solve_exact(RationalMatrix::identity(2), vec({1})); }) ==
          ErrorCode::DimensionMismatch);
  }
  SUBCASE("ragged and miscounted matrices") {
    CHECK(code_of([] { RationalMatrix::from_rows({{1, 2}, {3}}); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([] { RationalMatrix(2, 2, std::vector<Rational>(3)); }) ==
          ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("solve_exact recovers x0 from A x0 on random full-rank systems") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 7);
  std::uniform_int_distribution<int> entry(-9, 9);
  int solved = 0;
  while (solved < 300) {
    const std::size_t n = dim(rng);
    const std::size_t m = n + std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    std::vector<Rational> e(m * n);
    for (auto& v : e) v = Rational(Integer(entry(rng)), Integer(std::abs(entry(rng)) + 1));
    const RationalMatrix a(m, n, e);
    RationalVector x0(n);
    for (auto& v : x0) v = Rational(Integer(entry(rng)), Integer(std::abs(entry(rng)) + 1));
    const auto b = a.multiply(x0);
    RationalVector x;
    try {
      x = solve_exact(a, b);
    } catch (const Error& err) {
      // Rank-deficient draws are the only acceptable failure.
      CHECK(err.code() == ErrorCode::NonUniqueSolution);
      continue;
    }
    CHECK(x == x0);
    ++solved;
  }
}

TEST_CASE("bilinear_form spec examples and symmetry") {
  const auto m = RationalMatrix::from_rows({{-2, 1}, {1, -2}});
  CHECK(bilinear_form(vec({1, 0}), m, vec({1, 0})) == Rational(-2));
  const Rational sixth(Integer(1), Integer(6));
  const auto u = vec({sixth, -sixth});
  CHECK(bilinear_form(u, RationalMatrix::from_rows({{-3, 3}, {3, -3}}), u) ==
        Rational(Integer(-1), Integer(3)));
  CHECK(code_of([&] { bilinear_form(vec({1}), m, vec({1, 0})); }) == ErrorCode::DimensionMismatch);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> entry(-20, 20);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 6;
    RationalMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) s(i, j) = s(j, i) = entry(rng);
    RationalVector x(n), y(n);
    for (auto& v : x) v = entry(rng);
    for (auto& v : y) v = Rational(Integer(entry(rng)), Integer(7));
    CHECK(bilinear_form(x, s, y) == bilinear_form(y, s, x));
  }
}

TEST_CASE("integer_sqrt examples") {
  CHECK(integer_sqrt(Integer(0)).root == 0);
  CHECK(integer_sqrt(Integer(0)).is_exact);
  CHECK(integer_sqrt(Integer(4)).root == 2);
  CHECK(integer_sqrt(Integer(4)).is_exact);
  CHECK(integer_sqrt(Integer(5)).root == 2);
  CHECK_FALSE(integer_sqrt(Integer(5)).is_exact);
  Integer p70 = 1;
  p70 <<= 70;
  Integer p35 = 1;
  p35 <<= 35;
  CHECK(integer_sqrt(p70).root == p35);
  CHECK(integer_sqrt(p70).is_exact);
  CHECK(code_of([] { integer_sqrt(Integer(-1)); }) == ErrorCode::NegativeInput);
}

TEST_CASE("integer_sqrt brackets n and agrees with mpz_sqrt") {
  std::mt19937_64 rng(99);
  gmp_randclass gr(gmp_randinit_default);
  gr.seed(99);
  for (int i = 0; i < 2000; ++i) {
    Integer n = gr.get_z_bits(1 + i % 400);
    if (i % 3 == 0) n = n * n + (i % 2 ? 0 : -1);
    if (sgn(n) < 0) n = 0;
    const auto r = integer_sqrt(n);
    CHECK(r.root * r.root <= n);
    CHECK((r.root + 1) * (r.root + 1) > n);
    CHECK(r.root == sqrt(n));
    CHECK(r.is_exact == (r.root * r.root == n));
  }
}
