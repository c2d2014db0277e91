#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "effmordell/curve.hpp"
#include "effmordell/error.hpp"
#include "support/fixtures.hpp"

using namespace effmordell;
using testing::aut_s;
using testing::aut_t;
using testing::aut_u;
using testing::example_curve;
using testing::pt;

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

SexticCurve curve_of(std::initializer_list<long> a) {
  std::array<Integer, 7> c;
  std::size_t i = 0;
  for (long v : a) c[i++] = v;
  return SexticCurve(c);
}

std::vector<Automorphism> example_group() {
  const auto gens = testing::example_generators();
  return group_closure(gens, 64);
}

}  // namespace

TEST_CASE("SexticCurve rejects degenerate models") {
  CHECK(code_of([] { curve_of({1, 0, 1, 0, 1, 0, 0}); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { curve_of({1, 0, 0, 2, 0, 0, 1}); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { curve_of({0, 1, 0, -2, 0, 1, 0}); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { curve_of({0, 0, 1, 0, 0, 0, 1}); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { curve_of({1, 0, -2, 0, 1, 0, 0}); }) == ErrorCode::InvalidParams);
  CHECK_NOTHROW(curve_of({1, 1, 0, 0, 0, 1, 0}));
  CHECK_NOTHROW(example_curve());
}

TEST_CASE("SexticCurve evaluation") {
  const auto c = example_curve();
  CHECK(c.evaluate(Integer(2), Integer(1)) == 85);
  CHECK(c.evaluate(Integer(1), Integer(0)) == 1);
  CHECK(c.evaluate(Integer(1), Integer(2)) == 1 + 4 + 16 + 64);
  CHECK(c.binary_form()[6] == Rational(1));
}

TEST_CASE("CurvePoint normalization") {
  CHECK(pt(-1, -1, 0) == pt(1, 1, 0));
  CHECK(pt(2, 8, 2) == pt(1, 1, 1));
  CHECK(pt(0, -1, -1) == pt(0, 1, 1));
  CHECK(pt(3, 5, -2).str() == "[-3:-5:2]");
  CHECK(code_of([] { pt(0, 1, 0); }) == ErrorCode::DegeneratePoint);
  CHECK(code_of([] { pt(2, 1, 2); }) == ErrorCode::InvalidParams);
}

TEST_CASE("is_on_curve examples") {
  const auto c = example_curve();
  CHECK(is_on_curve(c, pt(0, 1, 1)));
  CHECK(is_on_curve(c, pt(1, 1, 0)));
  CHECK_FALSE(is_on_curve(c, pt(2, 3, 1)));
}

TEST_CASE("Automorphism construction and normalization") {
  CHECK(code_of([] { Automorphism(1, 2, 2, 4, 1); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { Automorphism(1, 0, 0, 1, 0); }) == ErrorCode::InvalidParams);
  // Scaling by lambda multiplies e by lambda^3.
  CHECK(Automorphism(-1, 0, 0, -1, -1) == Automorphism::identity());
  CHECK(Automorphism(2, 0, 0, 2, 8) == Automorphism::identity());
  CHECK(aut_s().after(aut_s()).is_identity());
  CHECK(aut_u().inverse() == aut_u());
}

TEST_CASE("verify_automorphism examples") {
  const auto c = example_curve();
  CHECK(verify_automorphism(c, aut_s()));
  CHECK(verify_automorphism(c, aut_t()));
  CHECK(verify_automorphism(c, aut_u()));
  const auto other = curve_of({1, 1, 0, 0, 0, 0, 1});
  CHECK_FALSE(verify_automorphism(other, aut_u()));
  CHECK_FALSE(verify_automorphism(c, Automorphism(1, 1, 0, 1, 1)));
  CHECK_FALSE(verify_automorphism(c, Automorphism(1, 0, 0, 1, 2)));
}

TEST_CASE("apply_automorphism examples") {
  CHECK(apply_automorphism(aut_u(), pt(0, 1, 1)) == pt(1, 1, 0));
  CHECK(apply_automorphism(aut_t(), pt(0, 1, 1)) == pt(0, 1, 1));
  for (const auto& p : testing::example_points())
    CHECK(apply_automorphism(aut_s(), apply_automorphism(aut_s(), p)) == p);
  const Automorphism half_y(1, 0, 0, 1, Rational(Integer(1), Integer(2)));
  CHECK(code_of([&] { apply_automorphism(half_y, pt(1, 1, 1)); }) == ErrorCode::InvalidParams);
  CHECK(apply_automorphism(half_y, pt(1, 2, 1)) == pt(1, 1, 1));
}

TEST_CASE("group_closure examples") {
  CHECK(example_group().size() == 8);
  const std::vector<Automorphism> only_s{aut_s()};
  const auto g2 = group_closure(only_s, 8);
  CHECK(g2.size() == 2);
  CHECK(std::find(g2.begin(), g2.end(), Automorphism::identity()) != g2.end());
  const auto trivial = group_closure(std::vector<Automorphism>{}, 8);
  REQUIRE(trivial.size() == 1);
  CHECK(trivial[0].is_identity());
  const auto gens = testing::example_generators();
  CHECK(code_of([&] { group_closure(gens, 7); }) == ErrorCode::CapExceeded);
  // x -> x + 1 generates an infinite group.
  const std::vector<Automorphism> shift{Automorphism(1, 1, 0, 1, 1)};
  CHECK(code_of([&] { group_closure(shift, 50); }) == ErrorCode::CapExceeded);
}

TEST_CASE("the example group is closed and satisfies the group axioms") {
  const auto g = example_group();
  const std::set<Automorphism> members(g.begin(), g.end());
  for (const auto& a : g) {
    CHECK(members.count(a.inverse()) == 1);
    CHECK(a.after(a.inverse()).is_identity());
    CHECK(verify_automorphism(example_curve(), a));
    for (const auto& b : g) {
      CHECK(members.count(a.after(b)) == 1);
      for (const auto& c : g) CHECK(a.after(b.after(c)) == a.after(b).after(c));
    }
  }
  // D4: exactly one element of order 4 up to inverse pairs, i.e. two of them.
  int order_four = 0;
  for (const auto& a : g)
    if (!a.after(a).is_identity()) ++order_four;
  CHECK(order_four == 2);
}

TEST_CASE("group action compatibility on every example point") {
  const auto g = example_group();
  const auto c = example_curve();
  for (const auto& p : testing::example_points()) {
    CHECK(apply_automorphism(Automorphism::identity(), p) == p);
    for (const auto& a : g) {
      CHECK(is_on_curve(c, apply_automorphism(a, p)));
      for (const auto& b : g)
        CHECK(apply_automorphism(a.after(b), p) == apply_automorphism(a, apply_automorphism(b, p)));
    }
  }
}

TEST_CASE("stabilizers and orbits on the example curve") {
  const auto g = example_group();
  const auto st0 = stabilizer(g, pt(0, 1, 1));
  CHECK(st0.size() >= 2);
  CHECK(std::find(st0.begin(), st0.end(), aut_t()) != st0.end());
  const auto stinf = stabilizer(g, pt(1, 1, 0));
  const Automorphism neg(-1, 0, 0, 1, -1);  // (x, y) -> (-x, -y)
  CHECK(std::find(stinf.begin(), stinf.end(), neg) != stinf.end());
  for (const auto& p : testing::example_points()) {
    const auto st = stabilizer(g, p);
    const auto orb = orbit(g, p);
    CHECK(st.size() >= 2);
    CHECK(g.size() % orb.size() == 0);
    CHECK(st.size() * orb.size() == g.size());
    CHECK(std::is_sorted(orb.begin(), orb.end()));
  }
}

TEST_CASE("classify_points examples") {
  const auto c = example_curve();
  const auto pts = testing::example_points();
  const auto full = classify_points(c, example_group(), pts);
  CHECK(full.trivial_stabilizer.empty());
  CHECK(full.nontrivial_stabilizer.size() == 8);
  const std::vector<Automorphism> id{Automorphism::identity()};
  CHECK(classify_points(c, id, pts).trivial_stabilizer.size() == 8);
  const auto with_s = group_closure(std::vector{aut_s()}, 4);
  const std::vector<CurvePoint> one{pt(0, 1, 1)};
  CHECK(classify_points(c, with_s, one).trivial_stabilizer.size() == 1);
  const std::vector<CurvePoint> off{pt(2, 3, 1)};
  CHECK(code_of([&] { classify_points(c, with_s, off); }) == ErrorCode::InvalidParams);
}

TEST_CASE("enumerate_points examples") {
  const auto pts = testing::example_points();
  CHECK(enumerate_points(example_curve(), 1) == pts);
  CHECK(enumerate_points(example_curve(), 300) == pts);
  const auto x6p1 = enumerate_points(curve_of({1, 0, 0, 0, 0, 0, 1}), 1);
  const std::vector<CurvePoint> expected{pt(0, -1, 1), pt(0, 1, 1), pt(1, -1, 0), pt(1, 1, 0)};
  CHECK(x6p1 == expected);
  CHECK(code_of([] { enumerate_points(example_curve(), 0); }) == ErrorCode::InvalidParams);
}

TEST_CASE("enumerate_points on a quintic includes the single point at infinity") {
  // y^2 = x^5 + 1: (0, +-1), (-1, 0) and [1:0:0].
  const auto c = curve_of({1, 0, 0, 0, 0, 1, 0});
  const auto pts = enumerate_points(c, 5);
  const std::set<CurvePoint> got(pts.begin(), pts.end());
  for (const auto& p : {pt(1, 0, 0), pt(0, 1, 1), pt(0, -1, 1), pt(-1, 0, 1)}) CHECK(got.count(p) == 1);
  CHECK(got == testing::naive_points(c, 5));
}

TEST_CASE("enumerate_points matches the triple-loop oracle on random curves") {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 20; ++i) {
    const auto c = testing::random_curve(rng);
    CAPTURE(c.str());
    const auto got = enumerate_points(c, 12);
    const auto oracle = testing::naive_points(c, 12);
    CHECK(std::set<CurvePoint>(got.begin(), got.end()) == oracle);
    CHECK(got.size() == oracle.size());
  }
}

TEST_CASE("enumerate_points output invariants, jobs equivalence and monotonicity in B") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 10; ++i) {
    const auto c = testing::random_curve(rng);
    const auto small = enumerate_points(c, 15);
    const auto large = enumerate_points(c, 40);
    CHECK(std::is_sorted(small.begin(), small.end()));
    CHECK(std::adjacent_find(large.begin(), large.end()) == large.end());
    CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
    for (const auto& p : large) {
      CHECK(is_on_curve(c, p));
      CHECK(CurvePoint(p.x(), p.y(), p.z()) == p);
    }
    CHECK(enumerate_points(c, 40, 3) == large);
    CHECK(enumerate_points(c, 40, 1000) == large);
  }
}

TEST_CASE("enumerate_points falls back to arbitrary precision for large coefficients") {
  std::array<Integer, 7> a;
  a[0] = 1;
  a[6] = Integer("1000000000000000000000000") * Integer("1000000000000000000000000");
  a[1] = Integer("99999999999999999999");
  a[3] = 7;
  const SexticCurve c(a);
  const auto pts = enumerate_points(c, 30);
  for (const auto& p : pts) CHECK(is_on_curve(c, p));
  CHECK(std::count(pts.begin(), pts.end(), pt(0, 1, 1)) == 1);
  CHECK(std::count(pts.begin(), pts.end(), CurvePoint(Integer(1), a[6] / Integer("1000000000000000000000000"), Integer(0))) == 1);
}

TEST_CASE("isqrt_u128 agrees with integer_sqrt") {
  using detail::u128;
  std::mt19937_64 rng(4);
  auto to_integer = [](u128 v) -> Integer {
    Integer hi(static_cast<unsigned long>(v >> 64));
    hi <<= 64;
    return hi + Integer(static_cast<unsigned long>(v));
  };
  for (int i = 0; i < 20000; ++i) {
    u128 v = (static_cast<u128>(rng()) << 64) | rng();
    v >>= (i % 126) + 2;
    if (i % 5 == 0) {
      const u128 r = (v >> 64) + 1;
      v = r * r - (i % 2);
    }
    const u128 r = detail::isqrt_u128(v);
    CHECK(to_integer(r) == integer_sqrt(to_integer(v)).root);
  }
  CHECK(detail::isqrt_u128(0) == 0);
  CHECK(detail::isqrt_u128(1) == 1);
  const u128 top = (static_cast<u128>(1) << 126) - 1;
  CHECK(to_integer(detail::isqrt_u128(top)) == integer_sqrt(to_integer(top)).root);
}

TEST_CASE("square prefilter never rejects a square") {
  bool all_squares_pass = true;
  for (std::uint64_t y = 0; y < detail::kPrefilterModulus; ++y)
    all_squares_pass &= detail::passes_square_prefilter((y * y) % detail::kPrefilterModulus);
  CHECK(all_squares_pass);
  std::size_t passing = 0;
  for (std::uint64_t r = 0; r < detail::kPrefilterModulus; ++r) passing += detail::passes_square_prefilter(r);
  CHECK(static_cast<double>(passing) / detail::kPrefilterModulus < 0.02);
}
