#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "effmordell/rational.hpp"

namespace effmordell {

/// Homogeneous binary sextic, coeffs[i] multiplying X^i Z^(6-i).
using BinarySextic = std::array<Rational, 7>;

/// Genus-2 model y^2 = f(x) = a6 x^6 + ... + a0 with integer coefficients.
class SexticCurve {
 public:
  /// coeffs = (a0, ..., a6). Throws InvalidParams unless deg f is 5 or 6
  /// and f is squarefree.
  explicit SexticCurve(std::array<Integer, 7> coeffs);

  const std::array<Integer, 7>& coeffs() const { return coeffs_; }
  const Integer& coeff(std::size_t i) const { return coeffs_[i]; }

  /// F(X, Z) = sum_i a_i X^i Z^(6-i).
  Integer evaluate(const Integer& x, const Integer& z) const;

  BinarySextic binary_form() const;
  std::string str() const;

 private:
  std::array<Integer, 7> coeffs_;
};

/// Weighted projective point [X:Y:Z] of weights (1, 3, 1), stored normalized:
/// gcd(X, Z) = 1, and Z > 0, or Z = 0 and X = 1.
class CurvePoint {
 public:
  /// Normalizes (X, Y, Z). Throws DegeneratePoint if X = Z = 0 and
  /// InvalidParams if no integral normalized representative exists.
  CurvePoint(Integer x, Integer y, Integer z);

  const Integer& x() const { return x_; }
  const Integer& y() const { return y_; }
  const Integer& z() const { return z_; }

  /// "[X:Y:Z]".
  std::string str() const;

  friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
    return a.x_ == b.x_ && a.y_ == b.y_ && a.z_ == b.z_;
  }
  friend std::strong_ordering operator<=>(const CurvePoint& a, const CurvePoint& b);

 private:
  Integer x_;
  Integer y_;
  Integer z_;
};

/// [X:Y:Z] -> [aX + bZ : eY : cX + dZ], stored with the first nonzero of
/// (a, b, c, d) scaled to 1 so equal actions compare equal.
class Automorphism {
 public:
  /// Throws InvalidParams when ad - bc = 0 or e = 0.
  Automorphism(Rational a, Rational b, Rational c, Rational d, Rational e);

  static Automorphism identity();

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& c() const { return c_; }
  const Rational& d() const { return d_; }
  const Rational& e() const { return e_; }

  /// (*this) after `first`: P -> this(first(P)).
  Automorphism after(const Automorphism& first) const;
  Automorphism inverse() const;
  bool is_identity() const { return *this == identity(); }

  std::string str() const;

  friend bool operator==(const Automorphism&, const Automorphism&) = default;
  friend std::strong_ordering operator<=>(const Automorphism& l, const Automorphism& r);

 private:
  Rational a_, b_, c_, d_, e_;
};

bool is_on_curve(const SexticCurve& curve, const CurvePoint& p);

/// F(aX + bZ, cX + dZ) == e^2 F(X, Z) coefficientwise.
bool verify_automorphism(const SexticCurve& curve, const Automorphism& sigma);

CurvePoint apply_automorphism(const Automorphism& sigma, const CurvePoint& p);

/// Subgroup generated by gens, sorted. Throws CapExceeded past cap elements.
std::vector<Automorphism> group_closure(std::span<const Automorphism> gens, std::size_t cap);

std::vector<Automorphism> stabilizer(std::span<const Automorphism> group, const CurvePoint& p);

std::vector<CurvePoint> orbit(std::span<const Automorphism> group, const CurvePoint& p);

/// All points with x = p/q, max(|p|, q) <= bound, plus the points at
/// infinity; sorted, deduplicated. jobs > 1 splits the q range over threads.
std::vector<CurvePoint> enumerate_points(const SexticCurve& curve, std::int64_t bound,
                                         unsigned jobs = 1);

struct PointClassification {
  std::vector<CurvePoint> trivial_stabilizer;
  std::vector<CurvePoint> nontrivial_stabilizer;
};

PointClassification classify_points(const SexticCurve& curve, std::span<const Automorphism> group,
                                    std::span<const CurvePoint> points);

namespace detail {
__extension__ typedef unsigned __int128 u128;

/// floor(sqrt(v)) for v < 2^126, by Newton iteration with a monotone correction.
u128 isqrt_u128(u128 v);

/// True iff r is a square modulo each of 64, 63, 65 and 11.
bool passes_square_prefilter(std::uint64_t residue_mod_2882880);
inline constexpr std::uint64_t kPrefilterModulus = 64ULL * 63 * 65 * 11;
}  // namespace detail

}  // namespace effmordell
