#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace effmordell {

using Integer = mpz_class;

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
  explicit Rational(const Integer& v) : q_(v) {}
  Rational(const Integer& num, const Integer& den);

  /// Accepts "p" or "p/q" with optional sign and surrounding whitespace.
  static Rational parse(std::string_view text);

  Integer numerator() const { return q_.get_num(); }
  Integer denominator() const { return q_.get_den(); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }

  /// "p/q", with "/q" omitted when q = 1.
  std::string str() const { return q_.get_str(); }

  const mpq_class& raw() const { return q_; }

  Rational operator-() const { return from_raw(-q_); }
  Rational abs() const { return from_raw(::abs(q_)); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static Rational from_raw(mpq_class q) {
    Rational r;
    r.q_ = std::move(q);
    return r;
  }

  mpq_class q_;
};

using RationalVector = std::vector<Rational>;

/// Dense row-major matrix of rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);
  RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);

  static RationalMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows);
  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Rational> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const Rational> entries() const { return data_; }

  bool is_square() const { return rows_ == cols_; }
  bool is_symmetric() const;

  RationalVector multiply(std::span<const Rational> x) const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Unique exact solution of A x = b for m >= n. Throws NoSolution when the
/// system is inconsistent and NonUniqueSolution when A lacks full column rank.
RationalVector solve_exact(const RationalMatrix& a, std::span<const Rational> b);

/// u^T M v.
Rational bilinear_form(std::span<const Rational> u, const RationalMatrix& m,
                       std::span<const Rational> v);

struct IntegerSqrt {
  Integer root;
  bool is_exact = false;
};

/// floor(sqrt(n)) by Newton iteration; is_exact iff n is a perfect square.
IntegerSqrt integer_sqrt(const Integer& n);

}  // namespace effmordell
