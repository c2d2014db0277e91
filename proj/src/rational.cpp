#include "effmordell/rational.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "effmordell/error.hpp"

namespace effmordell {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::NonUniqueSolution: return "NonUniqueSolution";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeInput: return "NegativeInput";
    case ErrorCode::DegreeNotZero: return "DegreeNotZero";
    case ErrorCode::MultiplicityNotOne: return "MultiplicityNotOne";
    case ErrorCode::EmptyJp: return "EmptyJp";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NegativePhip: return "NegativePhip";
    case ErrorCode::TauNotPositive: return "TauNotPositive";
    case ErrorCode::DegeneratePoint: return "DegeneratePoint";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Integer parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational::Rational(const Integer& num, const Integer& den) : q_(num, den) {
  if (den == 0) throw Error(ErrorCode::InvalidParams, "zero denominator");
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  const std::string_view num = trim(s.substr(0, slash));
  if (!is_integer_literal(num)) {
    throw Error(ErrorCode::ParseError, "malformed rational '" + std::string(text) + "'");
  }
  if (slash == std::string_view::npos) return Rational(parse_integer(num));
  const std::string_view den = trim(s.substr(slash + 1));
  if (!is_integer_literal(den) || den.front() == '-' || den.front() == '+') {
    throw Error(ErrorCode::ParseError, "malformed rational '" + std::string(text) + "'");
  }
  Integer d = parse_integer(den);
  if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  return Rational(parse_integer(num), d);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorCode::InvalidParams, "division by zero");
  q_ /= o.q_;
  return *this;
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch, "entry count does not match " +
                                                  std::to_string(rows) + "x" + std::to_string(cols));
  }
}

RationalMatrix RationalMatrix::from_rows(std::initializer_list<std::initializer_list<long>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Rational> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    for (long v : row) data.emplace_back(v);
  }
  return RationalMatrix(r, c, std::move(data));
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RationalMatrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

RationalVector RationalMatrix::multiply(std::span<const Rational> x) const {
  if (x.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  RationalVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Rational acc;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
    out[i] = std::move(acc);
  }
  return out;
}

RationalVector solve_exact(const RationalMatrix& a, std::span<const Rational> b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
  if (m < n) throw Error(ErrorCode::NonUniqueSolution, "fewer equations than unknowns");

  // Augmented working copy [A | b].
  std::vector<RationalVector> rows(m, RationalVector(n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = a(i, j);
    rows[i][n] = b[i];
  }

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t best = m;
    for (std::size_t i = rank; i < m; ++i) {
      if (rows[i][col].is_zero()) continue;
      if (best == m || mpz_cmpabs(rows[i][col].raw().get_num_mpz_t(),
                                   rows[best][col].raw().get_num_mpz_t()) > 0) {
        best = i;
      }
    }
    if (best == m) continue;
    std::swap(rows[rank], rows[best]);
    const Rational inv = Rational(1) / rows[rank][col];
    for (std::size_t j = col; j <= n; ++j) rows[rank][j] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rank || rows[i][col].is_zero()) continue;
      const Rational f = rows[i][col];
      for (std::size_t j = col; j <= n; ++j) rows[i][j] -= f * rows[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }

  for (std::size_t i = rank; i < m; ++i) {
    if (!rows[i][n].is_zero()) {
      throw Error(ErrorCode::NoSolution, "inconsistent system (residual in row " +
                                             std::to_string(i + 1) + " after elimination)");
    }
  }
  if (rank < n) {
    throw Error(ErrorCode::NonUniqueSolution,
                "kernel has dimension " + std::to_string(n - rank));
  }

  RationalVector x(n);
  for (std::size_t r = 0; r < rank; ++r) x[pivot_col[r]] = rows[r][n];

  // Residual re-check against the original data.
  const RationalVector ax = a.multiply(x);
  for (std::size_t i = 0; i < m; ++i) {
    if (ax[i] != b[i]) throw Error(ErrorCode::NoSolution, "nonzero residual after solve");
  }
  return x;
}

Rational bilinear_form(std::span<const Rational> u, const RationalMatrix& m,
                       std::span<const Rational> v) {
  if (u.size() != m.rows() || v.size() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "bilinear form operands");
  }
  Rational acc;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (u[i].is_zero()) continue;
    Rational row;
    for (std::size_t j = 0; j < m.cols(); ++j) row += m(i, j) * v[j];
    acc += u[i] * row;
  }
  return acc;
}

IntegerSqrt integer_sqrt(const Integer& n) {
  if (sgn(n) < 0) throw Error(ErrorCode::NegativeInput, "integer_sqrt of " + n.get_str());
  if (n == 0) return {Integer(0), true};

  // Start above the root: 2^ceil(bits/2) >= sqrt(n).
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  Integer x = 1;
  x <<= (bits + 1) / 2;
  for (;;) {
    Integer y = (x + n / x) >> 1;
    if (y >= x) break;
    x = std::move(y);
  }
  while (x * x > n) --x;
  while ((x + 1) * (x + 1) <= n) ++x;
  const bool exact = x * x == n;
  return {std::move(x), exact};
}

}  // namespace effmordell
