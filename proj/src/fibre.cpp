#include "effmordell/fibre.hpp"

#include <algorithm>
#include <queue>

#include "effmordell/error.hpp"

namespace effmordell {

namespace {

std::string component_pair(std::size_t i, std::size_t j) {
  return "[C" + std::to_string(i + 1) + ".C" + std::to_string(j + 1) + "]";
}

bool shape_ok(const FibreData& f) {
  const std::size_t s = f.size();
  return s >= 1 && f.genera.size() == s && f.intersection.rows() == s &&
         f.intersection.cols() == s;
}

void require_shape(const FibreData& f) {
  if (!shape_ok(f)) {
    throw Error(ErrorCode::DimensionMismatch,
                "fibre needs s >= 1 components with matching genera and s x s matrix");
  }
}

// Solves M a = rhs together with sum a = 0 as an (s+1) x s system.
RationalVector solve_with_sum_zero(const FibreData& f, std::span<const Rational> rhs) {
  const std::size_t s = f.size();
  RationalMatrix system(s + 1, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) system(i, j) = f.intersection(i, j);
  for (std::size_t j = 0; j < s; ++j) system(s, j) = 1;
  RationalVector b(rhs.begin(), rhs.end());
  b.emplace_back(0);
  return solve_exact(system, b);
}

}  // namespace

bool FibreValidationReport::has_failure(const std::string& check) const {
  return std::any_of(failures.begin(), failures.end(),
                     [&](const FibreFailure& f) { return f.check == check; });
}

FibreValidationReport validate_fibre(const FibreData& f, std::int64_t genus) {
  using namespace fibre_check;
  FibreValidationReport report;
  auto fail = [&](const char* check, std::string detail) {
    report.failures.push_back({check, std::move(detail)});
  };

  const std::size_t s = f.size();
  if (!shape_ok(f)) {
    fail(kDimensions, "s = " + std::to_string(s) + ", genera = " +
                          std::to_string(f.genera.size()) + ", matrix " +
                          std::to_string(f.intersection.rows()) + "x" +
                          std::to_string(f.intersection.cols()));
    return report;
  }
  if (f.prime_norm < 2) fail(kPrimeNorm, "prime norm " + f.prime_norm.get_str() + " < 2");
  if (genus < 2) fail(kGenusIdentity, "curve genus " + std::to_string(genus) + " < 2");
  for (std::size_t j = 0; j < s; ++j) {
    if (f.multiplicities[j] < 1)
      fail(kMultiplicity, "m" + std::to_string(j + 1) + " = " + std::to_string(f.multiplicities[j]));
    if (f.genera[j] < 0)
      fail(kGenus, "g" + std::to_string(j + 1) + " = " + std::to_string(f.genera[j]));
  }

  const RationalMatrix& m = f.intersection;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      const Rational& v = m(i, j);
      if (!v.is_integer()) fail(kIntegerEntries, component_pair(i, j) + " = " + v.str());
      if (j > i && v != m(j, i)) {
        fail(kSymmetry, component_pair(i, j) + " = " + v.str() + " but " + component_pair(j, i) +
                            " = " + m(j, i).str());
      }
      if (i != j && v.sign() < 0) fail(kOffDiagonal, component_pair(i, j) + " = " + v.str());
    }
    const Rational& d = m(i, i);
    if (s == 1 && !d.is_zero()) fail(kDiagonal, "irreducible fibre needs [C1.C1] = 0, got " + d.str());
    if (s >= 2 && d.sign() > 0) fail(kDiagonal, component_pair(i, i) + " = " + d.str() + " > 0");
  }

  // F_p . C_i = 0 for every component, checked on rows and on columns.
  for (std::size_t i = 0; i < s; ++i) {
    Rational row_sum;
    Rational col_sum;
    for (std::size_t j = 0; j < s; ++j) {
      row_sum += Rational(static_cast<long>(f.multiplicities[j])) * m(i, j);
      col_sum += Rational(static_cast<long>(f.multiplicities[j])) * m(j, i);
    }
    if (!row_sum.is_zero())
      fail(kTriviality, "sum_j m_j [C" + std::to_string(i + 1) + ".C_j] = " + row_sum.str());
    if (!col_sum.is_zero() && col_sum != row_sum)
      fail(kTriviality, "sum_j m_j [C_j.C" + std::to_string(i + 1) + "] = " + col_sum.str());
  }

  std::vector<bool> seen(s, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop();
    for (std::size_t j = 0; j < s; ++j) {
      if (!seen[j] && (m(i, j).sign() > 0 || m(j, i).sign() > 0)) {
        seen[j] = true;
        ++reached;
        frontier.push(j);
      }
    }
  }
  if (reached != s) {
    fail(kConnectivity, std::to_string(s - reached) + " component(s) not connected to C1");
  }

  Rational mu;
  Rational genus_sum;
  for (std::size_t j = 0; j < s; ++j) {
    const Rational mj(static_cast<long>(f.multiplicities[j]));
    mu -= mj * m(j, j);
    genus_sum += Rational(2) * Rational(static_cast<long>(f.genera[j] - 1)) * mj;
  }
  report.mu_p = mu;
  report.genus_from_fibre = (mu + genus_sum) / Rational(2) + Rational(1);
  if (mu.sign() < 0) fail(kMuNonnegative, "mu_p = " + mu.str());
  if (s == 1 && !mu.is_zero()) fail(kMuNonnegative, "mu_p must vanish for s = 1, got " + mu.str());
  if (report.genus_from_fibre != Rational(static_cast<long>(genus))) {
    fail(kGenusIdentity, "fibre implies g = " + report.genus_from_fibre.str() + ", expected " +
                             std::to_string(genus));
  }
  return report;
}

RationalVector phi_correction(const FibreData& f, std::int64_t /*genus*/,
                              std::span<const Rational> d) {
  require_shape(f);
  if (d.size() != f.size()) throw Error(ErrorCode::DimensionMismatch, "d has wrong length");
  Rational degree;
  for (std::size_t i = 0; i < d.size(); ++i)
    degree += Rational(static_cast<long>(f.multiplicities[i])) * d[i];
  if (!degree.is_zero()) {
    throw Error(ErrorCode::DegreeNotZero, "sum_i m_i d_i = " + degree.str());
  }
  return solve_with_sum_zero(f, d);
}

RationalVector xi_rhs(const FibreData& f, std::int64_t genus, std::size_t k) {
  require_shape(f);
  if (k >= f.size()) throw Error(ErrorCode::InvalidParams, "component index out of range");
  const std::size_t s = f.size();
  RationalVector rhs(s);
  for (std::size_t i = 0; i < s; ++i) {
    rhs[i] = Rational(2 * (f.genera[i] - 1)) - f.intersection(i, i);
    if (i == k) {
      rhs[i] -= Rational(Integer(2 * (genus - 1)), Integer(static_cast<long>(f.multiplicities[i])));
    }
  }
  return rhs;
}

RationalVector xi_solution(const FibreData& f, std::int64_t genus, std::size_t k) {
  require_shape(f);
  if (k >= f.size()) throw Error(ErrorCode::InvalidParams, "component index out of range");
  if (f.multiplicities[k] != 1) {
    throw Error(ErrorCode::MultiplicityNotOne,
                "m" + std::to_string(k + 1) + " = " + std::to_string(f.multiplicities[k]));
  }
  return solve_with_sum_zero(f, xi_rhs(f, genus, k));
}

PhiResult phi_p_detailed(const FibreData& f, std::int64_t genus) {
  const FibreValidationReport report = validate_fibre(f, genus);
  if (!report.ok()) {
    const FibreFailure& first = report.failures.front();
    throw Error(ErrorCode::ValidationError, first.check + ": " + first.detail);
  }
  PhiResult result;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f.multiplicities[k] != 1) continue;
    XiTerm term;
    term.k = k;
    term.solution = xi_solution(f, genus, k);
    term.self_intersection = bilinear_form(term.solution, f.intersection, term.solution);
    const Rational magnitude = term.self_intersection.abs();
    if (magnitude > result.phi) result.phi = magnitude;
    result.terms.push_back(std::move(term));
  }
  if (result.terms.empty()) {
    throw Error(ErrorCode::EmptyJp, "no component of multiplicity 1");
  }
  return result;
}

Rational phi_p(const FibreData& f, std::int64_t genus) { return phi_p_detailed(f, genus).phi; }

}  // namespace effmordell
