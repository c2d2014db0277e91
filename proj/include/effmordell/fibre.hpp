#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "effmordell/rational.hpp"

namespace effmordell {

/// Special fibre of a minimal regular model at one prime. Components are
/// indexed 0..s-1 in input order.
struct FibreData {
  Integer prime_norm;                    // residue-field cardinality
  std::vector<std::int64_t> multiplicities;
  std::vector<std::int64_t> genera;      // arithmetic genera of the reduced components
  RationalMatrix intersection;           // [C_i.C_j]

  std::size_t size() const { return multiplicities.size(); }
};

/// Names of the checks performed by validate_fibre.
namespace fibre_check {
inline constexpr const char* kDimensions = "dimensions";
inline constexpr const char* kPrimeNorm = "prime-norm";
inline constexpr const char* kMultiplicity = "multiplicity-positive";
inline constexpr const char* kGenus = "genus-nonnegative";
inline constexpr const char* kIntegerEntries = "integer-entries";
inline constexpr const char* kSymmetry = "symmetry";
inline constexpr const char* kOffDiagonal = "off-diagonal-nonnegative";
inline constexpr const char* kDiagonal = "diagonal-sign";
inline constexpr const char* kTriviality = "fibre-triviality";
inline constexpr const char* kConnectivity = "connectivity";
inline constexpr const char* kMuNonnegative = "mu-nonnegative";
inline constexpr const char* kGenusIdentity = "genus-identity";
}  // namespace fibre_check

struct FibreFailure {
  std::string check;   // one of fibre_check::*
  std::string detail;
};

struct FibreValidationReport {
  Rational genus_from_fibre;
  Rational mu_p;
  std::vector<FibreFailure> failures;

  bool ok() const { return failures.empty(); }
  bool has_failure(const std::string& check) const;
};

/// Runs every structural check on F and the identity
/// 2(g-1) = mu_p + sum_j 2(g_j-1) m_j. Never throws on bad data; all
/// violations land in the report.
FibreValidationReport validate_fibre(const FibreData& fibre, std::int64_t genus);

/// Coefficients a with sum a_j = 0 and M a = d, for a fibre-degree-zero d.
RationalVector phi_correction(const FibreData& fibre, std::int64_t genus,
                              std::span<const Rational> d);

/// Right-hand side of the system Xi_k (first s rows; the sum-zero row is implicit).
RationalVector xi_rhs(const FibreData& fibre, std::int64_t genus, std::size_t k);

/// Unique solution b^(k) of Xi_k. k is 0-based and must have multiplicity 1.
RationalVector xi_solution(const FibreData& fibre, std::int64_t genus, std::size_t k);

struct XiTerm {
  std::size_t k = 0;  // 0-based component index
  RationalVector solution;
  Rational self_intersection;
};

struct PhiResult {
  Rational phi;
  std::vector<XiTerm> terms;  // one per multiplicity-one component
};

/// phi_p together with each Xi_k self-intersection that entered the maximum.
PhiResult phi_p_detailed(const FibreData& fibre, std::int64_t genus);

/// max over k in J_p of |[b^(k) . b^(k)]|.
Rational phi_p(const FibreData& fibre, std::int64_t genus);

}  // namespace effmordell
