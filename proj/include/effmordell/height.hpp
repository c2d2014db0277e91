#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "effmordell/angle.hpp"
#include "effmordell/rational.hpp"

namespace effmordell {

/// Upward slack added to M(X) and to the Neron-Tate bound in reports.
inline constexpr double kReportSlack = 1e-6;

enum class ArchimedeanKind { DeltaSum, FaltingsHeight };

std::string_view to_string(ArchimedeanKind kind) noexcept;

/// Upper bound for sum_v delta(X_v), or for h_K(J) from which one is derived.
struct ArchimedeanInput {
  ArchimedeanKind kind = ArchimedeanKind::DeltaSum;
  double value = 0.0;
};

struct FibralTerm {
  Integer prime_norm;
  Rational phi;
};

/// -2 degK g log(2 pi^4), the floor of sum_v delta(X_v).
double wilms_floor(std::int64_t genus, std::int64_t deg_k);

/// 12 h + 4 g degK log(2 pi): upper bound for sum_v delta(X_v) from h_K(J) <= h.
double delta_sum_from_faltings(std::int64_t genus, std::int64_t deg_k, double hj_upper);

/// h_K(A1) <= h_K(A2) + (degK / 2) log(deg phi) for an isogeny phi: A1 -> A2
/// of principally polarized abelian varieties.
double faltings_upper_via_isogeny(double h_target_upper, std::int64_t deg_k,
                                  std::int64_t isogeny_degree);

/// h_K(E1 x ... x Ek) = sum h_K(Ei): the product convention.
double faltings_height_of_product(std::span<const double> factor_heights);

struct DeltaSumBound {
  double value = 0.0;
  std::vector<std::string> warnings;
};

/// Resolves either archimedean route to an upper bound for sum_v delta(X_v).
DeltaSumBound delta_sum_upper(const ArchimedeanInput& input, std::int64_t genus,
                              std::int64_t deg_k);

/// M(X) evaluated on upper bounds for its inputs.
double m_constant(std::int64_t genus, std::int64_t deg_k, double delta_sum_upper,
                  std::span<const FibralTerm> fibral);

/// Same quantity, written in the closed form valid for g = 2 over Q:
/// 2 delta + 6 sum phi_p log p + 8 (3 log 2 + 8).
double m_constant_genus2_rational(double delta_upper, std::span<const FibralTerm> fibral);

/// M / (2 g tau). Throws TauNotPositive when tau <= 0.
double neron_tate_bound(double m, std::int64_t genus, const TauResult& tau);

/// Upper bound on cos of the angle between j(P) and j(Q).
double gap_cos_bound(double h_p, double h_q, std::int64_t genus, double m);

struct GapDefect {
  double lhs = 0.0;
  bool satisfied = false;
};

/// hP + hQ - 2 g <j(P), j(Q)> checked against -M.
GapDefect gap_defect(double h_p, double h_q, double pairing, std::int64_t genus, double m);

/// (nt_bound + c_X) / 2: bound on the logarithmic height of x(P).
double x_height_bound(double nt_bound, double c_x);

}  // namespace effmordell
