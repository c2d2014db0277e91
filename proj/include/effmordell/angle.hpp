#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace effmordell {

/// Slack subtracted from every floating cosine bound in this module.
inline constexpr double kAngleSlack = 1e-9;
/// Width of the alpha interval at which the cap bisection stops (radians).
inline constexpr double kBisectionWidth = 1e-10;
/// Relative error target for cap-area quadrature.
inline constexpr double kQuadratureTolerance = 1e-12;

enum class TauMethod { RankOneRule, ExactPolygon, CapPacking };

std::string_view to_string(TauMethod method) noexcept;

/// tau(g, r, n) = cos theta(r, n) - 1/g (r >= 2) or 1 - 1/g (r = 1).
struct TauResult {
  double tau = 0.0;
  std::optional<double> cos_theta_lower;  // absent for r = 1
  TauMethod method = TauMethod::RankOneRule;
  bool conservative = false;  // tau is a certified underestimate
};

TauResult tau(std::int64_t genus, std::int64_t rank, std::int64_t n);

/// Normalized measure of a spherical cap of angular radius rho on S^{r-1}.
double cap_area_fraction(std::int64_t r, double rho);

/// Certified lower bound on cos theta(r, n) for r >= 3 from the cap-packing
/// volume argument.
double cap_cos_lower(std::int64_t r, std::int64_t n);

namespace detail {

/// Smallest bisection endpoint alpha known to satisfy
/// n * cap_area_fraction(r, alpha / 2) > 1 (or pi when no such alpha
/// exists). Every n-point code on S^{r-1} has minimal angle <= alpha.
/// Accepts r = 2 so the construction can be checked against the polygon.
double cap_packing_angle(std::int64_t r, std::int64_t n);

/// cos(2 pi / n) exactly for the rational cases n in {1, 2, 3, 4, 6},
/// otherwise nullopt.
std::optional<double> rational_polygon_cosine(std::int64_t n);

}  // namespace detail

}  // namespace effmordell
