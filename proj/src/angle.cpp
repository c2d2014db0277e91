#include "effmordell/angle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "effmordell/error.hpp"

namespace effmordell {

using std::numbers::pi;

std::string_view to_string(TauMethod method) noexcept {
  switch (method) {
    case TauMethod::RankOneRule: return "rank-one-rule";
    case TauMethod::ExactPolygon: return "exact-polygon";
    case TauMethod::CapPacking: return "cap-packing";
  }
  return "unknown";
}

namespace {

// int_0^rho sin^k t dt for 0 <= rho <= pi/2.
double sine_power_integral(std::int64_t k, double rho) {
  if (rho <= 0.0) return 0.0;
  const double kd = static_cast<double>(k);
  auto integrand = [kd](double t) { return std::pow(std::sin(t), kd); };
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  return Rule::integrate(integrand, 0.0, rho, 30, kQuadratureTolerance);
}

}  // namespace

double cap_area_fraction(std::int64_t r, double rho) {
  if (r < 2 || !(rho >= 0.0 && rho <= pi)) {
    throw Error(ErrorCode::InvalidParams,
                "cap_area_fraction needs r >= 2 and 0 <= rho <= pi (r = " + std::to_string(r) + ")");
  }
  if (r == 2) return rho / pi;
  if (r == 3) return (1.0 - std::cos(rho)) / 2.0;
  if (rho > pi / 2) return 1.0 - cap_area_fraction(r, pi - rho);
  const std::int64_t k = r - 2;
  const double half = sine_power_integral(k, pi / 2);
  return sine_power_integral(k, rho) / (2.0 * half);
}

namespace detail {

double cap_packing_angle(std::int64_t r, std::int64_t n) {
  if (r < 2 || n < 2) throw Error(ErrorCode::InvalidParams, "cap packing needs r >= 2, n >= 2");
  const double count = static_cast<double>(n);
  auto fits = [&](double alpha) { return count * cap_area_fraction(r, alpha / 2.0) <= 1.0; };
  if (fits(pi)) return pi;
  double lo = 0.0;
  double hi = pi;
  while (hi - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    (fits(mid) ? lo : hi) = mid;
  }
  // hi is infeasible, so it bounds the optimal minimal angle from above.
  return hi;
}

std::optional<double> rational_polygon_cosine(std::int64_t n) {
  switch (n) {
    case 1: return 1.0;
    case 2: return -1.0;
    case 3: return -0.5;
    case 4: return 0.0;
    case 6: return 0.5;
    default: return std::nullopt;
  }
}

}  // namespace detail

double cap_cos_lower(std::int64_t r, std::int64_t n) {
  if (r < 3 || n < 2) throw Error(ErrorCode::InvalidParams, "cap_cos_lower needs r >= 3, n >= 2");
  const double alpha = detail::cap_packing_angle(r, n);
  return std::max(-1.0, std::cos(alpha) - kAngleSlack);
}

TauResult tau(std::int64_t genus, std::int64_t rank, std::int64_t n) {
  if (genus < 2 || rank < 1 || n < 2) {
    throw Error(ErrorCode::InvalidParams, "tau needs g >= 2, r >= 1, n >= 2 (got g=" +
                                              std::to_string(genus) + ", r=" + std::to_string(rank) +
                                              ", n=" + std::to_string(n) + ")");
  }
  const double inv_g = 1.0 / static_cast<double>(genus);
  TauResult out;
  if (rank == 1) {
    out.tau = 1.0 - inv_g;
    out.method = TauMethod::RankOneRule;
    return out;
  }
  if (rank == 2) {
    // Regular n-gon. Irrational cosines get the slack so tau never overshoots.
    const auto exact = detail::rational_polygon_cosine(n);
    const double c =
        exact ? *exact : std::cos(2.0 * pi / static_cast<double>(n)) - kAngleSlack;
    out.cos_theta_lower = c;
    out.tau = c - inv_g;
    out.method = TauMethod::ExactPolygon;
    return out;
  }
  const double c = cap_cos_lower(rank, n);
  out.cos_theta_lower = c;
  out.tau = c - inv_g;
  out.method = TauMethod::CapPacking;
  out.conservative = true;
  return out;
}

}  // namespace effmordell
