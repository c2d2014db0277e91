#include "effmordell/height.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "effmordell/error.hpp"

namespace effmordell {

using std::numbers::pi;

std::string_view to_string(ArchimedeanKind kind) noexcept {
  return kind == ArchimedeanKind::DeltaSum ? "delta_sum" : "faltings_height";
}

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::InvalidParams, message);
}

bool finite(double x) { return std::isfinite(x); }

// log of an arbitrary-precision positive integer.
double log_integer(const Integer& n) {
  long exp = 0;
  const double mantissa = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exp) * std::numbers::ln2;
}

}  // namespace

double wilms_floor(std::int64_t genus, std::int64_t deg_k) {
  require(genus >= 1 && deg_k >= 1, "wilms_floor needs g >= 1, degK >= 1");
  return -2.0 * static_cast<double>(deg_k * genus) * std::log(2.0 * std::pow(pi, 4));
}

double delta_sum_from_faltings(std::int64_t genus, std::int64_t deg_k, double hj_upper) {
  require(genus >= 1 && deg_k >= 1 && finite(hj_upper),
          "delta_sum_from_faltings needs g >= 1, degK >= 1 and a finite height");
  return 12.0 * hj_upper + 4.0 * static_cast<double>(genus * deg_k) * std::log(2.0 * pi);
}

double faltings_upper_via_isogeny(double h_target_upper, std::int64_t deg_k,
                                  std::int64_t isogeny_degree) {
  require(deg_k >= 1 && isogeny_degree >= 1 && finite(h_target_upper),
          "faltings_upper_via_isogeny needs degK >= 1 and isogeny degree >= 1");
  return h_target_upper +
         0.5 * static_cast<double>(deg_k) * std::log(static_cast<double>(isogeny_degree));
}

double faltings_height_of_product(std::span<const double> factor_heights) {
  require(!factor_heights.empty(), "product needs at least one factor");
  double sum = 0.0;
  for (double h : factor_heights) {
    require(finite(h), "non-finite factor height");
    sum += h;
  }
  return sum;
}

DeltaSumBound delta_sum_upper(const ArchimedeanInput& input, std::int64_t genus,
                              std::int64_t deg_k) {
  DeltaSumBound out;
  out.value = input.kind == ArchimedeanKind::DeltaSum
                  ? input.value
                  : delta_sum_from_faltings(genus, deg_k, input.value);
  require(finite(out.value), "archimedean value must be finite");
  const double floor = wilms_floor(genus, deg_k);
  if (out.value < floor) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "delta-sum bound " << out.value << " lies below the floor " << floor
        << "; the archimedean input cannot be an upper bound";
    out.warnings.push_back(msg.str());
  }
  return out;
}

double m_constant(std::int64_t genus, std::int64_t deg_k, double delta_sum_upper,
                  std::span<const FibralTerm> fibral) {
  require(genus >= 2 && deg_k >= 1 && finite(delta_sum_upper),
          "m_constant needs g >= 2, degK >= 1 and a finite delta bound");
  const double g = static_cast<double>(genus);
  const double d = static_cast<double>(deg_k);
  double fibral_sum = 0.0;
  for (const FibralTerm& t : fibral) {
    if (t.phi.sign() < 0) throw Error(ErrorCode::NegativePhip, "phi_p = " + t.phi.str());
    require(t.prime_norm >= 2, "prime norm must be >= 2");
    fibral_sum += t.phi.to_double() * log_integer(t.prime_norm);
  }
  const double archimedean = (g - 1) * (g - 1) / 3.0 * std::max(6.0, g + 1) * delta_sum_upper;
  const double finite_part = 2.0 * (g + 1) * fibral_sum;
  const double constant = 2.0 * d * g * (g - 1) * (g - 1) * (3.0 * g * std::log(g) + 16.0);
  return archimedean + finite_part + constant;
}

double m_constant_genus2_rational(double delta_upper, std::span<const FibralTerm> fibral) {
  double fibral_sum = 0.0;
  for (const FibralTerm& t : fibral) fibral_sum += t.phi.to_double() * log_integer(t.prime_norm);
  return 2.0 * delta_upper + 6.0 * fibral_sum + 8.0 * (3.0 * std::log(2.0) + 8.0);
}

double neron_tate_bound(double m, std::int64_t genus, const TauResult& tau) {
  require(genus >= 2 && finite(m) && m > 0.0, "neron_tate_bound needs M > 0 and g >= 2");
  if (!(tau.tau > 0.0)) {
    std::ostringstream msg;
    msg << "tau = " << tau.tau << " <= 0";
    throw Error(ErrorCode::TauNotPositive, msg.str());
  }
  return m / (2.0 * static_cast<double>(genus) * tau.tau);
}

double gap_cos_bound(double h_p, double h_q, std::int64_t genus, double m) {
  require(h_p > 0.0 && h_q > 0.0, "gap_cos_bound needs positive heights");
  require(genus >= 2, "gap_cos_bound needs g >= 2");
  const double two_g = 2.0 * static_cast<double>(genus);
  return m / (two_g * std::sqrt(h_p * h_q)) +
         (std::sqrt(h_p / h_q) + std::sqrt(h_q / h_p)) / two_g;
}

GapDefect gap_defect(double h_p, double h_q, double pairing, std::int64_t genus, double m) {
  GapDefect out;
  out.lhs = h_p + h_q - 2.0 * static_cast<double>(genus) * pairing;
  out.satisfied = out.lhs >= -m;
  return out;
}

double x_height_bound(double nt_bound, double c_x) {
  require(finite(nt_bound) && finite(c_x), "x_height_bound needs finite inputs");
  return 0.5 * (nt_bound + c_x);
}

}  // namespace effmordell
