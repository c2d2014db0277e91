#pragma once

// Shared fixtures and test-only oracles. Nothing here calls into the code
// paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "effmordell/curve.hpp"
#include "effmordell/fibre.hpp"

namespace effmordell::testing {

/// Special fibre at 2 of the minimal regular model of y^2 = x^6 + x^4 + x^2 + 1.
inline FibreData example_fibre() {
  return FibreData{
      Integer(2),
      {1, 1, 1, 1, 1, 1, 2, 2, 2},
      {0, 0, 0, 0, 0, 0, 0, 0, 0},
      RationalMatrix::from_rows({
          {-2, 0, 0, 0, 0, 0, 1, 0, 0},
          {0, -2, 0, 0, 0, 0, 1, 0, 0},
          {0, 0, -2, 0, 0, 0, 1, 0, 0},
          {0, 0, 0, -2, 0, 0, 1, 0, 0},
          {0, 0, 0, 0, -2, 0, 0, 1, 0},
          {0, 0, 0, 0, 0, -2, 0, 1, 0},
          {1, 1, 1, 1, 0, 0, -3, 0, 1},
          {0, 0, 0, 0, 1, 1, 0, -2, 1},
          {0, 0, 0, 0, 0, 0, 1, 1, -2},
      })};
}

/// Two rational components meeting with multiplicity 3; valid for g = 2.
inline FibreData two_component_fibre() {
  return FibreData{Integer(3), {1, 1}, {0, 0}, RationalMatrix::from_rows({{-3, 3}, {3, -3}})};
}

inline FibreData irreducible_fibre(std::int64_t genus) {
  return FibreData{Integer(5), {1}, {genus}, RationalMatrix::from_rows({{0}})};
}

inline SexticCurve example_curve() {
  return SexticCurve({Integer(1), Integer(0), Integer(1), Integer(0), Integer(1), Integer(0), Integer(1)});
}

inline Automorphism aut_s() { return {1, 0, 0, 1, -1}; }  // (x, y) -> (x, -y)
inline Automorphism aut_t() { return {-1, 0, 0, 1, 1}; }  // (x, y) -> (-x, y)
inline Automorphism aut_u() { return {0, 1, 1, 0, 1}; }   // (x, y) -> (1/x, y/x^3)

inline std::vector<Automorphism> example_generators() { return {aut_s(), aut_t(), aut_u()}; }

inline CurvePoint pt(long x, long y, long z) { return CurvePoint(Integer(x), Integer(y), Integer(z)); }

/// The eight rational points listed for the example curve.
inline std::vector<CurvePoint> example_points() {
  std::vector<CurvePoint> v{pt(1, -1, 0), pt(1, 1, 0),  pt(-1, -2, 1), pt(-1, 2, 1),
                            pt(1, -2, 1), pt(1, 2, 1), pt(0, -1, 1),  pt(0, 1, 1)};
  std::sort(v.begin(), v.end());
  return v;
}

/// Random connected weighted graph of genus-g components, all multiplicity 1.
/// The diagonal makes every row sum vanish, and the curve genus satisfies
/// g - 1 = sum_e w_e - s + sum_j g_j. Returns the fibre and that genus.
struct GeneratedFibre {
  FibreData fibre;
  std::int64_t genus;
};

inline GeneratedFibre random_graph_fibre(std::mt19937_64& rng, bool cycle) {
  std::uniform_int_distribution<int> size_dist(2, 8);
  std::uniform_int_distribution<int> weight_dist(1, 3);
  const std::size_t s = static_cast<std::size_t>(size_dist(rng));
  std::vector<std::vector<long>> w(s, std::vector<long>(s, 0));
  // Chain, optionally closed into a cycle, plus a few random chords.
  for (std::size_t i = 0; i + 1 < s; ++i) w[i][i + 1] = w[i + 1][i] = weight_dist(rng);
  if (cycle && s >= 3) w[0][s - 1] = w[s - 1][0] = weight_dist(rng);
  std::uniform_int_distribution<std::size_t> idx(0, s - 1);
  for (int extra = std::uniform_int_distribution<int>(0, 2)(rng); extra > 0; --extra) {
    const std::size_t i = idx(rng), j = idx(rng);
    if (i != j) w[i][j] = w[j][i] = w[i][j] + 1;
  }
  std::vector<Rational> entries(s * s);
  std::int64_t edge_sum = 0;
  for (std::size_t i = 0; i < s; ++i) {
    long deg = 0;
    for (std::size_t j = 0; j < s; ++j) {
      if (i == j) continue;
      entries[i * s + j] = w[i][j];
      deg += w[i][j];
      if (j > i) edge_sum += w[i][j];
    }
    entries[i * s + i] = -deg;
  }
  std::vector<std::int64_t> genera(s, 0);
  std::uniform_int_distribution<int> genus_dist(0, 1);
  for (auto& g : genera) g = genus_dist(rng);
  std::int64_t genus = edge_sum - static_cast<std::int64_t>(s) + 1 +
                       std::accumulate(genera.begin(), genera.end(), std::int64_t{0});
  if (genus < 2) {
    genera[0] += 2 - genus;
    genus = 2;
  }
  return {FibreData{Integer(7), std::vector<std::int64_t>(s, 1), genera,
                    RationalMatrix(s, s, std::move(entries))},
          genus};
}

/// Applies a permutation to components: new index i holds old index perm[i].
inline FibreData permute(const FibreData& f, const std::vector<std::size_t>& perm) {
  const std::size_t s = f.size();
  FibreData out{f.prime_norm, {}, {}, RationalMatrix(s, s)};
  for (std::size_t i = 0; i < s; ++i) {
    out.multiplicities.push_back(f.multiplicities[perm[i]]);
    out.genera.push_back(f.genera[perm[i]]);
    for (std::size_t j = 0; j < s; ++j) out.intersection(i, j) = f.intersection(perm[i], perm[j]);
  }
  return out;
}

/// int_0^rho sin^k t dt via the reduction formula
/// J_k = -sin^(k-1) cos / k + (k-1)/k J_(k-2).
inline double sine_power_integral_closed(int k, double rho) {
  if (k == 0) return rho;
  if (k == 1) return 1.0 - std::cos(rho);
  return -std::pow(std::sin(rho), k - 1) * std::cos(rho) / k +
         static_cast<double>(k - 1) / k * sine_power_integral_closed(k - 2, rho);
}

inline double cap_fraction_closed(int r, double rho) {
  return sine_power_integral_closed(r - 2, rho) / sine_power_integral_closed(r - 2, M_PI);
}

inline std::set<CurvePoint> points_at_infinity(const SexticCurve& c) {
  std::set<CurvePoint> out;
  const long a6 = c.coeff(6).get_si();
  if (a6 == 0) out.insert(pt(1, 0, 0));
  for (long y = 0; y * y <= a6; ++y) {
    if (y * y == a6) {
      out.insert(pt(1, y, 0));
      out.insert(pt(1, -y, 0));
    }
  }
  return out;
}

/// F(p, q) in machine integers; callers keep sum |a_i| * bound^6 below 2^63.
inline long eval_small(const SexticCurve& c, long p, long q) {
  long f = 0;
  for (int i = 6; i >= 0; --i) {
    long zp = 1;
    for (int k = 0; k < 6 - i; ++k) zp *= q;
    long xp = 1;
    for (int k = 0; k < i; ++k) xp *= p;
    f += c.coeff(static_cast<std::size_t>(i)).get_si() * xp * zp;
  }
  return f;
}

/// Brute-force point search: for every coprime (p, q) tries every y with
/// y^2 <= F(p, q) directly, plus the points at infinity.
inline std::set<CurvePoint> naive_points(const SexticCurve& c, long bound) {
  std::set<CurvePoint> out = points_at_infinity(c);
  for (long q = 1; q <= bound; ++q) {
    for (long p = -bound; p <= bound; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const long f = eval_small(c, p, q);
      for (long y = 0; y * y <= f; ++y) {
        if (y * y == f) {
          out.insert(pt(p, y, q));
          out.insert(pt(p, -y, q));
        }
      }
    }
  }
  return out;
}

/// Same search with GMP's own perfect-square test in place of the y loop.
inline std::set<CurvePoint> gmp_square_points(const SexticCurve& c, long bound) {
  std::set<CurvePoint> out = points_at_infinity(c);
  for (long q = 1; q <= bound; ++q) {
    for (long p = -bound; p <= bound; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const Integer f(eval_small(c, p, q));
      if (sgn(f) < 0 || !mpz_perfect_square_p(f.get_mpz_t())) continue;
      const Integer y = sqrt(f);
      out.insert(CurvePoint(Integer(p), y, Integer(q)));
      out.insert(CurvePoint(Integer(p), Integer(-y), Integer(q)));
    }
  }
  return out;
}

/// Random squarefree sextic or quintic with small coefficients.
inline SexticCurve random_curve(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-4, 4);
  for (;;) {
    std::array<Integer, 7> a;
    for (auto& v : a) v = coef(rng);
    // Bias a0 and a6 toward squares so that points show up.
    if (rng() % 2) a[0] = (rng() % 2) ? 1 : 4;
    if (rng() % 2) a[6] = (rng() % 2) ? 1 : 0;
    try {
      return SexticCurve(a);
    } catch (const std::exception&) {
    }
  }
}

}  // namespace effmordell::testing
