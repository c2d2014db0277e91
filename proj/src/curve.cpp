#include "effmordell/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "effmordell/error.hpp"

namespace effmordell {

namespace {

using Poly = std::vector<Rational>;  // coefficient i multiplies x^i

void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Poly poly_mod(Poly a, const Poly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return a;
}

std::size_t gcd_degree(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// (p X + q Z)^k as a binary form of degree k, coefficient i on X^i Z^(k-i).
std::vector<Rational> linear_power(const Rational& p, const Rational& q, std::size_t k) {
  std::vector<Rational> out{Rational(1)};
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<Rational> next(out.size() + 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
      next[i + 1] += out[i] * p;
      next[i] += out[i] * q;
    }
    out = std::move(next);
  }
  return out;
}

Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

std::strong_ordering compare(const Integer& a, const Integer& b) {
  const int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Integer lcm_int(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace

SexticCurve::SexticCurve(std::array<Integer, 7> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_[6] == 0 && coeffs_[5] == 0) {
    throw Error(ErrorCode::InvalidParams, "genus-2 model needs degree 5 or 6: " + str());
  }
  Poly f;
  for (const Integer& a : coeffs_) f.emplace_back(a);
  Poly df;
  for (std::size_t i = 1; i < f.size(); ++i) df.push_back(f[i] * Rational(static_cast<long>(i)));
  if (gcd_degree(f, df) != 0) {
    throw Error(ErrorCode::InvalidParams, "f is not squarefree: " + str());
  }
}

Integer SexticCurve::evaluate(const Integer& x, const Integer& z) const {
  Integer acc = 0;
  for (std::size_t i = 7; i-- > 0;) {
    acc = acc * x + coeffs_[i] * ipow(z, 6 - i);
  }
  return acc;
}

BinarySextic SexticCurve::binary_form() const {
  BinarySextic out;
  for (std::size_t i = 0; i < 7; ++i) out[i] = Rational(coeffs_[i]);
  return out;
}

std::string SexticCurve::str() const {
  std::string out = "y^2 = ";
  bool first = true;
  for (std::size_t i = 7; i-- > 0;) {
    const Integer& a = coeffs_[i];
    if (a == 0) continue;
    Integer mag = abs(a);
    if (!first) out += sgn(a) < 0 ? " - " : " + ";
    else if (sgn(a) < 0) out += "-";
    first = false;
    if (mag != 1 || i == 0) out += mag.get_str();
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  if (first) out += "0";
  return out;
}

CurvePoint::CurvePoint(Integer x, Integer y, Integer z)
    : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)) {
  if (x_ == 0 && z_ == 0) throw Error(ErrorCode::DegeneratePoint, "X = Z = 0");
  Integer g;
  mpz_gcd(g.get_mpz_t(), x_.get_mpz_t(), z_.get_mpz_t());
  if (g != 1) {
    const Integer g3 = g * g * g;
    if (!mpz_divisible_p(y_.get_mpz_t(), g3.get_mpz_t())) {
      throw Error(ErrorCode::InvalidParams, "no integral normalized form for [" + x_.get_str() +
                                                ":" + y_.get_str() + ":" + z_.get_str() + "]");
    }
    x_ /= g;
    z_ /= g;
    y_ /= g3;
  }
  if (sgn(z_) < 0 || (z_ == 0 && sgn(x_) < 0)) {
    // lambda = -1 acts by lambda^3 = -1 on Y.
    x_ = -x_;
    y_ = -y_;
    z_ = -z_;
  }
}

std::string CurvePoint::str() const {
  return "[" + x_.get_str() + ":" + y_.get_str() + ":" + z_.get_str() + "]";
}

std::strong_ordering operator<=>(const CurvePoint& a, const CurvePoint& b) {
  if (auto c = compare(a.x_, b.x_); c != 0) return c;
  if (auto c = compare(a.y_, b.y_); c != 0) return c;
  return compare(a.z_, b.z_);
}

Automorphism::Automorphism(Rational a, Rational b, Rational c, Rational d, Rational e)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), e_(std::move(e)) {
  if ((a_ * d_ - b_ * c_).is_zero()) throw Error(ErrorCode::InvalidParams, "ad - bc = 0");
  if (e_.is_zero()) throw Error(ErrorCode::InvalidParams, "e = 0");
  const Rational& lead = !a_.is_zero() ? a_ : b_;
  if (lead != Rational(1)) {
    const Rational lambda = Rational(1) / lead;
    a_ *= lambda;
    b_ *= lambda;
    c_ *= lambda;
    d_ *= lambda;
    e_ *= lambda * lambda * lambda;
  }
}

Automorphism Automorphism::identity() { return {1, 0, 0, 1, 1}; }

Automorphism Automorphism::after(const Automorphism& f) const {
  // [a b; c d] * [fa fb; fc fd], Y picks up e * fe.
  return {a_ * f.a_ + b_ * f.c_, a_ * f.b_ + b_ * f.d_, c_ * f.a_ + d_ * f.c_,
          c_ * f.b_ + d_ * f.d_, e_ * f.e_};
}

Automorphism Automorphism::inverse() const {
  const Rational det = a_ * d_ - b_ * c_;
  return {d_ / det, -b_ / det, -c_ / det, a_ / det, Rational(1) / e_};
}

std::string Automorphism::str() const {
  return "(" + a_.str() + ", " + b_.str() + ", " + c_.str() + ", " + d_.str() + ", " + e_.str() +
         ")";
}

std::strong_ordering operator<=>(const Automorphism& l, const Automorphism& r) {
  if (auto c = l.a_ <=> r.a_; c != 0) return c;
  if (auto c = l.b_ <=> r.b_; c != 0) return c;
  if (auto c = l.c_ <=> r.c_; c != 0) return c;
  if (auto c = l.d_ <=> r.d_; c != 0) return c;
  return l.e_ <=> r.e_;
}

bool is_on_curve(const SexticCurve& curve, const CurvePoint& p) {
  return p.y() * p.y() == curve.evaluate(p.x(), p.z());
}

bool verify_automorphism(const SexticCurve& curve, const Automorphism& sigma) {
  BinarySextic image{};
  for (std::size_t i = 0; i < 7; ++i) {
    const Integer& ai = curve.coeff(i);
    if (ai == 0) continue;
    const auto left = linear_power(sigma.a(), sigma.b(), i);
    const auto right = linear_power(sigma.c(), sigma.d(), 6 - i);
    for (std::size_t u = 0; u < left.size(); ++u)
      for (std::size_t v = 0; v < right.size(); ++v)
        image[u + v] += Rational(ai) * left[u] * right[v];
  }
  const Rational e2 = sigma.e() * sigma.e();
  for (std::size_t i = 0; i < 7; ++i) {
    if (image[i] != e2 * Rational(curve.coeff(i))) return false;
  }
  return true;
}

CurvePoint apply_automorphism(const Automorphism& s, const CurvePoint& p) {
  const Rational x(p.x());
  const Rational z(p.z());
  const Rational nx = s.a() * x + s.b() * z;
  const Rational nz = s.c() * x + s.d() * z;
  if (nx.is_zero() && nz.is_zero()) throw Error(ErrorCode::DegeneratePoint, "image has X = Z = 0");
  const Integer lambda = lcm_int(nx.denominator(), nz.denominator());
  const Rational l(lambda);
  const Rational ny = s.e() * Rational(p.y()) * l * l * l;
  if (!ny.is_integer()) {
    throw Error(ErrorCode::InvalidParams, "image of " + p.str() + " is not integral");
  }
  return {(nx * l).numerator(), ny.numerator(), (nz * l).numerator()};
}

std::vector<Automorphism> group_closure(std::span<const Automorphism> gens, std::size_t cap) {
  std::set<Automorphism> group{Automorphism::identity()};
  std::vector<Automorphism> frontier{Automorphism::identity()};
  while (!frontier.empty()) {
    std::vector<Automorphism> next;
    for (const Automorphism& g : frontier) {
      for (const Automorphism& s : gens) {
        Automorphism h = s.after(g);
        if (group.insert(h).second) {
          if (group.size() > cap) {
            throw Error(ErrorCode::CapExceeded,
                        "group generated exceeds " + std::to_string(cap) + " elements");
          }
          next.push_back(std::move(h));
        }
      }
    }
    frontier = std::move(next);
  }
  return {group.begin(), group.end()};
}

std::vector<Automorphism> stabilizer(std::span<const Automorphism> group, const CurvePoint& p) {
  std::vector<Automorphism> out;
  for (const Automorphism& s : group)
    if (apply_automorphism(s, p) == p) out.push_back(s);
  return out;
}

std::vector<CurvePoint> orbit(std::span<const Automorphism> group, const CurvePoint& p) {
  std::set<CurvePoint> pts;
  for (const Automorphism& s : group) pts.insert(apply_automorphism(s, p));
  return {pts.begin(), pts.end()};
}

namespace detail {

namespace {
std::vector<bool> build_square_table() {
  std::vector<bool> table(kPrefilterModulus, false);
  auto squares = [](std::uint64_t m) {
    std::vector<bool> s(m, false);
    for (std::uint64_t x = 0; x < m; ++x) s[(x * x) % m] = true;
    return s;
  };
  const auto s64 = squares(64), s63 = squares(63), s65 = squares(65), s11 = squares(11);
  for (std::uint64_t r = 0; r < kPrefilterModulus; ++r)
    table[r] = s64[r % 64] && s63[r % 63] && s65[r % 65] && s11[r % 11];
  return table;
}
}  // namespace

u128 isqrt_u128(u128 v) {
  if (v < 2) return v;
  // Start at or above the root, then walk down.
  u128 x = static_cast<u128>(std::sqrt(static_cast<long double>(v))) + 2;
  for (;;) {
    const u128 y = (x + v / x) >> 1;
    if (y >= x) break;
    x = y;
  }
  while (x * x > v) --x;
  while ((x + 1) * (x + 1) <= v) ++x;
  return x;
}

bool passes_square_prefilter(std::uint64_t residue) {
  static const std::vector<bool> table = build_square_table();
  return table[residue % kPrefilterModulus];
}

}  // namespace detail

namespace {

std::uint64_t residue(const Integer& v) {
  return mpz_fdiv_ui(v.get_mpz_t(), detail::kPrefilterModulus);
}

__extension__ typedef __int128 i128;

// Every partial Horner sum of F(p, q) is bounded by sum |a_i| * bound^6.
bool fits_in_i128(const SexticCurve& curve, std::int64_t bound) {
  Integer total = 0;
  for (const Integer& a : curve.coeffs()) total += abs(a);
  Integer limit = 1;
  limit <<= 125;
  return total * ipow(Integer(static_cast<long>(bound)), 6) < limit;
}

void add_points(const Integer& p, const Integer& q, const Integer& root,
                std::vector<CurvePoint>& out) {
  out.emplace_back(p, root, q);
  if (root != 0) out.emplace_back(p, -root, q);
}

void scan_rows(const SexticCurve& curve, std::int64_t bound, std::int64_t first_q,
               std::int64_t step, std::vector<CurvePoint>& out) {
  constexpr std::uint64_t mod = detail::kPrefilterModulus;
  std::array<std::uint64_t, 7> a_mod{};
  for (std::size_t i = 0; i < 7; ++i) a_mod[i] = residue(curve.coeff(i));

  const bool small = fits_in_i128(curve, bound);
  std::array<i128, 7> a_small{};
  if (small) {
    for (std::size_t i = 0; i < 7; ++i) a_small[i] = curve.coeff(i).get_si();
  }

  for (std::int64_t q = first_q; q <= bound; q += step) {
    // c_i = a_i q^(6-i), reduced and exact.
    std::array<std::uint64_t, 7> c{};
    std::array<i128, 7> c_exact{};
    std::uint64_t qpow = 1;
    i128 qpow_exact = 1;
    const std::uint64_t qm = static_cast<std::uint64_t>(q) % mod;
    for (std::size_t k = 0; k <= 6; ++k) {
      c[6 - k] = (a_mod[6 - k] * qpow) % mod;
      qpow = (qpow * qm) % mod;
      if (small) {
        c_exact[6 - k] = a_small[6 - k] * qpow_exact;
        qpow_exact *= q;
      }
    }
    const Integer qz(static_cast<long>(q));
    for (std::int64_t p = -bound; p <= bound; ++p) {
      const std::uint64_t pm =
          static_cast<std::uint64_t>(((p % static_cast<std::int64_t>(mod)) + mod) % mod);
      std::uint64_t h = c[6];
      for (std::size_t i = 6; i-- > 0;) h = (h * pm + c[i]) % mod;
      if (!detail::passes_square_prefilter(h)) continue;
      if (std::gcd(p, q) != 1) continue;
      const Integer pz(static_cast<long>(p));
      if (small) {
        i128 value = c_exact[6];
        for (std::size_t i = 6; i-- > 0;) value = value * p + c_exact[i];
        if (value < 0) continue;
        const auto v = static_cast<detail::u128>(value);
        const detail::u128 root = detail::isqrt_u128(v);
        if (root * root != v) continue;
        // root < 2^63 because value < 2^125.
        add_points(pz, qz, Integer(static_cast<unsigned long>(root)), out);
        continue;
      }
      const Integer value = curve.evaluate(pz, qz);
      if (sgn(value) < 0) continue;
      IntegerSqrt root = integer_sqrt(value);
      if (!root.is_exact) continue;
      add_points(pz, qz, root.root, out);
    }
  }
}

}  // namespace

std::vector<CurvePoint> enumerate_points(const SexticCurve& curve, std::int64_t bound,
                                         unsigned jobs) {
  if (bound < 1) throw Error(ErrorCode::InvalidParams, "search bound must be >= 1");
  std::vector<CurvePoint> points;

  const Integer& a6 = curve.coeff(6);
  if (a6 == 0) {
    points.emplace_back(Integer(1), Integer(0), Integer(0));
  } else if (sgn(a6) > 0) {
    const IntegerSqrt root = integer_sqrt(a6);
    if (root.is_exact) {
      points.emplace_back(Integer(1), root.root, Integer(0));
      points.emplace_back(Integer(1), -root.root, Integer(0));
    }
  }

  jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(std::min<std::int64_t>(bound, 256)));
  if (jobs == 1) {
    scan_rows(curve, bound, 1, 1, points);
  } else {
    std::vector<std::vector<CurvePoint>> partial(jobs);
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back(scan_rows, std::cref(curve), bound, static_cast<std::int64_t>(w) + 1,
                           static_cast<std::int64_t>(jobs), std::ref(partial[w]));
    }
    for (auto& t : workers) t.join();
    for (auto& part : partial) points.insert(points.end(), part.begin(), part.end());
  }

  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

PointClassification classify_points(const SexticCurve& curve, std::span<const Automorphism> group,
                                    std::span<const CurvePoint> points) {
  PointClassification out;
  for (const CurvePoint& p : points) {
    if (!is_on_curve(curve, p)) {
      throw Error(ErrorCode::InvalidParams, p.str() + " is not on " + curve.str());
    }
    const bool trivial = std::all_of(group.begin(), group.end(), [&](const Automorphism& s) {
      return s.is_identity() || !(apply_automorphism(s, p) == p);
    });
    (trivial ? out.trivial_stabilizer : out.nontrivial_stabilizer).push_back(p);
  }
  return out;
}

}  // namespace effmordell
