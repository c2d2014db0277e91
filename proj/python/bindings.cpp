// Python bindings for the effmordell core library.

#include <array>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "effmordell/angle.hpp"
#include "effmordell/curve.hpp"
#include "effmordell/dossier.hpp"
#include "effmordell/error.hpp"
#include "effmordell/fibre.hpp"
#include "effmordell/height.hpp"
#include "effmordell/rational.hpp"

namespace py = pybind11;
using namespace effmordell;

namespace {

Integer to_integer(const py::handle& h) {
  if (!py::isinstance<py::int_>(h)) throw py::type_error("expected an int");
  return Integer(py::str(h).cast<std::string>());
}

py::object from_integer(const Integer& v) {
  return py::module_::import("builtins").attr("int")(v.get_str());
}

// Accepts int, str ("p/q") or fractions.Fraction.
Rational to_rational(const py::handle& h) {
  if (py::isinstance<py::int_>(h)) return Rational(to_integer(h));
  return Rational::parse(py::str(h).cast<std::string>());
}

py::object from_rational(const Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(r.str());
}

RationalVector to_vector(const py::sequence& seq) {
  RationalVector out;
  for (const auto& item : seq) out.push_back(to_rational(item));
  return out;
}

py::list from_vector(const RationalVector& v) {
  py::list out;
  for (const Rational& r : v) out.append(from_rational(r));
  return out;
}

RationalMatrix to_matrix(const py::sequence& rows) {
  const std::size_t n = py::len(rows);
  std::vector<Rational> entries;
  std::size_t cols = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const py::sequence row = rows[i];
    if (i == 0) cols = py::len(row);
    if (py::len(row) != cols) throw Error(ErrorCode::DimensionMismatch, "ragged matrix");
    for (const auto& item : row) entries.push_back(to_rational(item));
  }
  return RationalMatrix(n, cols, std::move(entries));
}

FibreData to_fibre(const py::handle& prime_norm, const std::vector<std::int64_t>& multiplicities,
                   const std::vector<std::int64_t>& genera, const py::sequence& matrix) {
  return FibreData{to_integer(prime_norm), multiplicities, genera, to_matrix(matrix)};
}

SexticCurve to_curve(const py::sequence& coeffs) {
  if (py::len(coeffs) != 7) throw Error(ErrorCode::InvalidParams, "expected 7 coefficients a0..a6");
  std::array<Integer, 7> a;
  for (std::size_t i = 0; i < 7; ++i) a[i] = to_integer(coeffs[i]);
  return SexticCurve(std::move(a));
}

Automorphism to_automorphism(const py::sequence& t) {
  if (py::len(t) != 5) throw Error(ErrorCode::InvalidParams, "automorphism is (a, b, c, d, e)");
  return {to_rational(t[0]), to_rational(t[1]), to_rational(t[2]), to_rational(t[3]),
          to_rational(t[4])};
}

std::vector<Automorphism> to_automorphisms(const py::sequence& gens) {
  std::vector<Automorphism> out;
  for (const auto& g : gens) out.push_back(to_automorphism(g.cast<py::sequence>()));
  return out;
}

py::tuple from_automorphism(const Automorphism& s) {
  return py::make_tuple(from_rational(s.a()), from_rational(s.b()), from_rational(s.c()),
                        from_rational(s.d()), from_rational(s.e()));
}

CurvePoint to_point(const py::sequence& t) {
  if (py::len(t) != 3) throw Error(ErrorCode::InvalidParams, "point is (X, Y, Z)");
  return {to_integer(t[0]), to_integer(t[1]), to_integer(t[2])};
}

py::tuple from_point(const CurvePoint& p) {
  return py::make_tuple(from_integer(p.x()), from_integer(p.y()), from_integer(p.z()));
}

py::list from_points(const std::vector<CurvePoint>& pts) {
  py::list out;
  for (const CurvePoint& p : pts) out.append(from_point(p));
  return out;
}

py::dict tau_dict(const TauResult& t) {
  py::dict d;
  d["tau"] = t.tau;
  d["cos_theta_lower"] = t.cos_theta_lower ? py::object(py::float_(*t.cos_theta_lower)) : py::none();
  d["method"] = std::string(to_string(t.method));
  d["conservative"] = t.conservative;
  return d;
}

TauResult tau_from_value(double value) {
  TauResult t;
  t.tau = value;
  return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Explicit height bounds and rational-point search for genus-2 curves";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def("integer_sqrt", [](const py::int_& n) {
    const IntegerSqrt r = integer_sqrt(to_integer(n));
    return py::make_tuple(from_integer(r.root), r.is_exact);
  }, py::arg("n"), "(floor(sqrt(n)), is_perfect_square)");

  m.def("solve_exact", [](const py::sequence& a, const py::sequence& b) {
    return from_vector(solve_exact(to_matrix(a), to_vector(b)));
  }, py::arg("a"), py::arg("b"));

  m.def("bilinear_form", [](const py::sequence& u, const py::sequence& mat, const py::sequence& v) {
    return from_rational(bilinear_form(to_vector(u), to_matrix(mat), to_vector(v)));
  }, py::arg("u"), py::arg("m"), py::arg("v"));

  m.def("validate_fibre", [](const py::int_& prime_norm, const std::vector<std::int64_t>& mult,
                             const std::vector<std::int64_t>& genera, const py::sequence& matrix,
                             std::int64_t genus) {
    const FibreValidationReport r = validate_fibre(to_fibre(prime_norm, mult, genera, matrix), genus);
    py::dict d;
    d["mu_p"] = from_rational(r.mu_p);
    d["genus_from_fibre"] = from_rational(r.genus_from_fibre);
    py::list failures;
    for (const FibreFailure& f : r.failures) failures.append(py::make_tuple(f.check, f.detail));
    d["failures"] = failures;
    return d;
  }, py::arg("prime_norm"), py::arg("multiplicities"), py::arg("genera"),
     py::arg("intersection_matrix"), py::arg("genus"));

  m.def("phi_correction", [](const py::int_& prime_norm, const std::vector<std::int64_t>& mult,
                             const std::vector<std::int64_t>& genera, const py::sequence& matrix,
                             std::int64_t genus, const py::sequence& d) {
    return from_vector(phi_correction(to_fibre(prime_norm, mult, genera, matrix), genus, to_vector(d)));
  }, py::arg("prime_norm"), py::arg("multiplicities"), py::arg("genera"),
     py::arg("intersection_matrix"), py::arg("genus"), py::arg("d"));

  m.def("xi_solution", [](const py::int_& prime_norm, const std::vector<std::int64_t>& mult,
                          const std::vector<std::int64_t>& genera, const py::sequence& matrix,
                          std::int64_t genus, std::size_t k) {
    if (k < 1) throw Error(ErrorCode::InvalidParams, "k is 1-based");
    return from_vector(xi_solution(to_fibre(prime_norm, mult, genera, matrix), genus, k - 1));
  }, py::arg("prime_norm"), py::arg("multiplicities"), py::arg("genera"),
     py::arg("intersection_matrix"), py::arg("genus"), py::arg("k"),
     "Solution b^(k) of Xi_k; k is 1-based.");

  m.def("phi_p", [](const py::int_& prime_norm, const std::vector<std::int64_t>& mult,
                    const std::vector<std::int64_t>& genera, const py::sequence& matrix,
                    std::int64_t genus) {
    const PhiResult r = phi_p_detailed(to_fibre(prime_norm, mult, genera, matrix), genus);
    py::dict d;
    d["phi"] = from_rational(r.phi);
    py::dict self;
    for (const XiTerm& t : r.terms) self[py::int_(t.k + 1)] = from_rational(t.self_intersection);
    d["self_intersections"] = self;
    return d;
  }, py::arg("prime_norm"), py::arg("multiplicities"), py::arg("genera"),
     py::arg("intersection_matrix"), py::arg("genus"));

  m.def("tau", [](std::int64_t g, std::int64_t r, std::int64_t n) { return tau_dict(tau(g, r, n)); },
        py::arg("g"), py::arg("r"), py::arg("n"));
  m.def("cap_area_fraction", &cap_area_fraction, py::arg("r"), py::arg("rho"));
  m.def("cap_cos_lower", &cap_cos_lower, py::arg("r"), py::arg("n"));

  m.def("wilms_floor", &wilms_floor, py::arg("g"), py::arg("deg_k"));
  m.def("delta_sum_from_faltings", &delta_sum_from_faltings, py::arg("g"), py::arg("deg_k"),
        py::arg("hj_upper"));
  m.def("faltings_upper_via_isogeny", &faltings_upper_via_isogeny, py::arg("h_target_upper"),
        py::arg("deg_k"), py::arg("isogeny_degree"));
  m.def("m_constant", [](std::int64_t g, std::int64_t deg_k, double delta,
                         const std::vector<std::pair<py::int_, py::object>>& fibral) {
    std::vector<FibralTerm> terms;
    for (const auto& [p, phi] : fibral) terms.push_back({to_integer(p), to_rational(phi)});
    return m_constant(g, deg_k, delta, terms);
  }, py::arg("g"), py::arg("deg_k"), py::arg("delta_sum_upper"), py::arg("fibral"),
     "fibral is a list of (prime_norm, phi_p) pairs.");
  m.def("neron_tate_bound", [](double mval, std::int64_t g, double tau_value) {
    return neron_tate_bound(mval, g, tau_from_value(tau_value));
  }, py::arg("m"), py::arg("g"), py::arg("tau"));
  m.def("gap_cos_bound", &gap_cos_bound, py::arg("h_p"), py::arg("h_q"), py::arg("g"), py::arg("m"));
  m.def("gap_defect", [](double hp, double hq, double pairing, std::int64_t g, double mval) {
    const GapDefect d = gap_defect(hp, hq, pairing, g, mval);
    return py::make_tuple(d.lhs, d.satisfied);
  }, py::arg("h_p"), py::arg("h_q"), py::arg("pairing"), py::arg("g"), py::arg("m"));
  m.def("x_height_bound", &x_height_bound, py::arg("nt_bound"), py::arg("c_x"));

  m.def("verify_automorphism", [](const py::sequence& coeffs, const py::sequence& sigma) {
    return verify_automorphism(to_curve(coeffs), to_automorphism(sigma));
  }, py::arg("coeffs"), py::arg("sigma"));

  m.def("group_closure", [](const py::sequence& gens, std::size_t cap) {
    py::list out;
    for (const Automorphism& s : group_closure(to_automorphisms(gens), cap)) out.append(from_automorphism(s));
    return out;
  }, py::arg("gens"), py::arg("cap") = 1024);

  m.def("enumerate_points", [](const py::sequence& coeffs, std::int64_t bound, unsigned jobs) {
    const SexticCurve curve = to_curve(coeffs);
    std::vector<CurvePoint> pts;
    {
      py::gil_scoped_release release;
      pts = enumerate_points(curve, bound, jobs);
    }
    return from_points(pts);
  }, py::arg("coeffs"), py::arg("bound"), py::arg("jobs") = 1);

  m.def("classify_points", [](const py::sequence& coeffs, const py::sequence& gens,
                              const py::sequence& points, std::size_t cap) {
    const SexticCurve curve = to_curve(coeffs);
    const auto group = group_closure(to_automorphisms(gens), cap);
    std::vector<CurvePoint> pts;
    for (const auto& p : points) pts.push_back(to_point(p.cast<py::sequence>()));
    const PointClassification c = classify_points(curve, group, pts);
    return py::make_tuple(from_points(c.trivial_stabilizer), from_points(c.nontrivial_stabilizer));
  }, py::arg("coeffs"), py::arg("gens"), py::arg("points"), py::arg("cap") = 1024,
     "Returns (trivial_stabilizer, nontrivial_stabilizer) under the group generated by gens.");

  m.def("report", [](const std::string& dossier_json, const std::string& format, bool run_search) {
    if (format != "json" && format != "text") {
      throw Error(ErrorCode::InvalidParams, "format must be 'json' or 'text'");
    }
    const Dossier d = parse_dossier(dossier_json);
    HeightBoundReport r;
    {
      py::gil_scoped_release release;
      r = run_pipeline(d, PipelineOptions{.run_search = run_search});
    }
    return format == "json" ? render_json(r) : render_text(r);
  }, py::arg("dossier_json"), py::arg("format") = "json", py::arg("run_search") = true);
}
