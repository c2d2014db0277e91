#include "effmordell/dossier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "effmordell/error.hpp"

namespace effmordell {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr std::size_t kGroupCap = 1024;

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ParseError, "field '" + path + "': " + what);
}

const json& require_key(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      field_error(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
  }
}

std::int64_t as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) field_error(path, "expected an integer");
  return j.get<std::int64_t>();
}

Integer as_big_integer(const json& j, const std::string& path) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Integer(std::to_string(j.get<std::uint64_t>()))
                                  : Integer(static_cast<long>(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    try {
      const Rational r = Rational::parse(j.get<std::string>());
      if (r.is_integer()) return r.numerator();
    } catch (const Error&) {
    }
  }
  field_error(path, "expected an integer (number or decimal string)");
}

Rational as_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(as_big_integer(j, path));
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const Error&) {
    }
  }
  field_error(path, "expected an integer or a \"p/q\" string");
}

double as_real(const json& j, const std::string& path) {
  if (!j.is_number()) field_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(path, "expected a finite number");
  return v;
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) field_error(path, "expected an array");
  return j;
}

FibreData parse_fibre(const json& j, const std::string& path) {
  if (!j.is_object()) field_error(path, "expected an object");
  reject_unknown_keys(j, {"prime_norm", "multiplicities", "genera", "intersection_matrix"}, path);
  FibreData f;
  f.prime_norm = as_big_integer(require_key(j, "prime_norm", path), path + ".prime_norm");
  const json& mult = as_array(require_key(j, "multiplicities", path), path + ".multiplicities");
  for (std::size_t i = 0; i < mult.size(); ++i)
    f.multiplicities.push_back(as_int(mult[i], path + ".multiplicities[" + std::to_string(i) + "]"));
  const json& gen = as_array(require_key(j, "genera", path), path + ".genera");
  for (std::size_t i = 0; i < gen.size(); ++i)
    f.genera.push_back(as_int(gen[i], path + ".genera[" + std::to_string(i) + "]"));

  const std::string mpath = path + ".intersection_matrix";
  const json& rows = as_array(require_key(j, "intersection_matrix", path), mpath);
  const std::size_t n = rows.size();
  std::vector<Rational> entries;
  std::size_t cols = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string rpath = mpath + "[" + std::to_string(i) + "]";
    const json& row = as_array(rows[i], rpath);
    if (i == 0) cols = row.size();
    if (row.size() != cols) field_error(rpath, "ragged matrix row");
    for (std::size_t k = 0; k < row.size(); ++k)
      entries.push_back(as_rational(row[k], rpath + "[" + std::to_string(k) + "]"));
  }
  f.intersection = RationalMatrix(n, cols, std::move(entries));
  return f;
}

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Rounds an upper bound upward to the given number of decimals.
std::string upper(double v, int digits) {
  const double scale = std::pow(10.0, digits);
  return fixed(std::ceil(v * scale) / scale, digits);
}

std::string index_list(const std::vector<XiTerm>& terms) {
  std::string out;
  for (const XiTerm& t : terms) {
    if (!out.empty()) out += ", ";
    out += std::to_string(t.k + 1);
  }
  return "{" + out + "}";
}

ojson tagged(double value, std::string_view source) {
  ojson o;
  o["value"] = value;
  o["source"] = source;
  return o;
}

ojson tagged(const Rational& value, std::string_view source) {
  ojson o;
  o["value"] = value.str();
  o["source"] = source;
  return o;
}

ojson rational_array(const RationalVector& v) {
  ojson a = ojson::array();
  for (const Rational& r : v) a.push_back(r.str());
  return a;
}

ojson point_array(const std::vector<CurvePoint>& pts) {
  ojson a = ojson::array();
  for (const CurvePoint& p : pts) a.push_back(p.str());
  return a;
}

}  // namespace

Dossier parse_dossier_unchecked(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "malformed JSON at " + location(text, e.byte) + ": " + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::ParseError, "dossier must be a JSON object");
  reject_unknown_keys(root,
                      {"label", "genus", "deg_k", "rank_upper", "aut_order", "fibres",
                       "archimedean", "height_constant", "curve", "automorphisms", "search_bound"},
                      "");

  Dossier d;
  const json& label = require_key(root, "label", "");
  if (!label.is_string()) field_error("label", "expected a string");
  d.label = label.get<std::string>();
  d.genus = as_int(require_key(root, "genus", ""), "genus");
  d.deg_k = as_int(require_key(root, "deg_k", ""), "deg_k");
  d.rank_upper = as_int(require_key(root, "rank_upper", ""), "rank_upper");
  d.aut_order = as_int(require_key(root, "aut_order", ""), "aut_order");

  const json& fibres = as_array(require_key(root, "fibres", ""), "fibres");
  for (std::size_t i = 0; i < fibres.size(); ++i)
    d.fibres.push_back(parse_fibre(fibres[i], "fibres[" + std::to_string(i) + "]"));

  const json& arch = require_key(root, "archimedean", "");
  if (!arch.is_object()) field_error("archimedean", "expected an object");
  reject_unknown_keys(arch, {"kind", "value", "isogeny"}, "archimedean");
  const json& kind = require_key(arch, "kind", "archimedean");
  if (kind == "delta_sum") {
    d.archimedean.kind = ArchimedeanKind::DeltaSum;
  } else if (kind == "faltings_height") {
    d.archimedean.kind = ArchimedeanKind::FaltingsHeight;
  } else {
    field_error("archimedean.kind", "expected \"delta_sum\" or \"faltings_height\"");
  }
  d.archimedean.value = as_real(require_key(arch, "value", "archimedean"), "archimedean.value");
  if (auto it = arch.find("isogeny"); it != arch.end()) {
    if (!it->is_object()) field_error("archimedean.isogeny", "expected an object");
    reject_unknown_keys(*it, {"factor_heights", "degree"}, "archimedean.isogeny");
    IsogenyRoute route;
    const json& hs = as_array(require_key(*it, "factor_heights", "archimedean.isogeny"),
                              "archimedean.isogeny.factor_heights");
    for (std::size_t i = 0; i < hs.size(); ++i)
      route.factor_heights.push_back(
          as_real(hs[i], "archimedean.isogeny.factor_heights[" + std::to_string(i) + "]"));
    route.degree = as_int(require_key(*it, "degree", "archimedean.isogeny"), "archimedean.isogeny.degree");
    d.isogeny = std::move(route);
  }

  if (auto it = root.find("height_constant"); it != root.end() && !it->is_null())
    d.height_constant = as_real(*it, "height_constant");

  if (auto it = root.find("curve"); it != root.end() && !it->is_null()) {
    if (!it->is_object()) field_error("curve", "expected an object");
    reject_unknown_keys(*it, {"coeffs"}, "curve");
    const json& coeffs = as_array(require_key(*it, "coeffs", "curve"), "curve.coeffs");
    if (coeffs.size() != 7) field_error("curve.coeffs", "expected 7 coefficients a0..a6");
    std::array<Integer, 7> a;
    for (std::size_t i = 0; i < 7; ++i)
      a[i] = as_big_integer(coeffs[i], "curve.coeffs[" + std::to_string(i) + "]");
    try {
      d.curve.emplace(std::move(a));
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationError, std::string("curve: ") + e.what());
    }
  }

  if (auto it = root.find("automorphisms"); it != root.end() && !it->is_null()) {
    const json& autos = as_array(*it, "automorphisms");
    for (std::size_t i = 0; i < autos.size(); ++i) {
      const std::string path = "automorphisms[" + std::to_string(i) + "]";
      const json& s = autos[i];
      if (!s.is_object()) field_error(path, "expected an object {a,b,c,d,e}");
      reject_unknown_keys(s, {"a", "b", "c", "d", "e"}, path);
      auto coef = [&](const char* key) {
        return as_rational(require_key(s, key, path), path + "." + key);
      };
      try {
        d.automorphisms.emplace_back(coef("a"), coef("b"), coef("c"), coef("d"), coef("e"));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        field_error(path, e.what());
      }
    }
  }

  if (auto it = root.find("search_bound"); it != root.end() && !it->is_null())
    d.search_bound = as_int(*it, "search_bound");
  return d;
}

std::vector<std::string> validate_dossier(const Dossier& d) {
  std::vector<std::string> issues;
  if (d.genus < 2) issues.push_back("genus must be >= 2");
  if (d.deg_k < 1) issues.push_back("deg_k must be >= 1");
  if (d.rank_upper < 0) issues.push_back("rank_upper must be >= 0");
  if (d.aut_order < 1) issues.push_back("aut_order must be >= 1");
  if (d.curve && (d.genus != 2 || d.deg_k != 1))
    issues.push_back("a curve model requires genus = 2 and deg_k = 1");
  if (d.search_bound && *d.search_bound < 1) issues.push_back("search_bound must be >= 1");
  if (d.isogeny) {
    if (d.archimedean.kind != ArchimedeanKind::FaltingsHeight)
      issues.push_back("archimedean.isogeny requires kind = faltings_height");
    if (d.isogeny->degree < 1) issues.push_back("archimedean.isogeny.degree must be >= 1");
    if (d.isogeny->factor_heights.empty())
      issues.push_back("archimedean.isogeny.factor_heights must be nonempty");
  }
  if (d.genus >= 2) {
    for (std::size_t i = 0; i < d.fibres.size(); ++i) {
      const FibreValidationReport r = validate_fibre(d.fibres[i], d.genus);
      for (const FibreFailure& f : r.failures) {
        issues.push_back("fibres[" + std::to_string(i) + "] (N = " + d.fibres[i].prime_norm.get_str() +
                         "): " + f.check + ": " + f.detail);
      }
      if (r.ok() && std::none_of(d.fibres[i].multiplicities.begin(), d.fibres[i].multiplicities.end(),
                                 [](std::int64_t m) { return m == 1; })) {
        issues.push_back("fibres[" + std::to_string(i) + "]: no component of multiplicity 1");
      }
    }
  }
  if (d.curve) {
    for (std::size_t i = 0; i < d.automorphisms.size(); ++i) {
      if (!verify_automorphism(*d.curve, d.automorphisms[i])) {
        issues.push_back("automorphisms[" + std::to_string(i) + "] " + d.automorphisms[i].str() +
                         " does not preserve " + d.curve->str());
      }
    }
  }
  return issues;
}

Dossier parse_dossier(std::string_view text) {
  Dossier d = parse_dossier_unchecked(text);
  const auto issues = validate_dossier(d);
  if (!issues.empty()) {
    std::string msg = std::to_string(issues.size()) + " problem(s)";
    for (const auto& s : issues) msg += "\n  " + s;
    throw Error(ErrorCode::ValidationError, msg);
  }
  return d;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

HeightBoundReport run_pipeline(const Dossier& d, const PipelineOptions& options) {
  if (const auto issues = validate_dossier(d); !issues.empty()) {
    throw Error(ErrorCode::ValidationError, issues.front());
  }
  HeightBoundReport rep;
  rep.label = d.label;
  rep.genus = d.genus;
  rep.deg_k = d.deg_k;
  rep.rank_upper = d.rank_upper;
  rep.rank_used = std::max<std::int64_t>(d.rank_upper, 1);
  rep.aut_order = d.aut_order;
  rep.archimedean = d.archimedean;
  rep.height_constant = d.height_constant;

  std::vector<FibralTerm> fibral;
  for (const FibreData& f : d.fibres) {
    FibreOutcome out{f.prime_norm, phi_p_detailed(f, d.genus)};
    fibral.push_back({f.prime_norm, out.phi.phi});
    rep.fibres.push_back(std::move(out));
  }

  if (d.isogeny) {
    const double product = faltings_height_of_product(d.isogeny->factor_heights);
    rep.isogeny_derived_hj = faltings_upper_via_isogeny(product, d.deg_k, d.isogeny->degree);
    if (d.archimedean.value < *rep.isogeny_derived_hj) {
      rep.warnings.push_back("archimedean value " + fixed(d.archimedean.value, 6) +
                             " is smaller than the isogeny-derived bound " +
                             fixed(*rep.isogeny_derived_hj, 6) + " and is not backed by it");
    }
  }
  DeltaSumBound delta = delta_sum_upper(d.archimedean, d.genus, d.deg_k);
  rep.delta_sum_upper = delta.value;
  rep.warnings.insert(rep.warnings.end(), delta.warnings.begin(), delta.warnings.end());

  rep.m_exact = m_constant(d.genus, d.deg_k, rep.delta_sum_upper, fibral);
  rep.m = rep.m_exact + kReportSlack;

  if (d.aut_order < 2) {
    rep.verdict = Verdict::TauNotPositive;
    rep.warnings.push_back("tau is undefined for a subgroup of order 1");
  } else {
    rep.tau_used = tau(d.genus, rep.rank_used, d.aut_order);
    if (rep.tau_used.tau > 0.0 && rep.m > 0.0) {
      rep.neron_tate_bound = neron_tate_bound(rep.m, d.genus, rep.tau_used) + kReportSlack;
      if (d.height_constant) rep.x_height_bound = x_height_bound(*rep.neron_tate_bound, *d.height_constant);
    } else {
      rep.verdict = Verdict::TauNotPositive;
    }
  }

  const auto bound = options.bound_override ? options.bound_override : d.search_bound;
  if (options.run_search && d.curve && bound) {
    SearchOutcome s;
    s.bound = *bound;
    s.group = group_closure(d.automorphisms, kGroupCap);
    if (static_cast<std::int64_t>(s.group.size()) != d.aut_order) {
      rep.warnings.push_back("automorphisms generate a group of order " + std::to_string(s.group.size()) +
                             " but aut_order = " + std::to_string(d.aut_order));
    }
    s.points = enumerate_points(*d.curve, s.bound, options.jobs);
    s.classes = classify_points(*d.curve, s.group, s.points);
    s.certified_x_height = std::log(static_cast<double>(s.bound));
    rep.search = std::move(s);
  }
  return rep;
}

std::string render_text(const HeightBoundReport& r) {
  std::ostringstream out;
  out << "Dossier: " << r.label << "\n";
  out << "g = " << r.genus << ", [K:Q] = " << r.deg_k << ", rank J(K) <= " << r.rank_upper
      << ", #H = " << r.aut_order << "\n\n";

  out << "Fibral invariants\n";
  if (r.fibres.empty()) out << "  none (good reduction everywhere)\n";
  for (const FibreOutcome& f : r.fibres) {
    out << "  phi_p(" << f.prime_norm.get_str() << ") = " << f.phi.phi.str() << "\n";
    out << "    J_p = " << index_list(f.phi.terms) << "\n";
    for (const XiTerm& t : f.phi.terms) {
      out << "    Xi_" << (t.k + 1) << ": [b.b] = " << t.self_intersection.str() << "\n";
    }
  }

  out << "\nArchimedean input\n";
  if (r.archimedean.kind == ArchimedeanKind::FaltingsHeight) {
    if (r.isogeny_derived_hj) {
      out << "  h_K(J) <= " << fixed(*r.isogeny_derived_hj, 6)
          << " via isogeny to a product (h of a product = sum of factor heights)\n";
    }
    out << "  h_K(J) <= " << fixed(r.archimedean.value, 6) << "\n";
    out << "  sum_v delta(X_v) <= 12 h + 4 g [K:Q] log(2 pi) = " << fixed(r.delta_sum_upper, 6) << "\n";
  } else {
    out << "  sum_v delta(X_v) <= " << fixed(r.delta_sum_upper, 6) << "\n";
  }

  out << "\nHeight constant\n";
  out << "  M(X) <= " << upper(r.m, 2) << "  (formula value " << fixed(r.m_exact, 9) << ")\n";

  out << "\nAngle constant\n";
  if (r.aut_order >= 2) {
    out << "  tau(" << r.genus << ", " << r.rank_used << ", " << r.aut_order
        << ") = " << fixed(r.tau_used.tau, 9) << "  [method " << to_string(r.tau_used.method)
        << (r.tau_used.conservative ? ", conservative" : ", exact") << "]\n";
  }
  if (r.rank_used != r.rank_upper) out << "  (rank bound 0 treated as r = 1)\n";

  out << "\nBounds\n";
  if (r.verdict == Verdict::TauNotPositive) {
    out << "  tau <= 0: Theorem 1 does not apply\n";
  } else {
    out << "  NT bound <= " << upper(*r.neron_tate_bound, 2) << "  (h^(j(P)) for P with trivial "
        << "H-stabilizer; M / (2 g tau) = " << fixed(*r.neron_tate_bound, 6) << ")\n";
    if (r.x_height_bound) {
      out << "  h(x(P)) <= " << upper(*r.x_height_bound, 2) << "  (c_X = " << fixed(*r.height_constant, 4)
          << ")\n";
    }
  }

  if (r.search) {
    const SearchOutcome& s = *r.search;
    out << "\nPoint search (max(|p|, q) <= " << s.bound << ", h(x) <= " << fixed(s.certified_x_height, 4)
        << ")\n";
    out << "  group order " << s.group.size() << ", " << s.points.size() << " point(s) found\n";
    out << "  nontrivial stabilizer (" << s.classes.nontrivial_stabilizer.size() << "):";
    for (const CurvePoint& p : s.classes.nontrivial_stabilizer) out << " " << p.str();
    out << "\n  trivial stabilizer (" << s.classes.trivial_stabilizer.size() << "):";
    for (const CurvePoint& p : s.classes.trivial_stabilizer) out << " " << p.str();
    out << "\n";
    if (r.x_height_bound) {
      if (s.certified_x_height >= *r.x_height_bound) {
        out << "  search radius covers the h(x) bound: trivial-stabilizer list is complete\n";
      } else {
        out << "  search radius does not reach the h(x) bound; completeness is certified only for "
               "h(x) <= "
            << fixed(s.certified_x_height, 4) << "\n";
      }
    }
  }

  if (!r.warnings.empty()) {
    out << "\nWarnings\n";
    for (const auto& w : r.warnings) out << "  " << w << "\n";
  }
  return out.str();
}

std::string render_json(const HeightBoundReport& r) {
  ojson o;
  o["label"] = r.label;
  ojson inputs;
  inputs["genus"] = r.genus;
  inputs["deg_k"] = r.deg_k;
  inputs["rank_upper"] = r.rank_upper;
  inputs["aut_order"] = r.aut_order;
  inputs["archimedean"] = {{"kind", to_string(r.archimedean.kind)}, {"value", r.archimedean.value}};
  inputs["height_constant"] = r.height_constant ? ojson(*r.height_constant) : ojson(nullptr);
  o["inputs"] = inputs;

  ojson fibres = ojson::array();
  for (const FibreOutcome& f : r.fibres) {
    ojson fo;
    fo["prime_norm"] = f.prime_norm.get_str();
    fo["phi_p"] = tagged(f.phi.phi, "phi_p");
    ojson xi = ojson::array();
    for (const XiTerm& t : f.phi.terms) {
      ojson x;
      x["k"] = t.k + 1;
      x["solution"] = rational_array(t.solution);
      x["self_intersection"] = tagged(t.self_intersection, "bilinear_form");
      xi.push_back(x);
    }
    fo["xi"] = xi;
    fibres.push_back(fo);
  }
  o["fibres"] = fibres;

  if (r.isogeny_derived_hj)
    o["isogeny_derived_hj"] = tagged(*r.isogeny_derived_hj, "faltings_upper_via_isogeny");
  o["delta_sum_upper"] = tagged(r.delta_sum_upper, r.archimedean.kind == ArchimedeanKind::FaltingsHeight
                                                         ? "delta_sum_from_faltings"
                                                         : "input");
  o["m_constant"] = tagged(r.m_exact, "m_constant");
  o["m_bound"] = tagged(r.m, "m_constant+report_slack");

  if (r.aut_order >= 2) {
    ojson t = tagged(r.tau_used.tau, "tau");
    t["rank_used"] = r.rank_used;
    t["method"] = to_string(r.tau_used.method);
    t["conservative"] = r.tau_used.conservative;
    t["cos_theta_lower"] =
        r.tau_used.cos_theta_lower ? ojson(tagged(*r.tau_used.cos_theta_lower, "tau")) : ojson(nullptr);
    o["tau"] = t;
  } else {
    o["tau"] = nullptr;
  }

  o["verdict"] = r.verdict == Verdict::Applicable ? "applicable" : "tau_not_positive";
  o["neron_tate_bound"] = r.neron_tate_bound
                              ? tagged(*r.neron_tate_bound, "neron_tate_bound+report_slack")
                              : ojson(nullptr);
  o["x_height_bound"] = r.x_height_bound ? tagged(*r.x_height_bound, "x_height_bound") : ojson(nullptr);

  if (r.search) {
    const SearchOutcome& s = *r.search;
    ojson so;
    so["bound"] = s.bound;
    so["certified_x_height"] = tagged(s.certified_x_height, "log(search_bound)");
    so["group_order"] = s.group.size();
    ojson group = ojson::array();
    for (const Automorphism& a : s.group) group.push_back(a.str());
    so["group"] = group;
    so["points"] = point_array(s.points);
    so["nontrivial_stabilizer"] = point_array(s.classes.nontrivial_stabilizer);
    so["trivial_stabilizer"] = point_array(s.classes.trivial_stabilizer);
    so["covers_x_height_bound"] =
        r.x_height_bound ? ojson(s.certified_x_height >= *r.x_height_bound) : ojson(nullptr);
    o["search"] = so;
  } else {
    o["search"] = nullptr;
  }

  ojson conventions = ojson::array();
  conventions.push_back("heights normalized to K, not divided by [K:Q]");
  if (r.isogeny_derived_hj) conventions.push_back("h_K(E1 x ... x Ek) = sum h_K(Ei)");
  if (r.rank_used != r.rank_upper) conventions.push_back("rank bound 0 treated as r = 1");
  o["conventions"] = conventions;
  o["warnings"] = r.warnings;
  return o.dump(2) + "\n";
}

}  // namespace effmordell
