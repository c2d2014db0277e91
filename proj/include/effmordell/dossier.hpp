#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "effmordell/angle.hpp"
#include "effmordell/curve.hpp"
#include "effmordell/fibre.hpp"
#include "effmordell/height.hpp"

namespace effmordell {

/// Optional derivation of the Faltings-height bound through an isogeny to a
/// product: h_K(J) <= sum h_K(E_i) + (degK / 2) log(degree).
struct IsogenyRoute {
  std::vector<double> factor_heights;
  std::int64_t degree = 1;
};

/// Everything the height bound and the point search consume for one curve.
struct Dossier {
  std::string label;
  std::int64_t genus = 2;
  std::int64_t deg_k = 1;
  std::int64_t rank_upper = 0;
  std::int64_t aut_order = 1;
  std::vector<FibreData> fibres;
  ArchimedeanInput archimedean;
  std::optional<IsogenyRoute> isogeny;
  std::optional<double> height_constant;
  std::optional<SexticCurve> curve;
  std::vector<Automorphism> automorphisms;
  std::optional<std::int64_t> search_bound;
};

/// Parses the JSON dossier without semantic checks. Throws ParseError with
/// line/column or field path diagnostics.
Dossier parse_dossier_unchecked(std::string_view text);

/// Every semantic problem with a dossier, one line each; empty when valid.
std::vector<std::string> validate_dossier(const Dossier& dossier);

/// parse_dossier_unchecked followed by validate_dossier; throws
/// ValidationError listing every problem.
Dossier parse_dossier(std::string_view text);

std::string read_file(const std::string& path);

struct FibreOutcome {
  Integer prime_norm;
  PhiResult phi;
};

struct SearchOutcome {
  std::int64_t bound = 0;
  std::vector<Automorphism> group;
  std::vector<CurvePoint> points;
  PointClassification classes;
  /// Largest h(x(P)) = log max(|p|, q) the search covers.
  double certified_x_height = 0.0;
};

enum class Verdict { Applicable, TauNotPositive };

struct HeightBoundReport {
  std::string label;
  std::int64_t genus = 0;
  std::int64_t deg_k = 0;
  std::int64_t rank_upper = 0;
  std::int64_t rank_used = 0;
  std::int64_t aut_order = 0;

  std::vector<FibreOutcome> fibres;
  ArchimedeanInput archimedean;
  std::optional<double> isogeny_derived_hj;
  double delta_sum_upper = 0.0;
  TauResult tau_used;

  double m_exact = 0.0;  // formula value
  double m = 0.0;        // m_exact plus the report slack
  Verdict verdict = Verdict::Applicable;
  std::optional<double> neron_tate_bound;
  std::optional<double> height_constant;
  std::optional<double> x_height_bound;

  std::optional<SearchOutcome> search;
  std::vector<std::string> warnings;
};

struct PipelineOptions {
  bool run_search = true;
  std::optional<std::int64_t> bound_override;
  unsigned jobs = 1;
};

HeightBoundReport run_pipeline(const Dossier& dossier, const PipelineOptions& options = {});

/// Human-readable summary. Byte-identical for identical reports.
std::string render_text(const HeightBoundReport& report);

/// Structured record; every number is tagged with the operation that produced it.
std::string render_json(const HeightBoundReport& report);

}  // namespace effmordell
