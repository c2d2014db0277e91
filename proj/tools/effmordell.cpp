// effmordell: explicit height bounds and rational-point search for genus-2
// curves from a JSON dossier.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "effmordell/angle.hpp"
#include "effmordell/dossier.hpp"
#include "effmordell/error.hpp"

namespace {

using namespace effmordell;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInapplicable = 2;

int exit_code(const HeightBoundReport& r) {
  return r.verdict == Verdict::Applicable ? kExitOk : kExitInapplicable;
}

int cmd_validate(const std::string& path) {
  const Dossier d = parse_dossier_unchecked(read_file(path));
  const auto issues = validate_dossier(d);
  if (issues.empty()) {
    std::cout << path << ": ok (" << d.fibres.size() << " bad fibre(s))\n";
    for (std::size_t i = 0; i < d.fibres.size(); ++i) {
      const auto rep = validate_fibre(d.fibres[i], d.genus);
      std::cout << "  fibre N = " << d.fibres[i].prime_norm.get_str() << ": s = " << d.fibres[i].size()
                << ", mu_p = " << rep.mu_p.str() << ", g from fibre = " << rep.genus_from_fibre.str()
                << "\n";
    }
    return kExitOk;
  }
  std::cout << path << ": " << issues.size() << " problem(s)\n";
  for (const auto& s : issues) std::cout << "  " << s << "\n";
  return kExitError;
}

int cmd_phi(const std::string& path) {
  const Dossier d = parse_dossier(read_file(path));
  if (d.fibres.empty()) std::cout << "no bad fibres: every phi_p = 0\n";
  for (const FibreData& f : d.fibres) {
    const PhiResult r = phi_p_detailed(f, d.genus);
    std::cout << "phi_p(" << f.prime_norm.get_str() << ") = " << r.phi.str() << "\n";
    for (const XiTerm& t : r.terms) {
      std::cout << "  Xi_" << (t.k + 1) << ": b = (";
      for (std::size_t j = 0; j < t.solution.size(); ++j)
        std::cout << (j ? ", " : "") << t.solution[j].str();
      std::cout << "), [b.b] = " << t.self_intersection.str() << "\n";
    }
  }
  return kExitOk;
}

int cmd_tau(std::int64_t g, std::int64_t r, std::int64_t n) {
  const TauResult t = tau(g, r, n);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", t.tau);
  std::cout << "tau = " << buf << "\n";
  if (t.cos_theta_lower) {
    std::snprintf(buf, sizeof buf, "%.12f", *t.cos_theta_lower);
    std::cout << "cos_theta_lower = " << buf << "\n";
  }
  std::cout << "method = " << to_string(t.method) << "\n";
  std::cout << "conservative = " << (t.conservative ? "true" : "false") << "\n";
  return t.tau > 0.0 ? kExitOk : kExitInapplicable;
}

int cmd_report(const std::string& path, const std::string& format, const PipelineOptions& opts) {
  const HeightBoundReport r = run_pipeline(parse_dossier(read_file(path)), opts);
  std::cout << (format == "json" ? render_json(r) : render_text(r));
  return exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit Neron-Tate height bounds and rational-point search for genus-2 curves"};
  app.require_subcommand(1);

  std::string file;
  std::string format = "text";
  std::int64_t g = 2, r = 1, n = 2;
  std::int64_t bound = 0;
  unsigned jobs = 1;

  auto* validate = app.add_subcommand("validate", "Check a dossier and every fibre invariant");
  validate->add_option("file", file, "Dossier JSON")->required();

  auto* phi = app.add_subcommand("phi", "Compute phi_p and the Xi_k self-intersections per bad fibre");
  phi->add_option("file", file, "Dossier JSON")->required();

  auto* tau_cmd = app.add_subcommand("tau", "Angle constant tau(g, r, n)");
  tau_cmd->add_option("--g", g, "Genus (>= 2)")->required();
  tau_cmd->add_option("--r", r, "Mordell-Weil rank bound (>= 1)")->required();
  tau_cmd->add_option("--n", n, "Subgroup order (>= 2)")->required();

  auto* bound_cmd = app.add_subcommand("bound", "M(X), the Neron-Tate bound and the x-height bound");
  bound_cmd->add_option("file", file, "Dossier JSON")->required();
  bound_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* search = app.add_subcommand("search", "Enumerate and classify rational points");
  search->add_option("file", file, "Dossier JSON")->required();
  search->add_option("--bound", bound, "Search bound on max(|p|, q)")->check(CLI::PositiveNumber);
  search->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  search->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* report = app.add_subcommand("report", "Full pipeline: fibres, constants, bounds, search");
  report->add_option("file", file, "Dossier JSON")->required();
  report->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  report->add_option("--jobs", jobs, "Worker threads for the search")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (validate->parsed()) return cmd_validate(file);
    if (phi->parsed()) return cmd_phi(file);
    if (tau_cmd->parsed()) return cmd_tau(g, r, n);
    if (bound_cmd->parsed()) return cmd_report(file, format, {.run_search = false});
    if (search->parsed()) {
      PipelineOptions opts{.run_search = true, .jobs = jobs};
      if (bound > 0) opts.bound_override = bound;
      const Dossier d = parse_dossier(read_file(file));
      if (!d.curve) throw Error(ErrorCode::InvalidParams, "dossier has no curve to search");
      if (!opts.bound_override && !d.search_bound)
        throw Error(ErrorCode::InvalidParams, "no search_bound in dossier; pass --bound");
      const HeightBoundReport rep = run_pipeline(d, opts);
      std::cout << (format == "json" ? render_json(rep) : render_text(rep));
      return kExitOk;
    }
    if (report->parsed()) return cmd_report(file, format, {.run_search = true, .jobs = jobs});
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
