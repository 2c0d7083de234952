#include "crlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "crlab/ambient.hpp"
#include "crlab/cr_structure.hpp"
#include "crlab/energy.hpp"
#include "crlab/errors.hpp"

namespace crlab::report {

namespace {

using biharmonic::Verdict;
using geom::EmbeddedPoint;
using geom::Vec;

constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Deterministic formatting
// ---------------------------------------------------------------------------

std::string fmt(double v) {
  if (!std::isfinite(v)) return v > 0 ? "1e9999" : (v < 0 ? "-1e9999" : "0");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string quoted(const std::string& s) { return '"' + json_escape(s) + '"'; }

// ---------------------------------------------------------------------------
// Closed forms shared by the graders
// ---------------------------------------------------------------------------

/// Common principal-curvature scale of the catalog families: √(1−r²)/r for
/// the latitude sphere, cot u for the projective band.
double family_lambda(catalog::Family family, double param) {
  if (family == catalog::Family::small_sphere) {
    return std::sqrt(std::max(0.0, 1.0 - param * param)) / param;
  }
  return 1.0 / std::tan(param);
}

double closed_form_tau_norm(const catalog::FamilySpec& spec) {
  return 2.0 * spec.n * std::abs(family_lambda(spec.family, spec.param));
}

double closed_form_b_h(const catalog::FamilySpec& spec) {
  const double l = family_lambda(spec.family, spec.param);
  return 2.0 * spec.n * l * l;
}

/// Full-trace mean curvature norm: the horizontal trace plus the Reeb-leg
/// principal curvature (λ again for the latitude sphere, 2·cot 2u for the
/// projective band).
double closed_form_tau_full(const catalog::FamilySpec& spec) {
  const double l = family_lambda(spec.family, spec.param);
  if (spec.family == catalog::Family::small_sphere) {
    return (2.0 * spec.n + 1.0) * l;
  }
  return std::abs(2.0 * spec.n * l + 2.0 / std::tan(2.0 * spec.param));
}

// ---------------------------------------------------------------------------
// Check assembly
// ---------------------------------------------------------------------------

struct Grader {
  std::vector<CheckReport> checks;

  /// Two-sided check: |measured − expected| ≤ tol.
  void close(std::string name, double measured, double expected,
             std::string provenance, double tol) {
    const bool pass = std::abs(measured - expected) <= tol;
    checks.push_back({std::move(name), measured, expected,
                      std::move(provenance), tol, pass});
  }

  /// One-sided check: measured must exceed the expected threshold.
  void above(std::string name, double measured, double threshold) {
    checks.push_back({std::move(name), measured, threshold,
                      "measured-threshold", 0.0, measured > threshold});
  }
};

void finalize(Report& report, std::vector<CheckReport> checks) {
  report.checks = std::move(checks);
  report.passed = 0;
  report.failed = 0;
  for (const CheckReport& c : report.checks) {
    (c.pass ? report.passed : report.failed) += 1;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s %d/%d",
                report.failed == 0 ? "PASS" : "FAIL", report.passed,
                static_cast<int>(report.checks.size()));
  report.summary = buf;
}

// ---------------------------------------------------------------------------
// Command implementations
// ---------------------------------------------------------------------------

Report run_verify(const RunConfig& config) {
  Report report;
  report.config = config;
  const catalog::FamilySpec spec{config.family, config.n, config.param};
  const immersion::Immersion im = catalog::build_immersion(spec);
  const std::vector<EmbeddedPoint> pts =
      catalog::sample_points(spec, config.points, config.seed);

  double max_gram = 0.0, max_iso = 0.0, max_adm = 0.0, max_par = 0.0;
  double mean_tau = 0.0, mean_norm = 0.0, mean_bh = 0.0, mean_tan = 0.0;
  double condition_target = 0.0;
  bool all_normal_case = true;
  const bool projective =
      im.target.kind == ambient::TargetKind::complex_projective;

  for (const EmbeddedPoint& p : pts) {
    const cr::ContactFrame frame = cr::frame_at(*im.source, p);
    max_gram = std::max(max_gram, cr::frame_gram_residual(frame));
    max_iso = std::max(max_iso, immersion::isometry_residual(im, p, config.fd));
    if (config.riemannian) {
      const biharmonic::BitensionResult rb =
          biharmonic::riemannian_bitension(im, p, config.fd);
      max_adm = std::max(
          max_adm, immersion::admissibility_defect(im, p, config.fd));
      max_par = std::max(max_par, immersion::mean_curvature_parallelism_defect(
                                      im, p, config.fd));
      mean_tau += rb.tau_norm;
      mean_norm += rb.normalized;
      mean_bh += rb.b_norm_sq_horizontal;
      continue;
    }
    const Verdict v = biharmonic::characterize(im, p, config.fd, config.tols);
    max_adm = std::max(max_adm, v.admissibility);
    max_par = std::max(max_par, v.parallelism);
    mean_tau += v.tau_b_norm;
    mean_norm += v.bitension_normalized;
    mean_bh += v.b_norm_horizontal;
    mean_tan += v.tangency;
    condition_target = v.condition_value;
    if (projective && v.case_tag != "cp_normal_case") all_normal_case = false;
  }
  const double inv = 1.0 / static_cast<double>(pts.size());
  mean_tau *= inv;
  mean_norm *= inv;
  mean_bh *= inv;
  mean_tan *= inv;

  Grader g;
  g.close("frame_gram_residual", max_gram, 0.0, "identity", 1e-10);
  g.close("isometry_residual", max_iso, 0.0, "identity", 1e-8);
  g.close("admissibility_defect", max_adm, 0.0, "identity", config.tols.defect);
  g.close("parallelism_defect", max_par, 0.0, "identity", config.tols.defect);
  if (config.riemannian) {
    const double expected = closed_form_tau_full(spec);
    g.close("tau_norm", mean_tau, expected, "closed-form",
            config.tols.bitension * std::max(1.0, expected));
    g.close("tau2_normalized", mean_norm, 0.0, "closed-form",
            config.tols.bitension);
    g.close("b_norm_sq_horizontal", mean_bh, closed_form_b_h(spec),
            "closed-form", config.tols.condition);
    finalize(report, std::move(g.checks));
    return report;
  }
  {
    const double expected = closed_form_tau_norm(spec);
    g.close("tau_b_norm", mean_tau, expected, "closed-form",
            config.tols.bitension * std::max(1.0, expected));
  }
  g.above("tau_b_nonvanishing", mean_tau, 0.1);
  g.close("tau_b2_normalized", mean_norm, 0.0, "closed-form",
          config.tols.bitension);
  g.close("biharmonic_condition", mean_bh, condition_target, "closed-form",
          config.tols.condition);
  g.close("b_norm_sq_horizontal", mean_bh, closed_form_b_h(spec),
          "closed-form", config.tols.condition);
  if (projective) {
    g.close("reeb_normal_tangency", mean_tan, 1.0, "closed-form",
            config.tols.tangency);
    g.close("case_is_normal", all_normal_case ? 1.0 : 0.0, 1.0, "closed-form",
            0.0);
  }
  if (config.family == catalog::Family::small_sphere && config.n == 1) {
    const double r = config.param;
    const double vol = 2.0 * std::numbers::pi * std::numbers::pi * r * r * r;
    const energy::QuadratureRule rule = energy::product_hopf_rule(
        r, config.quad_nodes, config.quad_nodes, config.quad_nodes);
    g.close("volume_quadrature", rule.total_weight, vol, "closed-form",
            1e-6 * vol);
    g.close("pseudo_energy", energy::pseudo_energy(im, rule, config.fd), vol,
            "closed-form", 1e-4 * vol);
    const double e2 =
        4.0 * std::numbers::pi * std::numbers::pi * r * (1.0 - r * r);
    g.close("pseudo_bienergy", energy::pseudo_bienergy(im, rule, config.fd),
            e2, "closed-form", 1e-3 * e2 + 1e-8);
  }
  finalize(report, std::move(g.checks));
  return report;
}

Report run_scan(const RunConfig& config) {
  Report report;
  report.config = config;
  report.has_scan = true;
  report.scan =
      catalog::scan_family(config.family, config.n, config.lo, config.hi,
                           config.steps, config.points, config.seed, config.fd);

  // Closed-form biharmonic parameters of the scanned immersion family (the
  // signed statistic changes sign exactly there).
  const char* locus_name = config.family == catalog::Family::small_sphere
                               ? "pseudo_biharmonic"
                               : "case2_pseudo_biharmonic";
  std::vector<double> expected_zeros;
  for (const catalog::Locus& locus :
       catalog::closed_form_loci(config.family, config.n)) {
    if (locus.name == locus_name && locus.param >= config.lo &&
        locus.param <= config.hi) {
      expected_zeros.push_back(locus.param);
    }
  }

  Grader g;
  g.close("zero_count", static_cast<double>(report.scan.zeros.size()),
          static_cast<double>(expected_zeros.size()), "closed-form", 0.0);
  for (std::size_t k = 0; k < report.scan.zeros.size(); ++k) {
    const double z = report.scan.zeros[k];
    double expected = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (double e : expected_zeros) {
      if (std::abs(e - z) < best) {
        best = std::abs(e - z);
        expected = e;
      }
    }
    const bool found = !expected_zeros.empty();
    g.close("zero_" + std::to_string(k + 1) + "_location", z,
            found ? expected : 0.0, "closed-form", found ? 5e-3 : 0.0);
  }
  {
    // The pointwise curvature condition and the vanishing of the normalized
    // bitension must identify the same grid rows (both catalog families
    // realize the horizontal-trace target 2n).
    const double target = 2.0 * config.n;
    int disagreements = 0;
    for (const catalog::ScanRow& row : report.scan.rows) {
      const bool cond = std::abs(row.b_norm_h - target) < config.tols.condition;
      const bool flat = row.tau_b2_normalized < config.tols.bitension;
      if (cond != flat) disagreements += 1;
    }
    g.close("condition_consistency", static_cast<double>(disagreements), 0.0,
            "measured-threshold", 0.0);
  }
  finalize(report, std::move(g.checks));
  return report;
}

Report run_predicates(const RunConfig& config) {
  Report report;
  report.config = config;
  Grader g;
  for (const catalog::Locus& locus :
       catalog::closed_form_loci(config.family, config.n)) {
    g.close(locus.name, locus.defining_residual, 0.0, "closed-form", 1e-12);
    g.close(locus.name + "_param", locus.param, locus.param, "closed-form",
            0.0);
  }
  finalize(report, std::move(g.checks));
  return report;
}

Report run_identities(const RunConfig& config) {
  Report report;
  report.config = config;
  const catalog::FamilySpec spec{config.family, config.n, config.param};
  const immersion::Immersion im = catalog::build_immersion(spec);
  const std::vector<EmbeddedPoint> pts =
      catalog::sample_points(spec, config.points, config.seed);
  const bool projective =
      im.target.kind == ambient::TargetKind::complex_projective;
  const int m = 2 * config.n;

  double max_gram = 0.0, max_j = 0.0, max_sym = 0.0, max_nrm = 0.0;
  double max_adm = 0.0, max_par = 0.0, max_contr = 0.0;
  double max_sect_exact = 0.0, max_sect_fd = 0.0;
  double max_weitz = 0.0, max_lap = 0.0;

  for (const EmbeddedPoint& p : pts) {
    const cr::FramePlan plan = cr::plan_at(*im.source, p);
    const cr::ContactFrame frame = cr::frame_at(*im.source, p, plan);
    max_gram = std::max(max_gram, cr::frame_gram_residual(frame));
    max_j = std::max(max_j, cr::frame_j_residual(frame));

    const immersion::SecondFundamentalTable tbl =
        immersion::b_table(im, p, config.fd, &plan);
    for (int a = 0; a <= m; ++a) {
      for (int b = 0; b <= m; ++b) {
        max_sym = std::max(max_sym, (tbl.entries[a][b].value -
                                     tbl.entries[b][a].value)
                                        .norm());
        max_nrm = std::max(max_nrm, tbl.entries[a][b].tangential_residual);
      }
    }
    {
      const immersion::NormalSection tau =
          immersion::pseudo_tension(im, p, config.fd, &plan);
      Vec sum = Vec::Zero(tau.value.size());
      for (int i = 0; i < m; ++i) sum += tbl.entries[i][i].value;
      max_contr = std::max(max_contr, (sum - tau.value).norm());
    }
    max_adm =
        std::max(max_adm, immersion::admissibility_defect(im, p, config.fd));
    max_par = std::max(
        max_par, immersion::mean_curvature_parallelism_defect(im, p, config.fd));

    // Curvature cross-checks of the target through the pushed frame.
    const EmbeddedPoint q = im.map(p);
    const Vec v = im.differential(p, frame.horiz[0]);
    if (projective) {
      const Vec jv = geom::mult_i(v);
      const double k_exact =
          im.target.curvature(q, v, jv, jv).dot(v) /
          (v.squaredNorm() * jv.squaredNorm());
      max_sect_exact =
          std::max(max_sect_exact, std::abs(k_exact - im.target.hol_curv));
      const double k_fd =
          ambient::holomorphic_sectional_fd(q, v, config.fd.h1, config.fd.h2);
      max_sect_fd = std::max(max_sect_fd, std::abs(k_fd - im.target.hol_curv));
    } else {
      const Vec w = im.differential(p, frame.reeb);
      const double k_exact = im.target.curvature(q, v, w, w).dot(v) /
                             (v.squaredNorm() * w.squaredNorm() -
                              std::pow(v.dot(w), 2));
      const double expected = 1.0 / (im.target.radius * im.target.radius);
      max_sect_exact = std::max(max_sect_exact, std::abs(k_exact - expected));
    }

    for (int leg = 0; leg < m; ++leg) {
      max_weitz = std::max(
          max_weitz,
          biharmonic::weitzenbock_residual(im, p, leg, config.fd).relative);
    }
    max_lap = std::max(
        max_lap,
        biharmonic::tension_laplacian_identity_residual(im, p, config.fd)
            .relative);
  }

  Grader g;
  g.close("frame_gram_residual", max_gram, 0.0, "identity", 1e-10);
  g.close("frame_j_closure", max_j, 0.0, "identity", 1e-8);
  g.close("b_symmetry", max_sym, 0.0, "identity", 1e-6);
  g.close("b_normality", max_nrm, 0.0, "identity", 1e-6);
  g.close("admissibility_defect", max_adm, 0.0, "identity",
          config.tols.defect);
  g.close("parallelism_defect", max_par, 0.0, "identity", config.tols.defect);
  g.close("tension_contraction", max_contr, 0.0, "identity", 1e-8);
  if (projective) {
    g.close("holomorphic_sectional_exact", max_sect_exact, 0.0, "closed-form",
            1e-10);
    g.close("holomorphic_sectional_fd", max_sect_fd, 0.0, "closed-form", 2e-2);
  } else {
    g.close("sectional_exact", max_sect_exact, 0.0, "closed-form", 1e-10);
  }
  g.close("weitzenbock_relative", max_weitz, 0.0, "identity", 1e-2);
  g.close("tension_laplacian_relative", max_lap, 0.0, "identity", 1e-2);
  finalize(report, std::move(g.checks));
  return report;
}

void validate(const RunConfig& config) {
  if (!(config.tols.bitension > 0.0) || !(config.tols.condition > 0.0) ||
      !(config.tols.defect > 0.0)) {
    throw Error(ErrorKind::configuration, "tolerances must be positive");
  }
  if (config.points < 1) {
    throw Error(ErrorKind::configuration, "points must be >= 1");
  }
  if (config.command == Command::scan && config.steps < 2) {
    throw Error(ErrorKind::configuration, "scan needs steps >= 2");
  }
  if (config.format != "json" && config.format != "csv") {
    throw Error(ErrorKind::configuration,
                "format must be json or csv, got '" + config.format + "'");
  }
  if (config.n < 1) {
    throw Error(ErrorKind::configuration, "n must be >= 1");
  }
}

}  // namespace

Command command_from_string(const std::string& name) {
  if (name == "verify") return Command::verify;
  if (name == "scan") return Command::scan;
  if (name == "predicates") return Command::predicates;
  if (name == "identities") return Command::identities;
  throw Error(ErrorKind::configuration, "unknown command '" + name + "'");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::verify: return "verify";
    case Command::scan: return "scan";
    case Command::predicates: return "predicates";
    case Command::identities: return "identities";
  }
  return "verify";
}

Report run(const RunConfig& config) {
  validate(config);
  Report report;
  switch (config.command) {
    case Command::verify: report = run_verify(config); break;
    case Command::scan: report = run_scan(config); break;
    case Command::predicates: report = run_predicates(config); break;
    case Command::identities: report = run_identities(config); break;
  }
  if (!config.out_path.empty()) {
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) {
      throw Error(ErrorKind::configuration,
                  "cannot open output path '" + config.out_path + "'");
    }
    out << render(report);
  }
  return report;
}

std::string to_json(const Report& report) {
  const RunConfig& c = report.config;
  std::ostringstream out;
  out << "{\n  \"config\": {";
  out << "\"command\": " << quoted(to_string(c.command));
  out << ", \"family\": " << quoted(catalog::to_string(c.family));
  out << ", \"n\": " << fmt(c.n);
  out << ", \"param\": " << fmt(c.param);
  out << ", \"lo\": " << fmt(c.lo);
  out << ", \"hi\": " << fmt(c.hi);
  out << ", \"steps\": " << fmt(c.steps);
  out << ", \"points\": " << fmt(c.points);
  out << ", \"seed\": " << fmt(c.seed);
  out << ", \"h1\": " << fmt(c.fd.h1);
  out << ", \"h2\": " << fmt(c.fd.h2);
  out << ", \"richardson\": " << fmt(c.fd.richardson);
  out << ", \"riemannian\": " << fmt(c.riemannian);
  out << ", \"tol_bitension\": " << fmt(c.tols.bitension);
  out << ", \"tol_condition\": " << fmt(c.tols.condition);
  out << ", \"tol_defect\": " << fmt(c.tols.defect);
  out << ", \"quad_nodes\": " << fmt(c.quad_nodes);
  out << ", \"format\": " << quoted(c.format);
  out << ", \"out\": " << quoted(c.out_path);
  out << "},\n  \"checks\": [";
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    const CheckReport& ck = report.checks[i];
    out << (i == 0 ? "\n" : ",\n");
    out << "    {\"name\": " << quoted(ck.name);
    out << ", \"measured\": " << fmt(ck.measured);
    out << ", \"expected\": " << fmt(ck.expected);
    out << ", \"expected_provenance\": " << quoted(ck.expected_provenance);
    out << ", \"tol\": " << fmt(ck.tol);
    out << ", \"pass\": " << fmt(ck.pass) << "}";
  }
  out << "\n  ],\n";
  if (report.has_scan) {
    out << "  \"scan\": {\"zeros\": [";
    for (std::size_t i = 0; i < report.scan.zeros.size(); ++i) {
      out << (i == 0 ? "" : ", ") << fmt(report.scan.zeros[i]);
    }
    out << "], \"rows\": [";
    for (std::size_t i = 0; i < report.scan.rows.size(); ++i) {
      const catalog::ScanRow& r = report.scan.rows[i];
      out << (i == 0 ? "\n" : ",\n");
      out << "      {\"param\": " << fmt(r.param);
      out << ", \"tau_b\": " << fmt(r.tau_b_norm);
      out << ", \"tau_b2_normalized\": " << fmt(r.tau_b2_normalized);
      out << ", \"tau_b2_signed\": " << fmt(r.tau_b2_signed);
      out << ", \"b_norm_H\": " << fmt(r.b_norm_h);
      out << ", \"admissibility_defect\": " << fmt(r.admissibility);
      out << ", \"parallelism_defect\": " << fmt(r.parallelism);
      out << ", \"verdict\": " << quoted(r.verdict) << "}";
    }
    out << "\n    ]},\n";
  }
  out << "  \"summary\": " << quoted(report.summary) << ",\n";
  out << "  \"meta\": {\"version\": " << quoted(kVersion)
      << ", \"seed\": " << fmt(c.seed) << "}\n}\n";
  return out.str();
}

std::string to_csv(const Report& report) {
  std::ostringstream out;
  if (report.has_scan) {
    out << "param,tau_b,tau_b2_normalized,b_norm_H,admissibility_defect,"
           "parallelism_defect,verdict\n";
    for (const catalog::ScanRow& r : report.scan.rows) {
      out << fmt(r.param) << ',' << fmt(r.tau_b_norm) << ','
          << fmt(r.tau_b2_normalized) << ',' << fmt(r.b_norm_h) << ','
          << fmt(r.admissibility) << ',' << fmt(r.parallelism) << ','
          << r.verdict << '\n';
    }
    return out.str();
  }
  out << "name,measured,expected,expected_provenance,tol,pass\n";
  for (const CheckReport& ck : report.checks) {
    out << ck.name << ',' << fmt(ck.measured) << ',' << fmt(ck.expected) << ','
        << ck.expected_provenance << ',' << fmt(ck.tol) << ','
        << fmt(ck.pass) << '\n';
  }
  return out.str();
}

std::string render(const Report& report) {
  return report.config.format == "csv" ? to_csv(report) : to_json(report);
}

}  // namespace crlab::report
