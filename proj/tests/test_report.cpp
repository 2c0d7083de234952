#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>

#include "crlab/errors.hpp"
#include "crlab/report.hpp"

using crlab::Error;
using crlab::ErrorKind;
using namespace crlab::report;
using crlab::catalog::Family;
using json = nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

/// Fast verify configuration at the sphere-family distinguished parameter.
RunConfig sphere_verify_config() {
  RunConfig cfg;
  cfg.command = Command::verify;
  cfg.family = Family::small_sphere;
  cfg.param = std::sqrt(0.5);
  cfg.points = 2;
  return cfg;
}

const CheckReport* find_check(const Report& report, const std::string& name) {
  for (const CheckReport& c : report.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace

// ===========================================================================
// Commands
// ===========================================================================

TEST_CASE("verify passes at the sphere-family distinguished parameter") {
  const Report report = run(sphere_verify_config());
  CHECK(report.all_passed());
  CHECK(report.failed == 0);
  CHECK(report.passed == static_cast<int>(report.checks.size()));
  CHECK(report.summary == "PASS 12/12");
  for (const char* name :
       {"frame_gram_residual", "isometry_residual", "admissibility_defect",
        "parallelism_defect", "tau_b_norm", "tau_b_nonvanishing",
        "tau_b2_normalized", "biharmonic_condition", "b_norm_sq_horizontal",
        "volume_quadrature", "pseudo_energy", "pseudo_bienergy"}) {
    CAPTURE(name);
    const CheckReport* c = find_check(report, name);
    REQUIRE(c != nullptr);
    CHECK(c->pass);
  }
  // The energy checks carry their closed-form targets.
  const double r = std::sqrt(0.5);
  CHECK(find_check(report, "pseudo_energy")->expected ==
        doctest::Approx(2.0 * kPi * kPi * r * r * r).epsilon(1e-12));
}

TEST_CASE("verify fails loudly off the locus") {
  RunConfig cfg = sphere_verify_config();
  cfg.param = 0.6;
  const Report report = run(cfg);
  CHECK_FALSE(report.all_passed());
  CHECK_FALSE(find_check(report, "tau_b2_normalized")->pass);
  CHECK_FALSE(find_check(report, "biharmonic_condition")->pass);
  // The geometry itself is still healthy.
  CHECK(find_check(report, "isometry_residual")->pass);
  CHECK(find_check(report, "admissibility_defect")->pass);
  CHECK(find_check(report, "tau_b2_normalized")->measured > 0.1);
}

TEST_CASE("verify grades the band family with its case checks") {
  RunConfig cfg;
  cfg.command = Command::verify;
  cfg.family = Family::takagi_a1;
  cfg.param = kPi / 4.0;
  cfg.points = 2;
  const Report report = run(cfg);
  CHECK(report.all_passed());
  const CheckReport* tangency = find_check(report, "reeb_normal_tangency");
  REQUIRE(tangency != nullptr);
  CHECK(tangency->measured == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE(find_check(report, "case_is_normal") != nullptr);
  CHECK(find_check(report, "case_is_normal")->pass);
  // No energy checks away from the three-sphere source.
  CHECK(find_check(report, "pseudo_energy") == nullptr);
}

TEST_CASE("riemannian verify swaps in the full-trace pipeline") {
  RunConfig cfg;
  cfg.command = Command::verify;
  cfg.family = Family::takagi_a1;
  cfg.riemannian = true;
  cfg.param = std::atan(std::sqrt(4.0 + std::sqrt(13.0)));
  cfg.points = 2;
  const Report report = run(cfg);
  CHECK(report.all_passed());
  REQUIRE(find_check(report, "tau_norm") != nullptr);
  REQUIRE(find_check(report, "tau2_normalized") != nullptr);
  CHECK(find_check(report, "tau_b_norm") == nullptr);
  // ‖τ‖ matches |2n·cot u + 2·cot 2u| there.
  const double u = cfg.param;
  const double want = std::abs(2.0 / std::tan(u) + 2.0 / std::tan(2.0 * u));
  CHECK(find_check(report, "tau_norm")->measured ==
        doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("scan grades zero count, location and condition consistency") {
  RunConfig cfg;
  cfg.command = Command::scan;
  cfg.family = Family::small_sphere;
  cfg.lo = 0.65;
  cfg.hi = 0.75;
  cfg.steps = 11;
  cfg.points = 2;
  const Report report = run(cfg);
  CHECK(report.all_passed());
  REQUIRE(report.has_scan);
  CHECK(report.scan.rows.size() == 11);
  REQUIRE(report.scan.zeros.size() == 1);
  CHECK(find_check(report, "zero_count")->measured == 1.0);
  CHECK(find_check(report, "zero_1_location")->measured ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));
  CHECK(find_check(report, "condition_consistency")->measured == 0.0);
}

TEST_CASE("predicates emit a residual check per closed-form locus") {
  RunConfig cfg;
  cfg.command = Command::predicates;
  cfg.family = Family::takagi_a1;
  cfg.n = 3;
  const Report report = run(cfg);
  CHECK(report.all_passed());
  bool saw_case2 = false;
  for (const CheckReport& c : report.checks) {
    if (c.name == "case2_pseudo_biharmonic") {
      saw_case2 = true;
      CHECK(c.measured < 1e-12);
      CHECK(c.tol == 1e-12);
    }
  }
  CHECK(saw_case2);
}

TEST_CASE("identities pass on the sphere family") {
  RunConfig cfg;
  cfg.command = Command::identities;
  cfg.family = Family::small_sphere;
  cfg.param = std::sqrt(0.5);
  cfg.points = 2;
  const Report report = run(cfg);
  CHECK(report.all_passed());
  REQUIRE(find_check(report, "sectional_exact") != nullptr);
  REQUIRE(find_check(report, "weitzenbock_relative") != nullptr);
  CHECK(find_check(report, "weitzenbock_relative")->measured < 1e-2);
}

// ===========================================================================
// Validation
// ===========================================================================

TEST_CASE("invalid configurations are rejected before any work") {
  RunConfig bad_steps;
  bad_steps.command = Command::scan;
  bad_steps.steps = 1;
  CHECK_THROWS_AS((void)run(bad_steps), Error);

  RunConfig bad_format = sphere_verify_config();
  bad_format.format = "xml";
  CHECK_THROWS_AS((void)run(bad_format), Error);

  RunConfig bad_n = sphere_verify_config();
  bad_n.n = 0;
  CHECK_THROWS_AS((void)run(bad_n), Error);

  RunConfig bad_tol = sphere_verify_config();
  bad_tol.tols.bitension = -1.0;
  CHECK_THROWS_AS((void)run(bad_tol), Error);

  RunConfig bad_points = sphere_verify_config();
  bad_points.points = 0;
  CHECK_THROWS_AS((void)run(bad_points), Error);

  try {
    (void)run(bad_format);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
  }
}

// ===========================================================================
// Serialization
// ===========================================================================

TEST_CASE("JSON reports are byte-identical across repeated runs") {
  const RunConfig cfg = sphere_verify_config();
  const std::string a = to_json(run(cfg));
  const std::string b = to_json(run(cfg));
  CHECK(a == b);
  CHECK(!a.empty());
}

TEST_CASE("JSON reports parse and mirror the in-memory report") {
  const Report report = run(sphere_verify_config());
  const json doc = json::parse(to_json(report));
  CHECK(doc.at("summary").get<std::string>() == report.summary);
  CHECK(doc.at("meta").at("version").get<std::string>() == "1.0.0");
  CHECK(doc.at("meta").at("seed").get<double>() == 20240817.0);
  CHECK(doc.at("config").at("command").get<std::string>() == "verify");
  CHECK(doc.at("config").at("family").get<std::string>() == "small-sphere");
  const auto& checks = doc.at("checks");
  REQUIRE(checks.size() == report.checks.size());
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    CHECK(checks[i].at("name").get<std::string>() == report.checks[i].name);
    // %.17g round-trips doubles exactly.
    CHECK(checks[i].at("measured").get<double>() == report.checks[i].measured);
    CHECK(checks[i].at("tol").get<double>() == report.checks[i].tol);
    CHECK(checks[i].at("pass").get<bool>() == report.checks[i].pass);
  }
}

TEST_CASE("scan JSON carries zeros and rows") {
  RunConfig cfg;
  cfg.command = Command::scan;
  cfg.family = Family::takagi_a1;
  cfg.lo = 0.7;
  cfg.hi = 0.9;
  cfg.steps = 5;
  cfg.points = 2;
  const Report report = run(cfg);
  const json doc = json::parse(to_json(report));
  REQUIRE(doc.contains("scan"));
  CHECK(doc.at("scan").at("zeros").size() == report.scan.zeros.size());
  const auto& rows = doc.at("scan").at("rows");
  REQUIRE(rows.size() == 5);
  for (const char* key : {"param", "tau_b", "tau_b2_normalized",
                          "tau_b2_signed", "b_norm_H", "admissibility_defect",
                          "parallelism_defect", "verdict"}) {
    CAPTURE(key);
    CHECK(rows[0].contains(key));
  }
}

TEST_CASE("CSV scan output uses the pinned header") {
  RunConfig cfg;
  cfg.command = Command::scan;
  cfg.family = Family::small_sphere;
  cfg.lo = 0.5;
  cfg.hi = 0.6;
  cfg.steps = 3;
  cfg.points = 1;
  cfg.format = "csv";
  const Report report = run(cfg);
  const std::string csv = to_csv(report);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "param,tau_b,tau_b2_normalized,b_norm_H,admissibility_defect,"
        "parallelism_defect,verdict");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 3);
  CHECK(render(report) == csv);  // format=csv renders the CSV body
}

TEST_CASE("CSV check tables use the pinned header") {
  RunConfig cfg;
  cfg.command = Command::predicates;
  cfg.family = Family::small_sphere;
  const std::string csv = to_csv(run(cfg));
  CHECK(csv.rfind("name,measured,expected,expected_provenance,tol,pass\n", 0) ==
        0);
}

TEST_CASE("reports are written to the requested output path") {
  namespace fs = std::filesystem;
  const fs::path out = fs::temp_directory_path() / "crlab_report_test.json";
  std::error_code ec;
  fs::remove(out, ec);

  RunConfig cfg;
  cfg.command = Command::predicates;
  cfg.family = Family::small_sphere;
  cfg.out_path = out.string();
  const Report report = run(cfg);
  REQUIRE(fs::exists(out));
  std::ifstream in(out, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str() == render(report));
  fs::remove(out, ec);
}

TEST_CASE("unwritable output paths are a configuration error") {
  RunConfig cfg;
  cfg.command = Command::predicates;
  cfg.family = Family::small_sphere;
  cfg.out_path = "/nonexistent-dir/報告.json";
  CHECK_THROWS_AS((void)run(cfg), Error);
}
