#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "crlab/catalog.hpp"
#include "crlab/errors.hpp"

using crlab::Error;
using crlab::ErrorKind;
using namespace crlab::catalog;
using crlab::geom::Vec;

namespace {
constexpr double kPi = std::numbers::pi;
}

// ===========================================================================
// Naming and validation
// ===========================================================================

TEST_CASE("family names round-trip and accept both separators") {
  CHECK(family_from_string("small-sphere") == Family::small_sphere);
  CHECK(family_from_string("small_sphere") == Family::small_sphere);
  CHECK(family_from_string("takagi-a1") == Family::takagi_a1);
  CHECK(family_from_string("takagi_a1") == Family::takagi_a1);
  CHECK(family_from_string(to_string(Family::small_sphere)) ==
        Family::small_sphere);
  CHECK(family_from_string(to_string(Family::takagi_a1)) == Family::takagi_a1);
  CHECK_THROWS_AS((void)family_from_string("clifford"), Error);
}

TEST_CASE("family parameters outside the domain are rejected") {
  for (const FamilySpec& bad : {FamilySpec{Family::small_sphere, 1, 0.0},
                                FamilySpec{Family::small_sphere, 1, 1.2},
                                FamilySpec{Family::small_sphere, 1, -0.3},
                                FamilySpec{Family::takagi_a1, 1, 0.0},
                                FamilySpec{Family::takagi_a1, 1, kPi / 2.0}}) {
    CAPTURE(static_cast<int>(bad.family));
    CAPTURE(bad.param);
    CHECK_THROWS_AS((void)build_immersion(bad), Error);
    try {
      (void)build_immersion(bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::configuration);
    }
  }
}

// ===========================================================================
// Built immersions
// ===========================================================================

TEST_CASE("small-sphere immersion sits at constant height sqrt(1-r^2)") {
  const double r = 0.6;
  const FamilySpec spec{Family::small_sphere, 1, r};
  const Immersion im = build_immersion(spec);
  CHECK(im.source->model().ambient_dim == 4);
  CHECK(im.target.coord_dim == 5);
  for (const EmbeddedPoint& p : sample_points(spec, 4, 5)) {
    const EmbeddedPoint q = im.map(p);
    CHECK(q.coords.size() == 5);
    CHECK(q.coords.norm() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(q.coords[4] == doctest::Approx(std::sqrt(1.0 - r * r)).epsilon(1e-13));
    CHECK((q.coords.head(4) - p.coords).norm() < 1e-13);
    // Distinguished normal: unit and orthogonal to the image sphere slice.
    const Vec xi = im.unit_normal(p);
    CHECK(xi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(xi.dot(q.coords)) < 1e-12);
  }
}

TEST_CASE("band immersion is the tautological identification") {
  const double u = 0.8;
  const FamilySpec spec{Family::takagi_a1, 1, u};
  const Immersion im = build_immersion(spec);
  CHECK(im.source->model().ambient_dim == 6);  // ℂ³ representatives
  CHECK(im.target.coord_dim == 6);
  for (const EmbeddedPoint& p : sample_points(spec, 3, 9)) {
    const EmbeddedPoint q = im.map(p);
    CHECK((q.coords - p.coords).norm() < 1e-14);
    CHECK(q.coords.norm() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("immersion labels carry family, dimension and parameter") {
  const Immersion a = build_immersion({Family::small_sphere, 2, 0.75});
  CHECK(a.label.find("small-sphere") != std::string::npos);
  CHECK(a.label.find("n=2") != std::string::npos);
  const Immersion b = build_immersion({Family::takagi_a1, 1, 0.75});
  CHECK(b.label.find("takagi") != std::string::npos);
}

// ===========================================================================
// Closed-form loci
// ===========================================================================

TEST_CASE("sphere-family loci: harmonic at r=1, biharmonic at 2r^2=1") {
  const auto loci = closed_form_loci(Family::small_sphere, 1);
  REQUIRE(loci.size() >= 2);
  CHECK(std::is_sorted(loci.begin(), loci.end(),
                       [](const Locus& a, const Locus& b) {
                         return a.param < b.param;
                       }));
  bool saw_harmonic = false, saw_biharmonic = false;
  for (const Locus& l : loci) {
    CHECK(l.defining_residual < 1e-12);
    if (l.name == "pseudo_harmonic") {
      saw_harmonic = true;
      CHECK(l.param == doctest::Approx(1.0).epsilon(1e-15));
    }
    if (l.name == "pseudo_biharmonic") {
      saw_biharmonic = true;
      CHECK(l.param == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    }
  }
  CHECK(saw_harmonic);
  CHECK(saw_biharmonic);
}

TEST_CASE("band-family loci cover both cases and the Riemannian values") {
  for (int n : {1, 2, 3, 4, 5}) {
    CAPTURE(n);
    const auto loci = closed_form_loci(Family::takagi_a1, n);
    std::set<std::string> names;
    for (const Locus& l : loci) {
      names.insert(l.name);
      CHECK(l.defining_residual < 1e-12);
      CHECK(l.param > 0.0);
      CHECK(l.param < kPi / 2.0);
    }
    CHECK(names.count("case1_pseudo_harmonic") == 1);
    CHECK(names.count("case2_pseudo_biharmonic") == 1);
    CHECK(names.count("riemannian_minimal") == 1);
    CHECK(names.count("riemannian_biharmonic_minus") == 1);
    CHECK(names.count("riemannian_biharmonic_plus") == 1);
    CHECK(names.size() == loci.size());  // names are unique

    for (const Locus& l : loci) {
      const double t2 = std::pow(std::tan(l.param), 2);
      if (l.name == "case1_pseudo_harmonic") {
        CHECK(t2 == doctest::Approx(2.0 * n).epsilon(1e-12));
      } else if (l.name == "case2_pseudo_biharmonic") {
        CHECK(t2 == doctest::Approx(1.0).epsilon(1e-12));
      } else if (l.name == "riemannian_minimal") {
        CHECK(t2 == doctest::Approx(2.0 * n + 1.0).epsilon(1e-12));
      } else if (l.name == "riemannian_biharmonic_plus") {
        // Larger root of t⁴ − 2(n+3)t² + 2n+1 = 0 in t².
        CHECK(t2 == doctest::Approx(n + 3.0 +
                                    std::sqrt((n + 3.0) * (n + 3.0) -
                                              (2.0 * n + 1.0)))
                        .epsilon(1e-12));
      }
    }
  }
}

// ===========================================================================
// Sampling
// ===========================================================================

TEST_CASE("sample points are deterministic, on-model and seed-sensitive") {
  const FamilySpec spec{Family::takagi_a1, 1, 0.95};
  const auto a = sample_points(spec, 6, 20240817);
  const auto b = sample_points(spec, 6, 20240817);
  REQUIRE(a.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].coords == b[i].coords);  // bitwise
    // On the band: block radii cos u and sin u.
    CHECK(a[i].coords.head(2).norm() ==
          doctest::Approx(std::cos(0.95)).epsilon(1e-13));
    CHECK(a[i].coords.tail(4).norm() ==
          doctest::Approx(std::sin(0.95)).epsilon(1e-13));
  }
  const auto c = sample_points(spec, 6, 1);
  CHECK((a[0].coords - c[0].coords).norm() > 1e-3);
}

TEST_CASE("sample points vary smoothly in the family parameter") {
  // Fixed seed and latent draws: nearby parameters give nearby points.
  const double u = 0.9, du = 1e-6;
  const auto a = sample_points({Family::takagi_a1, 1, u}, 4, 3);
  const auto b = sample_points({Family::takagi_a1, 1, u + du}, 4, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i].coords - b[i].coords).norm() < 10.0 * du);
  }
}

TEST_CASE("sphere sample points live on the small sphere") {
  const double r = 0.7;
  const auto pts = sample_points({Family::small_sphere, 1, r}, 5, 11);
  for (const EmbeddedPoint& p : pts) {
    CHECK(p.coords.size() == 4);
    CHECK(p.coords.norm() == doctest::Approx(r).epsilon(1e-13));
  }
}

// ===========================================================================
// Scanning
// ===========================================================================

TEST_CASE("scan brackets the sphere-family zero crossing") {
  const ScanResult scan = scan_family(Family::small_sphere, 1, 0.65, 0.75, 11,
                                      4, 20240817, crlab::geom::FdConfig{});
  CHECK(scan.rows.size() == 11);
  CHECK(std::is_sorted(scan.rows.begin(), scan.rows.end(),
                       [](const ScanRow& a, const ScanRow& b) {
                         return a.param < b.param;
                       }));
  REQUIRE(scan.zeros.size() == 1);
  CHECK(scan.zeros[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));
  // Grid endpoints are included.
  CHECK(scan.rows.front().param == doctest::Approx(0.65).epsilon(1e-15));
  CHECK(scan.rows.back().param == doctest::Approx(0.75).epsilon(1e-15));
  // Rows near the locus carry the biharmonic verdict, far rows do not.
  bool any_biharmonic = false;
  for (const ScanRow& row : scan.rows) {
    if (row.verdict == "pseudo_biharmonic") any_biharmonic = true;
    CHECK(row.tau_b_norm > 0.1);
    CHECK(row.admissibility < 1e-4);
    CHECK(row.parallelism < 1e-4);
  }
  CHECK(any_biharmonic);
  CHECK(scan.rows.front().verdict == "generic");
}

TEST_CASE("scan of a locus-free window finds no zeros") {
  const ScanResult scan = scan_family(Family::small_sphere, 1, 0.45, 0.55, 6, 2,
                                      20240817, crlab::geom::FdConfig{});
  CHECK(scan.zeros.empty());
  for (const ScanRow& row : scan.rows) {
    CHECK(row.verdict == "generic");
    CHECK(row.tau_b2_normalized > 1e-2);
  }
}

TEST_CASE("scan is deterministic for a fixed seed") {
  const ScanResult a = scan_family(Family::takagi_a1, 1, 0.7, 0.9, 5, 2,
                                   20240817, crlab::geom::FdConfig{});
  const ScanResult b = scan_family(Family::takagi_a1, 1, 0.7, 0.9, 5, 2,
                                   20240817, crlab::geom::FdConfig{});
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].tau_b2_signed == b.rows[i].tau_b2_signed);  // bitwise
    CHECK(a.rows[i].b_norm_h == b.rows[i].b_norm_h);
  }
  REQUIRE(a.zeros.size() == b.zeros.size());
  for (std::size_t i = 0; i < a.zeros.size(); ++i) {
    CHECK(a.zeros[i] == b.zeros[i]);
  }
}

TEST_CASE("band scan brackets the pi/4 crossing") {
  const ScanResult scan = scan_family(Family::takagi_a1, 1, 0.7, 0.9, 9, 3,
                                      20240817, crlab::geom::FdConfig{});
  REQUIRE(scan.zeros.size() == 1);
  CHECK(scan.zeros[0] == doctest::Approx(kPi / 4.0).epsilon(1e-3));
}
