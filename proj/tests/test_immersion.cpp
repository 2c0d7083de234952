#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "crlab/catalog.hpp"
#include "crlab/errors.hpp"
#include "crlab/immersion.hpp"

using crlab::Error;
using crlab::ErrorKind;
using namespace crlab::immersion;
using crlab::catalog::build_immersion;
using crlab::catalog::Family;
using crlab::catalog::FamilySpec;
using crlab::catalog::sample_points;

namespace {

constexpr std::uint64_t kSeed = 20240817;

EmbeddedPoint first_point(const FamilySpec& spec, std::uint64_t seed = kSeed) {
  return sample_points(spec, 1, seed).front();
}

}  // namespace

// ===========================================================================
// Pushforward and isometry
// ===========================================================================

TEST_CASE("closed-form differentials agree with finite-difference pushforward") {
  const FamilySpec specs[] = {
      {Family::small_sphere, 1, 0.6},
      {Family::takagi_a1, 1, 0.9},
  };
  for (const FamilySpec& spec : specs) {
    const Immersion im = build_immersion(spec);
    CAPTURE(im.label);
    const EmbeddedPoint p = first_point(spec);
    const auto frame = crlab::cr::frame_at(*im.source, p);
    for (const Vec& x : frame.horiz) {
      const TangentVec exact = pushforward(im, p, x);
      const TangentVec fd = pushforward_fd(im, p, x, FdConfig{});
      CHECK((exact.coords - fd.coords).norm() < 1e-7);
    }
  }
}

TEST_CASE("catalog immersions are isometric on the contact frame") {
  for (const FamilySpec& spec : {FamilySpec{Family::small_sphere, 1, 0.55},
                                 FamilySpec{Family::takagi_a1, 1, 1.1},
                                 FamilySpec{Family::small_sphere, 2, 0.8}}) {
    const Immersion im = build_immersion(spec);
    CAPTURE(im.label);
    CHECK(isometry_residual(im, first_point(spec), FdConfig{}) < 1e-10);
  }
}

// ===========================================================================
// Second fundamental form: umbilic closed forms
// ===========================================================================

TEST_CASE("small sphere is umbilic with principal curvature sqrt(1-r^2)/r") {
  const double r = 0.6;
  const double lambda = std::sqrt(1.0 - r * r) / r;  // = 4/3
  const FamilySpec spec{Family::small_sphere, 1, r};
  const Immersion im = build_immersion(spec);
  const EmbeddedPoint p = first_point(spec);
  const FdConfig cfg{};

  const SecondFundamentalTable table = b_table(im, p, cfg);
  const int m = static_cast<int>(table.frame.horiz.size());
  REQUIRE(m == 2);
  REQUIRE(table.entries.size() == 3);  // rows over {X₁, X₂, T}

  const Vec xi = im.unit_normal(p);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      // B(e_a, e_b) = λ δ_ab ξ for a totally umbilic hypersurface.
      const Vec want = (a == b ? lambda : 0.0) * xi;
      CHECK((table.entries[a][b].value - want).norm() < 1e-6);
      CHECK(table.entries[a][b].tangential_residual < 1e-6);
    }
  }
  // Σ‖B‖² over horizontal legs is 2nλ² = 32/9; over the full frame 3λ².
  CHECK(table.norm_sq_horizontal ==
        doctest::Approx(2.0 * lambda * lambda).epsilon(1e-7));
  CHECK(table.norm_sq_full ==
        doctest::Approx(3.0 * lambda * lambda).epsilon(1e-7));
}

TEST_CASE("geodesic-sphere band second fundamental form norms") {
  // λ = cot u on 2n horizontal legs, 2·cot(2u) on the Reeb leg:
  // ‖B‖²_H = 2n·cot²u and ‖B‖² = 2n·cot²u + 4·cot²(2u).
  const int n = 1;
  const double u = std::numbers::pi / 6.0;
  const double cot_u = 1.0 / std::tan(u);
  const double cot_2u = 1.0 / std::tan(2.0 * u);
  const FamilySpec spec{Family::takagi_a1, n, u};
  const Immersion im = build_immersion(spec);
  const SecondFundamentalTable table = b_table(im, first_point(spec), FdConfig{});
  CHECK(table.norm_sq_horizontal ==
        doctest::Approx(2.0 * n * cot_u * cot_u).epsilon(1e-7));
  CHECK(table.norm_sq_full ==
        doctest::Approx(2.0 * n * cot_u * cot_u + 4.0 * cot_2u * cot_2u)
            .epsilon(1e-7));
}

TEST_CASE("pseudo tension matches 2n lambda times the unit normal") {
  struct Case {
    FamilySpec spec;
    double lambda;
  };
  const Case cases[] = {
      {{Family::small_sphere, 1, 0.6}, std::sqrt(1.0 - 0.36) / 0.6},
      {{Family::small_sphere, 2, 0.8}, std::sqrt(1.0 - 0.64) / 0.8},
      {{Family::takagi_a1, 1, 0.7}, 1.0 / std::tan(0.7)},
  };
  for (const Case& c : cases) {
    const Immersion im = build_immersion(c.spec);
    CAPTURE(im.label);
    const EmbeddedPoint p = first_point(c.spec);
    const NormalSection tau = pseudo_tension(im, p, FdConfig{});
    const double want = 2.0 * c.spec.n * c.lambda;
    CHECK(tau.value.norm() == doctest::Approx(std::abs(want)).epsilon(1e-7));
    const Vec xi = im.unit_normal(p);
    CHECK((tau.value - want * xi).norm() < 1e-5);
    CHECK(tau.tangential_residual < 1e-6);
  }
}

TEST_CASE("full tension adds the Reeb leg") {
  // Small sphere: all 2n+1 legs carry λ.  Band: the Reeb leg carries
  // 2·cot(2u), so ‖τ‖ = |2n·cot u + 2·cot 2u|.
  const double r = 0.6;
  const double lambda = std::sqrt(1.0 - r * r) / r;
  const FamilySpec sphere{Family::small_sphere, 1, r};
  const NormalSection tau_s =
      full_tension(build_immersion(sphere), first_point(sphere), FdConfig{});
  CHECK(tau_s.value.norm() == doctest::Approx(3.0 * lambda).epsilon(1e-7));

  const double u = 0.8;
  const FamilySpec band{Family::takagi_a1, 1, u};
  const NormalSection tau_b =
      full_tension(build_immersion(band), first_point(band), FdConfig{});
  const double want = std::abs(2.0 / std::tan(u) + 2.0 / std::tan(2.0 * u));
  CHECK(tau_b.value.norm() == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("b_norm_horizontal equals the table's horizontal norm") {
  const FamilySpec spec{Family::takagi_a1, 1, 0.85};
  const Immersion im = build_immersion(spec);
  const EmbeddedPoint p = first_point(spec);
  const FdConfig cfg{};
  CHECK(b_norm_horizontal(im, p, cfg) ==
        doctest::Approx(b_table(im, p, cfg).norm_sq_horizontal).epsilon(1e-12));
}

// ===========================================================================
// Shape spectrum
// ===========================================================================

TEST_CASE("small-sphere shape spectrum is a single repeated curvature") {
  const double r = 0.7;
  const double lambda = std::sqrt(1.0 - r * r) / r;
  const FamilySpec spec{Family::small_sphere, 1, r};
  const Immersion im = build_immersion(spec);
  const ShapeSpectrum s = shape_spectrum(im, first_point(spec), FdConfig{});
  REQUIRE(s.eigenvalues.size() == 3);
  for (const double ev : s.eigenvalues) {
    CHECK(std::abs(ev) == doctest::Approx(lambda).epsilon(1e-6));
  }
  CHECK(std::abs(s.reeb_eigenvalue) == doctest::Approx(lambda).epsilon(1e-6));
  CHECK(s.normal.value.norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("band shape spectrum splits horizontal and Reeb curvatures") {
  const double u = 0.9;
  const FamilySpec spec{Family::takagi_a1, 1, u};
  const Immersion im = build_immersion(spec);
  const ShapeSpectrum s = shape_spectrum(im, first_point(spec), FdConfig{});
  REQUIRE(s.eigenvalues.size() == 3);
  // Two eigenvalues of size cot u, one of size 2·cot 2u aligned with T.
  CHECK(std::abs(s.reeb_eigenvalue) ==
        doctest::Approx(std::abs(2.0 / std::tan(2.0 * u))).epsilon(1e-5));
  CHECK(s.reeb_alignment < 1e-3);
  int horizontal_count = 0;
  for (const double ev : s.eigenvalues) {
    if (std::abs(std::abs(ev) - 1.0 / std::tan(u)) < 1e-5) ++horizontal_count;
  }
  CHECK(horizontal_count == 2);
}

TEST_CASE("shape spectrum is invariant across sample points") {
  // The families are homogeneous: the spectrum must not depend on which
  // seeded point it is measured at.
  const FamilySpec spec{Family::small_sphere, 1, 0.77};
  const Immersion im = build_immersion(spec);
  const ShapeSpectrum a = shape_spectrum(im, first_point(spec, 1), FdConfig{});
  const ShapeSpectrum b = shape_spectrum(im, first_point(spec, 999), FdConfig{});
  REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
  for (std::size_t k = 0; k < a.eigenvalues.size(); ++k) {
    CHECK(a.eigenvalues[k] == doctest::Approx(b.eigenvalues[k]).epsilon(1e-8));
  }
}

TEST_CASE("shape spectrum requires a distinguished unit normal") {
  const FamilySpec spec{Family::small_sphere, 1, 0.7};
  Immersion im = build_immersion(spec);
  im.unit_normal = nullptr;
  CHECK_THROWS_AS((void)shape_spectrum(im, first_point(spec), FdConfig{}),
                  Error);
  try {
    (void)shape_spectrum(im, first_point(spec), FdConfig{});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::capability);
  }
}

// ===========================================================================
// Defects
// ===========================================================================

TEST_CASE("catalog immersions are admissible with parallel mean curvature") {
  for (const FamilySpec& spec : {FamilySpec{Family::small_sphere, 1, 0.65},
                                 FamilySpec{Family::takagi_a1, 1, 0.95}}) {
    const Immersion im = build_immersion(spec);
    CAPTURE(im.label);
    const EmbeddedPoint p = first_point(spec);
    const FdConfig cfg{};
    CHECK(admissibility_defect(im, p, cfg) < 1e-4);
    CHECK(mean_curvature_parallelism_defect(im, p, cfg) < 1e-4);
  }
}

TEST_CASE("a skewed differential is caught by the isometry residual") {
  const FamilySpec spec{Family::small_sphere, 1, 0.7};
  Immersion im = build_immersion(spec);
  const auto good = im.differential;
  im.differential = [good](const EmbeddedPoint& p, const Vec& v) {
    return Vec(1.01 * good(p, v));  // 1% stretch
  };
  const double res = isometry_residual(im, first_point(spec), FdConfig{});
  CHECK(res > 0.015);  // (1.01² − 1) ≈ 0.02 on diagonal entries
  CHECK(res < 0.03);
}
