#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "crlab/errors.hpp"
#include "crlab/geometry.hpp"
#include "crlab/rng.hpp"

using crlab::Error;
using crlab::ErrorKind;
using namespace crlab::geom;

namespace {

/// Deterministic pseudo-random ambient vector (fixed seed per call site).
Vec random_vec(int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) {
    auto [a, b] = crlab::rng::gaussian_pair(gen);
    v[i] = a;
    (void)b;
  }
  return v;
}

}  // namespace

// ===========================================================================
// Complex multiplication
// ===========================================================================

TEST_CASE("mult_i is an isometric square root of -1") {
  const Vec v = random_vec(8, 11);
  const Vec iv = mult_i(v);
  CHECK(iv.norm() == doctest::Approx(v.norm()).epsilon(1e-15));
  CHECK(std::abs(iv.dot(v)) < 1e-12);
  CHECK((mult_i(iv) + v).norm() < 1e-15);
}

TEST_CASE("mult_i rotates each interleaved complex slot") {
  Vec v(4);
  v << 1.0, 2.0, 3.0, 4.0;  // z₀ = 1+2i, z₁ = 3+4i
  const Vec iv = mult_i(v);
  CHECK(iv[0] == doctest::Approx(-2.0));  // i·z₀ = −2+1i
  CHECK(iv[1] == doctest::Approx(1.0));
  CHECK(iv[2] == doctest::Approx(-4.0));
  CHECK(iv[3] == doctest::Approx(3.0));
}

// ===========================================================================
// Retraction and projection
// ===========================================================================

TEST_CASE("sphere retraction lands on the sphere and fixes points of it") {
  const Model model = Model::sphere_model(6, 0.75);
  const Vec raw = random_vec(6, 23);
  const EmbeddedPoint p = retract(model, raw);
  CHECK(p.coords.norm() == doctest::Approx(0.75).epsilon(1e-14));
  // Retracting an on-surface point is the identity.
  const EmbeddedPoint q = retract(model, p.coords);
  CHECK((q.coords - p.coords).norm() < 1e-14);
}

TEST_CASE("sphere retraction rejects the center") {
  const Model model = Model::sphere_model(4, 1.0);
  CHECK_THROWS_AS((void)retract(model, Vec::Zero(4)), Error);
  try {
    (void)retract(model, Vec::Zero(4));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
}

TEST_CASE("product-band retraction rescales each block to its radius") {
  const double c = std::cos(0.7), s = std::sin(0.7);
  const Model model = Model::product_band_model(8, 2, c, s);
  const Vec raw = random_vec(8, 31);
  const EmbeddedPoint p = retract(model, raw);
  CHECK(p.coords.head(2).norm() == doctest::Approx(c).epsilon(1e-14));
  CHECK(p.coords.tail(6).norm() == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("tangent/normal projection splits every vector orthogonally") {
  const Model models[] = {
      Model::sphere_model(6, 1.3),
      Model::projective_rep_model(6),
      Model::product_band_model(8, 2, 0.6, 0.8),
  };
  int which = 0;
  for (const Model& model : models) {
    CAPTURE(which);
    const EmbeddedPoint p = retract(model, random_vec(model.ambient_dim, 41));
    const Vec v = random_vec(model.ambient_dim, 43 + which);
    const Vec t = project_tangent(p, v);
    const Vec n = project_normal(p, v);
    CHECK((t + n - v).norm() < 1e-13);
    CHECK(std::abs(t.dot(n)) < 1e-12);
    // Idempotence.
    CHECK((project_tangent(p, t) - t).norm() < 1e-13);
    ++which;
  }
}

TEST_CASE("projective tangent plane is horizontal: orthogonal to p and i*p") {
  const Model model = Model::projective_rep_model(8);
  const EmbeddedPoint p = retract(model, random_vec(8, 53));
  const Vec t = project_tangent(p, random_vec(8, 59));
  CHECK(std::abs(t.dot(p.coords)) < 1e-13);
  CHECK(std::abs(t.dot(mult_i(p.coords))) < 1e-13);
}

TEST_CASE("product-band tangent plane is orthogonal to i*p (circle quotient)") {
  const Model model = Model::product_band_model(8, 2, 0.6, 0.8);
  const EmbeddedPoint p = retract(model, random_vec(8, 61));
  const Vec t = project_tangent(p, random_vec(8, 67));
  CHECK(std::abs(t.dot(mult_i(p.coords))) < 1e-13);
  // Also orthogonal to each block's radial direction.
  Vec radial0 = Vec::Zero(8), radial1 = Vec::Zero(8);
  radial0.head(2) = p.coords.head(2);
  radial1.tail(6) = p.coords.tail(6);
  CHECK(std::abs(t.dot(radial0)) < 1e-13);
  CHECK(std::abs(t.dot(radial1)) < 1e-13);
}

// ===========================================================================
// Finite differences
// ===========================================================================

TEST_CASE("fd_directional recovers the exact derivative of a linear field") {
  // f(q) = i·q along the retracted sphere line has derivative i·X at t = 0
  // for tangent X (the retraction's radial correction is orthogonal to i).
  const Model model = Model::sphere_model(6, 1.0);
  const EmbeddedPoint p = retract(model, random_vec(6, 71));
  const Vec x = project_tangent(p, random_vec(6, 73));
  const auto field = [](const EmbeddedPoint& q) { return mult_i(q.coords); };
  const Vec d = fd_directional(p, x, field, 1e-5);
  CHECK((d - mult_i(x)).norm() < 1e-9 * std::max(1.0, x.norm()));
}

TEST_CASE("Richardson extrapolation beats the plain stencil at coarse steps") {
  const Model model = Model::sphere_model(4, 1.0);
  const EmbeddedPoint p = retract(model, random_vec(4, 79));
  const Vec x = project_tangent(p, random_vec(4, 83));
  // Quadratic-in-position field: plain central differences carry an O(h²)
  // error here, which one Richardson step should knock down sharply.
  const auto field = [](const EmbeddedPoint& q) {
    return Vec(q.coords * q.coords.squaredNorm() + q.coords[0] * q.coords);
  };
  const double h = 1e-2;
  const Vec plain = fd_directional(p, x, field, h, false);
  const Vec rich = fd_directional(p, x, field, h, true);
  const Vec truth = fd_directional(p, x, field, 1e-6, false);
  CHECK((rich - truth).norm() < 0.1 * (plain - truth).norm());
}

TEST_CASE("fd_directional rejects non-positive and collapsed steps") {
  const Model model = Model::sphere_model(4, 1.0);
  const EmbeddedPoint p = retract(model, random_vec(4, 89));
  const Vec x = project_tangent(p, random_vec(4, 97));
  const auto field = [](const EmbeddedPoint& q) { return q.coords; };
  for (const double h : {0.0, -1e-4, 1e-18}) {
    CAPTURE(h);
    CHECK_THROWS_AS((void)fd_directional(p, x, field, h), Error);
  }
  try {
    (void)fd_directional(p, x, field, 1e-18);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
  }
}

TEST_CASE("fd_scalar_directional matches the vector stencil componentwise") {
  const Model model = Model::sphere_model(5, 1.0);
  const EmbeddedPoint p = retract(model, random_vec(5, 101));
  const Vec x = project_tangent(p, random_vec(5, 103));
  const auto vec_field = [](const EmbeddedPoint& q) { return q.coords; };
  const auto scalar_field = [](const EmbeddedPoint& q) {
    return q.coords[2];
  };
  const Vec dv = fd_directional(p, x, vec_field, 1e-5);
  const double ds = fd_scalar_directional(p, x, scalar_field, 1e-5);
  CHECK(ds == doctest::Approx(dv[2]).epsilon(1e-10));
}

TEST_CASE("measured stencil convergence order approaches two") {
  const Model model = Model::sphere_model(6, 1.0);
  const EmbeddedPoint p = retract(model, random_vec(6, 107));
  const Vec x = project_tangent(p, random_vec(6, 109));
  const auto field = [](const EmbeddedPoint& q) {
    return Vec(mult_i(q.coords) * std::sin(q.coords[0]));
  };
  const double order = fd_convergence_order(p, x, field, 1e-3);
  CHECK(order >= 1.9);
  CHECK(order <= 2.6);
}

// ===========================================================================
// Gram-Schmidt
// ===========================================================================

TEST_CASE("gram_schmidt produces an orthonormal set spanning the input") {
  std::vector<Vec> raw;
  for (int k = 0; k < 4; ++k) raw.push_back(random_vec(6, 113 + k));
  const std::vector<Vec> on = gram_schmidt(raw);
  REQUIRE(on.size() == 4);
  for (std::size_t i = 0; i < on.size(); ++i) {
    for (std::size_t j = 0; j < on.size(); ++j) {
      const double want = i == j ? 1.0 : 0.0;
      CHECK(on[i].dot(on[j]) == doctest::Approx(want).epsilon(1e-12));
    }
  }
  // Each input vector is reproduced by its projections onto the output span.
  for (const Vec& v : raw) {
    Vec recon = Vec::Zero(6);
    for (const Vec& e : on) recon += v.dot(e) * e;
    CHECK((recon - v).norm() < 1e-10 * v.norm());
  }
}

TEST_CASE("gram_schmidt flags rank deficiency as a degenerate frame") {
  std::vector<Vec> raw;
  raw.push_back(random_vec(4, 127));
  raw.push_back(2.0 * raw[0]);  // dependent
  CHECK_THROWS_AS((void)gram_schmidt(raw), Error);
  try {
    (void)gram_schmidt(raw);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_frame);
  }
}

TEST_CASE("gram_schmidt respects a custom inner product") {
  // Diagonal metric diag(1, 4): orthonormality must hold in that metric.
  const auto inner = [](const Vec& a, const Vec& b) {
    return a[0] * b[0] + 4.0 * a[1] * b[1];
  };
  std::vector<Vec> raw;
  Vec v0(2), v1(2);
  v0 << 1.0, 1.0;
  v1 << 0.0, 1.0;
  raw = {v0, v1};
  const std::vector<Vec> on = gram_schmidt(raw, inner);
  REQUIRE(on.size() == 2);
  CHECK(inner(on[0], on[0]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inner(on[1], on[1]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inner(on[0], on[1]) == doctest::Approx(0.0).epsilon(1e-12));
}

// ===========================================================================
// Pairwise summation
// ===========================================================================

TEST_CASE("pairwise_sum agrees with exact sums and is deterministic") {
  std::vector<double> vals(1000);
  std::iota(vals.begin(), vals.end(), 1.0);
  const double s = pairwise_sum(vals);
  CHECK(s == doctest::Approx(1000.0 * 1001.0 / 2.0).epsilon(1e-15));
  // Bitwise reproducibility over a fixed-order range.
  CHECK(pairwise_sum(vals) == s);
}

TEST_CASE("pairwise_sum handles empty and single-element ranges") {
  const std::vector<double> none;
  const std::vector<double> one = {3.25};
  CHECK(pairwise_sum(none) == 0.0);
  CHECK(pairwise_sum(one) == 3.25);
}
