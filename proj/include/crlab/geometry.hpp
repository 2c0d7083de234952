#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "crlab/errors.hpp"

/// @file geometry.hpp
/// Embedded-model scaffolding: points constrained to a model manifold sitting
/// inside ℝ^N, tangent projection, retraction along straight ambient lines,
/// and central finite differences of fields along retracted curves.  All
/// differential-geometric operators in the library are built from these
/// primitives.

namespace crlab::geom {

using Vec = Eigen::VectorXd;

// ===========================================================================
// Models
// ===========================================================================

/// Which constraint surface an EmbeddedPoint lives on.
enum class ModelKind {
  sphere,           ///< round sphere of radius r in ℝ^N
  projective_rep,   ///< unit-sphere representative of a complex projective
                    ///< class; tangent = horizontal (⊥ p and ⊥ i·p)
  product_band,     ///< S¹(r₀) × S^{2k−1}(r₁) product of round spheres,
                    ///< coordinates split at a fixed real index; tangent is
                    ///< additionally taken ⊥ i·p (circle-quotient convention)
};

/// Constraint-surface descriptor.  Carried by every point so that retraction
/// and tangent projection never depend on caller-side bookkeeping.
struct Model {
  ModelKind kind = ModelKind::sphere;
  int ambient_dim = 0;   ///< real dimension N of the surrounding ℝ^N
  double radius = 1.0;   ///< sphere radius (sphere kind only)
  int split = 0;         ///< first real index of the second block (product_band)
  double r0 = 0.0;       ///< first-block radius (product_band)
  double r1 = 0.0;       ///< second-block radius (product_band)

  [[nodiscard]] static Model sphere_model(int ambient_dim, double radius);
  [[nodiscard]] static Model projective_rep_model(int ambient_dim);
  [[nodiscard]] static Model product_band_model(int ambient_dim, int split,
                                                double r0, double r1);

  [[nodiscard]] bool same_as(const Model& other) const noexcept;
};

/// A point constrained to its model surface.
struct EmbeddedPoint {
  Vec coords;
  Model model;
};

/// A tangent vector remembered together with its base point.
struct TangentVec {
  Vec coords;
  EmbeddedPoint base;
};

/// A vector field given by an evaluation rule plus a label used in
/// diagnostics.  The callable returns ambient coordinates of the field value
/// at the queried point.
struct VectorFieldOracle {
  std::function<Vec(const EmbeddedPoint&)> eval;
  std::string label;
};

/// Step sizes for the finite-difference engine.
///
/// `h1` is the step for outer/first derivatives, `h2` the (smaller) step for
/// inner derivatives of nested second-order operators.  `richardson` switches
/// first-derivative stencils to one step of Richardson extrapolation
/// (h and h/2 combined to cancel the leading error term).
struct FdConfig {
  double h1 = 1e-4;
  double h2 = 1e-5;
  bool richardson = false;
};

// ===========================================================================
// Model operations
// ===========================================================================

/// Multiply an interleaved complex vector by i:  (re,im) ↦ (−im, re) per
/// complex slot.  Layout: component 2j is Re(z_j), component 2j+1 is Im(z_j).
[[nodiscard]] Vec mult_i(const Vec& v);

/// Nearest-point style retraction of an ambient point onto the model surface
/// (per-factor radial rescaling).  Raises ErrorKind::domain when the ambient
/// point is too close to a center to rescale stably.
[[nodiscard]] EmbeddedPoint retract(const Model& model, const Vec& ambient);

/// Orthogonal projection of an ambient vector onto the tangent space used for
/// analysis at p: the full tangent plane for spheres, the horizontal plane
/// (⊥ p, ⊥ i·p) for projective representatives, and the band tangent ⊥ i·p
/// for product bands.
[[nodiscard]] Vec project_tangent(const EmbeddedPoint& p, const Vec& v);

/// Component of v orthogonal to the analysis tangent space at p.
[[nodiscard]] Vec project_normal(const EmbeddedPoint& p, const Vec& v);

// ===========================================================================
// Finite differences
// ===========================================================================

/// Central difference of a vector-valued function of position along the
/// retracted line t ↦ retract(p + t·dir), evaluated at t = 0 with step h:
///
///     D ≈ [f(retract(p + h·dir)) − f(retract(p − h·dir))] / (2h)
///
/// With `richardson` set, combines steps h and h/2 as (4·D_{h/2} − D_h)/3.
/// The result is a raw ambient derivative; callers project as appropriate.
/// Raises ErrorKind::configuration when h is non-positive or so small that
/// the stencil collapses in double precision.
[[nodiscard]] Vec fd_directional(
    const EmbeddedPoint& p, const Vec& dir,
    const std::function<Vec(const EmbeddedPoint&)>& f, double h,
    bool richardson = false);

/// Convenience overload taking steps from an FdConfig (uses cfg.h1).
[[nodiscard]] Vec fd_directional(
    const EmbeddedPoint& p, const Vec& dir,
    const std::function<Vec(const EmbeddedPoint&)>& f, const FdConfig& cfg);

/// Scalar-valued counterpart of fd_directional (same stencil and guards).
[[nodiscard]] double fd_scalar_directional(
    const EmbeddedPoint& p, const Vec& dir,
    const std::function<double(const EmbeddedPoint&)>& f, double h,
    bool richardson = false);

/// Measured convergence order of the central-difference stencil for a given
/// field/direction: evaluates at steps h, h/2, h/4 and returns
/// log2(‖D_h − D_{h/2}‖ / ‖D_{h/2} − D_{h/4}‖), which approaches 2 for smooth
/// fields.  Used by the self-test harness.
[[nodiscard]] double fd_convergence_order(
    const EmbeddedPoint& p, const Vec& dir,
    const std::function<Vec(const EmbeddedPoint&)>& f, double h);

// ===========================================================================
// Linear-algebra helpers
// ===========================================================================

/// Modified Gram–Schmidt against an inner product.  Returns orthonormal
/// vectors spanning the input span; raises ErrorKind::degenerate_frame when a
/// pivot norm falls below `pivot_threshold` (rank deficiency).
[[nodiscard]] std::vector<Vec> gram_schmidt(
    const std::vector<Vec>& vectors,
    const std::function<double(const Vec&, const Vec&)>& inner,
    double pivot_threshold = 1e-10);

/// Euclidean-inner-product overload.
[[nodiscard]] std::vector<Vec> gram_schmidt(const std::vector<Vec>& vectors,
                                            double pivot_threshold = 1e-10);

/// Deterministic pairwise (tree) summation over a fixed-order range.  Chosen
/// over naive accumulation so that large reductions (quadrature, scans) are
/// both reproducible bit-for-bit and resistant to cancellation growth.
[[nodiscard]] double pairwise_sum(std::span<const double> values);

}  // namespace crlab::geom
