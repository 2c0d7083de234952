#pragma once

#include <functional>

#include "crlab/geometry.hpp"

/// @file ambient.hpp
/// Target-space package: descriptors for the two ambient geometries (round
/// spheres, and complex projective space presented through unit-sphere lifts
/// of the Hopf fibration), their exact curvature operators, the
/// horizontal-lift covariant derivative with a horizontality drift guard,
/// and a nested finite-difference curvature used to cross-check the exact
/// operators.

namespace crlab::ambient {

using geom::EmbeddedPoint;
using geom::FdConfig;
using geom::Vec;
using geom::VectorFieldOracle;

/// Which target geometry an immersion maps into.
enum class TargetKind {
  sphere,              ///< round S^{m}(r) ⊂ ℝ^{m+1}
  complex_projective,  ///< ℂP^{k}, worked with through unit-lift representatives
};

/// Target-space descriptor.  For the projective target all computations run
/// on unit-sphere representatives; tangent vectors are horizontal lifts and
/// the metric is the restriction of the flat inner product to them.
struct AmbientModel {
  TargetKind kind = TargetKind::sphere;
  int coord_dim = 0;      ///< real dimension of the coordinate space
  double radius = 1.0;    ///< sphere radius (sphere targets)
  double hol_curv = 4.0;  ///< holomorphic sectional curvature c (projective)

  [[nodiscard]] static AmbientModel sphere_target(int coord_dim, double radius);
  [[nodiscard]] static AmbientModel projective_target(int coord_dim,
                                                      double hol_curv = 4.0);

  /// Model tag for points of the target (drives retraction/projection).
  [[nodiscard]] geom::Model point_model() const;

  /// Exact curvature operator R(U,V)W at `base`, in the convention
  /// R(U,V)W = ∇_U∇_V W − ∇_V∇_U W − ∇_{[U,V]}W (unit-sphere sectional
  /// curvature +1).  Sphere: (⟨W,V⟩U − ⟨W,U⟩V)/r².  Projective target:
  /// (c/4)·(⟨V,W⟩U − ⟨U,W⟩V + ⟨JV,W⟩JU − ⟨JU,W⟩JV + 2⟨U,JV⟩JW) with
  /// J = multiplication by i on horizontal lifts.  Arguments must be tangent
  /// (resp. horizontal) at `base` within 1e-8 — ErrorKind::domain otherwise.
  [[nodiscard]] Vec curvature(const EmbeddedPoint& base, const Vec& U,
                              const Vec& V, const Vec& W) const;
};

/// Covariant derivative of the projective target read through horizontal
/// lifts: central difference of the field along the retracted great-circle
/// direction, projected to the horizontal plane at the base representative.
/// The field must stay horizontal along the stencil; a drift beyond 1e-6
/// raises ErrorKind::consistency (the lift has left the quotient picture).
[[nodiscard]] Vec hopf_horizontal_connection(
    const EmbeddedPoint& rep, const Vec& X,
    const std::function<Vec(const EmbeddedPoint&)>& W, double h,
    bool richardson = false);

/// Phase-aligned invariant extension of a horizontal vector v at `rep`: the
/// field q ↦ P_hor(q)( μ(q)·v ) with μ(q) the unit complex phase of ⟨q, rep⟩.
/// It is circle-equivariant, hence descends to a genuine field on the
/// projective quotient near the base class.
[[nodiscard]] VectorFieldOracle invariant_extension(const EmbeddedPoint& rep,
                                                    const Vec& v);

/// Curvature tensor of the analysis metric of any embedded model by nested
/// finite differences:
/// R(X,Y)Z = ∇_X(∇_{Ỹ}Z̃) − ∇_Y(∇_{X̃}Z̃) − ∇_{[X̃,Ỹ]}Z̃.  On sphere models
/// the extensions X̃, Ỹ, Z̃ are constant-seed tangent projections; on the
/// circle-quotient models they are the phase-aligned invariant extensions,
/// so the nested derivative sees fields that genuinely descend to the
/// quotient.  Inner derivatives use `h2`, outer ones `h1`.  For product-band
/// points this computes the curvature of the circle-quotient metric; for
/// projective representatives, the Fubini–Study curvature.
[[nodiscard]] Vec metric_curvature_fd(const EmbeddedPoint& p, const Vec& X,
                                      const Vec& Y, const Vec& Z, double h1,
                                      double h2);

/// Sectional curvature of the plane spanned by the lift v and J·v at a unit
/// representative, measured entirely by nested finite differences of the
/// horizontal-lift connection.  Converges to the holomorphic sectional
/// curvature c of the projective target.
[[nodiscard]] double holomorphic_sectional_fd(const EmbeddedPoint& rep,
                                              const Vec& v, double h1,
                                              double h2);

}  // namespace crlab::ambient
