#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "crlab/geometry.hpp"

/// @file cr_structure.hpp
/// Strictly pseudoconvex source structures realized on embedded models: the
/// Reeb direction, deterministically seeded horizontal contact frames, the
/// contact form θ and its exterior derivative, the Levi scale κ, and the two
/// connections used throughout (induced Levi-Civita, and its horizontal
/// Tanaka–Webster reduction).

namespace crlab::cr {

using geom::EmbeddedPoint;
using geom::FdConfig;
using geom::Vec;
using geom::VectorFieldOracle;

// ===========================================================================
// Frames
// ===========================================================================

/// Deterministic recipe for rebuilding the horizontal frame near a point:
/// the ambient basis indices accepted at the plan's center, in order.  A
/// fixed plan makes every frame field a smooth function of position across a
/// finite-difference stencil (no index switching between stencil legs).
struct FramePlan {
  std::vector<int> indices;
};

/// Orthonormal contact frame at a point: the Reeb vector T plus 2n
/// horizontal vectors X_1..X_2n, together with the measured matrix of the
/// complex rotation J on the horizontal span (J X_j = Σ_i j_matrix(i,j) X_i).
struct ContactFrame {
  EmbeddedPoint base;
  Vec reeb;
  std::vector<Vec> horiz;
  Eigen::MatrixXd j_matrix;
};

// ===========================================================================
// Source structures
// ===========================================================================

/// A strictly pseudoconvex source manifold of dimension 2n+1 presented on an
/// embedded model.  Implementations supply the model tag and the exact unit
/// Reeb field; everything else (frames, θ, dθ, κ, connections) is generic.
class SourceCr {
 public:
  virtual ~SourceCr() = default;

  /// CR dimension n (the manifold has real dimension 2n+1).
  [[nodiscard]] virtual int cr_n() const = 0;

  /// Embedded model the representatives live on.
  [[nodiscard]] virtual geom::Model model() const = 0;

  /// Unit Reeb vector T(p) in ambient coordinates (exact, not differenced).
  [[nodiscard]] virtual Vec reeb(const EmbeddedPoint& p) const = 0;
};

/// Round sphere S^{2n+1}(r) ⊂ ℂ^{n+1} with T = i·p / r.
class SphereSource final : public SourceCr {
 public:
  SphereSource(int n, double radius);
  [[nodiscard]] int cr_n() const override { return n_; }
  [[nodiscard]] geom::Model model() const override { return model_; }
  [[nodiscard]] Vec reeb(const EmbeddedPoint& p) const override;
  [[nodiscard]] double radius() const { return radius_; }

 private:
  int n_;
  double radius_;
  geom::Model model_;
};

/// Circle-quotient band S¹(cos u) × S^{2n+1}(sin u) ⊂ ℂ^{n+2}, the unit
/// representative presentation of a geodesic-sphere hypersurface in complex
/// projective space.  The Reeb direction is T = −i·ν where ν is the unit
/// horizontal band normal ((sin u/cos u)·z₀, −(cos u/sin u)·z).
class HopfBandSource final : public SourceCr {
 public:
  HopfBandSource(int n, double u);
  [[nodiscard]] int cr_n() const override { return n_; }
  [[nodiscard]] geom::Model model() const override { return model_; }
  [[nodiscard]] Vec reeb(const EmbeddedPoint& p) const override;
  /// Unit band normal ν(p), horizontal and tangent to the ambient unit sphere.
  [[nodiscard]] Vec band_normal(const EmbeddedPoint& p) const;
  [[nodiscard]] double angle() const { return u_; }

 private:
  int n_;
  double u_;
  geom::Model model_;
};

// ===========================================================================
// Frame construction
// ===========================================================================

/// Pick the horizontal frame seeds at p: ambient basis directions ordered by
/// descending |p_i| (ties broken toward the lower index), filtered through
/// modified Gram–Schmidt against the constraint directions, the Reeb vector
/// and previously accepted seeds.  A candidate is accepted when its pivot is
/// at least `pivot_threshold`; 2n acceptances are required
/// (ErrorKind::degenerate_frame otherwise).
[[nodiscard]] FramePlan plan_at(const SourceCr& src, const EmbeddedPoint& p,
                                double pivot_threshold = 0.05);

/// Rebuild the frame at q (near the plan's center) from a fixed plan.  No
/// candidate skipping happens here — the plan is followed verbatim, with a
/// loose pivot floor that only rejects genuinely collapsed frames.
[[nodiscard]] ContactFrame frame_at(const SourceCr& src,
                                    const EmbeddedPoint& q,
                                    const FramePlan& plan);

/// Convenience: plan and build in one step.
[[nodiscard]] ContactFrame frame_at(const SourceCr& src,
                                    const EmbeddedPoint& p);

/// Largest deviation of the Gram matrix of {T, X_1..X_2n} from the identity.
[[nodiscard]] double frame_gram_residual(const ContactFrame& frame);

/// Largest norm defect of J-closure: ‖i·X_j − Σ_i j_matrix(i,j)·X_i‖ over j.
/// Small values certify that the horizontal span is J-invariant.
[[nodiscard]] double frame_j_residual(const ContactFrame& frame);

/// Vector-field oracle for the k-th horizontal frame vector rebuilt from a
/// fixed plan (smooth across finite-difference stencils).
[[nodiscard]] VectorFieldOracle frame_field(
    std::shared_ptr<const SourceCr> src, FramePlan plan, int k);

/// Vector-field oracle for the Reeb field.
[[nodiscard]] VectorFieldOracle reeb_field(std::shared_ptr<const SourceCr> src);

// ===========================================================================
// Contact form, Levi scale, torsion guard
// ===========================================================================

/// θ(v) at p, with the convention θ = g(T, ·) for the analysis metric.
[[nodiscard]] double theta(const SourceCr& src, const EmbeddedPoint& p,
                           const Vec& v);

/// Projection of v onto the horizontal plane at p (tangent, then ⊥ T).
[[nodiscard]] Vec horizontal_project(const SourceCr& src,
                                     const EmbeddedPoint& p, const Vec& v);

/// dθ(u, v) at p via the torsion-free identity
/// dθ(X,Y) = X·θ(Ỹ) − Y·θ(X̃) − θ(∇_X Ỹ) + θ(∇_Y X̃), with constant-seed
/// tangent extensions of u and v (tensoriality makes the choice immaterial).
[[nodiscard]] double d_theta(const SourceCr& src, const EmbeddedPoint& p,
                             const Vec& u, const Vec& v, const FdConfig& cfg);

/// Measured Levi scale κ = dθ(X, JX) / g(X, X) from the first frame leg.
/// Reported as-is; no convention is forced onto it.
[[nodiscard]] double kappa_at(const SourceCr& src, const EmbeddedPoint& p,
                              const FdConfig& cfg);

/// Bundle of measured pseudohermitian data at a point.
struct PseudohermitianData {
  double kappa = 0.0;            ///< Levi scale dθ(X, JX)/g(X,X)
  Eigen::MatrixXd omega;         ///< dθ(X_i, X_j) on the horizontal frame
  Eigen::MatrixXd torsion;       ///< pseudohermitian torsion A(X_i, X_j);
                                 ///< pinned to zero once the guard passes
  double torsion_guard = 0.0;    ///< max |sym θ(∇_{X_i} X̃_j)| measured
  double torsion_trace_guard = 0.0;  ///< |Σ_k θ(∇_{X_k} X̃_k)| measured
};

/// Measure κ, the dθ frame matrix and the torsion guards at p.  The models
/// in this library have vanishing pseudohermitian torsion; the guards verify
/// that numerically (symmetrized θ-component of horizontal covariant
/// derivatives, and its trace) before `torsion` is pinned to the zero matrix.
[[nodiscard]] PseudohermitianData pseudohermitian_data(const SourceCr& src,
                                                       const EmbeddedPoint& p,
                                                       const FdConfig& cfg);

// ===========================================================================
// Connections
// ===========================================================================

/// Induced Levi-Civita derivative (∇_X Y)(p) of the analysis metric: the
/// ambient directional derivative of the field Y along the retracted line
/// through p in direction X, projected back to the analysis tangent space.
[[nodiscard]] Vec levi_civita(const EmbeddedPoint& p, const Vec& X,
                              const std::function<Vec(const EmbeddedPoint&)>& Y,
                              double h, bool richardson = false);

/// FdConfig convenience overload (uses cfg.h1 / cfg.richardson).
[[nodiscard]] Vec levi_civita(const EmbeddedPoint& p, const Vec& X,
                              const std::function<Vec(const EmbeddedPoint&)>& Y,
                              const FdConfig& cfg);

/// Horizontal Tanaka–Webster derivative of a horizontal field along a
/// horizontal direction: the Levi-Civita derivative with its Reeb component
/// removed.  Raises ErrorKind::precondition when X or Y(p) has a
/// non-negligible Reeb or normal component — this reduction is only offered
/// on horizontal arguments.
[[nodiscard]] Vec tanaka_webster_horizontal(
    const SourceCr& src, const EmbeddedPoint& p, const Vec& X,
    const std::function<Vec(const EmbeddedPoint&)>& Y, double h,
    bool richardson = false);

[[nodiscard]] Vec tanaka_webster_horizontal(
    const SourceCr& src, const EmbeddedPoint& p, const Vec& X,
    const std::function<Vec(const EmbeddedPoint&)>& Y, const FdConfig& cfg);

}  // namespace crlab::cr
