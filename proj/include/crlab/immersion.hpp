#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crlab/ambient.hpp"
#include "crlab/cr_structure.hpp"
#include "crlab/geometry.hpp"

/// @file immersion.hpp
/// Isometric-immersion analysis: pushforwards, the second fundamental form
/// and its normal/tangential split, tension sections (horizontal trace and
/// full trace), the shape-operator spectrum along a distinguished unit
/// normal, and defect measurements (admissibility of the Reeb direction,
/// parallelism of the mean curvature section, isometry residual).

namespace crlab::immersion {

using geom::EmbeddedPoint;
using geom::FdConfig;
using geom::TangentVec;
using geom::Vec;
using geom::VectorFieldOracle;

/// An immersion of a strictly pseudoconvex source into a target space.
///
/// `map` sends source representatives to target representatives.  The
/// optional `differential` is a closed-form dφ (exact for the catalog
/// families, which are affine/tautological on representatives); when absent,
/// pushforwards fall back to finite differences of `map`.  The optional
/// `unit_normal` hands codimension-one families their distinguished unit
/// normal lift at map(p); spectrum-style operations require it.
struct Immersion {
  std::string label;
  std::shared_ptr<const cr::SourceCr> source;
  ambient::AmbientModel target;
  std::function<EmbeddedPoint(const EmbeddedPoint&)> map;
  std::function<Vec(const EmbeddedPoint&, const Vec&)> differential;
  std::function<Vec(const EmbeddedPoint&)> unit_normal;
};

/// A vector attached to the target along the immersion, split against the
/// immersed tangent plane: `value` is the component normal to the immersed
/// submanifold (inside the target tangent space), `tangential_residual` the
/// magnitude of what was projected away, kept as a diagnostic.
struct NormalSection {
  Vec value;
  double tangential_residual = 0.0;
  EmbeddedPoint base;
};

// ===========================================================================
// Pushforward
// ===========================================================================

/// dφ_p(v) as a tangent vector at map(p).  Uses the closed-form differential
/// when the immersion carries one, otherwise the finite-difference path.
[[nodiscard]] TangentVec pushforward(const Immersion& im,
                                     const EmbeddedPoint& p, const Vec& v,
                                     const FdConfig& cfg = {});

/// Finite-difference pushforward: central difference of `map` along the
/// retracted source line, projected to the target tangent plane at map(p).
/// Kept public so the closed-form differentials can be cross-checked.
[[nodiscard]] TangentVec pushforward_fd(const Immersion& im,
                                        const EmbeddedPoint& p, const Vec& v,
                                        const FdConfig& cfg);

// ===========================================================================
// Second fundamental form and tension sections
// ===========================================================================

/// B(X, Y)(p) = ∇̄_X(dφ Ỹ) − dφ(∇_X Ỹ): target-side covariant derivative of
/// the pushed field minus the pushed source covariant derivative, split into
/// normal part and tangential residual at map(p).  `X` is a vector at p, `Y`
/// a field oracle near p.  When `plan` is supplied, the frame used for the
/// tangential split is rebuilt from it (keeps nested differences smooth).
[[nodiscard]] NormalSection second_fundamental_form(
    const Immersion& im, const EmbeddedPoint& p, const Vec& X,
    const std::function<Vec(const EmbeddedPoint&)>& Y, const FdConfig& cfg,
    const cr::FramePlan* plan = nullptr);

/// Horizontal trace of the second fundamental form,
/// τ_b(p) = Σ_{i=1}^{2n} B(X_i, X_i), over frame fields rebuilt from `plan`
/// (or a fresh plan at p).  The workhorse mean-curvature section.
[[nodiscard]] NormalSection pseudo_tension(const Immersion& im,
                                           const EmbeddedPoint& p,
                                           const FdConfig& cfg,
                                           const cr::FramePlan* plan = nullptr);

/// Full trace over {X_1..X_2n, T}: pseudo_tension plus B(T, T).
[[nodiscard]] NormalSection full_tension(const Immersion& im,
                                         const EmbeddedPoint& p,
                                         const FdConfig& cfg,
                                         const cr::FramePlan* plan = nullptr);

/// Field oracle evaluating q ↦ pseudo_tension(im, q, cfg, plan).value with a
/// fixed plan, for differentiating the mean curvature section.
[[nodiscard]] VectorFieldOracle pseudo_tension_field(Immersion im,
                                                     cr::FramePlan plan,
                                                     FdConfig cfg);

/// Every B(e_a, e_b) over the ordered basis {X_1..X_2n, T} (Reeb last), with
/// the frame used, plus the squared norms consumed by the characterizations.
struct SecondFundamentalTable {
  cr::ContactFrame frame;
  std::vector<std::vector<NormalSection>> entries;  ///< (2n+1) × (2n+1)
  double norm_sq_full = 0.0;        ///< Σ_{a,b} ‖B(e_a,e_b)‖² (normal parts)
  double norm_sq_horizontal = 0.0;  ///< Σ_{i,j ≤ 2n} ‖B(X_i,X_j)‖²
};

[[nodiscard]] SecondFundamentalTable b_table(
    const Immersion& im, const EmbeddedPoint& p, const FdConfig& cfg,
    const cr::FramePlan* plan = nullptr);

/// ‖B restricted to the horizontal distribution‖² = Σ_{i,j} ‖B(X_i,X_j)‖².
[[nodiscard]] double b_norm_horizontal(const Immersion& im,
                                       const EmbeddedPoint& p,
                                       const FdConfig& cfg);

// ===========================================================================
// Shape spectrum
// ===========================================================================

/// Eigen-structure of the shape operator along the distinguished unit
/// normal.  Requires `im.unit_normal` (ErrorKind::capability otherwise).
struct ShapeSpectrum {
  std::vector<double> eigenvalues;  ///< ascending, all 2n+1
  double reeb_eigenvalue = 0.0;     ///< eigenvalue of the Reeb-aligned vector
  double reeb_alignment = 0.0;      ///< angle (radians) of that vector to T
  NormalSection normal;             ///< the unit normal used
};

[[nodiscard]] ShapeSpectrum shape_spectrum(const Immersion& im,
                                           const EmbeddedPoint& p,
                                           const FdConfig& cfg);

// ===========================================================================
// Defects and residuals
// ===========================================================================

/// max_i ‖B(X_i, T)‖ over the horizontal frame — the admissibility defect.
/// Vanishes exactly when the Reeb direction is a principal direction.
[[nodiscard]] double admissibility_defect(const Immersion& im,
                                          const EmbeddedPoint& p,
                                          const FdConfig& cfg);

/// max over the contact frame (horizontal legs and T) of ‖∇̄^⊥_e τ_b‖, the
/// normal-connection derivative of the mean curvature section.  The outer
/// derivative uses the fine step cfg.h2 (the section itself carries cfg.h1
/// differences).
[[nodiscard]] double mean_curvature_parallelism_defect(const Immersion& im,
                                                       const EmbeddedPoint& p,
                                                       const FdConfig& cfg);

/// max_{a,b} |⟨dφ e_a, dφ e_b⟩ − δ_ab| over the orthonormal contact frame
/// {X_1..X_2n, T}: how far the immersion is from isometric at p.
[[nodiscard]] double isometry_residual(const Immersion& im,
                                       const EmbeddedPoint& p,
                                       const FdConfig& cfg);

}  // namespace crlab::immersion
