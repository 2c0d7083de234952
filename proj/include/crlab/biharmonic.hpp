#pragma once

#include <functional>
#include <string>

#include "crlab/immersion.hpp"

/// @file biharmonic.hpp
/// Second-order analysis: the horizontal (contact) Laplacian on sections
/// along an immersion, the pseudo and Riemannian bitension fields, residual
/// checks of the two structural identities relating them to curvature and
/// the second fundamental form, and the point verdicts (pseudo harmonic /
/// pseudo biharmonic, with the closed-form curvature-condition comparison).

namespace crlab::biharmonic {

using geom::EmbeddedPoint;
using geom::FdConfig;
using geom::Vec;
using immersion::Immersion;

// ===========================================================================
// Contact Laplacian
// ===========================================================================

/// Horizontal rough Laplacian of a section V along the immersion:
///
///   Δ_b V = −Σ_{i=1}^{2n} { ∇̄_{X_i}(∇̄_{X_i} V) − ∇̄_{∇_{X_i}X_i} V }
///
/// with the sum over horizontal frame fields rebuilt from a fixed plan.
/// Outer derivatives use cfg.h1, inner ones cfg.h2; cfg.h1 must exceed
/// cfg.h2 (ErrorKind::configuration otherwise) — nesting two central
/// differences at the same step would let roundoff swamp the signal.
[[nodiscard]] Vec delta_b_section(
    const Immersion& im, const EmbeddedPoint& p,
    const std::function<Vec(const EmbeddedPoint&)>& V, const FdConfig& cfg,
    const cr::FramePlan* plan = nullptr);

// ===========================================================================
// Bitension fields
// ===========================================================================

/// Outcome of a bitension evaluation at a point.  `normalized` is the scale
/// used everywhere downstream: ‖τ₂‖ / (max(‖τ‖, ε)·(1 + ‖B‖²)), with
/// ‖B‖² the full-frame squared norm; `signed_stat` is the same quantity with
/// ⟨τ₂, ξ⟩ in place of ‖τ₂‖ when a distinguished unit normal exists (0.0
/// otherwise) — the sign carrier for root bracketing in parameter scans.
struct BitensionResult {
  Vec tau;                ///< the tension section differentiated (τ_b or τ)
  Vec tau2;               ///< the bitension vector
  double tau_norm = 0.0;
  double tau2_norm = 0.0;
  double b_norm_sq_full = 0.0;
  double b_norm_sq_horizontal = 0.0;
  double normalizer = 0.0;
  double normalized = 0.0;
  double signed_stat = 0.0;
};

/// Pseudo bitension τ_{b,2} = Δ_b(τ_b) − Σ_{i=1}^{2n} R(τ_b, dφX_i)dφX_i,
/// with the exact target curvature operator.
[[nodiscard]] BitensionResult pseudo_bitension(const Immersion& im,
                                               const EmbeddedPoint& p,
                                               const FdConfig& cfg);

/// Riemannian bitension of the analysis metric:
/// τ₂ = Δ̄(τ) − Σ_{e ∈ {X_1..X_2n, T}} R(τ, dφe)dφe, where τ is the full
/// tension (trace over the whole contact frame) and Δ̄ the rough Laplacian
/// over the whole frame with Levi-Civita connection coefficients.
[[nodiscard]] BitensionResult riemannian_bitension(const Immersion& im,
                                                   const EmbeddedPoint& p,
                                                   const FdConfig& cfg);

// ===========================================================================
// Structural identity residuals
// ===========================================================================

/// Residual of the commutation (Weitzenbeck-type) formula for dφ applied to
/// the horizontal frame leg `leg`: the iterated-derivative side
///   Σ_k { ∇̄_{X_k}[B(X_k, X)] − B(X_k, ∇_{X_k}X) − B(∇_{X_k}X_k, X) }
/// against the curvature side
///   ∇̄_X τ(φ) − Σ_k { R(dφX, dφX_k)dφX_k − dφ(R^g(X, X_k)X_k) }
///            − { R(dφX, dφT)dφT − dφ(R^g(X, T)T) } − ∇̃_T∇̃_T dφ(X),
/// with the source curvature R^g measured by nested finite differences.
struct IdentityResidual {
  double residual = 0.0;  ///< ‖LHS − RHS‖
  double scale = 0.0;     ///< max(1, ‖LHS‖, ‖RHS‖)
  double relative = 0.0;  ///< residual / scale
};

[[nodiscard]] IdentityResidual weitzenbock_residual(const Immersion& im,
                                                    const EmbeddedPoint& p,
                                                    int leg,
                                                    const FdConfig& cfg);

/// Residual of the identity expanding the contact Laplacian of the mean
/// curvature section through curvature and second-fundamental-form
/// contractions:
///   −Δ_b(τ_b) = Σ_j ⟨τ_b, R(dφX_j, dφX_k)dφX_k⟩ dφX_j
///             + Σ_j ⟨τ_b, R(dφX_j, dφT)dφT⟩ dφX_j
///             − Σ_{i,j} ⟨τ_b, B(X_i,X_j)⟩ B(X_i,X_j).
/// Requires the admissibility and mean-curvature parallelism defects to sit
/// below `gate_tol` (ErrorKind::precondition otherwise, naming the defect).
/// The relative residual is measured against ‖Δ_b τ_b‖.
[[nodiscard]] IdentityResidual tension_laplacian_identity_residual(
    const Immersion& im, const EmbeddedPoint& p, const FdConfig& cfg,
    double gate_tol = 1e-3);

// ===========================================================================
// Verdicts
// ===========================================================================

/// Tolerances for the point verdict.
struct VerdictTols {
  double bitension = 1e-2;   ///< normalized ‖τ_{b,2}‖ threshold
  double condition = 0.05;   ///< |‖B|_{H×H}‖² − closed-form value| threshold
  double defect = 1e-4;      ///< admissibility / parallelism gate
  double harmonic = 1e-3;    ///< ‖τ_b‖ threshold for "pseudo harmonic"
  double tangency = 1e-3;    ///< case split on |⟨J·dφT, ξ⟩| (projective)
};

/// Point verdict: measured statistics plus the closed-form curvature
/// condition appropriate to the target and case.
struct Verdict {
  bool pseudo_harmonic = false;
  bool pseudo_biharmonic = false;
  double tau_b_norm = 0.0;
  double bitension_normalized = 0.0;
  double b_norm_horizontal = 0.0;  ///< ‖B|_{H×H}‖²
  std::string case_tag;            ///< "sphere", "cp_tangent_case", "cp_normal_case"
  double condition_value = 0.0;    ///< closed-form value ‖B|_{H×H}‖² must hit
  bool condition_match = false;
  double tangency = 0.0;           ///< |⟨J·dφT, ξ⟩| (projective targets)
  bool hypotheses_ok = false;
  double admissibility = 0.0;
  double parallelism = 0.0;
};

/// Evaluate the verdict at one point.  For projective targets the case is
/// detected from the measured tangency; an intermediate tangency (neither
/// ≈0 nor ≈1) raises ErrorKind::domain.
[[nodiscard]] Verdict characterize(const Immersion& im, const EmbeddedPoint& p,
                                   const FdConfig& cfg,
                                   const VerdictTols& tols = {});

}  // namespace crlab::biharmonic
