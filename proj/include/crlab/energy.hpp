#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "crlab/immersion.hpp"

/// @file energy.hpp
/// Global functionals over the three-sphere source: deterministic quadrature
/// rules (a Gauss–Legendre × trapezoid product rule in Hopf coordinates, and
/// a seeded Monte-Carlo rule), the integrator, and the two energies — the
/// horizontal Dirichlet energy and the mean-curvature (bienergy) functional.
/// Both integrate against the Riemannian volume of the analysis metric.

namespace crlab::energy {

using geom::EmbeddedPoint;
using geom::FdConfig;
using geom::Vec;
using immersion::Immersion;

/// Nodes and weights for integrating over an embedded source model.
struct QuadratureRule {
  std::string kind;  ///< "product_hopf" or "monte_carlo"
  std::vector<EmbeddedPoint> nodes;
  std::vector<double> weights;
  double total_weight = 0.0;  ///< Σ w_i (equals the volume it represents)
};

/// Product rule on S³(r) in Hopf coordinates
/// x = r·(cos η e^{iξ₁}, sin η e^{iξ₂}), η ∈ (0, π/2), ξ₁, ξ₂ ∈ [0, 2π):
/// Gauss–Legendre with `n_eta` nodes in η (volume factor r³ cos η sin η
/// folded into the weights) times periodic trapezoid rules with `n_xi1`,
/// `n_xi2` nodes on the angles.  Only the three-sphere is supported
/// (ErrorKind::capability otherwise).
[[nodiscard]] QuadratureRule product_hopf_rule(double radius, int n_eta = 32,
                                               int n_xi1 = 32, int n_xi2 = 32);

/// Seeded Monte-Carlo rule on a round sphere: `count` points drawn uniformly
/// by normalizing Gaussian samples (explicit Box–Muller over the raw 64-bit
/// generator stream, so the node set is reproducible bit-for-bit for a given
/// seed), each weighted Vol/count.
[[nodiscard]] QuadratureRule monte_carlo_rule(int sphere_dim, double radius,
                                              int count, std::uint64_t seed);

/// Σ w_i f(x_i) with deterministic pairwise accumulation.
[[nodiscard]] double integrate(
    const QuadratureRule& rule,
    const std::function<double(const EmbeddedPoint&)>& f);

/// Sample standard deviation of the weighted estimator (meaningful for the
/// Monte-Carlo rule): ‖w‖-scaled spread used to budget MC-vs-product
/// comparisons in tests.
[[nodiscard]] double integrate_stderr(
    const QuadratureRule& rule,
    const std::function<double(const EmbeddedPoint&)>& f);

/// Horizontal Dirichlet energy  E_b = ½ ∫ Σ_{i=1}^{2n} ⟨dφX_i, dφX_i⟩ dvol.
/// The rule's nodes must live on the immersion's source model
/// (ErrorKind::domain otherwise).
[[nodiscard]] double pseudo_energy(const Immersion& im,
                                   const QuadratureRule& rule,
                                   const FdConfig& cfg);

/// Mean-curvature energy  E_{b,2} = ½ ∫ ⟨τ_b, τ_b⟩ dvol.
[[nodiscard]] double pseudo_bienergy(const Immersion& im,
                                     const QuadratureRule& rule,
                                     const FdConfig& cfg);

}  // namespace crlab::energy
