#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crlab/biharmonic.hpp"
#include "crlab/immersion.hpp"

/// @file catalog.hpp
/// The two verification families, their closed-form parameter loci, seeded
/// sample points, and the one-parameter scan (grid statistics plus bisected
/// zeros of the signed bitension statistic).

namespace crlab::catalog {

using geom::EmbeddedPoint;
using geom::FdConfig;
using immersion::Immersion;

/// The immersion families the lab can build.
enum class Family {
  small_sphere,  ///< S^{2n+1}(r) ⊂ S^{2n+2}(1) at height √(1−r²)
  takagi_a1,     ///< geodesic-sphere band S¹(cos u)×S^{2n+1}(sin u) → ℂP^{n+1}
};

[[nodiscard]] Family family_from_string(const std::string& name);
[[nodiscard]] std::string to_string(Family family);

/// A family member: CR dimension n plus the family parameter (radius r, or
/// the latitude angle u).
struct FamilySpec {
  Family family = Family::small_sphere;
  int n = 1;
  double param = 0.0;
};

/// Build the immersion for a family member.  Parameters outside the family
/// domain (r ∈ (0, 1], u ∈ (0, π/2)) raise ErrorKind::configuration.
[[nodiscard]] Immersion build_immersion(const FamilySpec& spec);

// ===========================================================================
// Closed-form loci
// ===========================================================================

/// A distinguished parameter value of a family, with the defining relation
/// it satisfies and that relation's residual at the returned value.
struct Locus {
  std::string name;
  double param = 0.0;
  double defining_residual = 0.0;
  std::string relation;
};

/// All closed-form loci of a family at CR dimension n, sorted ascending by
/// parameter.  For the geodesic-sphere family this includes the predicates
/// of both case splits (the numerically realized normal case and the
/// tangent case, which this build exposes through predicates only) plus the
/// Riemannian-variational values.
[[nodiscard]] std::vector<Locus> closed_form_loci(Family family, int n);

// ===========================================================================
// Sampling and scanning
// ===========================================================================

/// `count` seeded sample points on a family member.  The latent draws
/// depend only on (seed, count, n, family); the family parameter enters
/// smoothly, so resampling the same seed across a parameter sweep yields
/// statistics that vary continuously in the parameter.
[[nodiscard]] std::vector<EmbeddedPoint> sample_points(const FamilySpec& spec,
                                                       int count,
                                                       std::uint64_t seed);

/// Aggregated statistics at one grid parameter (means over sample points).
struct ScanRow {
  double param = 0.0;
  double tau_b_norm = 0.0;
  double tau_b2_normalized = 0.0;
  double tau_b2_signed = 0.0;  ///< signed statistic used for root bracketing
  double b_norm_h = 0.0;       ///< ‖B|_{H×H}‖²
  double admissibility = 0.0;
  double parallelism = 0.0;
  std::string verdict;         ///< "pseudo_harmonic" | "pseudo_biharmonic" | "generic"
};

struct ScanResult {
  FamilySpec base;            ///< family and n (param unused)
  double lo = 0.0, hi = 0.0;
  int steps = 0;
  int points = 0;
  std::uint64_t seed = 0;
  std::vector<ScanRow> rows;
  std::vector<double> zeros;  ///< bisected roots of the signed statistic
};

/// Evaluate the verdict statistics on `steps` uniform grid values of the
/// family parameter in [lo, hi], averaging over `points` seeded samples per
/// value, then bisect every sign change of the mean signed bitension
/// statistic down to a parameter width of 1e-4.
[[nodiscard]] ScanResult scan_family(Family family, int n, double lo,
                                     double hi, int steps, int points,
                                     std::uint64_t seed, const FdConfig& cfg);

}  // namespace crlab::catalog
