#include "crlab/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "crlab/rng.hpp"

namespace crlab::catalog {

namespace {

using cr::HopfBandSource;
using cr::SphereSource;
using geom::Vec;

constexpr double kZeroWidth = 1e-4;  // bisection stop width for scan roots

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Latent draws: the raw random material behind sample points, drawn once per
// (family, n, count, seed) so that applying different parameter values to
// the same latents yields smoothly varying samples.
// ---------------------------------------------------------------------------

std::vector<Vec> draw_latents(Family family, int n, int count,
                              std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<Vec> latents;
  latents.reserve(count);
  const int gdim = 2 * n + 2;
  for (int k = 0; k < count; ++k) {
    if (family == Family::small_sphere) {
      Vec g(gdim);
      for (int j = 0; j + 1 < gdim; j += 2) {
        const auto [a, b] = rng::gaussian_pair(gen);
        g[j] = a;
        g[j + 1] = b;
      }
      latents.push_back(g);
    } else {
      Vec g(1 + gdim);
      g[0] = 2.0 * std::numbers::pi * rng::uniform01(gen);
      for (int j = 0; j + 1 < gdim; j += 2) {
        const auto [a, b] = rng::gaussian_pair(gen);
        g[1 + j] = a;
        g[2 + j] = b;
      }
      latents.push_back(g);
    }
  }
  return latents;
}

geom::EmbeddedPoint materialize(const FamilySpec& spec, const Vec& latent) {
  if (spec.family == Family::small_sphere) {
    const geom::Model model =
        geom::Model::sphere_model(2 * spec.n + 2, spec.param);
    return geom::retract(model, latent);
  }
  const double c = std::cos(spec.param);
  const double s = std::sin(spec.param);
  const int gdim = 2 * spec.n + 2;
  Vec x(2 + gdim);
  x[0] = c * std::cos(latent[0]);
  x[1] = c * std::sin(latent[0]);
  x.tail(gdim) = s * latent.tail(gdim).normalized();
  const geom::Model model =
      geom::Model::product_band_model(2 + gdim, 2, c, s);
  return geom::retract(model, x);
}

void validate_param(Family family, double param) {
  switch (family) {
    case Family::small_sphere:
      if (!(param > 0.0 && param <= 1.0)) {
        throw Error(ErrorKind::configuration,
                    "small-sphere radius must lie in (0, 1]");
      }
      break;
    case Family::takagi_a1:
      if (!(param > 0.0 && param < std::numbers::pi / 2.0)) {
        throw Error(ErrorKind::configuration,
                    "takagi-a1 latitude angle must lie strictly inside "
                    "(0, pi/2)");
      }
      break;
  }
}

}  // namespace

Family family_from_string(const std::string& name) {
  if (name == "small-sphere" || name == "small_sphere") {
    return Family::small_sphere;
  }
  if (name == "takagi-a1" || name == "takagi_a1") return Family::takagi_a1;
  throw Error(ErrorKind::configuration,
              "unknown family '" + name +
                  "' (expected small-sphere or takagi-a1)");
}

std::string to_string(Family family) {
  return family == Family::small_sphere ? "small-sphere" : "takagi-a1";
}

Immersion build_immersion(const FamilySpec& spec) {
  validate_param(spec.family, spec.param);
  Immersion im;
  if (spec.family == Family::small_sphere) {
    const double r = spec.param;
    const double a = std::sqrt(std::max(0.0, 1.0 - r * r));
    const int dim = 2 * spec.n + 2;
    auto src = std::make_shared<SphereSource>(spec.n, r);
    const geom::Model target_model = geom::Model::sphere_model(dim + 1, 1.0);

    im.label = "small-sphere n=" + std::to_string(spec.n) +
               " r=" + format_param(r);
    im.source = src;
    im.target = ambient::AmbientModel::sphere_target(dim + 1, 1.0);
    im.map = [target_model, a, dim](const geom::EmbeddedPoint& q) {
      Vec y(dim + 1);
      y.head(dim) = q.coords;
      y[dim] = a;
      return geom::EmbeddedPoint{y, target_model};
    };
    im.differential = [dim](const geom::EmbeddedPoint&, const Vec& v) {
      Vec w(dim + 1);
      w.head(dim) = v;
      w[dim] = 0.0;
      return w;
    };
    im.unit_normal = [a, r, dim](const geom::EmbeddedPoint& p) {
      Vec xi(dim + 1);
      xi.head(dim) = -(a / r) * p.coords;
      xi[dim] = r;
      return xi;
    };
    return im;
  }

  const int dim = 2 * spec.n + 4;
  auto src = std::make_shared<HopfBandSource>(spec.n, spec.param);
  const geom::Model target_model = geom::Model::projective_rep_model(dim);

  im.label = "takagi-a1 n=" + std::to_string(spec.n) +
             " u=" + format_param(spec.param);
  im.source = src;
  im.target = ambient::AmbientModel::projective_target(dim, 4.0);
  im.map = [target_model](const geom::EmbeddedPoint& q) {
    return geom::EmbeddedPoint{q.coords, target_model};
  };
  im.differential = [](const geom::EmbeddedPoint&, const Vec& v) { return v; };
  im.unit_normal = [src](const geom::EmbeddedPoint& p) {
    return src->band_normal(p);
  };
  return im;
}

// ===========================================================================
// Closed-form loci
// ===========================================================================

std::vector<Locus> closed_form_loci(Family family, int n) {
  if (n < 1) {
    throw Error(ErrorKind::configuration, "closed_form_loci: n must be >= 1");
  }
  std::vector<Locus> loci;
  auto push = [&loci](std::string name, double param, double residual,
                      std::string relation) {
    loci.push_back({std::move(name), param, std::abs(residual),
                    std::move(relation)});
  };

  if (family == Family::small_sphere) {
    const double rb = std::sqrt(0.5);
    push("pseudo_biharmonic", rb, 2.0 * rb * rb - 1.0, "2*r^2 = 1");
    push("pseudo_harmonic", 1.0, std::sqrt(std::max(0.0, 1.0 - 1.0)) / 1.0,
         "sqrt(1 - r^2)/r = 0");
  } else {
    const double dn = static_cast<double>(n);
    auto u_of_x = [](double x) { return std::atan(std::sqrt(x)); };
    auto tan2 = [](double u) { return std::pow(std::tan(u), 2); };

    // Tangent-case predicates (exposed through closed forms only).
    {
      const double u = u_of_x(2.0 * dn);
      push("case1_pseudo_harmonic", u, tan2(u) - 2.0 * dn, "tan(u)^2 = 2n");
    }
    {
      const double b = 2.0 * dn + 5.0;
      const double disc = std::sqrt(b * b - 8.0 * dn);
      for (const auto& [suffix, x] :
           {std::pair<const char*, double>{"minus", (b - disc) / 2.0},
            std::pair<const char*, double>{"plus", (b + disc) / 2.0}}) {
        const double u = u_of_x(x);
        const double t = tan2(u);
        push(std::string("case1_pseudo_biharmonic_") + suffix, u,
             t * t - b * t + 2.0 * dn, "tan(u)^4 - (2n+5)*tan(u)^2 + 2n = 0");
      }
    }
    // Normal case: the value the built immersion realizes.
    {
      const double u = std::numbers::pi / 4.0;
      push("case2_pseudo_biharmonic", u, tan2(u) - 1.0, "tan(u)^2 = 1");
    }
    // Riemannian-variational values of the same hypersurfaces.
    {
      const double u = u_of_x(2.0 * dn + 1.0);
      push("riemannian_minimal", u, tan2(u) - (2.0 * dn + 1.0),
           "tan(u)^2 = 2n+1");
    }
    {
      const double b = 2.0 * (dn + 3.0);
      const double disc = std::sqrt(b * b - 4.0 * (2.0 * dn + 1.0));
      for (const auto& [suffix, x] :
           {std::pair<const char*, double>{"minus", (b - disc) / 2.0},
            std::pair<const char*, double>{"plus", (b + disc) / 2.0}}) {
        const double u = u_of_x(x);
        const double t = tan2(u);
        push(std::string("riemannian_biharmonic_") + suffix, u,
             t * t - b * t + (2.0 * dn + 1.0),
             "tan(u)^4 - 2(n+3)*tan(u)^2 + (2n+1) = 0");
      }
    }
  }

  std::stable_sort(loci.begin(), loci.end(),
                   [](const Locus& a, const Locus& b) {
                     return a.param < b.param;
                   });
  return loci;
}

// ===========================================================================
// Sampling and scanning
// ===========================================================================

std::vector<geom::EmbeddedPoint> sample_points(const FamilySpec& spec,
                                               int count, std::uint64_t seed) {
  validate_param(spec.family, spec.param);
  if (count < 1) {
    throw Error(ErrorKind::configuration,
                "sample_points: need at least one point");
  }
  const std::vector<Vec> latents =
      draw_latents(spec.family, spec.n, count, seed);
  std::vector<geom::EmbeddedPoint> points;
  points.reserve(count);
  for (const Vec& latent : latents) points.push_back(materialize(spec, latent));
  return points;
}

ScanResult scan_family(Family family, int n, double lo, double hi, int steps,
                       int points, std::uint64_t seed, const FdConfig& cfg) {
  if (!(lo < hi) || steps < 2 || points < 1) {
    throw Error(ErrorKind::configuration,
                "scan_family: need lo < hi, steps >= 2 and points >= 1");
  }
  validate_param(family, lo);
  validate_param(family, hi);

  const std::vector<Vec> latents = draw_latents(family, n, points, seed);
  const biharmonic::VerdictTols tols;

  struct RowStats {
    double tau = 0.0, norm = 0.0, sgn = 0.0, bh = 0.0, adm = 0.0, par = 0.0;
  };
  auto evaluate = [&](double param) {
    const FamilySpec spec{family, n, param};
    const Immersion im = build_immersion(spec);
    RowStats acc;
    for (const Vec& latent : latents) {
      const geom::EmbeddedPoint p = materialize(spec, latent);
      const biharmonic::BitensionResult bt =
          biharmonic::pseudo_bitension(im, p, cfg);
      acc.tau += bt.tau_norm;
      acc.norm += bt.normalized;
      acc.sgn += bt.signed_stat;
      acc.bh += bt.b_norm_sq_horizontal;
      acc.adm += immersion::admissibility_defect(im, p, cfg);
      acc.par += immersion::mean_curvature_parallelism_defect(im, p, cfg);
    }
    const double inv = 1.0 / static_cast<double>(points);
    acc.tau *= inv;
    acc.norm *= inv;
    acc.sgn *= inv;
    acc.bh *= inv;
    acc.adm *= inv;
    acc.par *= inv;
    return acc;
  };

  ScanResult result;
  result.base = {family, n, lo};
  result.lo = lo;
  result.hi = hi;
  result.steps = steps;
  result.points = points;
  result.seed = seed;
  result.rows.reserve(steps);

  for (int k = 0; k < steps; ++k) {
    const double param =
        lo + (hi - lo) * static_cast<double>(k) / (steps - 1);
    const RowStats s = evaluate(param);
    ScanRow row;
    row.param = param;
    row.tau_b_norm = s.tau;
    row.tau_b2_normalized = s.norm;
    row.tau_b2_signed = s.sgn;
    row.b_norm_h = s.bh;
    row.admissibility = s.adm;
    row.parallelism = s.par;
    if (s.tau < tols.harmonic) {
      row.verdict = "pseudo_harmonic";
    } else if (s.norm < tols.bitension) {
      row.verdict = "pseudo_biharmonic";
    } else {
      row.verdict = "generic";
    }
    result.rows.push_back(std::move(row));
  }

  // Bracket and bisect roots of the mean signed statistic.
  for (int k = 0; k + 1 < steps; ++k) {
    const double s0 = result.rows[k].tau_b2_signed;
    const double s1 = result.rows[k + 1].tau_b2_signed;
    if (s0 == 0.0) {
      result.zeros.push_back(result.rows[k].param);
      continue;
    }
    if (s0 * s1 >= 0.0) continue;
    double a = result.rows[k].param;
    double b = result.rows[k + 1].param;
    double sa = s0;
    while (b - a > kZeroWidth) {
      const double mid = 0.5 * (a + b);
      const double sm = evaluate(mid).sgn;
      if (sm == 0.0) {
        a = b = mid;
        break;
      }
      if (sa * sm < 0.0) {
        b = mid;
      } else {
        a = mid;
        sa = sm;
      }
    }
    result.zeros.push_back(0.5 * (a + b));
  }
  if (!result.rows.empty() && result.rows.back().tau_b2_signed == 0.0) {
    result.zeros.push_back(result.rows.back().param);
  }
  return result;
}

}  // namespace crlab::catalog
