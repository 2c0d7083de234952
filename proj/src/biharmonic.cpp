#include "crlab/biharmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crlab/ambient.hpp"

namespace crlab::biharmonic {

namespace {

using cr::ContactFrame;
using cr::FramePlan;
using geom::fd_directional;
using geom::project_tangent;
using immersion::NormalSection;
using immersion::SecondFundamentalTable;

// Normalizer floor: keeps the normalized bitension statistic finite at
// pseudo-harmonic points, where ‖τ_b‖ itself vanishes.
constexpr double kTensionFloor = 1e-9;

// Directions below this floor are treated as exactly zero when used as
// derivative directions.  The derivative is linear in the direction, so a
// rounding-level vector contributes nothing — but it would still trip the
// stencil-collapse guard inside the differencer.  Geodesic legs produce such
// vectors legitimately: their connection coefficient vanishes analytically
// and surfaces only as accumulated rounding noise.
constexpr double kZeroDirection = 1e-10;

Vec derivative_along(const EmbeddedPoint& p, const Vec& dir,
                     const std::function<Vec(const EmbeddedPoint&)>& f,
                     double h, bool richardson, int out_dim) {
  const double scale = std::max(1.0, p.coords.norm());
  const double collapse =
      64.0 * std::numeric_limits<double>::epsilon() * scale;
  if (dir.norm() < kZeroDirection * scale || h * dir.norm() <= collapse) {
    return Vec::Zero(out_dim);
  }
  return fd_directional(p, dir, f, h, richardson);
}

/// Rough Laplacian −Σ_e { ∇̄_e ∇̄_e V − ∇̄_{∇_e e} V } over the supplied legs
/// with caller-chosen connection coefficients ∇_e e.
Vec rough_laplacian(const Immersion& im, const EmbeddedPoint& p,
                    const std::function<Vec(const EmbeddedPoint&)>& V,
                    const FdConfig& cfg, const std::vector<Vec>& legs,
                    const std::vector<geom::VectorFieldOracle>& leg_fields,
                    const std::vector<Vec>& coeffs) {
  const EmbeddedPoint y = im.map(p);
  const int dim = im.target.coord_dim;
  Vec acc = Vec::Zero(dim);
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const auto& field = leg_fields[i];
    auto inner = [&im, &V, &field, &cfg](const EmbeddedPoint& q) {
      const Vec d = fd_directional(q, field.eval(q), V, cfg.h2, false);
      return project_tangent(im.map(q), d);
    };
    const Vec outer =
        project_tangent(y, fd_directional(p, legs[i], inner, cfg.h1, false));
    const Vec corr = project_tangent(
        y, derivative_along(p, coeffs[i], V, cfg.h1, cfg.richardson, dim));
    acc += outer - corr;
  }
  return -acc;
}

void require_nested(const FdConfig& cfg) {
  if (!(cfg.h1 > cfg.h2)) {
    throw Error(ErrorKind::configuration,
                "nested differencing requires the outer step to exceed the "
                "inner step (h1 > h2)");
  }
}

/// Tensorial contraction helpers over a precomputed table: expand a tangent
/// vector in the orthonormal frame {X_1..X_2n, T} and combine table entries.
Vec b_left(const SecondFundamentalTable& table, const Vec& w, int right,
           int dim) {
  const int m = static_cast<int>(table.frame.horiz.size());
  Vec out = Vec::Zero(dim);
  for (int a = 0; a <= m; ++a) {
    const Vec& ea = a < m ? table.frame.horiz[a] : table.frame.reeb;
    out += ea.dot(w) * table.entries[a][right].value;
  }
  return out;
}

Vec b_right(const SecondFundamentalTable& table, int left, const Vec& w,
            int dim) {
  const int m = static_cast<int>(table.frame.horiz.size());
  Vec out = Vec::Zero(dim);
  for (int a = 0; a <= m; ++a) {
    const Vec& ea = a < m ? table.frame.horiz[a] : table.frame.reeb;
    out += ea.dot(w) * table.entries[left][a].value;
  }
  return out;
}

BitensionResult assemble_result(const Immersion& im, const EmbeddedPoint& p,
                                const NormalSection& tau, const Vec& tau2,
                                const SecondFundamentalTable& table) {
  BitensionResult r;
  r.tau = tau.value;
  r.tau2 = tau2;
  r.tau_norm = tau.value.norm();
  r.tau2_norm = tau2.norm();
  r.b_norm_sq_full = table.norm_sq_full;
  r.b_norm_sq_horizontal = table.norm_sq_horizontal;
  r.normalizer =
      std::max(r.tau_norm, kTensionFloor) * (1.0 + r.b_norm_sq_full);
  r.normalized = r.tau2_norm / r.normalizer;
  if (im.unit_normal) {
    r.signed_stat = im.unit_normal(p).dot(tau2) / r.normalizer;
  }
  return r;
}

}  // namespace

// ===========================================================================
// Contact Laplacian
// ===========================================================================

Vec delta_b_section(const Immersion& im, const EmbeddedPoint& p,
                    const std::function<Vec(const EmbeddedPoint&)>& V,
                    const FdConfig& cfg, const cr::FramePlan* plan) {
  require_nested(cfg);
  const auto& src = *im.source;
  const FramePlan local = plan != nullptr ? *plan : cr::plan_at(src, p);
  const ContactFrame frame = cr::frame_at(src, p, local);
  const int m = static_cast<int>(frame.horiz.size());

  std::vector<Vec> legs;
  std::vector<geom::VectorFieldOracle> fields;
  std::vector<Vec> coeffs;
  legs.reserve(m);
  for (int i = 0; i < m; ++i) {
    legs.push_back(frame.horiz[i]);
    fields.push_back(cr::frame_field(im.source, local, i));
    coeffs.push_back(cr::tanaka_webster_horizontal(
        src, p, frame.horiz[i], fields.back().eval, cfg.h1, cfg.richardson));
  }
  return rough_laplacian(im, p, V, cfg, legs, fields, coeffs);
}

// ===========================================================================
// Bitension fields
// ===========================================================================

BitensionResult pseudo_bitension(const Immersion& im, const EmbeddedPoint& p,
                                 const FdConfig& cfg) {
  require_nested(cfg);
  const FramePlan plan = cr::plan_at(*im.source, p);
  const ContactFrame frame = cr::frame_at(*im.source, p, plan);
  const SecondFundamentalTable table = immersion::b_table(im, p, cfg, &plan);
  const NormalSection tau = immersion::pseudo_tension(im, p, cfg, &plan);
  const EmbeddedPoint y = im.map(p);

  auto tau_field = immersion::pseudo_tension_field(im, plan, cfg);
  const Vec lap = delta_b_section(im, p, tau_field.eval, cfg, &plan);

  Vec curv = Vec::Zero(im.target.coord_dim);
  for (const Vec& x : frame.horiz) {
    const Vec dfx = immersion::pushforward(im, p, x, cfg).coords;
    curv += im.target.curvature(y, tau.value, dfx, dfx);
  }
  return assemble_result(im, p, tau, Vec(lap - curv), table);
}

BitensionResult riemannian_bitension(const Immersion& im,
                                     const EmbeddedPoint& p,
                                     const FdConfig& cfg) {
  require_nested(cfg);
  const auto& src = *im.source;
  const FramePlan plan = cr::plan_at(src, p);
  const ContactFrame frame = cr::frame_at(src, p, plan);
  const SecondFundamentalTable table = immersion::b_table(im, p, cfg, &plan);
  const NormalSection tau = immersion::full_tension(im, p, cfg, &plan);
  const EmbeddedPoint y = im.map(p);
  const int m = static_cast<int>(frame.horiz.size());

  auto tau_field = [im, plan, cfg](const EmbeddedPoint& q) {
    return immersion::full_tension(im, q, cfg, &plan).value;
  };

  std::vector<Vec> legs;
  std::vector<geom::VectorFieldOracle> fields;
  std::vector<Vec> coeffs;
  for (int i = 0; i < m; ++i) {
    legs.push_back(frame.horiz[i]);
    fields.push_back(cr::frame_field(im.source, plan, i));
    coeffs.push_back(cr::levi_civita(p, frame.horiz[i], fields.back().eval,
                                     cfg.h1, cfg.richardson));
  }
  legs.push_back(frame.reeb);
  fields.push_back(cr::reeb_field(im.source));
  coeffs.push_back(cr::levi_civita(p, frame.reeb, fields.back().eval, cfg.h1,
                                   cfg.richardson));

  const Vec lap = rough_laplacian(im, p, tau_field, cfg, legs, fields, coeffs);

  Vec curv = Vec::Zero(im.target.coord_dim);
  for (const Vec& e : legs) {
    const Vec dfe = immersion::pushforward(im, p, e, cfg).coords;
    curv += im.target.curvature(y, tau.value, dfe, dfe);
  }
  return assemble_result(im, p, tau, Vec(lap - curv), table);
}

// ===========================================================================
// Structural identity residuals
// ===========================================================================

IdentityResidual weitzenbock_residual(const Immersion& im,
                                      const EmbeddedPoint& p, int leg,
                                      const FdConfig& cfg) {
  require_nested(cfg);
  const auto& src = *im.source;
  const FramePlan plan = cr::plan_at(src, p);
  const ContactFrame frame = cr::frame_at(src, p, plan);
  const int m = static_cast<int>(frame.horiz.size());
  if (leg < 0 || leg >= m) {
    throw Error(ErrorKind::configuration,
                "weitzenbock_residual: leg index outside the horizontal frame");
  }
  const SecondFundamentalTable table = immersion::b_table(im, p, cfg, &plan);
  const EmbeddedPoint y = im.map(p);
  const int dim = im.target.coord_dim;

  const Vec X = frame.horiz[leg];
  auto Xf = cr::frame_field(im.source, plan, leg);
  auto Tf = cr::reeb_field(im.source);

  // ---- iterated-derivative side ------------------------------------------
  Vec lhs = Vec::Zero(dim);
  for (int k = 0; k < m; ++k) {
    auto Xkf = cr::frame_field(im.source, plan, k);
    auto b_field = [&im, &Xkf, &Xf, &cfg, &plan](const EmbeddedPoint& q) {
      return immersion::second_fundamental_form(im, q, Xkf.eval(q), Xf.eval,
                                                cfg, &plan)
          .value;
    };
    const Vec dterm = project_tangent(
        y, fd_directional(p, frame.horiz[k], b_field, cfg.h1, false));
    const Vec lc_kx =
        cr::levi_civita(p, frame.horiz[k], Xf.eval, cfg.h1, cfg.richardson);
    const Vec w_kk = cr::tanaka_webster_horizontal(src, p, frame.horiz[k],
                                                   Xkf.eval, cfg.h1,
                                                   cfg.richardson);
    lhs += dterm - b_right(table, k, lc_kx, dim) - b_left(table, w_kk, leg,
                                                          dim);
  }

  // ---- curvature side -----------------------------------------------------
  auto tau_field = [im, plan, cfg](const EmbeddedPoint& q) {
    return immersion::full_tension(im, q, cfg, &plan).value;
  };
  const Vec dtau =
      project_tangent(y, fd_directional(p, X, tau_field, cfg.h1, false));

  const Vec dfX = immersion::pushforward(im, p, X, cfg).coords;
  Vec curv = Vec::Zero(dim);
  for (int k = 0; k < m; ++k) {
    const Vec dfXk =
        immersion::pushforward(im, p, frame.horiz[k], cfg).coords;
    curv += im.target.curvature(y, dfX, dfXk, dfXk);
    const Vec rg = ambient::metric_curvature_fd(p, X, frame.horiz[k],
                                                frame.horiz[k], cfg.h1,
                                                cfg.h2);
    curv -= immersion::pushforward(im, p, geom::project_tangent(p, rg), cfg)
                .coords;
  }
  const Vec dfT = immersion::pushforward(im, p, frame.reeb, cfg).coords;
  curv += im.target.curvature(y, dfX, dfT, dfT);
  const Vec rgT = ambient::metric_curvature_fd(p, X, frame.reeb, frame.reeb,
                                               cfg.h1, cfg.h2);
  curv -= immersion::pushforward(im, p, geom::project_tangent(p, rgT), cfg)
              .coords;

  // ---- double Reeb derivative of dφ --------------------------------------
  auto bTX_field = [&im, &src, &Xf, &cfg, &plan](const EmbeddedPoint& q) {
    return immersion::second_fundamental_form(im, q, src.reeb(q), Xf.eval,
                                              cfg, &plan)
        .value;
  };
  const Vec t1 = project_tangent(
      y, fd_directional(p, frame.reeb, bTX_field, cfg.h1, false));
  const Vec lc_tx =
      cr::levi_civita(p, frame.reeb, Xf.eval, cfg.h1, cfg.richardson);
  const Vec w_tt =
      cr::levi_civita(p, frame.reeb, Tf.eval, cfg.h1, cfg.richardson);
  const Vec tt_term =
      t1 - b_right(table, m, lc_tx, dim) - b_left(table, w_tt, leg, dim);

  const Vec rhs = dtau - curv - tt_term;

  IdentityResidual out;
  out.residual = (lhs - rhs).norm();
  out.scale = std::max({1.0, lhs.norm(), rhs.norm()});
  out.relative = out.residual / out.scale;
  return out;
}

IdentityResidual tension_laplacian_identity_residual(const Immersion& im,
                                                     const EmbeddedPoint& p,
                                                     const FdConfig& cfg,
                                                     double gate_tol) {
  require_nested(cfg);
  const double adm = immersion::admissibility_defect(im, p, cfg);
  if (adm > gate_tol) {
    throw Error(ErrorKind::precondition,
                "tension_laplacian_identity_residual: admissibility defect " +
                    std::to_string(adm) + " exceeds the gate " +
                    std::to_string(gate_tol));
  }
  const double par = immersion::mean_curvature_parallelism_defect(im, p, cfg);
  if (par > gate_tol) {
    throw Error(ErrorKind::precondition,
                "tension_laplacian_identity_residual: mean-curvature "
                "parallelism defect " +
                    std::to_string(par) + " exceeds the gate " +
                    std::to_string(gate_tol));
  }

  const FramePlan plan = cr::plan_at(*im.source, p);
  const ContactFrame frame = cr::frame_at(*im.source, p, plan);
  const SecondFundamentalTable table = immersion::b_table(im, p, cfg, &plan);
  const NormalSection tau = immersion::pseudo_tension(im, p, cfg, &plan);
  const EmbeddedPoint y = im.map(p);
  const int m = static_cast<int>(frame.horiz.size());
  const int dim = im.target.coord_dim;

  auto tau_field = immersion::pseudo_tension_field(im, plan, cfg);
  const Vec lap = delta_b_section(im, p, tau_field.eval, cfg, &plan);

  std::vector<Vec> pushed;
  pushed.reserve(m);
  for (const Vec& x : frame.horiz) {
    pushed.push_back(immersion::pushforward(im, p, x, cfg).coords);
  }
  const Vec dfT = immersion::pushforward(im, p, frame.reeb, cfg).coords;

  Vec rhs = Vec::Zero(dim);
  for (int j = 0; j < m; ++j) {
    double cj = 0.0;
    for (int k = 0; k < m; ++k) {
      cj += tau.value.dot(
          im.target.curvature(y, pushed[j], pushed[k], pushed[k]));
    }
    cj += tau.value.dot(im.target.curvature(y, pushed[j], dfT, dfT));
    rhs += cj * pushed[j];
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      rhs -= tau.value.dot(table.entries[i][j].value) *
             table.entries[i][j].value;
    }
  }

  IdentityResidual out;
  out.residual = (-lap - rhs).norm();
  out.scale = std::max(lap.norm(), 1e-12);
  out.relative = out.residual / out.scale;
  return out;
}

// ===========================================================================
// Verdicts
// ===========================================================================

Verdict characterize(const Immersion& im, const EmbeddedPoint& p,
                     const FdConfig& cfg, const VerdictTols& tols) {
  Verdict v;
  v.admissibility = immersion::admissibility_defect(im, p, cfg);
  v.parallelism = immersion::mean_curvature_parallelism_defect(im, p, cfg);
  v.hypotheses_ok = v.admissibility < tols.defect && v.parallelism < tols.defect;

  const BitensionResult bt = pseudo_bitension(im, p, cfg);
  v.tau_b_norm = bt.tau_norm;
  v.bitension_normalized = bt.normalized;
  v.b_norm_horizontal = bt.b_norm_sq_horizontal;
  v.pseudo_harmonic = bt.tau_norm < tols.harmonic;
  v.pseudo_biharmonic = bt.normalized < tols.bitension;

  const int n = im.source->cr_n();
  switch (im.target.kind) {
    case ambient::TargetKind::sphere:
      v.case_tag = "sphere";
      v.condition_value = 2.0 * n;
      break;
    case ambient::TargetKind::complex_projective: {
      if (!im.unit_normal) {
        throw Error(ErrorKind::capability,
                    "characterize: the projective-target case split needs a "
                    "distinguished unit normal");
      }
      const Vec xi = im.unit_normal(p);
      const Vec dfT =
          immersion::pushforward(im, p, im.source->reeb(p), cfg).coords;
      v.tangency = std::abs(geom::mult_i(dfT).dot(xi));
      const double c = im.target.hol_curv;
      if (v.tangency < tols.tangency) {
        v.case_tag = "cp_tangent_case";
        v.condition_value = c * (2.0 * n + 3.0) / 4.0;
      } else if (std::abs(v.tangency - 1.0) < tols.tangency) {
        v.case_tag = "cp_normal_case";
        v.condition_value = n * c / 2.0;
      } else {
        throw Error(ErrorKind::domain,
                    "characterize: J·dφ(T) is neither tangent nor normal to "
                    "the immersion (tangency " +
                        std::to_string(v.tangency) + ")");
      }
      break;
    }
  }
  v.condition_match =
      std::abs(v.b_norm_horizontal - v.condition_value) < tols.condition;
  return v;
}

}  // namespace crlab::biharmonic
