#include "crlab/immersion.hpp"

#include <cmath>
#include <utility>

namespace crlab::immersion {

namespace {

using geom::fd_directional;
using geom::project_tangent;

// Pivot floor when orthonormalizing the pushed frame for the normal /
// tangential split.  Loose on purpose: deliberately broken test immersions
// still deserve a well-defined split.
constexpr double kPushedPivot = 1e-6;

Vec push_vec(const Immersion& im, const EmbeddedPoint& q, const Vec& v,
             const FdConfig& cfg) {
  if (im.differential) return im.differential(q, v);
  return pushforward_fd(im, q, v, cfg).coords;
}

/// Orthonormalized image of the contact frame {X_1..X_2n, T} under dφ.
std::vector<Vec> pushed_basis(const Immersion& im, const EmbeddedPoint& p,
                              const cr::ContactFrame& frame,
                              const FdConfig& cfg) {
  std::vector<Vec> pushed;
  pushed.reserve(frame.horiz.size() + 1);
  for (const Vec& x : frame.horiz) pushed.push_back(push_vec(im, p, x, cfg));
  pushed.push_back(push_vec(im, p, frame.reeb, cfg));
  return geom::gram_schmidt(pushed, kPushedPivot);
}

struct Split {
  Vec normal;
  Vec tangential;
};

Split split_against(const std::vector<Vec>& basis, const Vec& full) {
  Vec tang = Vec::Zero(full.size());
  for (const Vec& b : basis) tang += b.dot(full) * b;
  return {full - tang, tang};
}

/// Full second-fundamental-form computation retaining both split parts.
Split b_split(const Immersion& im, const EmbeddedPoint& p, const Vec& X,
              const std::function<Vec(const EmbeddedPoint&)>& Y,
              const FdConfig& cfg, const cr::FramePlan& plan,
              const EmbeddedPoint& y, const std::vector<Vec>& basis) {
  auto pushed_field = [&im, &Y, &cfg](const EmbeddedPoint& q) {
    return push_vec(im, q, Y(q), cfg);
  };
  const Vec dt = fd_directional(p, X, pushed_field, cfg.h1, cfg.richardson);
  const Vec nabla_bar = project_tangent(y, dt);

  const Vec ds = fd_directional(p, X, Y, cfg.h1, cfg.richardson);
  const Vec nabla_src = project_tangent(p, ds);

  const Vec full = nabla_bar - push_vec(im, p, nabla_src, cfg);
  return split_against(basis, full);
}

}  // namespace

// ===========================================================================
// Pushforward
// ===========================================================================

TangentVec pushforward(const Immersion& im, const EmbeddedPoint& p,
                       const Vec& v, const FdConfig& cfg) {
  if (im.differential) {
    TangentVec out;
    out.base = im.map(p);
    out.coords = im.differential(p, v);
    return out;
  }
  return pushforward_fd(im, p, v, cfg);
}

TangentVec pushforward_fd(const Immersion& im, const EmbeddedPoint& p,
                          const Vec& v, const FdConfig& cfg) {
  TangentVec out;
  out.base = im.map(p);
  auto mapped = [&im](const EmbeddedPoint& q) { return im.map(q).coords; };
  const Vec d = fd_directional(p, v, mapped, cfg.h1, cfg.richardson);
  out.coords = project_tangent(out.base, d);
  return out;
}

// ===========================================================================
// Second fundamental form and tension sections
// ===========================================================================

NormalSection second_fundamental_form(
    const Immersion& im, const EmbeddedPoint& p, const Vec& X,
    const std::function<Vec(const EmbeddedPoint&)>& Y, const FdConfig& cfg,
    const cr::FramePlan* plan) {
  const cr::FramePlan local =
      plan != nullptr ? *plan : cr::plan_at(*im.source, p);
  const cr::ContactFrame frame = cr::frame_at(*im.source, p, local);
  const EmbeddedPoint y = im.map(p);
  const std::vector<Vec> basis = pushed_basis(im, p, frame, cfg);
  const Split split = b_split(im, p, X, Y, cfg, local, y, basis);
  return {split.normal, split.tangential.norm(), p};
}

NormalSection pseudo_tension(const Immersion& im, const EmbeddedPoint& p,
                             const FdConfig& cfg, const cr::FramePlan* plan) {
  const cr::FramePlan local =
      plan != nullptr ? *plan : cr::plan_at(*im.source, p);
  const cr::ContactFrame frame = cr::frame_at(*im.source, p, local);
  const EmbeddedPoint y = im.map(p);
  const std::vector<Vec> basis = pushed_basis(im, p, frame, cfg);

  Vec value = Vec::Zero(im.target.coord_dim);
  Vec tang = Vec::Zero(im.target.coord_dim);
  const int m = static_cast<int>(frame.horiz.size());
  for (int i = 0; i < m; ++i) {
    auto field = cr::frame_field(im.source, local, i);
    const Split s = b_split(im, p, frame.horiz[i], field.eval, cfg, local, y,
                            basis);
    value += s.normal;
    tang += s.tangential;
  }
  return {value, tang.norm(), p};
}

NormalSection full_tension(const Immersion& im, const EmbeddedPoint& p,
                           const FdConfig& cfg, const cr::FramePlan* plan) {
  const cr::FramePlan local =
      plan != nullptr ? *plan : cr::plan_at(*im.source, p);
  const cr::ContactFrame frame = cr::frame_at(*im.source, p, local);
  const EmbeddedPoint y = im.map(p);
  const std::vector<Vec> basis = pushed_basis(im, p, frame, cfg);

  NormalSection sum = pseudo_tension(im, p, cfg, &local);
  auto t_field = cr::reeb_field(im.source);
  const Split s = b_split(im, p, frame.reeb, t_field.eval, cfg, local, y,
                          basis);
  sum.value += s.normal;
  sum.tangential_residual = std::hypot(sum.tangential_residual,
                                       s.tangential.norm());
  return sum;
}

VectorFieldOracle pseudo_tension_field(Immersion im, cr::FramePlan plan,
                                       FdConfig cfg) {
  VectorFieldOracle oracle;
  oracle.label = "pseudo_tension[" + im.label + "]";
  oracle.eval = [im = std::move(im), plan = std::move(plan),
                 cfg](const EmbeddedPoint& q) {
    return pseudo_tension(im, q, cfg, &plan).value;
  };
  return oracle;
}

SecondFundamentalTable b_table(const Immersion& im, const EmbeddedPoint& p,
                               const FdConfig& cfg,
                               const cr::FramePlan* plan) {
  const cr::FramePlan local =
      plan != nullptr ? *plan : cr::plan_at(*im.source, p);
  const cr::ContactFrame frame = cr::frame_at(*im.source, p, local);
  const EmbeddedPoint y = im.map(p);
  const std::vector<Vec> basis = pushed_basis(im, p, frame, cfg);

  const int m = static_cast<int>(frame.horiz.size());
  SecondFundamentalTable table;
  table.frame = frame;
  table.entries.resize(m + 1);

  std::vector<VectorFieldOracle> fields;
  fields.reserve(m + 1);
  for (int j = 0; j < m; ++j) fields.push_back(cr::frame_field(im.source, local, j));
  fields.push_back(cr::reeb_field(im.source));

  for (int a = 0; a <= m; ++a) {
    const Vec& ea = a < m ? frame.horiz[a] : frame.reeb;
    table.entries[a].reserve(m + 1);
    for (int b = 0; b <= m; ++b) {
      const Split s =
          b_split(im, p, ea, fields[b].eval, cfg, local, y, basis);
      table.entries[a].push_back({s.normal, s.tangential.norm(), p});
      const double nsq = s.normal.squaredNorm();
      table.norm_sq_full += nsq;
      if (a < m && b < m) table.norm_sq_horizontal += nsq;
    }
  }
  return table;
}

double b_norm_horizontal(const Immersion& im, const EmbeddedPoint& p,
                         const FdConfig& cfg) {
  return b_table(im, p, cfg).norm_sq_horizontal;
}

// ===========================================================================
// Shape spectrum
// ===========================================================================

ShapeSpectrum shape_spectrum(const Immersion& im, const EmbeddedPoint& p,
                             const FdConfig& cfg) {
  if (!im.unit_normal) {
    throw Error(ErrorKind::capability,
                "shape_spectrum requires an immersion with a distinguished "
                "unit normal (codimension-one families)");
  }
  const SecondFundamentalTable table = b_table(im, p, cfg);
  const Vec xi = im.unit_normal(p);
  const int m = static_cast<int>(table.frame.horiz.size());

  Eigen::MatrixXd shape(m + 1, m + 1);
  for (int a = 0; a <= m; ++a) {
    for (int b = 0; b <= m; ++b) {
      shape(a, b) = table.entries[a][b].value.dot(xi);
    }
  }
  const Eigen::MatrixXd sym = 0.5 * (shape + shape.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::consistency,
                "shape_spectrum: eigensolver failed to converge");
  }

  ShapeSpectrum out;
  out.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + m + 1);
  // The basis is ordered {X_1..X_2n, T}; row m carries the Reeb coefficient.
  int best = 0;
  for (int k = 1; k <= m; ++k) {
    if (std::abs(solver.eigenvectors()(m, k)) >
        std::abs(solver.eigenvectors()(m, best))) {
      best = k;
    }
  }
  const double align = std::min(1.0, std::abs(solver.eigenvectors()(m, best)));
  out.reeb_eigenvalue = solver.eigenvalues()[best];
  out.reeb_alignment = std::acos(align);

  // Diagnostic: the normal must be orthogonal to the immersed tangent plane.
  const std::vector<Vec> basis = pushed_basis(im, p, table.frame, cfg);
  Vec tang = Vec::Zero(xi.size());
  for (const Vec& b : basis) tang += b.dot(xi) * b;
  out.normal = {xi, tang.norm(), p};
  return out;
}

// ===========================================================================
// Defects and residuals
// ===========================================================================

double admissibility_defect(const Immersion& im, const EmbeddedPoint& p,
                            const FdConfig& cfg) {
  const cr::FramePlan plan = cr::plan_at(*im.source, p);
  const cr::ContactFrame frame = cr::frame_at(*im.source, p, plan);
  const EmbeddedPoint y = im.map(p);
  const std::vector<Vec> basis = pushed_basis(im, p, frame, cfg);
  auto t_field = cr::reeb_field(im.source);

  double worst = 0.0;
  for (const Vec& x : frame.horiz) {
    const Split s = b_split(im, p, x, t_field.eval, cfg, plan, y, basis);
    worst = std::max(worst, s.normal.norm());
  }
  return worst;
}

double mean_curvature_parallelism_defect(const Immersion& im,
                                         const EmbeddedPoint& p,
                                         const FdConfig& cfg) {
  const cr::FramePlan plan = cr::plan_at(*im.source, p);
  const cr::ContactFrame frame = cr::frame_at(*im.source, p, plan);
  const EmbeddedPoint y = im.map(p);
  const std::vector<Vec> basis = pushed_basis(im, p, frame, cfg);
  auto tau = pseudo_tension_field(im, plan, cfg);

  std::vector<Vec> legs = frame.horiz;
  legs.push_back(frame.reeb);
  double worst = 0.0;
  for (const Vec& e : legs) {
    // Outer derivative of the (already differenced) section: fine step h2.
    const Vec d = fd_directional(p, e, tau.eval, cfg.h2, false);
    const Vec in_target = project_tangent(y, d);
    const Split s = split_against(basis, in_target);
    worst = std::max(worst, s.normal.norm());
  }
  return worst;
}

double isometry_residual(const Immersion& im, const EmbeddedPoint& p,
                         const FdConfig& cfg) {
  const cr::ContactFrame frame = cr::frame_at(*im.source, p);
  std::vector<Vec> pushed;
  for (const Vec& x : frame.horiz) pushed.push_back(push_vec(im, p, x, cfg));
  pushed.push_back(push_vec(im, p, frame.reeb, cfg));

  double worst = 0.0;
  for (std::size_t a = 0; a < pushed.size(); ++a) {
    for (std::size_t b = 0; b < pushed.size(); ++b) {
      const double want = a == b ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(pushed[a].dot(pushed[b]) - want));
    }
  }
  return worst;
}

}  // namespace crlab::immersion
