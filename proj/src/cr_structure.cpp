#include "crlab/cr_structure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

namespace crlab::cr {

namespace {

using geom::mult_i;
using geom::project_tangent;

// Pivot floor used when rebuilding a frame from a fixed plan at stencil
// points.  Much looser than the planning threshold: it only rejects frames
// that have genuinely collapsed (plan reused far from its center).
constexpr double kRebuildPivotFloor = 1e-3;

// Horizontality / tangency tolerance for connection preconditions.
constexpr double kHorizontalTol = 1e-6;

Vec basis_vector(int dim, int index) {
  Vec e = Vec::Zero(dim);
  e[index] = 1.0;
  return e;
}

}  // namespace

// ===========================================================================
// Source structures
// ===========================================================================

SphereSource::SphereSource(int n, double radius)
    : n_(n),
      radius_(radius),
      model_(geom::Model::sphere_model(2 * n + 2, radius)) {
  if (n < 1) throw Error(ErrorKind::configuration, "SphereSource: n must be >= 1");
}

Vec SphereSource::reeb(const EmbeddedPoint& p) const {
  return mult_i(p.coords) / radius_;
}

HopfBandSource::HopfBandSource(int n, double u)
    : n_(n),
      u_(u),
      model_(geom::Model::product_band_model(2 * n + 4, 2, std::cos(u),
                                             std::sin(u))) {
  if (n < 1)
    throw Error(ErrorKind::configuration, "HopfBandSource: n must be >= 1");
  if (!(u > 0.0 && u < std::numbers::pi / 2.0))
    throw Error(ErrorKind::configuration,
                "HopfBandSource: angle must lie strictly inside (0, pi/2)");
}

Vec HopfBandSource::band_normal(const EmbeddedPoint& p) const {
  const double c = model_.r0;
  const double s = model_.r1;
  Vec nu(p.coords.size());
  nu.head(2) = (s / c) * p.coords.head(2);
  nu.tail(p.coords.size() - 2) = -(c / s) * p.coords.tail(p.coords.size() - 2);
  return nu;
}

Vec HopfBandSource::reeb(const EmbeddedPoint& p) const {
  return -mult_i(band_normal(p));
}

// ===========================================================================
// Frame construction
// ===========================================================================

FramePlan plan_at(const SourceCr& src, const EmbeddedPoint& p,
                  double pivot_threshold) {
  const int dim = src.model().ambient_dim;
  const int want = 2 * src.cr_n();
  const Vec T = src.reeb(p);

  // Candidate order: descending |p_i|, ties toward the lower index.
  std::vector<int> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&p](int a, int b) {
    return std::abs(p.coords[a]) > std::abs(p.coords[b]);
  });

  FramePlan plan;
  std::vector<Vec> accepted;
  for (int idx : order) {
    if (static_cast<int>(accepted.size()) == want) break;
    Vec w = project_tangent(p, basis_vector(dim, idx));
    w -= T.dot(w) * T;
    for (const Vec& b : accepted) w -= b.dot(w) * b;
    const double pivot = w.norm();
    if (pivot < pivot_threshold) continue;
    accepted.push_back(w / pivot);
    plan.indices.push_back(idx);
  }
  if (static_cast<int>(accepted.size()) != want) {
    throw Error(ErrorKind::degenerate_frame,
                "plan_at: could not assemble a full horizontal frame above "
                "the pivot threshold");
  }
  return plan;
}

ContactFrame frame_at(const SourceCr& src, const EmbeddedPoint& q,
                      const FramePlan& plan) {
  const int dim = src.model().ambient_dim;
  const int want = 2 * src.cr_n();
  if (static_cast<int>(plan.indices.size()) != want) {
    throw Error(ErrorKind::configuration,
                "frame_at: plan does not carry 2n seed indices");
  }
  ContactFrame frame;
  frame.base = q;
  frame.reeb = src.reeb(q);
  frame.horiz.reserve(want);
  for (int idx : plan.indices) {
    Vec w = project_tangent(q, basis_vector(dim, idx));
    w -= frame.reeb.dot(w) * frame.reeb;
    for (const Vec& b : frame.horiz) w -= b.dot(w) * b;
    const double pivot = w.norm();
    if (pivot < kRebuildPivotFloor) {
      throw Error(ErrorKind::degenerate_frame,
                  "frame_at: planned seed collapsed at this point (plan "
                  "reused too far from its center)");
    }
    frame.horiz.push_back(w / pivot);
  }
  frame.j_matrix.resize(want, want);
  for (int j = 0; j < want; ++j) {
    const Vec jxj = mult_i(frame.horiz[j]);
    for (int i = 0; i < want; ++i) frame.j_matrix(i, j) = frame.horiz[i].dot(jxj);
  }
  return frame;
}

ContactFrame frame_at(const SourceCr& src, const EmbeddedPoint& p) {
  return frame_at(src, p, plan_at(src, p));
}

double frame_gram_residual(const ContactFrame& frame) {
  std::vector<const Vec*> basis;
  basis.push_back(&frame.reeb);
  for (const Vec& x : frame.horiz) basis.push_back(&x);
  double worst = 0.0;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const double want = a == b ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(basis[a]->dot(*basis[b]) - want));
    }
  }
  return worst;
}

double frame_j_residual(const ContactFrame& frame) {
  double worst = 0.0;
  const int m = static_cast<int>(frame.horiz.size());
  for (int j = 0; j < m; ++j) {
    Vec rec = Vec::Zero(frame.horiz[j].size());
    for (int i = 0; i < m; ++i) rec += frame.j_matrix(i, j) * frame.horiz[i];
    worst = std::max(worst, (mult_i(frame.horiz[j]) - rec).norm());
  }
  return worst;
}

VectorFieldOracle frame_field(std::shared_ptr<const SourceCr> src,
                              FramePlan plan, int k) {
  if (k < 0 || k >= static_cast<int>(plan.indices.size())) {
    throw Error(ErrorKind::configuration, "frame_field: index out of range");
  }
  VectorFieldOracle oracle;
  oracle.label = "frame_X" + std::to_string(k + 1);
  oracle.eval = [src = std::move(src), plan = std::move(plan),
                 k](const EmbeddedPoint& q) {
    return frame_at(*src, q, plan).horiz[static_cast<std::size_t>(k)];
  };
  return oracle;
}

VectorFieldOracle reeb_field(std::shared_ptr<const SourceCr> src) {
  VectorFieldOracle oracle;
  oracle.label = "reeb";
  oracle.eval = [src = std::move(src)](const EmbeddedPoint& q) {
    return src->reeb(q);
  };
  return oracle;
}

// ===========================================================================
// Contact form, Levi scale, torsion guard
// ===========================================================================

double theta(const SourceCr& src, const EmbeddedPoint& p, const Vec& v) {
  return src.reeb(p).dot(v);
}

Vec horizontal_project(const SourceCr& src, const EmbeddedPoint& p,
                       const Vec& v) {
  Vec w = project_tangent(p, v);
  const Vec T = src.reeb(p);
  return w - T.dot(w) * T;
}

double d_theta(const SourceCr& src, const EmbeddedPoint& p, const Vec& u,
               const Vec& v, const FdConfig& cfg) {
  // Constant-seed tangent extensions; dθ is tensorial, so any smooth
  // extension restricting to u, v at p gives the same value.
  auto ext = [](const Vec& seed) {
    return [seed](const EmbeddedPoint& q) { return project_tangent(q, seed); };
  };
  auto X = ext(u);
  auto Y = ext(v);
  auto theta_of = [&src](const std::function<Vec(const EmbeddedPoint&)>& F) {
    return [&src, F](const EmbeddedPoint& q) { return src.reeb(q).dot(F(q)); };
  };
  const double x_theta_y =
      geom::fd_scalar_directional(p, u, theta_of(Y), cfg.h1, cfg.richardson);
  const double y_theta_x =
      geom::fd_scalar_directional(p, v, theta_of(X), cfg.h1, cfg.richardson);
  const Vec lc_xy = levi_civita(p, u, Y, cfg);
  const Vec lc_yx = levi_civita(p, v, X, cfg);
  return x_theta_y - y_theta_x - theta(src, p, lc_xy) + theta(src, p, lc_yx);
}

double kappa_at(const SourceCr& src, const EmbeddedPoint& p,
                const FdConfig& cfg) {
  const ContactFrame frame = frame_at(src, p);
  const Vec& X = frame.horiz.front();
  return d_theta(src, p, X, mult_i(X), cfg) / X.dot(X);
}

PseudohermitianData pseudohermitian_data(const SourceCr& src,
                                         const EmbeddedPoint& p,
                                         const FdConfig& cfg) {
  auto src_ptr = std::shared_ptr<const SourceCr>(&src, [](const SourceCr*) {});
  const FramePlan plan = plan_at(src, p);
  const ContactFrame frame = frame_at(src, p, plan);
  const int m = static_cast<int>(frame.horiz.size());

  PseudohermitianData data;
  data.omega.resize(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      data.omega(i, j) =
          i == j ? 0.0 : d_theta(src, p, frame.horiz[i], frame.horiz[j], cfg);
    }
  }
  data.kappa = kappa_at(src, p, cfg);

  // Torsion guard: the symmetrized Reeb component of horizontal covariant
  // derivatives measures the pseudohermitian torsion on the frame.  The
  // models here are torsion-free; verify, then pin the tensor to zero.
  Eigen::MatrixXd theta_lc(m, m);
  for (int j = 0; j < m; ++j) {
    auto Xj = frame_field(src_ptr, plan, j);
    for (int i = 0; i < m; ++i) {
      const Vec lc = levi_civita(p, frame.horiz[i], Xj.eval, cfg);
      theta_lc(i, j) = theta(src, p, lc);
    }
  }
  double guard = 0.0;
  double trace = 0.0;
  for (int i = 0; i < m; ++i) {
    trace += theta_lc(i, i);
    for (int j = 0; j < m; ++j) {
      guard = std::max(guard, 0.5 * std::abs(theta_lc(i, j) + theta_lc(j, i)));
    }
  }
  data.torsion_guard = guard;
  data.torsion_trace_guard = std::abs(trace);
  data.torsion = Eigen::MatrixXd::Zero(m, m);
  return data;
}

// ===========================================================================
// Connections
// ===========================================================================

Vec levi_civita(const EmbeddedPoint& p, const Vec& X,
                const std::function<Vec(const EmbeddedPoint&)>& Y, double h,
                bool richardson) {
  return project_tangent(p, geom::fd_directional(p, X, Y, h, richardson));
}

Vec levi_civita(const EmbeddedPoint& p, const Vec& X,
                const std::function<Vec(const EmbeddedPoint&)>& Y,
                const FdConfig& cfg) {
  return levi_civita(p, X, Y, cfg.h1, cfg.richardson);
}

Vec tanaka_webster_horizontal(const SourceCr& src, const EmbeddedPoint& p,
                              const Vec& X,
                              const std::function<Vec(const EmbeddedPoint&)>& Y,
                              double h, bool richardson) {
  const Vec T = src.reeb(p);
  const double xscale = std::max(1.0, X.norm());
  if (std::abs(T.dot(X)) > kHorizontalTol * xscale ||
      geom::project_normal(p, X).norm() > kHorizontalTol * xscale) {
    throw Error(ErrorKind::precondition,
                "tanaka_webster_horizontal: direction is not horizontal at "
                "the base point");
  }
  const Vec y0 = Y(p);
  const double yscale = std::max(1.0, y0.norm());
  if (std::abs(T.dot(y0)) > kHorizontalTol * yscale ||
      geom::project_normal(p, y0).norm() > kHorizontalTol * yscale) {
    throw Error(ErrorKind::precondition,
                "tanaka_webster_horizontal: field value is not horizontal at "
                "the base point");
  }
  const Vec lc = levi_civita(p, X, Y, h, richardson);
  return lc - T.dot(lc) * T;
}

Vec tanaka_webster_horizontal(const SourceCr& src, const EmbeddedPoint& p,
                              const Vec& X,
                              const std::function<Vec(const EmbeddedPoint&)>& Y,
                              const FdConfig& cfg) {
  return tanaka_webster_horizontal(src, p, X, Y, cfg.h1, cfg.richardson);
}

}  // namespace crlab::cr
