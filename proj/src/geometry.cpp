#include "crlab/geometry.hpp"

#include <cmath>
#include <limits>

namespace crlab::geom {

namespace {

// Guard for radial rescaling: refuse to retract points that sit this close
// to a center relative to the target radius.
constexpr double kRetractFloor = 1e-8;

void require(bool ok, ErrorKind kind, const std::string& msg) {
  if (!ok) throw Error(kind, msg);
}

}  // namespace

// ===========================================================================
// Models
// ===========================================================================

Model Model::sphere_model(int ambient_dim, double radius) {
  require(ambient_dim >= 2, ErrorKind::configuration,
          "sphere model needs ambient dimension >= 2");
  require(radius > 0.0, ErrorKind::configuration,
          "sphere model needs positive radius");
  Model m;
  m.kind = ModelKind::sphere;
  m.ambient_dim = ambient_dim;
  m.radius = radius;
  return m;
}

Model Model::projective_rep_model(int ambient_dim) {
  require(ambient_dim >= 4 && ambient_dim % 2 == 0, ErrorKind::configuration,
          "projective representative model needs even ambient dimension >= 4");
  Model m;
  m.kind = ModelKind::projective_rep;
  m.ambient_dim = ambient_dim;
  m.radius = 1.0;
  return m;
}

Model Model::product_band_model(int ambient_dim, int split, double r0,
                                double r1) {
  require(ambient_dim >= 4 && ambient_dim % 2 == 0, ErrorKind::configuration,
          "product band model needs even ambient dimension >= 4");
  require(split > 0 && split < ambient_dim && split % 2 == 0,
          ErrorKind::configuration,
          "product band split must be an even index inside the ambient span");
  require(r0 > 0.0 && r1 > 0.0, ErrorKind::configuration,
          "product band model needs positive block radii");
  Model m;
  m.kind = ModelKind::product_band;
  m.ambient_dim = ambient_dim;
  m.split = split;
  m.r0 = r0;
  m.r1 = r1;
  return m;
}

bool Model::same_as(const Model& other) const noexcept {
  return kind == other.kind && ambient_dim == other.ambient_dim &&
         radius == other.radius && split == other.split && r0 == other.r0 &&
         r1 == other.r1;
}

// ===========================================================================
// Model operations
// ===========================================================================

Vec mult_i(const Vec& v) {
  require(v.size() % 2 == 0, ErrorKind::domain,
          "mult_i needs an even-dimensional (interleaved complex) vector");
  Vec out(v.size());
  for (Eigen::Index j = 0; j + 1 < v.size(); j += 2) {
    out[j] = -v[j + 1];
    out[j + 1] = v[j];
  }
  return out;
}

EmbeddedPoint retract(const Model& model, const Vec& ambient) {
  require(ambient.size() == model.ambient_dim, ErrorKind::domain,
          "retract: ambient vector dimension does not match the model");
  EmbeddedPoint p;
  p.model = model;
  switch (model.kind) {
    case ModelKind::sphere:
    case ModelKind::projective_rep: {
      const double target =
          model.kind == ModelKind::sphere ? model.radius : 1.0;
      const double nrm = ambient.norm();
      require(nrm > kRetractFloor * target, ErrorKind::domain,
              "retract: point too close to the center for radial rescaling");
      p.coords = ambient * (target / nrm);
      break;
    }
    case ModelKind::product_band: {
      const int s = model.split;
      const double n0 = ambient.head(s).norm();
      const double n1 = ambient.tail(model.ambient_dim - s).norm();
      require(n0 > kRetractFloor * model.r0 && n1 > kRetractFloor * model.r1,
              ErrorKind::domain,
              "retract: block too close to its center for radial rescaling");
      p.coords = ambient;
      p.coords.head(s) *= model.r0 / n0;
      p.coords.tail(model.ambient_dim - s) *= model.r1 / n1;
      break;
    }
  }
  return p;
}

Vec project_tangent(const EmbeddedPoint& p, const Vec& v) {
  require(v.size() == p.coords.size(), ErrorKind::domain,
          "project_tangent: dimension mismatch");
  switch (p.model.kind) {
    case ModelKind::sphere: {
      const Vec n = p.coords / p.model.radius;
      return v - n.dot(v) * n;
    }
    case ModelKind::projective_rep: {
      // Horizontal plane of the circle action: remove the radial direction
      // and the fiber direction i·p.
      const Vec ip = mult_i(p.coords);
      return v - p.coords.dot(v) * p.coords - ip.dot(v) * ip;
    }
    case ModelKind::product_band: {
      // Tangent to both sphere factors, then ⊥ i·p for the circle quotient.
      const int s = p.model.split;
      Vec u0 = Vec::Zero(p.coords.size());
      u0.head(s) = p.coords.head(s) / p.model.r0;
      Vec u1 = Vec::Zero(p.coords.size());
      u1.tail(p.coords.size() - s) =
          p.coords.tail(p.coords.size() - s) / p.model.r1;
      const Vec ip = mult_i(p.coords);  // unit: |p| = 1 on the bands we use
      const Vec ip_unit = ip / ip.norm();
      Vec out = v - u0.dot(v) * u0 - u1.dot(v) * u1;
      out -= ip_unit.dot(out) * ip_unit;
      return out;
    }
  }
  throw Error(ErrorKind::domain, "project_tangent: unknown model kind");
}

Vec project_normal(const EmbeddedPoint& p, const Vec& v) {
  return v - project_tangent(p, v);
}

// ===========================================================================
// Finite differences
// ===========================================================================

namespace {

Vec central_difference(const EmbeddedPoint& p, const Vec& dir,
                       const std::function<Vec(const EmbeddedPoint&)>& f,
                       double h) {
  const EmbeddedPoint plus = retract(p.model, p.coords + h * dir);
  const EmbeddedPoint minus = retract(p.model, p.coords - h * dir);
  return (f(plus) - f(minus)) / (2.0 * h);
}

}  // namespace

Vec fd_directional(const EmbeddedPoint& p, const Vec& dir,
                   const std::function<Vec(const EmbeddedPoint&)>& f, double h,
                   bool richardson) {
  require(h > 0.0, ErrorKind::configuration,
          "fd_directional: step must be positive");
  const double scale = std::max(1.0, p.coords.norm());
  require(h * dir.norm() > 64.0 * std::numeric_limits<double>::epsilon() * scale,
          ErrorKind::configuration,
          "fd_directional: step too small, stencil collapses in double "
          "precision");
  if (!richardson) return central_difference(p, dir, f, h);
  const Vec d_h = central_difference(p, dir, f, h);
  const Vec d_h2 = central_difference(p, dir, f, h / 2.0);
  return (4.0 * d_h2 - d_h) / 3.0;
}

Vec fd_directional(const EmbeddedPoint& p, const Vec& dir,
                   const std::function<Vec(const EmbeddedPoint&)>& f,
                   const FdConfig& cfg) {
  return fd_directional(p, dir, f, cfg.h1, cfg.richardson);
}

double fd_scalar_directional(const EmbeddedPoint& p, const Vec& dir,
                             const std::function<double(const EmbeddedPoint&)>& f,
                             double h, bool richardson) {
  auto wrapped = [&f](const EmbeddedPoint& q) {
    Vec out(1);
    out[0] = f(q);
    return out;
  };
  return fd_directional(p, dir, wrapped, h, richardson)[0];
}

double fd_convergence_order(const EmbeddedPoint& p, const Vec& dir,
                            const std::function<Vec(const EmbeddedPoint&)>& f,
                            double h) {
  const Vec d1 = fd_directional(p, dir, f, h);
  const Vec d2 = fd_directional(p, dir, f, h / 2.0);
  const Vec d4 = fd_directional(p, dir, f, h / 4.0);
  const double e1 = (d1 - d2).norm();
  const double e2 = (d2 - d4).norm();
  require(e2 > 0.0, ErrorKind::domain,
          "fd_convergence_order: differences vanished; field is resolved "
          "exactly at this stencil (order undefined)");
  return std::log2(e1 / e2);
}

// ===========================================================================
// Linear-algebra helpers
// ===========================================================================

std::vector<Vec> gram_schmidt(
    const std::vector<Vec>& vectors,
    const std::function<double(const Vec&, const Vec&)>& inner,
    double pivot_threshold) {
  std::vector<Vec> basis;
  basis.reserve(vectors.size());
  for (const Vec& v : vectors) {
    Vec w = v;
    // Modified Gram–Schmidt: orthogonalize against each accepted vector in
    // turn, using the updated remainder.
    for (const Vec& b : basis) w -= inner(b, w) * b;
    const double pivot = std::sqrt(std::max(0.0, inner(w, w)));
    if (pivot < pivot_threshold) {
      throw Error(ErrorKind::degenerate_frame,
                  "gram_schmidt: rank deficiency (pivot " +
                      std::to_string(pivot) + " below threshold)");
    }
    basis.push_back(w / pivot);
  }
  return basis;
}

std::vector<Vec> gram_schmidt(const std::vector<Vec>& vectors,
                              double pivot_threshold) {
  return gram_schmidt(
      vectors, [](const Vec& a, const Vec& b) { return a.dot(b); },
      pivot_threshold);
}

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n <= 4) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace crlab::geom
