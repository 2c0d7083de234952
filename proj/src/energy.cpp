#include "crlab/energy.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "crlab/cr_structure.hpp"
#include "crlab/rng.hpp"

namespace crlab::energy {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_rule_matches(const Immersion& im, const QuadratureRule& rule) {
  if (rule.nodes.empty()) {
    throw Error(ErrorKind::configuration, "quadrature rule has no nodes");
  }
  if (!rule.nodes.front().model.same_as(im.source->model())) {
    throw Error(ErrorKind::domain,
                "quadrature rule nodes do not live on the immersion's source "
                "model");
  }
}

}  // namespace

QuadratureRule product_hopf_rule(double radius, int n_eta, int n_xi1,
                                 int n_xi2) {
  if (radius <= 0.0 || n_eta < 2 || n_xi1 < 2 || n_xi2 < 2) {
    throw Error(ErrorKind::configuration,
                "product_hopf_rule: need positive radius and at least two "
                "nodes per factor");
  }
  if (n_eta != 32) {
    // The Gauss table below is fixed-order; other η-counts are not offered.
    throw Error(ErrorKind::capability,
                "product_hopf_rule: only the 32-node Gauss–Legendre η-factor "
                "is built in");
  }
  const geom::Model model = geom::Model::sphere_model(4, radius);

  // Expand the symmetric 32-point Gauss–Legendre table to the full set on
  // [−1, 1], then map to η ∈ (0, π/2).
  using gauss = boost::math::quadrature::gauss<double, 32>;
  std::vector<double> eta_nodes;
  std::vector<double> eta_weights;
  for (std::size_t i = gauss::abscissa().size(); i-- > 0;) {
    eta_nodes.push_back(-gauss::abscissa()[i]);
    eta_weights.push_back(gauss::weights()[i]);
  }
  for (std::size_t i = 0; i < gauss::abscissa().size(); ++i) {
    eta_nodes.push_back(gauss::abscissa()[i]);
    eta_weights.push_back(gauss::weights()[i]);
  }

  QuadratureRule rule;
  rule.kind = "product_hopf";
  rule.nodes.reserve(static_cast<std::size_t>(n_eta) * n_xi1 * n_xi2);
  rule.weights.reserve(rule.nodes.capacity());
  const double quarter_pi = std::numbers::pi / 4.0;
  const double r3 = radius * radius * radius;
  for (int a = 0; a < n_eta; ++a) {
    const double eta = quarter_pi * (eta_nodes[a] + 1.0);
    const double w_eta = quarter_pi * eta_weights[a];
    const double ce = std::cos(eta);
    const double se = std::sin(eta);
    for (int b = 0; b < n_xi1; ++b) {
      const double xi1 = kTwoPi * b / n_xi1;
      for (int c = 0; c < n_xi2; ++c) {
        const double xi2 = kTwoPi * c / n_xi2;
        Vec x(4);
        x[0] = radius * ce * std::cos(xi1);
        x[1] = radius * ce * std::sin(xi1);
        x[2] = radius * se * std::cos(xi2);
        x[3] = radius * se * std::sin(xi2);
        rule.nodes.push_back({x, model});
        const double w =
            w_eta * (kTwoPi / n_xi1) * (kTwoPi / n_xi2) * r3 * ce * se;
        rule.weights.push_back(w);
        rule.total_weight += w;
      }
    }
  }
  return rule;
}

QuadratureRule monte_carlo_rule(int sphere_dim, double radius, int count,
                                std::uint64_t seed) {
  if (sphere_dim < 2 || radius <= 0.0 || count < 1) {
    throw Error(ErrorKind::configuration,
                "monte_carlo_rule: need sphere_dim >= 2, positive radius and "
                "at least one sample");
  }
  if (sphere_dim != 4) {
    throw Error(ErrorKind::capability,
                "monte_carlo_rule: volume normalization is built in for the "
                "three-sphere only");
  }
  const geom::Model model = geom::Model::sphere_model(sphere_dim, radius);
  const double volume =
      2.0 * std::numbers::pi * std::numbers::pi * radius * radius * radius;

  QuadratureRule rule;
  rule.kind = "monte_carlo";
  rule.nodes.reserve(count);
  rule.weights.assign(count, volume / count);
  rule.total_weight = volume;

  std::mt19937_64 gen(seed);
  for (int k = 0; k < count; ++k) {
    Vec g(sphere_dim);
    for (int j = 0; j + 1 < sphere_dim; j += 2) {
      const auto [a, b] = rng::gaussian_pair(gen);
      g[j] = a;
      g[j + 1] = b;
    }
    rule.nodes.push_back(geom::retract(model, g));
  }
  return rule;
}

double integrate(const QuadratureRule& rule,
                 const std::function<double(const EmbeddedPoint&)>& f) {
  std::vector<double> terms;
  terms.reserve(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    terms.push_back(rule.weights[i] * f(rule.nodes[i]));
  }
  return geom::pairwise_sum(terms);
}

double integrate_stderr(const QuadratureRule& rule,
                        const std::function<double(const EmbeddedPoint&)>& f) {
  const std::size_t n = rule.nodes.size();
  if (n < 2) return 0.0;
  std::vector<double> terms;
  terms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    terms.push_back(rule.weights[i] * f(rule.nodes[i]));
  }
  const double mean = geom::pairwise_sum(terms) / static_cast<double>(n);
  std::vector<double> sq;
  sq.reserve(n);
  for (double t : terms) sq.push_back((t - mean) * (t - mean));
  const double var = geom::pairwise_sum(sq) / static_cast<double>(n - 1);
  return std::sqrt(var * static_cast<double>(n));
}

double pseudo_energy(const Immersion& im, const QuadratureRule& rule,
                     const FdConfig& cfg) {
  check_rule_matches(im, rule);
  auto density = [&im, &cfg](const EmbeddedPoint& p) {
    const cr::ContactFrame frame = cr::frame_at(*im.source, p);
    double s = 0.0;
    for (const Vec& x : frame.horiz) {
      s += immersion::pushforward(im, p, x, cfg).coords.squaredNorm();
    }
    return 0.5 * s;
  };
  return integrate(rule, density);
}

double pseudo_bienergy(const Immersion& im, const QuadratureRule& rule,
                       const FdConfig& cfg) {
  check_rule_matches(im, rule);
  auto density = [&im, &cfg](const EmbeddedPoint& p) {
    return 0.5 * immersion::pseudo_tension(im, p, cfg).value.squaredNorm();
  };
  return integrate(rule, density);
}

}  // namespace crlab::energy
