#include "asymp/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace asymp {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

Vector4 lowered(const Vector4& v) { return lower_index(v); }

}  // namespace

GaugeScalarAsymptote GaugeScalarAsymptote::constant(double c) {
  return {[c](const Vector3&) { return c; }, End::future};
}

GaugeScalarAsymptote GaugeScalarAsymptote::harmonic(int l, int m, double amplitude) {
  real_spherical_harmonic(l, m, Vector3::UnitZ());
  return {[l, m, amplitude](const Vector3& n) { return amplitude * real_spherical_harmonic(l, m, n); },
          End::future};
}

GaugeScalarAsymptote GaugeScalarAsymptote::harmonics(
    const std::vector<std::tuple<int, int, double>>& terms) {
  for (const auto& [l, m, c] : terms) real_spherical_harmonic(l, m, Vector3::UnitZ());
  return {[terms](const Vector3& n) {
            double sum = 0.0;
            for (const auto& [l, m, c] : terms) sum += c * real_spherical_harmonic(l, m, n);
            return sum;
          },
          End::future};
}

double GaugeVectorAsymptote::transversality_defect(const SphereGridd& grid) const {
  double worst = 0.0;
  for (const auto& n : grid.nodes)
    worst = std::max(worst, std::abs(minkowski_dot(canonical_null(n), value(n))));
  return worst;
}

double GaugeVectorAsymptote::closure_defect(const std::vector<Vector3>& points, double h) const {
  // Degree -1 extension off the cone; L_ab only probes the cone.
  auto field = [&](const Vector4& l) {
    const double r = l.tail<3>().norm();
    return Vector4(lowered(value(Vector3(l.tail<3>() / r)) / r));
  };
  double worst = 0.0;
  for (const auto& n : points) {
    const Vector4 l = canonical_null(n);
    const Vector4 ll = lowered(l);
    // lv[a][b] = L_ab V (covariant components)
    Vector4 lv[4][4];
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        Vector4 dir = Vector4::Zero();
        dir(b) += ll(a);
        dir(a) -= ll(b);
        lv[a][b] = (field(l + h * dir) - field(l - h * dir)) / (2.0 * h);
      }
    }
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        for (int c = b + 1; c < 4; ++c)
          worst = std::max(worst, std::abs(lv[a][b](c) + lv[b][c](a) + lv[c][a](b)));
  }
  return worst;
}

GaugeVectorAsymptote veps_from_eps(const GaugeScalarAsymptote& e) {
  // Smoothness probe: the gradient at two step sizes must agree.
  for (const Vector3& n : {Vector3(0.36, 0.48, 0.8), Vector3(-0.6, 0.0, -0.8), Vector3(0, 1, 0)}) {
    const Vector3 g1 = surface_gradient(e.eps, n, 1e-3);
    const Vector3 g2 = surface_gradient(e.eps, n, 2e-3);
    if (!g1.allFinite() || (g1 - g2).norm() > 1e-6 * (1.0 + g1.norm()))
      throw InvalidArgument("gauge asymptote is not smooth enough for V^eps");
  }
  const SphereFunction eps = e.eps;
  return {[eps](const Vector3& n) {
    Vector4 v;
    v << 0.0, -surface_gradient(eps, n);
    return v;
  }};
}

double lorentz_relation_residual(const GaugeScalarAsymptote& e, const GaugeVectorAsymptote& v,
                                 const Vector3& xhat, double h) {
  const Vector3 n = xhat.normalized();
  auto ext = [&](const Vector4& l) { return e.eps(Vector3(l.tail<3>().normalized())); };
  const Vector4 l = canonical_null(n);
  const Vector4 ll = lowered(l);
  Vector4 grad;
  for (int b = 0; b < 4; ++b) {
    Vector4 step = Vector4::Zero();
    step(b) = h;
    grad(b) = (ext(l + step) - ext(l - step)) / (2.0 * h);
  }
  const Vector4 vl = lowered(v.value(n));
  double worst = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double lhs = ll(a) * grad(b) - ll(b) * grad(a);
      const double rhs = ll(a) * vl(b) - ll(b) * vl(a);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

double eps_from_veps(const GaugeVectorAsymptote& v, const NullDirection<double>& l,
                     const SphereGridd& grid) {
  const Vector4 lc = l.canonical();
  const auto numerator = [&](const Vector3& n) { return minkowski_dot(lc, v.value(n)); };
  // l.l' = 1 - xhat.xhat' for canonical representatives.
  return integrate_singular_angular(numerator, l.unit(), grid) / kFourPi;
}

EpsilonV2Result check_epsilonV2(const GaugeScalarAsymptote& e, const GaugeVectorAsymptote& v,
                                const TimeVector<double>& t, const SphereGridd& grid) {
  const Vector4 tv = t.vector();
  const auto lhs_f = [&](const Vector4& l) {
    const double d = minkowski_dot(tv, l);
    return e(l) / (d * d);
  };
  const auto abs_f = [&](const Vector4& l) { return std::abs(lhs_f(l)); };
  const auto rhs_f = [&](const Vector4& l) {
    return minkowski_dot(tv, v(l)) / minkowski_dot(tv, l);
  };
  EpsilonV2Result r;
  r.lhs = integrate_null_directions(lhs_f, grid, t);
  r.rhs = integrate_null_directions(rhs_f, grid, t);
  const double scale = integrate_null_directions(abs_f, grid, t, false);
  r.residual = std::abs(r.lhs - r.rhs) / std::max(scale, 1e-300);
  return r;
}

double GreensKernel::operator()(const HyperboloidPoint<double>& v, const Vector3& xhat_prime) const {
  const double d = minkowski_dot(v.vector(), canonical_null(xhat_prime.normalized()));
  return 1.0 / (kFourPi * d * d);
}

double lambda_on_hyperboloid(const GaugeScalarAsymptote& e, const HyperboloidPoint<double>& v,
                             const SphereGridd& grid) {
  const double rho = v.rho();
  const double gamma = std::sqrt(1.0 + rho * rho);
  const int n_phi = std::max(grid.n_phi, 8);
  std::vector<double> cos_nodes, cos_weights;
  if (rho < 0.5) {
    const auto rule = gauss_legendre<double>(std::max(grid.n_theta, 8) + 8);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double d = gamma - rho * rule.nodes[i];
      cos_nodes.push_back(rule.nodes[i]);
      cos_weights.push_back(rule.weights[i] / (d * d));
    }
  } else {
    // dc / (gamma - rho c)^2 = e^-sigma dsigma / rho, sigma in [-asinh rho, asinh rho].
    const double big_l = std::asinh(rho);
    const int per_panel = std::max(12, grid.n_theta / 2 + 4);
    const int panels = std::max(2, static_cast<int>(std::ceil(2.0 * big_l / 0.5)));
    const auto base = gauss_legendre<double>(per_panel);
    const double width = 2.0 * big_l / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = -big_l + p * width;
      for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        const double sigma = a + 0.5 * width * (base.nodes[i] + 1.0);
        const double c = std::clamp((gamma - std::exp(sigma)) / rho, -1.0, 1.0);
        cos_nodes.push_back(c);
        cos_weights.push_back(0.5 * width * base.weights[i] * std::exp(-sigma) / rho);
      }
    }
  }
  const auto axial = build_axial_grid<double>(v.unit(), cos_nodes, cos_weights, n_phi);
  return axial.integrate(e.eps) / kFourPi;
}

double hyperboloid_laplacian(const HyperboloidFunction& f, double rho, const Vector3& xhat,
                             double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw StencilOutOfDomain("hyperboloid Laplacian stencil needs rho > 0");
  const Vector3 n = xhat.normalized();
  double f_r, f_rr;
  const double f0 = f(rho, n);
  if (rho - h > 0.0) {
    const double fp = f(rho + h, n), fm = f(rho - h, n);
    f_r = (fp - fm) / (2.0 * h);
    f_rr = (fp - 2.0 * f0 + fm) / (h * h);
  } else {
    // one-sided, second order
    const double f1 = f(rho + h, n), f2 = f(rho + 2 * h, n), f3 = f(rho + 3 * h, n);
    f_r = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
    f_rr = (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
  }
  const auto [e1, e2] = tangent_basis(n);
  double sphere_lap = 0.0;
  for (const Vector3& e : {e1, e2}) {
    const Vector3 plus = std::cos(h) * n + std::sin(h) * e;
    const Vector3 minus = std::cos(h) * n - std::sin(h) * e;
    sphere_lap += (f(rho, plus) - 2.0 * f0 + f(rho, minus)) / (h * h);
  }
  return (1.0 + rho * rho) * f_rr + (2.0 + 3.0 * rho * rho) / rho * f_r + sphere_lap / (rho * rho);
}

double hyperboloid_laplacian_residual(const HyperboloidFunction& f,
                                      const std::vector<HyperboloidPoint<double>>& samples,
                                      double h) {
  double worst = 0.0;
  for (const auto& p : samples)
    worst = std::max(worst, std::abs(hyperboloid_laplacian(f, p.rho(), p.unit(), h)));
  return worst;
}

LorenzNoGoResult lorenz_nogo(const ScalarProfile& alpha, double gamma_plus, const SphereGridd& grid) {
  for (const auto& n : grid.nodes) {
    if (std::abs(alpha.limit_plus(n)) > 1e-12)
      throw VanishingViolation("alpha must vanish at s -> +inf");
  }
  const double mean = grid.integrate([&](const Vector3& n) { return alpha.limit_minus(n); });
  LorenzNoGoResult r;
  r.gamma_minus = gamma_plus - mean / (2.0 * std::numbers::pi);
  r.matching_gap = std::abs(gamma_plus - r.gamma_minus);
  return r;
}

}  // namespace asymp
