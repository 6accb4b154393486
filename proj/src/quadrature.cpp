#include "asymp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace asymp {

GaussRule<double> graded_rule(double a, double b, double first_width, double growth,
                              double max_width, int nodes_per_panel) {
  if (!(b > a)) throw InvalidArgument("graded rule needs a < b");
  if (!(first_width > 0.0) || !(growth >= 1.0) || !(max_width >= first_width))
    throw InvalidArgument("invalid panel grading");
  const auto base = gauss_legendre<double>(nodes_per_panel);
  GaussRule<double> out;
  double left = a, width = first_width;
  while (left < b) {
    const double right = std::min(b, left + width);
    append_mapped(base, left, right, out.nodes, out.weights);
    left = right;
    width = std::min(max_width, width * growth);
  }
  return out;
}

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double truncation_radius(double falloff) {
  if (!(falloff > 0.0)) throw InvalidArgument("fall-off exponent must be positive");
  if (std::isinf(falloff)) return 1e2;
  // Tail beyond S of a C/|s|^(1+eps) integrand is C S^-eps / eps.
  const double exponent = std::min(300.0, std::max(2.0, 16.0 / falloff + 2.0));
  return std::pow(10.0, exponent);
}

double weighted(double value, double weight) {
  if (value == 0.0) return 0.0;
  const double term = value * weight;
  if (!std::isfinite(term)) throw NonConvergence("integrand not finite on the quadrature nodes");
  return term;
}

// Trapezoidal refinement in the DE variable t; node(t) returns (s, ds/dt).
template <typename Node>
double refine_trapezoid(const std::function<double(double)>& g, Node&& node, double t_lo,
                        double t_hi, const LineQuadrature& quad) {
  std::vector<double> terms;
  std::vector<double> abs_terms;
  auto collect = [&](double h, bool odd_only) {
    const long k_lo = static_cast<long>(std::floor(t_lo / h));
    const long k_hi = static_cast<long>(std::ceil(t_hi / h));
    for (long k = k_lo; k <= k_hi; ++k) {
      if (odd_only && k % 2 == 0) continue;
      const auto [s, ds] = node(k * h);
      const double term = weighted(g(s), ds);
      terms.push_back(term);
      abs_terms.push_back(std::abs(term));
    }
  };
  double h = 1.0;
  collect(h, false);
  double previous = h * pairwise_sum(terms);
  for (int level = 1; level <= quad.max_levels; ++level) {
    h /= 2.0;
    collect(h, true);
    const double current = h * pairwise_sum(terms);
    const double scale = std::max(std::abs(current), h * pairwise_sum(abs_terms));
    if (level >= 3 && std::abs(current - previous) <= quad.rel_tol * scale) return current;
    if (scale == 0.0 && level >= 3) return 0.0;
    previous = current;
  }
  throw NonConvergence("line quadrature did not converge after " +
                       std::to_string(quad.max_levels) + " refinements");
}

double composite_line(const std::function<double(double)>& g, const LineQuadrature& quad) {
  double half_range = quad.truncation;
  if (half_range <= 0.0) {
    half_range = std::isinf(quad.falloff)
                     ? 40.0
                     : std::min(1e4, std::pow(10.0, 10.0 / quad.falloff));
  }
  half_range *= quad.scale;
  double width = quad.max_panel_width * quad.scale;
  double previous = 0.0;
  for (int level = 0; level <= quad.max_levels; ++level) {
    const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * half_range / width)));
    const auto base = gauss_legendre<double>(quad.nodes_per_panel);
    std::vector<double> terms, abs_terms;
    const double w = 2.0 * half_range / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = quad.center - half_range + p * w;
      for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        const double s = a + 0.5 * w * (base.nodes[i] + 1.0);
        const double term = weighted(g(s), 0.5 * w * base.weights[i]);
        terms.push_back(term);
        abs_terms.push_back(std::abs(term));
      }
    }
    const double current = pairwise_sum(terms);
    const double scale = std::max(std::abs(current), pairwise_sum(abs_terms));
    if (level >= 1 && std::abs(current - previous) <= quad.rel_tol * scale) return current;
    if (level >= 1 && scale == 0.0) return 0.0;
    previous = current;
    width /= 2.0;
  }
  throw NonConvergence("composite line quadrature did not converge");
}

}  // namespace

double integrate_s_line(const std::function<double(double)>& g, const LineQuadrature& quad) {
  if (!(quad.falloff > 0.0)) throw InvalidArgument("fall-off exponent must be positive");
  if (!(quad.scale > 0.0)) throw InvalidArgument("line quadrature scale must be positive");
  if (quad.scheme == LineScheme::truncated_composite) return composite_line(g, quad);
  // sinh-sinh: s = c + w sinh(pi/2 sinh t)
  const double s_max = truncation_radius(quad.falloff);
  const double t_max = std::asinh(std::asinh(s_max) / kHalfPi);
  auto node = [&](double t) {
    const double inner = kHalfPi * std::sinh(t);
    return std::pair<double, double>(quad.center + quad.scale * std::sinh(inner),
                                     quad.scale * kHalfPi * std::cosh(t) * std::cosh(inner));
  };
  return refine_trapezoid(g, node, -t_max, t_max, quad);
}

double integrate_half_line(const std::function<double(double)>& g, double a, bool upper,
                           const LineQuadrature& quad) {
  if (!(quad.falloff > 0.0)) throw InvalidArgument("fall-off exponent must be positive");
  // exp-sinh: s = a +- w exp(pi/2 sinh t)
  const double s_max = truncation_radius(quad.falloff);
  const double t_max = std::asinh(std::log(s_max) / kHalfPi);
  const double t_min = std::asinh(std::log(1e-300) / kHalfPi);
  const double sign = upper ? 1.0 : -1.0;
  auto node = [&](double t) {
    const double e = std::exp(kHalfPi * std::sinh(t));
    return std::pair<double, double>(a + sign * quad.scale * e,
                                     quad.scale * kHalfPi * std::cosh(t) * e);
  };
  return refine_trapezoid(g, node, t_min, t_max, quad);
}

LimitEstimate extract_limit(const std::function<double(double)>& f, std::span<const double> radii) {
  if (radii.size() < 2) throw InvalidArgument("limit extraction needs at least two radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw InvalidArgument("radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw InvalidArgument("radii must increase");
  }
  LimitEstimate est;
  const std::size_t n = radii.size();
  std::vector<double> h(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = 1.0 / radii[i];
    p[i] = f(radii[i]);
    est.samples.emplace_back(radii[i], p[i]);
  }
  // Neville at h = 0; diag[k] uses samples 0..k.
  std::vector<double> diag{p[0]};
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = k; i-- > 0;) {
      // p[i] currently interpolates samples i..k-1; extend to i..k.
      p[i] = (h[i] * p[i + 1] - h[k] * p[i]) / (h[i] - h[k]);
    }
    diag.push_back(p[0]);
  }
  est.value = diag.back();
  est.error_estimate = std::abs(diag[n - 1] - diag[n - 2]);
  if (n >= 3) {
    const double last = std::abs(diag[n - 1] - diag[n - 2]);
    const double before = std::abs(diag[n - 2] - diag[n - 3]);
    est.diverging = last > before && last > 1e-12 * std::max(1.0, std::abs(est.value));
  }
  return est;
}

double integrate_null_directions(const NullFunction& f, const SphereGridd& grid,
                                 const TimeVector<double>& t, bool check_homogeneity) {
  if (grid.size() == 0) throw InvalidArgument("empty sphere grid");
  const Vector4 u = t.unit();
  const Eigen::Matrix4d boost = boost_from_rest(u);
  auto lift = [&](const Vector3& n) {
    Vector4 rest;
    rest << 1.0, n;
    return Vector4(boost * rest);
  };
  if (check_homogeneity) {
    const std::size_t stride = std::max<std::size_t>(1, grid.size() / 3);
    for (std::size_t k = 0; k < grid.size(); k += stride) {
      const Vector4 l = lift(grid.nodes[k]);
      const double base = f(l);
      for (double lambda : {0.5, 3.0}) {
        const double scaled = f(lambda * l) * lambda * lambda;
        const double ref = std::max({std::abs(base), std::abs(scaled), 1e-300});
        if (std::abs(scaled - base) > 1e-8 * ref)
          throw HomogeneityViolation("integrand is not homogeneous of degree -2 in l");
      }
    }
  }
  // On the section t.l = |t| the canonical sphere measure pulls back to dOmega.
  return grid.integrate([&](const Vector3& n) { return f(lift(n)); });
}

double integrate_singular_angular(const std::function<double(const Vector3&)>& numerator,
                                  const Vector3& xhat, const SphereGridd& grid) {
  const int n_theta = std::max(grid.n_theta, 4);
  const int n_phi = std::max(grid.n_phi, 4);
  const Vector3 pole = xhat.normalized();
  const double at_pole = numerator(pole);
  if (!std::isfinite(at_pole)) throw SubtractionFailure("numerator is not finite at l' = l");

  const auto rule = gauss_legendre<double>(n_theta);
  const auto frame = frame_with_pole<double>(pole);
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  double numerator_scale = std::abs(at_pole);
  for (int i = 0; i < n_theta; ++i) {
    const double theta = kHalfPi * (rule.nodes[i] + 1.0);
    if (theta < 1e-12) throw NodeCoincidence("quadrature node coincides with the singular point");
    const double half = std::sin(0.5 * theta);
    const double one_minus_cos = 2.0 * half * half;
    const double w_theta = kHalfPi * rule.weights[i] * std::sin(theta);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = (j + 0.5) * dphi;
      const Vector3 n = frame * Vector3(std::sin(theta) * std::cos(phi),
                                        std::sin(theta) * std::sin(phi), std::cos(theta));
      const double value = numerator(n);
      numerator_scale = std::max(numerator_scale, std::abs(value));
      terms.push_back(w_theta * dphi * (value - at_pole) / one_minus_cos);
    }
  }
  // The remainder num(l) * int dOmega' / (l.l') diverges logarithmically.
  if (std::abs(at_pole) > 1e-9 * std::max(numerator_scale, 1e-300))
    throw SubtractionFailure("numerator does not vanish at l' = l; integral diverges");
  return pairwise_sum(terms);
}

}  // namespace asymp
