#include "asymp/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "asymp/sphere.hpp"

namespace asymp {

// ---------------------------------------------------------------------------
// ShapeSpec

void ShapeSpec::validate() const {
  if (!(width > 0.0) || !std::isfinite(width)) throw InvalidArgument("shape width must be positive");
  if (!std::isfinite(center)) throw InvalidArgument("shape center must be finite");
  if (kind == SShape::rational && !(power > 0.0))
    throw InvalidArgument("rational shape needs a positive power (fall-off eps = 2 p > 0)");
}

double ShapeSpec::value(double s) const {
  const double x = (s - center) / width;
  switch (kind) {
    case SShape::tanh_down:
      return 0.5 * (1.0 - std::tanh(x));
    case SShape::tanh_up:
      return 0.5 * (1.0 + std::tanh(x));
    case SShape::gaussian:
      return std::exp(-x * x);
    case SShape::rational:
      return std::pow(1.0 + x * x, -power);
  }
  return 0.0;
}

double ShapeSpec::rate(double s) const {
  const double x = (s - center) / width;
  switch (kind) {
    case SShape::tanh_down:
    case SShape::tanh_up: {
      if (std::abs(x) > 350.0) return 0.0;
      const double c = std::cosh(x);
      const double d = 0.5 / (c * c * width);
      return kind == SShape::tanh_down ? -d : d;
    }
    case SShape::gaussian:
      return -2.0 * x / width * std::exp(-x * x);
    case SShape::rational:
      return -2.0 * power * x / width * std::pow(1.0 + x * x, -power - 1.0);
  }
  return 0.0;
}

double ShapeSpec::limit_minus() const { return kind == SShape::tanh_down ? 1.0 : 0.0; }
double ShapeSpec::limit_plus() const { return kind == SShape::tanh_up ? 1.0 : 0.0; }

double ShapeSpec::falloff() const {
  return kind == SShape::rational ? 2.0 * power : std::numeric_limits<double>::infinity();
}

SShape shape_from_name(const std::string& name) {
  if (name == "tanh_step" || name == "tanh_down") return SShape::tanh_down;
  if (name == "tanh_step_up" || name == "tanh_up") return SShape::tanh_up;
  if (name == "gaussian") return SShape::gaussian;
  if (name == "rational") return SShape::rational;
  throw InvalidArgument("unknown s-shape '" + name + "'");
}

std::string shape_name(SShape shape) {
  switch (shape) {
    case SShape::tanh_down:
      return "tanh_step";
    case SShape::tanh_up:
      return "tanh_step_up";
    case SShape::gaussian:
      return "gaussian";
    case SShape::rational:
      return "rational";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Profiles

double AngularSpec::operator()(const Vector3& xhat) const {
  if (map) return map(xhat);
  return real_spherical_harmonic(l, m, xhat);
}

ScalarProfile make_scalar_profile(const std::vector<TermSpec>& spec, End end) {
  ScalarProfile p(end);
  for (const auto& term : spec) {
    const AngularSpec angular = term.angular;
    const double a = term.amplitude;
    if (!term.angular.map) real_spherical_harmonic(angular.l, angular.m, Vector3::UnitZ());
    p.add_term(term.shape, [angular, a](const Vector3& n) { return a * angular(n); });
  }
  return p;
}

EMProfile make_em_profile(const std::vector<TermSpec>& spec, End end) {
  EMProfile p(end);
  for (const auto& term : spec) {
    const AngularSpec angular = term.angular;
    const double a = term.amplitude;
    if (!term.angular.map) real_spherical_harmonic(angular.l, angular.m, Vector3::UnitZ());
    EMProfile::Angular polarised;
    switch (term.polarization) {
      case Polarization::grad:
        polarised = [angular, a](const Vector3& n) {
          Vector4 v;
          v << 0.0, a * surface_gradient(angular, n);
          return v;
        };
        break;
      case Polarization::curl:
        polarised = [angular, a](const Vector3& n) {
          Vector4 v;
          v << 0.0, a * n.cross(surface_gradient(angular, n));
          return v;
        };
        break;
      case Polarization::explicit_vector:
        if (!term.vector_map) throw InvalidArgument("explicit polarization needs a vector map");
        polarised = [map = term.vector_map, a](const Vector3& n) { return Vector4(a * map(n)); };
        break;
    }
    p.add_term(term.shape, std::move(polarised));
  }
  return p;
}

template <typename Value>
FalloffReport validate_falloff(const RadiativeProfile<Value>& p, double s_min, double s_max,
                               double tol, int n_samples) {
  if (!(s_min > 0.0) || !(s_max > s_min) || n_samples < 4)
    throw InvalidArgument("falloff check needs 0 < s_min < s_max and at least 4 samples");
  FalloffReport report;
  report.exponent = std::isinf(p.falloff()) ? 8.0 : p.falloff();
  const double eps = report.exponent;
  const auto grid = build_sphere_grid(4);
  const int half = n_samples / 2;
  auto bound_ratio = [&](double s, const Vector3& n) {
    const double mag = std::abs(s);
    const Value lim = s > 0 ? p.limit_plus(n) : p.limit_minus(n);
    const double a = magnitude<Value>(p.value(s, n) - lim) * std::pow(mag, eps);
    const double b = magnitude<Value>(p.rate(s, n)) * std::pow(mag, 1.0 + eps);
    return std::max(a, b);
  };
  double fitted = 0.0, outer = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const double s = s_min * std::pow(s_max / s_min, double(k) / (n_samples - 1));
    for (const auto& n : grid.nodes) {
      for (double sign : {-1.0, 1.0}) {
        const double r = bound_ratio(sign * s, n);
        if (k < half) {
          fitted = std::max(fitted, r);
        } else {
          outer = std::max(outer, r);
        }
        ++report.samples;
      }
    }
  }
  report.fitted_constant = fitted;
  report.worst_ratio = fitted > 0.0 ? outer / fitted : (outer > 0.0 ? INFINITY : 0.0);
  report.pass = outer <= fitted * (1.0 + tol);
  return report;
}

template FalloffReport validate_falloff(const ScalarProfile&, double, double, double, int);
template FalloffReport validate_falloff(const EMProfile&, double, double, double, int);

// ---------------------------------------------------------------------------
// Matter

double MatterFlux::total_charge() const {
  std::vector<double> q;
  q.reserve(particles.size());
  for (const auto& p : particles) q.push_back(p.charge);
  return pairwise_sum(q);
}

MatterFlux MatterFlux::from_density(
    const std::function<double(const HyperboloidPoint<double>&)>& density, double rho_max, int n_rho,
    int sphere_order, End end) {
  if (!(rho_max > 0.0) || n_rho < 1) throw InvalidArgument("invalid hyperboloid discretisation");
  MatterFlux flux;
  flux.end = end;
  const auto rule = gauss_legendre<double>(n_rho);
  const auto sphere = build_sphere_grid(sphere_order);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double rho = 0.5 * rho_max * (rule.nodes[i] + 1.0);
    const double w_rho = 0.5 * rho_max * rule.weights[i] * rho * rho / std::sqrt(1.0 + rho * rho);
    for (std::size_t k = 0; k < sphere.size(); ++k) {
      const HyperboloidPoint<double> v(rho, sphere.nodes[k]);
      const double q = density(v) * w_rho * sphere.weights[k];
      if (q != 0.0) flux.particles.push_back({q, v});
    }
  }
  return flux;
}

Vector4 vj_limit_em(const MatterFlux& m, const Vector4& l) {
  Vector4 out = Vector4::Zero();
  for (const auto& p : m.particles) {
    const Vector4 v = p.velocity.vector();
    out += p.charge * v / minkowski_dot(v, l);
  }
  return out;
}

double vj_limit_scalar(const MatterFlux& m, const Vector4& l) {
  double out = 0.0;
  for (const auto& p : m.particles) out += p.charge / minkowski_dot(p.velocity.vector(), l);
  return out;
}

// ---------------------------------------------------------------------------
// Scenarios

template <typename Value>
ScatteringScenario<Value> build_scenario(const RadiativeProfile<Value>& free_in,
                                         const MatterFlux& matter_in, const MatterFlux& matter_out,
                                         const RadiativeProfile<Value>& free_out_shape,
                                         int check_order) {
  if constexpr (!std::is_arithmetic_v<Value>) {
    const double qin = matter_in.total_charge(), qout = matter_out.total_charge();
    if (std::abs(qin - qout) > 1e-12 * std::max({1.0, std::abs(qin), std::abs(qout)}))
      throw ChargeMismatch("total charge of matter_in (" + std::to_string(qin) +
                           ") differs from matter_out (" + std::to_string(qout) + ")");
  }
  const auto grid = build_sphere_grid(check_order);
  for (const auto& n : grid.nodes) {
    if (magnitude<Value>(free_in.limit_minus(n)) > 1e-12)
      throw VanishingViolation("incoming free data must vanish at s -> -inf");
    if (magnitude<Value>(free_out_shape.limit_plus(n)) > 1e-12)
      throw VanishingViolation("outgoing free data must vanish at s -> +inf");
  }

  ScatteringScenario<Value> scen;
  scen.free_in = free_in;
  scen.matter_in = matter_in;
  scen.matter_in.end = End::past;
  scen.matter_out = matter_out;
  scen.matter_out.end = End::future;

  RadiativeProfile<Value> out = free_out_shape;
  auto offset = [free_in, free_out_shape, matter_in, matter_out](const Vector3& n) {
    const Vector4 l = canonical_null(n);
    return Value(vj_limit<Value>(matter_in, l) + free_in.limit_plus(n) -
                 vj_limit<Value>(matter_out, l) - free_out_shape.limit_minus(n));
  };
  out.add_term(ShapeSpec{SShape::tanh_down, 0.0, 1.0, 1.0}, offset);
  scen.free_out = out;
  return scen;
}

template EMScenario build_scenario(const EMProfile&, const MatterFlux&, const MatterFlux&,
                                   const EMProfile&, int);
template ScalarScenario build_scenario(const ScalarProfile&, const MatterFlux&, const MatterFlux&,
                                       const ScalarProfile&, int);

}  // namespace asymp
