#include "asymp/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace asymp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double tanh_ramp(double z) { return 0.5 * (1.0 + std::tanh(z)); }
double tanh_ramp_rate(double z) {
  const double c = std::cosh(z);
  return 0.5 / (c * c);
}

// Euclidean norm of l with the spatial part lowered; enters the hyperplane
// marginal of a Euclidean Gaussian.
double euclidean_norm(const Vector4& l) { return l.norm(); }

double gaussian_marginal(double z, double sigma) {
  return std::exp(-0.5 * z * z / (sigma * sigma)) / (std::sqrt(kTwoPi) * sigma);
}

void check_off_worldline(const KinkedWorldline& w, const Vector4& d) {
  const double scale = 1.0 + d.norm();
  if (d.norm() <= 1e-12 * scale) throw WorldlineSingularity("point coincides with the kink");
  const Vector4 v = d(0) < 0.0 ? w.v_in.vector() : w.v_out.vector();
  const Vector4 off = d - (d(0) / v(0)) * v;
  if (off.norm() <= 1e-12 * scale) throw WorldlineSingularity("point lies on a worldline");
}

// Jump of V_J across the kink plane, Delta(l) = q [v/(v.l)]_in^out.
template <typename Value>
Value kink_jump(const KinkedWorldline& w, const Vector4& l) {
  const Vector4 vi = w.v_in.vector(), vo = w.v_out.vector();
  const double di = minkowski_dot(vi, l), dout = minkowski_dot(vo, l);
  if constexpr (std::is_arithmetic_v<Value>) {
    return w.charge * (1.0 / dout - 1.0 / di);
  } else {
    return Vector4(w.charge * (vo / dout - vi / di));
  }
}

template <typename Value>
Value worldline_vj(const KinkedWorldline& w, double s, const Vector4& l) {
  const double sk = minkowski_dot(w.kink, l);
  double frac;
  if (w.smoothing > 0.0) {
    frac = tanh_ramp((s - sk) / w.smoothing);
  } else {
    frac = s < sk ? 0.0 : (s > sk ? 1.0 : 0.5);
  }
  const Vector4 vi = w.v_in.vector(), vo = w.v_out.vector();
  const double di = minkowski_dot(vi, l), dout = minkowski_dot(vo, l);
  if constexpr (std::is_arithmetic_v<Value>) {
    return w.charge * ((1.0 - frac) / di + frac / dout);
  } else {
    return Vector4(w.charge * ((1.0 - frac) * vi / di + frac * vo / dout));
  }
}

template <typename Value>
Value blob_vj(const GaussianBlob& b, double s, const Vector4& l, bool rate) {
  const double n = euclidean_norm(l);
  const double z = (s - minkowski_dot(b.center, l)) / n;
  double f = gaussian_marginal(z, b.sigma) / n;
  if (rate) f *= -z / (b.sigma * b.sigma) / n;
  if constexpr (std::is_arithmetic_v<Value>) {
    return b.charge * f;
  } else {
    return Vector4(b.charge * f * b.direction);
  }
}

// Sharp kink: int d^2l Delta(l) delta(d.l) = (1/|d|) int dphi Delta on the
// circle cos(angle to d) = d0/|d|. Trapezoid in phi, doubled to convergence.
template <typename Value>
Value kink_delta_integral(const KinkedWorldline& w, const Vector4& d) {
  const Vector3 dv = d.tail<3>();
  const double r = dv.norm();
  const double c = d(0) / r;
  if (!(std::abs(c) < 1.0)) return zero_value<Value>();
  const double sn = std::sqrt(1.0 - c * c);
  const auto [e1, e2] = tangent_basis<double>(Vector3(dv / r));
  const Vector3 axis = dv / r;
  auto trapezoid = [&](int n) {
    std::vector<Value> vals;
    vals.reserve(n);
    for (int k = 0; k < n; ++k) {
      const double phi = kTwoPi * k / n;
      const Vector3 xh = c * axis + sn * (std::cos(phi) * e1 + std::sin(phi) * e2);
      vals.push_back(kink_jump<Value>(w, canonical_null(xh)));
    }
    return Value(pairwise_sum(vals) * (kTwoPi / n));
  };
  Value prev = trapezoid(32);
  for (int n = 64; n <= (1 << 17); n *= 2) {
    const Value next = trapezoid(n);
    if (magnitude<Value>(next - prev) <= 1e-14 * std::max(1.0, magnitude<Value>(next)))
      return Value(next / r);
    prev = next;
  }
  throw NonConvergence("azimuthal kink integral did not converge");
}

// Sphere integral of a rate concentrated on the band d.l ~ 0 of width
// `scale` in s: axial grid about d with composite Gauss panels in cos.
template <typename Value>
Value band_integral(const std::function<Value(const Vector4&)>& rate_on_cone, const Vector4& d,
                    double scale, int n_phi) {
  const Vector3 dv = d.tail<3>();
  const double r = dv.norm();
  const Vector3 pole = r > 0.0 ? Vector3(dv / r) : Vector3::UnitZ();
  const double width = r > 0.0 ? std::min(0.1, 0.25 * scale / r) : 0.1;
  const int panels = static_cast<int>(std::ceil(2.0 / width));
  const auto base = gauss_legendre<double>(10);
  std::vector<double> nodes, weights;
  for (int p = 0; p < panels; ++p) {
    const double a = -1.0 + 2.0 * p / panels, b = -1.0 + 2.0 * (p + 1) / panels;
    append_mapped(base, a, b, nodes, weights);
  }
  const auto grid = build_axial_grid<double>(pole, nodes, weights, n_phi);
  std::vector<Value> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    vals[i] = grid.weights[i] * rate_on_cone(canonical_null(grid.nodes[i]));
  return pairwise_sum(vals);
}

template <typename Value>
Value radiation_impl(const CurrentModel& c, const SpacetimePoint<double>& x, const SphereGridd& grid) {
  const Vector4 xv = x.vector();
  const int n_phi = std::max(32, grid.n_phi);
  Value sphere = zero_value<Value>();
  for (const auto& w : c.worldlines) {
    const Vector4 d = xv - w.kink;
    check_off_worldline(w, d);
    if (w.smoothing > 0.0) {
      const std::function<Value(const Vector4&)> rate = [&](const Vector4& l) {
        return Value(kink_jump<Value>(w, l) * tanh_ramp_rate(minkowski_dot(d, l) / w.smoothing) /
                     w.smoothing);
      };
      sphere += band_integral<Value>(rate, d, w.smoothing, n_phi);
    } else {
      sphere += kink_delta_integral<Value>(w, d);
    }
  }
  for (const auto& b : c.blobs) {
    const Vector4 d = xv - b.center;
    const std::function<Value(const Vector4&)> rate = [&](const Vector4& l) {
      return blob_vj<Value>(b, minkowski_dot(xv, l), l, true);
    };
    sphere += band_integral<Value>(rate, d, std::sqrt(2.0) * b.sigma, n_phi);
  }
  return Value(-sphere / kTwoPi);
}

template <typename Value>
Value vj_impl(const CurrentModel& c, double s, const Vector4& l) {
  if (!(l(0) > 0.0) || std::abs(minkowski_dot(l, l)) > 1e-9 * l(0) * l(0))
    throw InvalidArgument("V_J needs a future null vector");
  Value out = zero_value<Value>();
  for (const auto& w : c.worldlines) out += worldline_vj<Value>(w, s, l);
  for (const auto& b : c.blobs) out += blob_vj<Value>(b, s, l, false);
  return out;
}

}  // namespace

double scalar_from_chi(const ScalarProfile& chi, const SpacetimePoint<double>& x,
                       const SphereGridd& grid) {
  if (chi.empty()) return 0.0;
  const Vector4 xv = x.vector();
  return -grid.integrate([&](const Vector3& n) {
    const Vector4 l = canonical_null(n);
    return chi.rate(minkowski_dot(xv, l), n);
  }) / kTwoPi;
}

double scalar_from_chi_prime(const ScalarProfile& chi_prime, const SpacetimePoint<double>& x,
                             const SphereGridd& grid) {
  return -scalar_from_chi(chi_prime, x, grid);
}

BulkField<double> scalar_field(const ScalarProfile& chi, const SphereGridd& grid) {
  return {[chi, grid](const SpacetimePoint<double>& x) { return scalar_from_chi(chi, x, grid); },
          Provenance::from_chi};
}

double scaled_scalar_field(const ScalarProfile& chi, const SpacetimePoint<double>& x,
                           const Vector3& l0, double R, int n_phi) {
  if (!(R > 0.0)) throw InvalidArgument("radius must be positive");
  if (chi.empty()) return 0.0;
  const Vector4 xv = x.vector();
  double min_width = std::numeric_limits<double>::infinity(), reach = 0.0;
  for (const auto& t : chi.terms()) {
    min_width = std::min(min_width, t.shape.width);
    reach = std::max(reach, std::abs(t.shape.center) + 40.0 * t.shape.width);
  }
  if (chi.terms().empty()) return 0.0;
  // Exponential tails: chi_dot(x.l + sigma) is below round-off beyond reach.
  double sigma_max = 2.0 * R;
  if (std::isinf(chi.falloff()))
    sigma_max = std::min(sigma_max, reach + std::abs(xv(0)) + xv.tail<3>().norm());
  const auto sig = graded_rule(0.0, sigma_max, 0.05 * min_width, 1.25,
                               std::max(min_width, sigma_max / 40.0), 10);
  std::vector<double> cos_nodes(sig.nodes.size()), cos_weights(sig.nodes.size());
  for (std::size_t i = 0; i < sig.nodes.size(); ++i) {
    cos_nodes[i] = 1.0 - sig.nodes[i] / R;
    cos_weights[i] = sig.weights[i];  // d cos = dsigma / R, times R
  }
  const auto grid = build_axial_grid<double>(l0.normalized(), cos_nodes, cos_weights, n_phi);
  const Vector4 l0c = canonical_null(l0.normalized());
  return -grid.integrate([&](const Vector3& n) {
    const Vector4 l = canonical_null(n);
    return chi.rate(minkowski_dot(xv, l) + R * minkowski_dot(l0c, l), n);
  }) / kTwoPi;
}

LimitEstimate scalar_asymptote(const ScalarProfile& chi, const SpacetimePoint<double>& x,
                               const Vector3& l0, std::span<const double> radii, int n_phi) {
  return extract_limit([&](double R) { return scaled_scalar_field(chi, x, l0, R, n_phi); },
                       radii);
}

ScalarProfile chi_prime_from_chi(const ScalarProfile& chi) {
  const auto probe = build_sphere_grid(8);
  for (const auto& n : probe.nodes) {
    if (std::abs(chi.limit_plus(n)) > 1e-12)
      throw VanishingViolation("chi must vanish at s -> +inf");
  }
  ScalarProfile out(End::past);
  out = out.with_falloff(chi.falloff());
  const auto terms = chi.terms();
  out.set_constant([terms](const Vector3& n) {
    double sum = 0.0;
    for (const auto& t : terms) {
      const double f = t.shape.limit_minus();
      if (f != 0.0) sum += f * t.angular(n);
    }
    return sum;
  });
  for (const auto& t : terms) {
    auto a = t.angular;
    out.add_term(t.shape, [a](const Vector3& n) { return -a(n); });
  }
  return out;
}

MatterFlux CurrentModel::matter_in() const {
  MatterFlux m;
  m.end = End::past;
  for (const auto& w : worldlines) m.particles.push_back({w.charge, w.v_in});
  return m;
}

MatterFlux CurrentModel::matter_out() const {
  MatterFlux m;
  m.end = End::future;
  for (const auto& w : worldlines) m.particles.push_back({w.charge, w.v_out});
  return m;
}

Vector4 vj_profile(const CurrentModel& c, double s, const Vector4& l) {
  return vj_impl<Vector4>(c, s, l);
}

double vj_profile_scalar(const CurrentModel& c, double s, const Vector4& l) {
  return vj_impl<double>(c, s, l);
}

Vector4 radiation_field(const CurrentModel& c, const SpacetimePoint<double>& x,
                        const SphereGridd& grid) {
  return radiation_impl<Vector4>(c, x, grid);
}

double radiation_field_scalar(const CurrentModel& c, const SpacetimePoint<double>& x,
                              const SphereGridd& grid) {
  return radiation_impl<double>(c, x, grid);
}

}  // namespace asymp
