#ifndef ASYMP_GAUGE_HPP
#define ASYMP_GAUGE_HPP

#include <functional>
#include <optional>
#include <vector>

#include "asymp/geometry.hpp"
#include "asymp/profiles.hpp"
#include "asymp/quadrature.hpp"
#include "asymp/sphere.hpp"

namespace asymp {

/// Degree-0 gauge asymptote eps(l), stored as a function of xhat.
struct GaugeScalarAsymptote {
  SphereFunction eps;
  End end = End::future;

  double operator()(const Vector3& xhat) const { return eps(xhat); }
  double operator()(const Vector4& l) const { return eps(Vector3(l.tail<3>() / l(0))); }
  Vector3 gradient(const Vector3& xhat) const { return surface_gradient(eps, xhat); }

  static GaugeScalarAsymptote constant(double c);
  static GaugeScalarAsymptote harmonic(int l, int m, double amplitude = 1.0);
  /// sum_k c_k Y_{l_k m_k}
  static GaugeScalarAsymptote harmonics(const std::vector<std::tuple<int, int, double>>& terms);
};

/// Degree -1 companion V^eps(l), stored at the canonical l = (1, xhat) as a
/// contravariant 4-vector.
struct GaugeVectorAsymptote {
  std::function<Vector4(const Vector3&)> value;

  Vector4 operator()(const Vector3& xhat) const { return value(xhat); }
  Vector4 operator()(const Vector4& l) const {
    return value(Vector3(l.tail<3>() / l(0))) / l(0);
  }
  /// max over the grid of |l.V(l)|
  double transversality_defect(const SphereGridd& grid) const;
  /// Finite-difference residual of l_[a V_b] closure, max over sample points.
  double closure_defect(const std::vector<Vector3>& points, double h = 1e-3) const;
};

/// V^eps with covariant components (0, grad eps), i.e. contravariant
/// (0, -grad eps); l.V^eps = 0 and constants map to zero.
GaugeVectorAsymptote veps_from_eps(const GaugeScalarAsymptote& e);

/// Residual of L_ab eps = l_a V_b - l_b V_a at the canonical l = (1, xhat),
/// with L_ab the Lorentz generators acting on the degree-0 extension of eps,
/// evaluated by central differences. Returns max |lhs - rhs| over a, b.
double lorentz_relation_residual(const GaugeScalarAsymptote& e, const GaugeVectorAsymptote& v,
                                 const Vector3& xhat, double h = 1e-4);

/// (1/4 pi) int l.V(l') / (l.l') d^2 l'
double eps_from_veps(const GaugeVectorAsymptote& v, const NullDirection<double>& l,
                     const SphereGridd& grid);

struct EpsilonV2Result {
  double lhs;
  double rhs;
  double residual;  // |lhs - rhs| / int |eps| / (t.l)^2
};

/// int eps(l)/(t.l)^2 d^2 l against int t.V(l)/(t.l) d^2 l.
EpsilonV2Result check_epsilonV2(const GaugeScalarAsymptote& e, const GaugeVectorAsymptote& v,
                                const TimeVector<double>& t, const SphereGridd& grid);

/// Green's kernel (4 pi)^-1 (v.l')^-2 of the hyperboloid Dirichlet problem.
struct GreensKernel {
  double operator()(const HyperboloidPoint<double>& v, const Vector3& xhat_prime) const;
};

/// Lambda_H(v) = (1/4 pi) int eps(l) / (v.l)^2 d^2 l. The polar integral about
/// the direction of v uses sigma = ln(v.l), which flattens the kernel peak at
/// large rho; grid supplies the azimuthal resolution and the panel density.
double lambda_on_hyperboloid(const GaugeScalarAsymptote& e, const HyperboloidPoint<double>& v,
                             const SphereGridd& grid);

using HyperboloidFunction = std::function<double(double rho, const Vector3& xhat)>;

/// Laplace-Beltrami operator of the unit hyperboloid applied by second-order
/// finite differences with step h in rho and in geodesic angle.
double hyperboloid_laplacian(const HyperboloidFunction& f, double rho, const Vector3& xhat, double h);

/// max |Delta_H f| over the samples.
double hyperboloid_laplacian_residual(const HyperboloidFunction& f,
                                      const std::vector<HyperboloidPoint<double>>& samples,
                                      double h);

struct LorenzNoGoResult {
  double gamma_minus;
  double matching_gap;
};

/// gamma^- = gamma^+ - (1/2 pi) int alpha(-inf, l) d^2 l
LorenzNoGoResult lorenz_nogo(const ScalarProfile& alpha, double gamma_plus, const SphereGridd& grid);

}  // namespace asymp

#endif  // ASYMP_GAUGE_HPP
