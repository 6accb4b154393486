#ifndef ASYMP_RECONSTRUCT_HPP
#define ASYMP_RECONSTRUCT_HPP

// Bulk fields from asymptotic data: null-plane integral representations,
// the radiation field of simple currents and finite-difference wave
// operators.

#include <functional>
#include <span>
#include <vector>

#include "asymp/geometry.hpp"
#include "asymp/profiles.hpp"
#include "asymp/quadrature.hpp"

namespace asymp {

enum class Provenance { from_chi, from_vj, radiation };

template <typename Value>
struct BulkField {
  std::function<Value(const SpacetimePoint<double>&)> evaluate;
  Provenance provenance;

  Value operator()(const SpacetimePoint<double>& x) const { return evaluate(x); }
};

/// phi(x) = -(1/2 pi) int chi_dot(x.l, l) d^2 l
double scalar_from_chi(const ScalarProfile& chi, const SpacetimePoint<double>& x,
                       const SphereGridd& grid);

/// phi(x) = (1/2 pi) int chi'_dot(x.l, l) d^2 l
double scalar_from_chi_prime(const ScalarProfile& chi_prime, const SpacetimePoint<double>& x,
                             const SphereGridd& grid);

BulkField<double> scalar_field(const ScalarProfile& chi, const SphereGridd& grid);

/// R phi(x + R l0), with the polar integral about l0 written in
/// sigma = R (1 - cos theta) so that the region that survives R -> inf is
/// resolved at every R.
double scaled_scalar_field(const ScalarProfile& chi, const SpacetimePoint<double>& x,
                           const Vector3& l0, double R, int n_phi = 48);

/// lim R phi(x + R l0) by Richardson extrapolation over the given radii.
LimitEstimate scalar_asymptote(const ScalarProfile& chi, const SpacetimePoint<double>& x,
                               const Vector3& l0, std::span<const double> radii, int n_phi = 48);

/// chi'(s, l) = chi(-inf, l) - chi(s, l), the past asymptote of a free field.
ScalarProfile chi_prime_from_chi(const ScalarProfile& chi);

// ---------------------------------------------------------------------------
// Currents

/// Straight worldline through `kink` with velocity v_in before and v_out
/// after it. A positive smoothing width replaces the jump of V_J at the kink
/// by a tanh ramp of that width in s.
struct KinkedWorldline {
  double charge;
  Vector4 kink = Vector4::Zero();
  HyperboloidPoint<double> v_in;
  HyperboloidPoint<double> v_out;
  double smoothing = 0.0;
};

/// J(y) = charge * u * G(y - center) with G an isotropic Euclidean Gaussian in
/// R^4 of width sigma. Compact to numerical precision; it is not conserved,
/// which does not matter for the source-free radiation field.
struct GaussianBlob {
  double charge;
  Vector4 center = Vector4::Zero();
  Vector4 direction = Vector4(1, 0, 0, 0);
  double sigma = 1.0;
};

struct CurrentModel {
  std::vector<KinkedWorldline> worldlines;
  std::vector<GaussianBlob> blobs;

  MatterFlux matter_in() const;
  MatterFlux matter_out() const;
};

/// V_J(s, l) = int dy delta(s - y.l) J(y)
Vector4 vj_profile(const CurrentModel& c, double s, const Vector4& l);
inline Vector4 vj_profile(const CurrentModel& c, double s, const NullDirection<double>& l) {
  return vj_profile(c, s, l.vector());
}
/// Scalar analogue with couplings in place of charges and J_phi = g delta.
double vj_profile_scalar(const CurrentModel& c, double s, const Vector4& l);

/// A_rad(x) = -(1/2 pi) int V_J_dot(x.l, l) d^2 l. Sharp kinks are reduced
/// analytically to an azimuthal integral; smooth parts use the grid.
Vector4 radiation_field(const CurrentModel& c, const SpacetimePoint<double>& x,
                        const SphereGridd& grid);
double radiation_field_scalar(const CurrentModel& c, const SpacetimePoint<double>& x,
                              const SphereGridd& grid);

// ---------------------------------------------------------------------------
// Wave operator

/// Box f = f_tt - Laplacian f by central differences of order 2 or 4.
template <typename Value>
Value dalembertian_fd(const std::function<Value(const SpacetimePoint<double>&)>& f,
                      const SpacetimePoint<double>& x, double h, int order = 4) {
  if (order != 2 && order != 4) throw InvalidArgument("stencil order must be 2 or 4");
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const Value f0 = f(x);
  Value out = zero_value<Value>();
  for (int mu = 0; mu < 4; ++mu) {
    auto at = [&](double k) {
      Vector4 y = x.vector();
      y(mu) += k * h;
      return f(SpacetimePoint<double>(y));
    };
    Value second;
    if (order == 2) {
      second = (at(1) - 2.0 * f0 + at(-1)) / (h * h);
    } else {
      second = (-at(2) + 16.0 * at(1) - 30.0 * f0 + 16.0 * at(-1) - at(-2)) / (12.0 * h * h);
    }
    out += mu == 0 ? second : Value(-second);
  }
  return out;
}

}  // namespace asymp

#endif  // ASYMP_RECONSTRUCT_HPP
