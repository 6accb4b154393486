#ifndef ASYMP_GEOMETRY_HPP
#define ASYMP_GEOMETRY_HPP

// Minkowski charts used throughout: Cartesian (t, x, y, z), the (R, s, l)
// null parametrisation, retarded/advanced light-cone coordinates and
// hyperbolic coordinates inside the future light cone. Signature (+,-,-,-),
// c = 1.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>

#include "asymp/errors.hpp"

namespace asymp {

template <typename Scalar>
using FourVector = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using ThreeVector = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using LorentzMatrix = Eigen::Matrix<Scalar, 4, 4>;

using Vector4 = FourVector<double>;
using Vector3 = ThreeVector<double>;

/// a.b = a0 b0 - (spatial a).(spatial b)
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar minkowski_dot(const Eigen::MatrixBase<DerivedA>& a,
                                        const Eigen::MatrixBase<DerivedB>& b) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(DerivedA, 4);
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(DerivedB, 4);
  return a(0) * b(0) - a.template tail<3>().dot(b.template tail<3>());
}

/// Lowers (or raises) the index of a 4-vector with diag(1,-1,-1,-1).
template <typename Derived>
FourVector<typename Derived::Scalar> lower_index(const Eigen::MatrixBase<Derived>& a) {
  FourVector<typename Derived::Scalar> out = a;
  out.template tail<3>() = -out.template tail<3>();
  return out;
}

template <typename Scalar>
class SpacetimePoint {
 public:
  SpacetimePoint() : x_(FourVector<Scalar>::Zero()) {}
  explicit SpacetimePoint(const FourVector<Scalar>& x) : x_(x) {
    if (!x_.allFinite()) throw InvalidArgument("spacetime point has non-finite components");
  }
  SpacetimePoint(Scalar t, Scalar x, Scalar y, Scalar z)
      : SpacetimePoint(FourVector<Scalar>(t, x, y, z)) {}

  const FourVector<Scalar>& vector() const { return x_; }
  Scalar time() const { return x_(0); }
  ThreeVector<Scalar> spatial() const { return x_.template tail<3>(); }
  Scalar radius() const { return x_.template tail<3>().norm(); }

 private:
  FourVector<Scalar> x_;
};

/// A future null direction. Stored as the unit spatial vector of the
/// canonical representative l = (1, xhat); a positive scale factor records
/// a rescaled representative without touching the canonical form.
template <typename Scalar>
class NullDirection {
 public:
  explicit NullDirection(const ThreeVector<Scalar>& direction, Scalar scale = Scalar(1))
      : scale_(scale) {
    const Scalar n = direction.norm();
    if (!(n > Scalar(0)) || !std::isfinite(n))
      throw InvalidArgument("null direction needs a finite non-zero spatial vector");
    if (!(scale > Scalar(0))) throw InvalidArgument("null direction scale must be positive");
    unit_ = direction / n;
  }

  /// Builds the direction of a future-pointing null 4-vector; the time
  /// component becomes the scale factor.
  static NullDirection from_vector(const FourVector<Scalar>& l) {
    const Scalar spatial = l.template tail<3>().norm();
    if (!(l(0) > Scalar(0)))
      throw InvalidArgument("null direction must be future pointing");
    if (std::abs(l(0) - spatial) > Scalar(1e-10) * l(0))
      throw InvalidArgument("vector is not null");
    return NullDirection(l.template tail<3>(), l(0));
  }

  const ThreeVector<Scalar>& unit() const { return unit_; }
  Scalar scale() const { return scale_; }
  FourVector<Scalar> canonical() const {
    FourVector<Scalar> l;
    l << Scalar(1), unit_;
    return l;
  }
  FourVector<Scalar> vector() const { return scale_ * canonical(); }
  NullDirection rescaled(Scalar lambda) const { return NullDirection(unit_, scale_ * lambda); }

 private:
  ThreeVector<Scalar> unit_;
  Scalar scale_;
};

/// Future-pointing timelike reference vector.
template <typename Scalar>
class TimeVector {
 public:
  explicit TimeVector(const FourVector<Scalar>& t) : t_(t) {
    if (!(t_(0) > Scalar(0)) || !(minkowski_dot(t_, t_) > Scalar(0)))
      throw InvalidArgument("time vector must be future-pointing timelike");
  }

  static TimeVector rest() { return TimeVector(FourVector<Scalar>(1, 0, 0, 0)); }

  /// Unit vector (cosh eta, sinh eta * axis).
  static TimeVector boosted(Scalar rapidity, const ThreeVector<Scalar>& axis) {
    FourVector<Scalar> t;
    t << std::cosh(rapidity), std::sinh(rapidity) * axis.normalized();
    return TimeVector(t);
  }

  const FourVector<Scalar>& vector() const { return t_; }
  Scalar norm() const { return std::sqrt(minkowski_dot(t_, t_)); }
  FourVector<Scalar> unit() const { return t_ / norm(); }

 private:
  FourVector<Scalar> t_;
};

/// Pure boost B with B (1,0,0,0) = u for a unit future timelike u.
template <typename Derived>
LorentzMatrix<typename Derived::Scalar> boost_from_rest(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  LorentzMatrix<Scalar> b;
  const ThreeVector<Scalar> p = u.template tail<3>();
  b(0, 0) = u(0);
  b.template block<1, 3>(0, 1) = p.transpose();
  b.template block<3, 1>(1, 0) = p;
  b.template block<3, 3>(1, 1) =
      Eigen::Matrix<Scalar, 3, 3>::Identity() + p * p.transpose() / (Scalar(1) + u(0));
  return b;
}

/// Point v = (sqrt(1 + rho^2), rho xhat) on the unit future hyperboloid.
template <typename Scalar>
class HyperboloidPoint {
 public:
  HyperboloidPoint(Scalar rho, const ThreeVector<Scalar>& direction) : rho_(rho) {
    if (!(rho >= Scalar(0)) || !std::isfinite(rho))
      throw InvalidArgument("hyperboloid rho must be finite and non-negative");
    const Scalar n = direction.norm();
    unit_ = n > Scalar(0) ? ThreeVector<Scalar>(direction / n) : ThreeVector<Scalar>::UnitZ();
  }

  static HyperboloidPoint from_vector(const FourVector<Scalar>& v) {
    if (std::abs(minkowski_dot(v, v) - Scalar(1)) > Scalar(1e-10) || !(v(0) > Scalar(0)))
      throw InvalidArgument("vector is not on the unit future hyperboloid");
    return HyperboloidPoint(v.template tail<3>().norm(), v.template tail<3>());
  }

  static HyperboloidPoint at_rest() { return HyperboloidPoint(Scalar(0), ThreeVector<Scalar>::UnitZ()); }

  Scalar rho() const { return rho_; }
  const ThreeVector<Scalar>& unit() const { return unit_; }
  FourVector<Scalar> vector() const {
    FourVector<Scalar> v;
    v << std::sqrt(Scalar(1) + rho_ * rho_), rho_ * unit_;
    return v;
  }

 private:
  Scalar rho_;
  ThreeVector<Scalar> unit_;
};

enum class Branch { retarded, advanced };

/// (u, r, xhat) with u = t - r on the retarded branch, u = t + r on the
/// advanced branch.
template <typename Scalar>
struct RetardedCoords {
  Scalar u;
  Scalar r;
  ThreeVector<Scalar> unit;
  Branch branch;

  /// Stereographic coordinate z = (x + i y) / (1 + z-component), i.e. the
  /// projection from the south pole.
  std::complex<Scalar> stereographic() const {
    return std::complex<Scalar>(unit(0), unit(1)) / (Scalar(1) + unit(2));
  }
};

template <typename Scalar>
std::complex<Scalar> stereographic(const ThreeVector<Scalar>& unit) {
  return std::complex<Scalar>(unit(0), unit(1)) / (Scalar(1) + unit(2));
}

template <typename Scalar>
ThreeVector<Scalar> from_stereographic(std::complex<Scalar> z) {
  const Scalar zz = std::norm(z);
  return ThreeVector<Scalar>(Scalar(2) * z.real(), Scalar(2) * z.imag(), Scalar(1) - zz) /
         (Scalar(1) + zz);
}

/// gamma_{z zbar} = (1 + z zbar)^-2 for the round metric 2 gamma dz dzbar.
template <typename Scalar>
Scalar sphere_metric_factor(std::complex<Scalar> z) {
  const Scalar q = Scalar(1) + std::norm(z);
  return Scalar(1) / (q * q);
}

/// x = R l + s t / (t.l)
template <typename Scalar>
SpacetimePoint<Scalar> rsl_point(Scalar R, Scalar s, const NullDirection<Scalar>& l,
                                 const TimeVector<Scalar>& t) {
  if (R < Scalar(0)) throw InvalidArgument("R must be non-negative");
  const FourVector<Scalar> lv = l.vector();
  const Scalar tl = minkowski_dot(t.vector(), lv);
  if (std::abs(tl) < Scalar(1e-14)) throw DegenerateDirection("t.l vanishes");
  return SpacetimePoint<Scalar>(FourVector<Scalar>(R * lv + (s / tl) * t.vector()));
}

template <typename Scalar>
RetardedCoords<Scalar> to_retarded(const SpacetimePoint<Scalar>& x, Branch branch) {
  const Scalar r = x.radius();
  if (!(r > Scalar(0))) throw OriginError("sphere point undefined at r = 0");
  const Scalar u = branch == Branch::retarded ? x.time() - r : x.time() + r;
  return {u, r, ThreeVector<Scalar>(x.spatial() / r), branch};
}

template <typename Scalar>
SpacetimePoint<Scalar> from_retarded(const RetardedCoords<Scalar>& c) {
  const Scalar t = c.branch == Branch::retarded ? c.u + c.r : c.u - c.r;
  FourVector<Scalar> x;
  x << t, c.r * c.unit;
  return SpacetimePoint<Scalar>(x);
}

template <typename Scalar>
struct HyperbolicCoords {
  Scalar tau;
  HyperboloidPoint<Scalar> point;
};

template <typename Scalar>
HyperbolicCoords<Scalar> to_hyperbolic(const SpacetimePoint<Scalar>& x) {
  const Scalar t = x.time();
  const Scalar r = x.radius();
  if (!(t > r)) throw OutsideLightCone("point is not inside the future light cone");
  // (t - r)(t + r) keeps precision close to the cone.
  const Scalar tau = std::sqrt((t - r) * (t + r));
  const ThreeVector<Scalar> dir = r > Scalar(0) ? ThreeVector<Scalar>(x.spatial() / r)
                                                : ThreeVector<Scalar>::UnitZ();
  return {tau, HyperboloidPoint<Scalar>(r / tau, dir)};
}

template <typename Scalar>
SpacetimePoint<Scalar> from_hyperbolic(Scalar tau, const HyperboloidPoint<Scalar>& h) {
  return SpacetimePoint<Scalar>(FourVector<Scalar>(tau * h.vector()));
}

/// Orthonormal pair spanning the tangent plane of the unit sphere at n.
template <typename Scalar>
std::pair<ThreeVector<Scalar>, ThreeVector<Scalar>> tangent_basis(const ThreeVector<Scalar>& n) {
  const ThreeVector<Scalar> helper = std::abs(n(2)) < Scalar(0.9) ? ThreeVector<Scalar>::UnitZ()
                                                                  : ThreeVector<Scalar>::UnitX();
  ThreeVector<Scalar> e1 = helper.cross(n).normalized();
  ThreeVector<Scalar> e2 = n.cross(e1);
  return {e1, e2};
}

/// Rotation taking the z axis to the unit vector n.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> frame_with_pole(const ThreeVector<Scalar>& n) {
  const auto [e1, e2] = tangent_basis(n);
  Eigen::Matrix<Scalar, 3, 3> m;
  m.col(0) = e1;
  m.col(1) = e2;
  m.col(2) = n;
  return m;
}

}  // namespace asymp

#endif  // ASYMP_GEOMETRY_HPP
