#ifndef ASYMP_SPHERE_HPP
#define ASYMP_SPHERE_HPP

#include <functional>

#include "asymp/geometry.hpp"

namespace asymp {

using SphereFunction = std::function<double(const Vector3&)>;
using SphereVectorField = std::function<Vector3(const Vector3&)>;

/// Orthonormal real spherical harmonic. m > 0 carries cos(m phi), m < 0
/// carries sin(|m| phi); no Condon-Shortley phase on the real combinations.
double real_spherical_harmonic(int l, int m, const Vector3& unit);

/// Tangential gradient of f on the unit sphere, 4th-order central
/// differences along great circles with step h.
Vector3 surface_gradient(const SphereFunction& f, const Vector3& unit, double h = 1e-3);

/// Surface divergence of a tangent field w (w(n).n = 0 assumed), same
/// stencil as surface_gradient.
double surface_divergence(const SphereVectorField& w, const Vector3& unit, double h = 1e-3);

/// Projection of a 3-vector onto the tangent plane at unit.
inline Vector3 tangential(const Vector3& a, const Vector3& unit) {
  return a - unit * unit.dot(a);
}

}  // namespace asymp

#endif  // ASYMP_SPHERE_HPP
