#include "asymp/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace asymp {

double real_spherical_harmonic(int l, int m, const Vector3& unit) {
  if (l < 0 || std::abs(m) > l) throw InvalidArgument("invalid spherical harmonic index");
  const Vector3 n = unit.normalized();
  const double theta = std::acos(std::clamp(n(2), -1.0, 1.0));
  const double phi = std::atan2(n(1), n(0));
  const unsigned am = static_cast<unsigned>(std::abs(m));
  // std::sph_legendre includes the (-1)^m phase; undo it.
  const double sign = (am % 2 == 0) ? 1.0 : -1.0;
  const double base = sign * std::sph_legendre(static_cast<unsigned>(l), am, theta);
  if (m == 0) return base;
  if (m > 0) return std::numbers::sqrt2 * base * std::cos(m * phi);
  return std::numbers::sqrt2 * base * std::sin(am * phi);
}

namespace {

Vector3 on_sphere(const Vector3& unit, const Vector3& e, double step) {
  return (unit + step * e).normalized();
}

template <typename F>
auto central_4th(F&& f, double h) {
  return (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
}

}  // namespace

Vector3 surface_gradient(const SphereFunction& f, const Vector3& unit, double h) {
  const auto [e1, e2] = tangent_basis(unit);
  const auto along = [&](const Vector3& e) {
    return central_4th([&](double a) { return f(on_sphere(unit, e, std::tan(a))); }, h);
  };
  return e1 * along(e1) + e2 * along(e2);
}

double surface_divergence(const SphereVectorField& w, const Vector3& unit, double h) {
  const auto [e1, e2] = tangent_basis(unit);
  const auto along = [&](const Vector3& e) {
    return central_4th([&](double a) { return e.dot(w(on_sphere(unit, e, std::tan(a)))); }, h);
  };
  return along(e1) + along(e2);
}

}  // namespace asymp
