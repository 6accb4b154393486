#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "asymp/geometry.hpp"
#include "asymp/sphere.hpp"

using namespace asymp;

namespace {

Vector3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

}  // namespace

TEST(MinkowskiDot, BasicValues) {
  const Vector4 t(1, 0, 0, 0);
  const Vector4 l(1, 0, 0, 1);
  EXPECT_DOUBLE_EQ(minkowski_dot(t, l), 1.0);
  EXPECT_DOUBLE_EQ(minkowski_dot(l, l), 0.0);
  const Vector4 v(std::sqrt(2.0), 1, 0, 0);
  EXPECT_NEAR(minkowski_dot(v, v), 1.0, 1e-15);
}

TEST(MinkowskiDot, SymmetricAndBilinear) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 200; ++i) {
    Vector4 a, b, c;
    for (int k = 0; k < 4; ++k) {
      a(k) = u(rng);
      b(k) = u(rng);
      c(k) = u(rng);
    }
    const double alpha = u(rng), beta = u(rng);
    EXPECT_NEAR(minkowski_dot(a, b), minkowski_dot(b, a), 1e-14);
    const Vector4 combo = alpha * a + beta * b;
    EXPECT_NEAR(minkowski_dot(combo, c), alpha * minkowski_dot(a, c) + beta * minkowski_dot(b, c),
                1e-12);
  }
}

TEST(NullDirection, CanonicalFormAndRescaling) {
  NullDirection<double> l(Vector3(0, 3, 4));
  EXPECT_NEAR(l.unit().norm(), 1.0, 1e-15);
  EXPECT_EQ(minkowski_dot(l.canonical(), l.canonical()), 0.0);
  const auto scaled = l.rescaled(2.5);
  EXPECT_DOUBLE_EQ(scaled.scale(), 2.5);
  EXPECT_EQ(scaled.canonical(), l.canonical());
  EXPECT_NEAR((scaled.vector() - 2.5 * l.canonical()).norm(), 0.0, 1e-15);
  EXPECT_THROW(NullDirection<double>(Vector3::Zero()), InvalidArgument);
  EXPECT_THROW(l.rescaled(-1.0), InvalidArgument);
}

TEST(NullDirection, FromVectorRejectsNonNull) {
  EXPECT_THROW(NullDirection<double>::from_vector(Vector4(1, 0.5, 0, 0)), InvalidArgument);
  EXPECT_THROW(NullDirection<double>::from_vector(Vector4(-1, 1, 0, 0)), InvalidArgument);
  const auto l = NullDirection<double>::from_vector(Vector4(2, 0, 2, 0));
  EXPECT_DOUBLE_EQ(l.scale(), 2.0);
}

TEST(TimeVector, Validation) {
  EXPECT_THROW(TimeVector<double>(Vector4(1, 2, 0, 0)), InvalidArgument);
  EXPECT_THROW(TimeVector<double>(Vector4(-1, 0, 0, 0)), InvalidArgument);
  const auto t = TimeVector<double>::boosted(0.7, Vector3(1, 1, 0));
  EXPECT_NEAR(t.norm(), 1.0, 1e-14);
}

TEST(BoostFromRest, IsLorentzAndMapsRestFrame) {
  const auto t = TimeVector<double>::boosted(1.3, Vector3(0.2, -0.5, 0.8));
  const Eigen::Matrix4d b = boost_from_rest(t.unit());
  const Eigen::Matrix4d eta = Eigen::Vector4d(1, -1, -1, -1).asDiagonal();
  EXPECT_LT((b.transpose() * eta * b - eta).norm(), 1e-12);
  EXPECT_LT((b.col(0) - t.unit()).norm(), 1e-14);
}

TEST(RslPoint, DirectSubstitution) {
  const NullDirection<double> l(Vector3::UnitZ());
  const auto t = TimeVector<double>::rest();
  const auto x = rsl_point(2.0, 3.0, l, t);
  EXPECT_EQ(x.vector(), Vector4(5, 0, 0, 2));
  EXPECT_EQ(rsl_point(0.0, 0.0, l, t).vector(), Vector4::Zero());
}

TEST(RslPoint, RetardedIdentification) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(0.1, 50), s(-20, 20);
  const auto t = TimeVector<double>::rest();
  for (int i = 0; i < 100; ++i) {
    const Vector3 n = random_unit(rng);
    const double R = r(rng), S = s(rng);
    const auto x = rsl_point(R, S, NullDirection<double>(n), t);
    EXPECT_NEAR(x.time(), R + S, 1e-12 * (R + std::abs(S)));
    EXPECT_NEAR(x.radius(), R, 1e-12 * R);
    const auto c = to_retarded(x, Branch::retarded);
    EXPECT_NEAR(c.u, S, 1e-11 * (R + std::abs(S)));
    EXPECT_NEAR(c.r, R, 1e-12 * R);
    EXPECT_LT((c.unit - n).norm(), 1e-12);
  }
}

TEST(RslPoint, DegenerateDirectionError) {
  // A spacelike "t" is rejected by TimeVector; exercise the guard with an
  // extremely small rescaling of l instead.
  const NullDirection<double> l(Vector3::UnitX(), 1e-15);
  EXPECT_THROW(rsl_point(1.0, 1.0, l, TimeVector<double>::rest()), DegenerateDirection);
}

TEST(Retarded, ExamplesAndErrors) {
  const SpacetimePoint<double> x(5, 0, 0, 2);
  const auto c = to_retarded(x, Branch::retarded);
  EXPECT_DOUBLE_EQ(c.u, 3.0);
  EXPECT_DOUBLE_EQ(c.r, 2.0);
  EXPECT_EQ(c.unit, Vector3::UnitZ());
  const auto adv = to_retarded(x, Branch::advanced);
  EXPECT_DOUBLE_EQ(adv.u, 7.0);
  EXPECT_DOUBLE_EQ(to_retarded(SpacetimePoint<double>(2, 0, 2, 0), Branch::retarded).u, 0.0);
  EXPECT_THROW(to_retarded(SpacetimePoint<double>(1, 0, 0, 0), Branch::retarded), OriginError);
}

TEST(Retarded, RoundTripProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10, 10);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SpacetimePoint<double> x(u(rng), u(rng), u(rng), u(rng));
    for (Branch b : {Branch::retarded, Branch::advanced}) {
      const auto back = from_retarded(to_retarded(x, b));
      worst = std::max(worst, (back.vector() - x.vector()).norm() / x.vector().norm());
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Stereographic, AgreesWithUnitVector) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Vector3 n = random_unit(rng);
    if (n(2) < -0.99) continue;
    const auto z = stereographic(n);
    EXPECT_LT((from_stereographic(z) - n).norm(), 1e-12);
    const RetardedCoords<double> c{0.0, 1.0, n, Branch::retarded};
    EXPECT_LT(std::abs(c.stereographic() - z), 1e-15);
  }
}

TEST(Hyperbolic, ExamplesAndErrors) {
  const auto a = to_hyperbolic(SpacetimePoint<double>(1, 0, 0, 0));
  EXPECT_DOUBLE_EQ(a.tau, 1.0);
  EXPECT_DOUBLE_EQ(a.point.rho(), 0.0);
  const auto b = to_hyperbolic(SpacetimePoint<double>(std::sqrt(2.0) * 3.0, 0, 0, 3.0));
  EXPECT_NEAR(b.tau, 3.0, 1e-14);
  EXPECT_NEAR(b.point.rho(), 1.0, 1e-14);
  EXPECT_THROW(to_hyperbolic(SpacetimePoint<double>(1, 1, 0, 0)), OutsideLightCone);
  EXPECT_THROW(to_hyperbolic(SpacetimePoint<double>(-2, 0, 0, 0)), OutsideLightCone);
}

TEST(Hyperbolic, RoundTripProperty) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-5, 5), extra(0.01, 10);
  for (int i = 0; i < 1000; ++i) {
    const Vector3 xs(u(rng), u(rng), u(rng));
    const SpacetimePoint<double> x(xs.norm() + extra(rng), xs(0), xs(1), xs(2));
    const auto h = to_hyperbolic(x);
    const Vector4 v = h.point.vector();
    EXPECT_NEAR(minkowski_dot(v, v), 1.0, 1e-12);
    EXPECT_GE(v(0), 1.0);
    const auto back = from_hyperbolic(h.tau, h.point);
    EXPECT_LT((back.vector() - x.vector()).norm(), 1e-12 * x.vector().norm());
  }
}

TEST(HyperboloidPoint, FromVector) {
  const auto p = HyperboloidPoint<double>::from_vector(Vector4(std::sqrt(2.0), 0, 1, 0));
  EXPECT_NEAR(p.rho(), 1.0, 1e-15);
  EXPECT_EQ(p.unit(), Vector3::UnitY());
  EXPECT_THROW(HyperboloidPoint<double>::from_vector(Vector4(2, 0, 0, 0)), InvalidArgument);
  EXPECT_THROW(HyperboloidPoint<double>(-1.0, Vector3::UnitZ()), InvalidArgument);
}

TEST(SphereMetric, FactorValues) {
  EXPECT_DOUBLE_EQ(sphere_metric_factor(std::complex<double>(0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(sphere_metric_factor(std::complex<double>(1, 0)), 0.25);
}

TEST(SphereMetric, PlaneIntegralIsSphereArea) {
  // Polar coordinates on the z-plane: 2 gamma dz dzbar = 4 rho drho dphi / (1+rho^2)^2
  // after dz dzbar -> 2 dx dy. Integrate with rho = tan(a/2), a in (0, pi).
  const int n = 400;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = (i + 0.5) * std::numbers::pi / n;
    const double rho = std::tan(a / 2);
    const double drho = 0.5 / std::pow(std::cos(a / 2), 2) * std::numbers::pi / n;
    const double g = sphere_metric_factor(std::complex<double>(rho, 0));
    sum += 2.0 * g * 2.0 * rho * drho * 2.0 * std::numbers::pi;
  }
  EXPECT_NEAR(sum, 4.0 * std::numbers::pi, 1e-4);
}

TEST(Sphere, HarmonicsAndDerivatives) {
  const Vector3 n = Vector3(0.3, -0.4, 0.5).normalized();
  // Y10 = sqrt(3/4pi) cos theta
  EXPECT_NEAR(real_spherical_harmonic(1, 0, n), std::sqrt(3.0 / (4 * std::numbers::pi)) * n(2),
              1e-14);
  // Y11 = sqrt(3/4pi) x, Y1-1 = sqrt(3/4pi) y
  EXPECT_NEAR(real_spherical_harmonic(1, 1, n), std::sqrt(3.0 / (4 * std::numbers::pi)) * n(0),
              1e-14);
  EXPECT_NEAR(real_spherical_harmonic(1, -1, n), std::sqrt(3.0 / (4 * std::numbers::pi)) * n(1),
              1e-14);
  EXPECT_THROW(real_spherical_harmonic(1, 2, n), InvalidArgument);

  const auto f = [](const Vector3& x) { return x(2); };
  const Vector3 grad = surface_gradient(f, n);
  EXPECT_LT((grad - tangential(Vector3::UnitZ(), n)).norm(), 1e-10);
  // div of the gradient of x.z is the Laplacian -2 x.z
  const auto field = [](const Vector3& x) { return tangential(Vector3::UnitZ(), x); };
  EXPECT_NEAR(surface_divergence(field, n), -2.0 * n(2), 1e-10);
}
