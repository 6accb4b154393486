#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "asymp/quadrature.hpp"
#include "asymp/sphere.hpp"

using namespace asymp;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent sphere oracle: midpoint rule in (cos theta, phi), no shared code
// with the Gauss-Legendre grid.
template <typename F>
double midpoint_sphere(F&& f, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = -1.0 + (i + 0.5) * 2.0 / n;
    const double s = std::sqrt(1.0 - c * c);
    for (int j = 0; j < 2 * n; ++j) {
      const double phi = (j + 0.5) * kPi / n;
      sum += f(Vector3(s * std::cos(phi), s * std::sin(phi), c));
    }
  }
  return sum * (2.0 / n) * (kPi / n);
}

}  // namespace

TEST(GaussLegendre, LowOrderNodes) {
  const auto r = gauss_legendre<double>(2);
  EXPECT_NEAR(r.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
  const auto r1 = gauss_legendre<double>(1);
  EXPECT_NEAR(r1.nodes[0], 0.0, 1e-15);
  EXPECT_NEAR(r1.weights[0], 2.0, 1e-15);
}

TEST(GaussLegendre, PolynomialExactness) {
  for (int n : {3, 8, 20, 40}) {
    const auto r = gauss_legendre<double>(n);
    for (int k = 0; k < 2 * n; ++k) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(sum, exact, 1e-13) << "n=" << n << " k=" << k;
    }
  }
}

TEST(GaussLegendre, LongDoubleInstantiation) {
  const auto r = gauss_legendre<long double>(6);
  long double sum = 0;
  for (auto w : r.weights) sum += w;
  EXPECT_NEAR(static_cast<double>(sum), 2.0, 1e-15);
}

TEST(SphereGrid, WeightsAndOrthogonality) {
  const auto grid = build_sphere_grid(16);
  double total = 0.0;
  for (double w : grid.weights) {
    EXPECT_GT(w, 0.0);
    total += w;
  }
  EXPECT_NEAR(total, 4 * kPi, 1e-12);
  const double y20 = grid.integrate([](const Vector3& n) { return real_spherical_harmonic(2, 0, n); });
  EXPECT_NEAR(y20, 0.0, 1e-12);
  const double moment = grid.integrate([](const Vector3& n) { return n(2) * n(2); });
  EXPECT_NEAR(moment, 4 * kPi / 3, 1e-12);
}

TEST(SphereGrid, ExactForHarmonicsUpToOrder) {
  const int order = 12;
  const auto grid = build_sphere_grid(order);
  for (int l = 1; l <= order; ++l) {
    for (int m = -l; m <= l; ++m) {
      const double v = grid.integrate([&](const Vector3& n) { return real_spherical_harmonic(l, m, n); });
      EXPECT_LT(std::abs(v), 1e-10) << l << "," << m;
    }
  }
  // Orthonormality of products within the exactness degree.
  const double norm = grid.integrate([](const Vector3& n) {
    const double y = real_spherical_harmonic(3, -2, n);
    return y * y;
  });
  EXPECT_NEAR(norm, 1.0, 1e-12);
}

TEST(SphereGrid, RejectsSmallOrder) {
  EXPECT_THROW(build_sphere_grid(1), InvalidArgument);
}

TEST(PairwiseSum, DeterministicAndAccurate) {
  std::vector<double> v(10001, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 1000.1, 1e-10);
  EXPECT_EQ(pairwise_sum(v), pairwise_sum(v));
  std::vector<Vector4> vecs(17, Vector4(1, 2, 3, 4));
  EXPECT_EQ(pairwise_sum(vecs), Vector4(17, 34, 51, 68));
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(NullDirections, ConstantOnRestSection) {
  const auto grid = build_sphere_grid(16);
  const auto f = [](const Vector4& l) { return 1.0 / (l(0) * l(0)); };
  EXPECT_NEAR(integrate_null_directions(f, grid, TimeVector<double>::rest()), 4 * kPi, 1e-12);
  const auto t = TimeVector<double>::boosted(0.5, Vector3(0.3, 0.1, -1));
  EXPECT_NEAR(integrate_null_directions(f, build_sphere_grid(48), t), 4 * kPi, 1e-8);
}

TEST(NullDirections, InverseSquareOfTimelikeDot) {
  const auto grid = build_sphere_grid(40);
  const auto tp = TimeVector<double>::boosted(0.8, Vector3(1, 2, 0)).vector();
  const auto f = [&](const Vector4& l) {
    const double d = minkowski_dot(tp, l);
    return 1.0 / (d * d);
  };
  EXPECT_NEAR(integrate_null_directions(f, grid, TimeVector<double>::rest()), 4 * kPi, 1e-9);
}

TEST(NullDirections, IndependentOfSection) {
  const auto grid = build_sphere_grid(48);
  const Vector4 a = TimeVector<double>::boosted(0.4, Vector3(0, 0, 1)).vector();
  const auto f = [&](const Vector4& l) {
    const double d = minkowski_dot(a, l);
    return (l(1) * l(3)) / (l(0) * d * d * d);  // degree -2
  };
  std::vector<double> values;
  for (double eta : {0.0, 0.2, 0.4, 0.6, 0.8}) {
    values.push_back(
        integrate_null_directions(f, grid, TimeVector<double>::boosted(eta, Vector3(1, -1, 0.5))));
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  EXPECT_LT(*hi - *lo, 1e-8 * std::max(1.0, std::abs(values[0])));
}

TEST(NullDirections, RejectsWrongHomogeneity) {
  const auto grid = build_sphere_grid(8);
  const auto f = [](const Vector4& l) { return 1.0 / l(0); };
  EXPECT_THROW(integrate_null_directions(f, grid, TimeVector<double>::rest()),
               HomogeneityViolation);
}

TEST(LineQuadrature, KnownIntegrals) {
  const auto gauss = [](double s) { return std::exp(-s * s); };
  EXPECT_NEAR(integrate_s_line(gauss), std::sqrt(kPi), 1e-12);
  LineQuadrature lorentz;
  lorentz.falloff = 1.0;
  EXPECT_NEAR(integrate_s_line([](double s) { return 1.0 / (1.0 + s * s); }, lorentz), kPi, 1e-10);
  // d/ds (1 - tanh s)/2 integrates to chi(+inf) - chi(-inf) = -1.
  const auto step_rate = [](double s) {
    const double c = std::cosh(s);
    return -0.5 / (c * c);
  };
  EXPECT_NEAR(integrate_s_line(step_rate), -1.0, 1e-12);
}

TEST(LineQuadrature, SlowAlgebraicTail) {
  LineQuadrature q;
  q.falloff = 0.5;
  // (1+s^2)^(-3/4), integral = sqrt(pi) Gamma(1/4) / Gamma(3/4)
  const double exact = std::sqrt(kPi) * std::tgamma(0.25) / std::tgamma(0.75);
  EXPECT_NEAR(integrate_s_line([](double s) { return std::pow(1 + s * s, -0.75); }, q), exact,
              1e-8);
}

TEST(LineQuadrature, CompositeScheme) {
  LineQuadrature q;
  q.scheme = LineScheme::truncated_composite;
  EXPECT_NEAR(integrate_s_line([](double s) { return std::exp(-s * s) * std::cos(3 * s); }, q),
              std::sqrt(kPi) * std::exp(-9.0 / 4.0), 1e-12);
}

TEST(LineQuadrature, RefusesNonPositiveFalloff) {
  LineQuadrature q;
  q.falloff = 0.0;
  EXPECT_THROW(integrate_s_line([](double) { return 0.0; }, q), InvalidArgument);
}

TEST(LineQuadrature, NonIntegrableFails) {
  LineQuadrature q;
  q.falloff = 1.0;
  q.max_levels = 6;
  EXPECT_THROW(integrate_s_line([](double s) { return std::cos(s); }, q), NonConvergence);
}

TEST(LineQuadrature, HalfLines) {
  const auto e = [](double s) { return std::exp(-s); };
  EXPECT_NEAR(integrate_half_line(e, 0.0, true), 1.0, 1e-12);
  const auto r = [](double s) { return 1.0 / (s * s); };
  LineQuadrature q;
  q.falloff = 1.0;
  EXPECT_NEAR(integrate_half_line(r, -2.0, false, q), 0.5, 1e-10);
}

TEST(ExtractLimit, PolynomialsInInverseRadius) {
  const std::vector<double> r3{10, 20, 40};
  const auto a = extract_limit([](double R) { return 7 + 3 / R; }, r3);
  EXPECT_NEAR(a.value, 7.0, 1e-13);
  EXPECT_EQ(a.samples.size(), 3u);
  const std::vector<double> r4{10, 20, 40, 80};
  const auto b = extract_limit([](double R) { return 2 + 1 / R + 5 / (R * R); }, r4);
  EXPECT_NEAR(b.value, 2.0, 1e-10);
  const auto c = extract_limit([](double) { return 4.25; }, r3);
  EXPECT_EQ(c.value, 4.25);
  EXPECT_EQ(c.error_estimate, 0.0);
  EXPECT_FALSE(c.diverging);
}

TEST(ExtractLimit, FlagsDivergenceAndValidates) {
  const std::vector<double> r{1, 2, 4, 8};
  EXPECT_TRUE(extract_limit([](double R) { return R * R * R * R; }, r).diverging);
  const std::vector<double> bad{10, 5};
  EXPECT_THROW(extract_limit([](double) { return 0.0; }, bad), InvalidArgument);
}

TEST(SingularAngular, ZeroAndLinearity) {
  const auto grid = build_sphere_grid(24);
  const Vector3 x = Vector3(0.2, 0.3, 0.9).normalized();
  EXPECT_EQ(integrate_singular_angular([](const Vector3&) { return 0.0; }, x, grid), 0.0);
  const auto n1 = [&](const Vector3& y) { return y(0) - x(0) * y.dot(x); };
  const auto n2 = [&](const Vector3& y) { return 1.0 - y.dot(x); };
  const double a = integrate_singular_angular(n1, x, grid);
  const double b = integrate_singular_angular(n2, x, grid);
  const double ab = integrate_singular_angular(
      [&](const Vector3& y) { return 2.5 * n1(y) - 0.5 * n2(y); }, x, grid);
  EXPECT_NEAR(ab, 2.5 * a - 0.5 * b, 1e-10);
  // (1 - cos)/(1 - cos) integrates to 4 pi.
  EXPECT_NEAR(b, 4 * kPi, 1e-12);
}

TEST(SingularAngular, MatchesDenseOracle) {
  const auto grid = build_sphere_grid(24);
  const Vector3 x = Vector3::UnitZ();
  // num = y_x^2 sin-weighted: vanishes at the pole; integrand bounded.
  const auto num = [](const Vector3& y) { return y(0) * y(0) + 0.3 * y(1); };
  const double got = integrate_singular_angular(num, x, grid);
  // Closed form: int (1 - z^2) cos^2 phi / (1 - z) = pi int (1 + z) dz = 2 pi.
  EXPECT_NEAR(got, 2 * kPi, 1e-10);
  const double oracle = midpoint_sphere(
      [&](const Vector3& y) { return num(y) / (1.0 - y(2)); }, 400);
  EXPECT_NEAR(got, oracle, 1e-3);
}

TEST(SingularAngular, NonVanishingNumeratorFails) {
  const auto grid = build_sphere_grid(8);
  EXPECT_THROW(integrate_singular_angular([](const Vector3&) { return 1.0; }, Vector3::UnitZ(), grid),
               SubtractionFailure);
  EXPECT_THROW(integrate_singular_angular([](const Vector3&) { return NAN; }, Vector3::UnitZ(), grid),
               SubtractionFailure);
}
