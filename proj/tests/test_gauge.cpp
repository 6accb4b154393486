#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "asymp/gauge.hpp"

using namespace asymp;

namespace {

constexpr double kPi = std::numbers::pi;

Vector3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vector3(n(rng), n(rng), n(rng)).normalized();
}

// Closed form of (1/4 pi) int cos(theta') / (v.l')^2 for v along the z axis.
double lambda_l1_axis(double rho) {
  if (rho == 0.0) return 0.0;
  const double g = std::sqrt(1 + rho * rho);
  return (g * rho - std::asinh(rho)) / (rho * rho);
}

}  // namespace

TEST(VepsFromEps, ConstantGivesZero) {
  const auto v = veps_from_eps(GaugeScalarAsymptote::constant(3.0));
  const auto grid = build_sphere_grid(8);
  for (const auto& n : grid.nodes) EXPECT_LT(v(n).norm(), 1e-9);
}

TEST(VepsFromEps, DipoleIsTangentialProjection) {
  const GaugeScalarAsymptote e{[](const Vector3& n) { return n(2); }};
  const auto v = veps_from_eps(e);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const Vector3 n = random_unit(rng);
    const Vector4 cov = lower_index(v(n));
    EXPECT_NEAR(cov(0), 0.0, 1e-15);
    EXPECT_LT((cov.tail<3>() - (Vector3::UnitZ() - n * n(2))).norm(), 1e-10);
    EXPECT_LT(lorentz_relation_residual(e, v, n), 1e-6);
  }
}

TEST(VepsFromEps, InvariantsOnGrid) {
  const auto e = GaugeScalarAsymptote::harmonics({{1, 0, 0.5}, {2, -1, 1.0}, {3, 2, -0.7}});
  const auto v = veps_from_eps(e);
  const auto grid = build_sphere_grid(12);
  EXPECT_LT(v.transversality_defect(grid), 1e-10);
  std::vector<Vector3> pts(grid.nodes.begin(), grid.nodes.begin() + 20);
  EXPECT_LT(v.closure_defect(pts), 1e-5);
  // homogeneity degree -1 by representation
  const Vector3 n = grid.nodes[7];
  EXPECT_LT((v(Vector4(3.0 * canonical_null(n))) - v(n) / 3.0).norm(), 1e-15);
}

TEST(VepsFromEps, Linearity) {
  const auto a = GaugeScalarAsymptote::harmonic(2, 1);
  const auto b = GaugeScalarAsymptote::harmonic(1, -1);
  const GaugeScalarAsymptote c{[&](const Vector3& n) { return 2.0 * a(n) - 3.0 * b(n); }};
  const auto va = veps_from_eps(a), vb = veps_from_eps(b), vc = veps_from_eps(c);
  const Vector3 n = Vector3(0.2, 0.4, -0.5).normalized();
  EXPECT_LT((vc(n) - (2.0 * va(n) - 3.0 * vb(n))).norm(), 1e-10);
}

TEST(VepsFromEps, RejectsNonSmooth) {
  const GaugeScalarAsymptote kink{[](const Vector3& n) { return std::abs(n(0) - 0.36); }};
  EXPECT_THROW(veps_from_eps(kink), InvalidArgument);
}

TEST(EpsFromVeps, ZeroAndDipole) {
  const auto grid = build_sphere_grid(24);
  const GaugeVectorAsymptote zero{[](const Vector3&) { return Vector4::Zero().eval(); }};
  EXPECT_EQ(eps_from_veps(zero, NullDirection<double>(Vector3::UnitZ()), grid), 0.0);
  const GaugeScalarAsymptote e{[](const Vector3& n) { return n(2); }};
  EXPECT_NEAR(eps_from_veps(veps_from_eps(e), NullDirection<double>(Vector3::UnitZ()), grid), 1.0,
              1e-3);
}

TEST(EpsFromVeps, RoundTripY21) {
  const auto grid = build_sphere_grid(24);
  const auto e = GaugeScalarAsymptote::harmonic(2, 1);
  const auto v = veps_from_eps(e);
  std::mt19937_64 rng(5);
  double sup = 0.0;
  const auto dense = build_sphere_grid(40);
  for (const auto& n : dense.nodes) sup = std::max(sup, std::abs(e(n)));
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Vector3 n = random_unit(rng);
    worst = std::max(worst, std::abs(eps_from_veps(v, NullDirection<double>(n), grid) - e(n)) / sup);
  }
  EXPECT_LT(worst, 1e-3);
}

TEST(EpsFromVeps, ConstantModeIsInKernel) {
  const auto grid = build_sphere_grid(16);
  const auto v = veps_from_eps(GaugeScalarAsymptote::constant(2.0));
  EXPECT_NEAR(eps_from_veps(v, NullDirection<double>(Vector3::UnitX()), grid), 0.0, 1e-8);
}

TEST(EpsilonV2, DipoleRestAndBoosted) {
  const auto grid = build_sphere_grid(32);
  const GaugeScalarAsymptote e{[](const Vector3& n) { return n(2); }};
  const auto v = veps_from_eps(e);
  EXPECT_LT(check_epsilonV2(e, v, TimeVector<double>::rest(), grid).residual, 1e-6);
  for (double eta : {0.3, 1.0}) {
    const auto r = check_epsilonV2(e, v, TimeVector<double>::boosted(eta, Vector3::UnitZ()), grid);
    // Closed form of the left side: 2 pi (2 a b - 2 eta) / b^2, a = cosh, b = sinh.
    const double a = std::cosh(eta), b = std::sinh(eta);
    EXPECT_NEAR(r.lhs, 2 * kPi * (2 * a * b - 2 * eta) / (b * b), 1e-9);
    EXPECT_LT(r.residual, 1e-6);
  }
}

TEST(EpsilonV2, QuadrupoleBoosted) {
  const auto grid = build_sphere_grid(40);
  const auto e = GaugeScalarAsymptote::harmonic(2, 0);
  const auto r = check_epsilonV2(e, veps_from_eps(e),
                                 TimeVector<double>::boosted(0.6, Vector3(1, 0.5, 0.2)), grid);
  EXPECT_LT(r.residual, 1e-5);
}

TEST(EpsilonV2, ConstantModeIsKnownSensitive) {
  // V^eps(const) = 0: right side vanishes while the left side is 4 pi c.
  const auto grid = build_sphere_grid(16);
  const auto e = GaugeScalarAsymptote::constant(1.5);
  const auto r = check_epsilonV2(e, veps_from_eps(e), TimeVector<double>::rest(), grid);
  EXPECT_NEAR(r.lhs, 6 * kPi, 1e-12);
  EXPECT_NEAR(r.rhs, 0.0, 1e-9);
}

TEST(GreensKernel, ValueAndPositivity) {
  GreensKernel g;
  EXPECT_NEAR(g(HyperboloidPoint<double>::at_rest(), Vector3::UnitX()), 1 / (4 * kPi), 1e-16);
  const HyperboloidPoint<double> v(2.0, Vector3::UnitZ());
  const double d = std::sqrt(5.0) - 2.0 * 0.6;
  EXPECT_NEAR(g(v, Vector3(0.8, 0, 0.6)), 1 / (4 * kPi * d * d), 1e-14);
  EXPECT_GT(g(v, -Vector3::UnitZ()), 0.0);
}

TEST(LambdaH, ConstantReproduced) {
  const auto grid = build_sphere_grid(24);
  const auto e = GaugeScalarAsymptote::constant(2.5);
  for (double rho : {0.0, 0.3, 1.0, 7.0, 50.0, 400.0}) {
    EXPECT_NEAR(lambda_on_hyperboloid(e, HyperboloidPoint<double>(rho, Vector3(1, 2, 3)), grid), 2.5,
                1e-10)
        << rho;
  }
}

TEST(LambdaH, TipIsSphereAverage) {
  const auto grid = build_sphere_grid(24);
  const auto e = GaugeScalarAsymptote::harmonics({{0, 0, 1.3}, {2, 1, 0.8}});
  EXPECT_NEAR(lambda_on_hyperboloid(e, HyperboloidPoint<double>::at_rest(), grid),
              1.3 / std::sqrt(4 * kPi), 1e-12);
}

TEST(LambdaH, DipoleClosedFormAndLimit) {
  const auto grid = build_sphere_grid(24);
  const GaugeScalarAsymptote e{[](const Vector3& n) { return n(2); }};
  const Vector3 dir = Vector3(0.3, -0.1, 0.8).normalized();
  double previous = 1e300;
  for (double rho : {0.2, 1.0, 5.0, 20.0, 50.0}) {
    const double got = lambda_on_hyperboloid(e, HyperboloidPoint<double>(rho, dir), grid);
    EXPECT_NEAR(got, dir(2) * lambda_l1_axis(rho), 1e-11) << rho;
    const double gap = std::abs(got - dir(2));
    EXPECT_LT(gap, previous);
    previous = gap;
  }
  EXPECT_LT(previous, 0.05);
}

TEST(HyperboloidLaplacian, ConstantAndNonHarmonic) {
  std::vector<HyperboloidPoint<double>> pts{{0.5, Vector3(1, 0, 0)}, {1.0, Vector3(0, 1, 1)},
                                            {2.0, Vector3(1, 1, 1)}};
  EXPECT_LT(hyperboloid_laplacian_residual([](double, const Vector3&) { return 4.0; }, pts, 1e-2),
            1e-10);
  const auto rho2 = [](double rho, const Vector3&) { return rho * rho; };
  // Delta rho^2 = 6 + 8 rho^2
  EXPECT_NEAR(hyperboloid_laplacian(rho2, 1.0, Vector3::UnitZ(), 1e-2), 14.0, 1e-8);
  EXPECT_GT(hyperboloid_laplacian_residual(rho2, pts, 1e-2), 1.0);
  EXPECT_THROW(hyperboloid_laplacian(rho2, 0.0, Vector3::UnitZ(), 1e-2), StencilOutOfDomain);
  // one-sided stencil close to the tip
  EXPECT_NEAR(hyperboloid_laplacian(rho2, 0.005, Vector3::UnitZ(), 1e-2), 6.0, 1e-3);
}

TEST(HyperboloidLaplacian, GreenSmearedDipoleConvergesAtSecondOrder) {
  const auto grid = build_sphere_grid(24);
  const auto e = GaugeScalarAsymptote::harmonic(1, 0);
  const HyperboloidFunction f = [&](double rho, const Vector3& n) {
    return lambda_on_hyperboloid(e, HyperboloidPoint<double>(rho, n), grid);
  };
  std::vector<HyperboloidPoint<double>> pts{{0.7, Vector3(1, 0, 1)}, {1.5, Vector3(0, 1, 2)},
                                            {3.0, Vector3(1, -1, 0.5)}};
  const double r1 = hyperboloid_laplacian_residual(f, pts, 1e-2);
  const double r2 = hyperboloid_laplacian_residual(f, pts, 5e-3);
  EXPECT_LT(r1, 1e-3);
  EXPECT_GT(r1 / r2, 3.0);
  EXPECT_LT(r1 / r2, 5.0);
}

TEST(LorenzNoGo, Examples) {
  const auto grid = build_sphere_grid(16);
  TermSpec t;
  t.shape = ShapeSpec{SShape::tanh_down};
  t.angular.map = [](const Vector3&) { return 1.0; };
  const auto unit = make_scalar_profile({t});
  const auto r = lorenz_nogo(unit, 0.0, grid);
  EXPECT_NEAR(r.gamma_minus, -2.0, 1e-12);
  EXPECT_NEAR(r.matching_gap, 2.0, 1e-12);
  const auto zero = lorenz_nogo(make_scalar_profile({}), 1.5, grid);
  EXPECT_EQ(zero.gamma_minus, 1.5);
  EXPECT_EQ(zero.matching_gap, 0.0);
  TermSpec d;
  d.shape = ShapeSpec{SShape::tanh_down};
  d.angular.l = 1;
  EXPECT_LT(lorenz_nogo(make_scalar_profile({d}), 0.3, grid).matching_gap, 1e-12);
  TermSpec up = t;
  up.shape.kind = SShape::tanh_up;
  EXPECT_THROW(lorenz_nogo(make_scalar_profile({up}), 0.0, grid), VanishingViolation);
}
