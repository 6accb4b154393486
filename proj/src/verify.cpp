#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "asymp/cli_io.hpp"

namespace asymp {

namespace {

constexpr double kPi = std::numbers::pi;

HyperboloidPoint<double> random_velocity(std::mt19937_64& rng, double rho_max) {
  std::uniform_real_distribution<double> u(0.0, rho_max);
  std::normal_distribution<double> g(0.0, 1.0);
  return {u(rng), Vector3(g(rng), g(rng), g(rng))};
}

Vector3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return Vector3(g(rng), g(rng), g(rng)).normalized();
}

TermSpec term(SShape shape, double center, double width, int l, int m, double amp,
              Polarization pol = Polarization::grad) {
  TermSpec t;
  t.shape = {shape, center, width};
  t.angular.l = l;
  t.angular.m = m;
  t.amplitude = amp;
  t.polarization = pol;
  return t;
}

std::string describe(double x) {
  std::ostringstream o;
  o.precision(4);
  o << x;
  return o.str();
}

GaugeScalarAsymptote random_l1(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(-1.0, 1.0);
  return GaugeScalarAsymptote::harmonics({{1, -1, a(rng)}, {1, 0, a(rng)}, {1, 1, a(rng)}});
}

ScalarProfile recon_chi() {
  return make_scalar_profile({term(SShape::tanh_down, 0.2, 0.7, 2, 0, 0.8),
                              term(SShape::gaussian, -0.3, 0.9, 1, 1, 0.5),
                              term(SShape::tanh_down, 0.0, 1.0, 0, 0, 1.0)});
}

SpacetimePoint<double> random_point(std::mt19937_64& rng, double extent) {
  std::uniform_real_distribution<double> u(-extent, extent);
  return {u(rng), u(rng), u(rng), u(rng)};
}

double eps_roundtrip(int order, std::string& note) {
  const auto grid = build_sphere_grid(order);
  const auto dense = build_sphere_grid(40);
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> a(-1.0, 1.0);
  double worst = 0.0;
  for (int l = 1; l <= 4; ++l) {
    std::vector<std::tuple<int, int, double>> terms;
    for (int m = -l; m <= l; ++m) terms.emplace_back(l, m, a(rng));
    const auto e = GaugeScalarAsymptote::harmonics(terms);
    const auto v = veps_from_eps(e);
    double sup = 0.0;
    for (const auto& n : dense.nodes) sup = std::max(sup, std::abs(e(n)));
    for (int i = 0; i < 12; ++i) {
      const Vector3 n = random_unit(rng);
      worst = std::max(worst, std::abs(eps_from_veps(v, NullDirection<double>(n), grid) - e(n)) / sup);
    }
  }
  const double kernel =
      std::abs(eps_from_veps(veps_from_eps(GaugeScalarAsymptote::constant(1.0)), NullDirection<double>(Vector3::UnitX()), grid));
  note = "l=1..4, constant mode maps to " + describe(kernel);
  return std::max(worst, kernel);
}

double epsilon_v2(int order, std::string& note) {
  const auto grid = build_sphere_grid(std::max(order, 40));
  const GaugeScalarAsymptote dipole{[](const Vector3& n) { return n(2); }};
  const auto q = GaugeScalarAsymptote::harmonic(2, 0);
  const double r1 = check_epsilonV2(dipole, veps_from_eps(dipole), TimeVector<double>::rest(), grid).residual;
  const double r2 = check_epsilonV2(dipole, veps_from_eps(dipole),
                                    TimeVector<double>::boosted(1.0, Vector3::UnitZ()), grid).residual;
  const double r3 = check_epsilonV2(q, veps_from_eps(q), TimeVector<double>::boosted(0.6, Vector3(1, 0.5, 0.2)),
                                    grid).residual;
  note = "l >= 1 only; the constant mode is excluded";
  return std::max({r1, r2, r3});
}

double green_constant(int order, std::string&) {
  const auto grid = build_sphere_grid(order);
  const auto e = GaugeScalarAsymptote::constant(2.5);
  double worst = 0.0;
  for (double rho : {0.0, 0.3, 1.0, 7.0, 50.0, 400.0})
    worst = std::max(worst, std::abs(lambda_on_hyperboloid(e, HyperboloidPoint<double>(rho, Vector3(1, 2, 3)), grid) - 2.5));
  return worst / 2.5;
}

double green_limit(int order, std::string& note) {
  const auto grid = build_sphere_grid(order);
  const GaugeScalarAsymptote e{[](const Vector3& n) { return n(2); }};
  const Vector3 dir = Vector3(0.3, -0.1, 0.8).normalized();
  double previous = INFINITY;
  for (double rho : {1.0, 5.0, 20.0, 50.0}) {
    const double gap = std::abs(lambda_on_hyperboloid(e, HyperboloidPoint<double>(rho, dir), grid) - dir(2));
    if (!(gap < previous)) {
      note = "gap not decreasing at rho=" + describe(rho);
      return INFINITY;
    }
    previous = gap;
  }
  note = "gap at rho=50";
  return previous;
}

double laplacian_convergence(int order, std::string& note) {
  const auto grid = build_sphere_grid(order);
  const auto e = GaugeScalarAsymptote::harmonic(1, 0);
  const HyperboloidFunction f = [&](double rho, const Vector3& n) {
    return lambda_on_hyperboloid(e, HyperboloidPoint<double>(rho, n), grid);
  };
  const std::vector<HyperboloidPoint<double>> pts{{0.7, Vector3(1, 0, 1)}, {1.5, Vector3(0, 1, 2)},
                                                  {3.0, Vector3(1, -1, 0.5)}};
  const double r1 = hyperboloid_laplacian_residual(f, pts, 1e-2);
  const double r2 = hyperboloid_laplacian_residual(f, pts, 5e-3);
  const double rate = std::log2(r1 / r2);
  note = "observed order " + describe(rate) + ", residual " + describe(r1);
  return std::abs(rate - 2.0);
}

double t_independence(int order, std::string& note) {
  const auto grid = build_sphere_grid(std::max(order, 48));
  const Vector4 a = TimeVector<double>::boosted(0.4, Vector3(0, 0, 1)).vector();
  const Vector4 b = TimeVector<double>::boosted(0.7, Vector3(1, 1, 0)).vector();
  const std::array<NullFunction, 2> fs{
      [&](const Vector4& l) {
        const double d = minkowski_dot(a, l);
        return (l(1) * l(3)) / (l(0) * d * d * d);
      },
      [&](const Vector4& l) {
        const double d = minkowski_dot(b, l);
        return 1.0 / (d * d);
      }};
  double worst = 0.0;
  for (const auto& f : fs) {
    std::vector<double> values;
    for (double eta : {0.0, 0.2, 0.4, 0.6, 0.8})
      values.push_back(integrate_null_directions(f, grid, TimeVector<double>::boosted(eta, Vector3(1, -1, 0.5))));
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    worst = std::max(worst, (*hi - *lo) / std::max(1.0, std::abs(values[0])));
  }
  note = "5 sections";
  return worst;
}

double recon_wave(int order, std::string& note) {
  const auto phi = scalar_field(recon_chi(), build_sphere_grid(std::max(order, 40)));
  const std::function<double(const SpacetimePoint<double>&)> f = phi.evaluate;
  std::mt19937_64 rng(7);
  double coarse = 0.0, fine = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto x = random_point(rng, 1.5);
    coarse = std::max(coarse, std::abs(dalembertian_fd(f, x, 0.1, 2)));
    fine = std::max(fine, std::abs(dalembertian_fd(f, x, 0.05, 2)));
  }
  const double rate = std::log2(coarse / fine);
  note = "observed order " + describe(rate);
  return std::abs(rate - 2.0);
}

double recon_asymptote(int, std::string&) {
  const auto chi = recon_chi();
  const std::array<double, 6> radii{20, 40, 80, 160, 320, 640};
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const auto x = random_point(rng, 1.0);
    const Vector3 l0 = random_unit(rng);
    const auto est = scalar_asymptote(chi, x, l0, radii);
    if (est.diverging) return INFINITY;
    const double expected = chi.value(minkowski_dot(x.vector(), canonical_null(l0)), l0);
    worst = std::max(worst, std::abs(est.value - expected) / std::max(std::abs(expected), 1e-2));
  }
  return worst;
}

double recon_consistency(int order, std::string&) {
  const auto chi = recon_chi();
  const auto cp = chi_prime_from_chi(chi);
  const auto grid = build_sphere_grid(std::max(order, 30));
  std::mt19937_64 rng(12);
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto x = random_point(rng, 2.0);
    const double a = scalar_from_chi(chi, x, grid);
    worst = std::max(worst, std::abs(a - scalar_from_chi_prime(cp, x, grid)));
    scale = std::max(scale, std::abs(a));
  }
  return worst / std::max(scale, 1e-300);
}

double fourier_zero_mode(int, std::string& note) {
  std::vector<TermSpec> spec{term(SShape::tanh_down, 0.3, 0.7, 1, 1, 0.8),
                             term(SShape::gaussian, -0.2, 1.2, 2, 0, 0.5),
                             term(SShape::rational, 0.4, 1.5, 0, 0, 0.3),
                             term(SShape::tanh_down, -0.5, 1.3, 0, 0, 0.6)};
  spec[2].shape.power = 1.5;
  const auto chi = make_scalar_profile(spec);
  std::mt19937_64 rng(13);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const NullDirection<double> l(random_unit(rng), 0.5 + i * 0.4);
    const double expected = -chi.value_at(-1e300, l.vector()) / (2 * kPi);
    worst = std::max(worst, std::abs(fourier_soft_charge(chi, l).value - expected));
  }
  note = "tanh, gaussian, rational shapes";
  return worst;
}

struct CornerCase {
  GaugeScalarAsymptote e;
  GaugeVectorAsymptote v;
  CornerData c;
};

std::vector<CornerCase> corner_cases(int n) {
  std::mt19937_64 rng(15);
  std::vector<CornerCase> out;
  for (int i = 0; i < n; ++i) {
    const auto s = random_em_scenario(rng, true, i % 3 != 0);
    const auto e = random_l1(rng);
    out.push_back({e, veps_from_eps(e), corner_data(s, derive_f0_f2(s))});
  }
  return out;
}

double corner_antisymmetry(int order, std::string&) {
  const auto grid = build_sphere_grid(std::max(order, 16));
  const auto cs = corner_cases(4);
  double worst = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i; j < cs.size(); ++j) {
      const auto ab = corner_pairing(cs[i].e, cs[i].v, cs[i].c, cs[j].e, cs[j].v, cs[j].c, grid);
      const auto ba = corner_pairing(cs[j].e, cs[j].v, cs[j].c, cs[i].e, cs[i].v, cs[i].c, grid);
      worst = std::max({worst, std::abs(ab.her_value + ba.her_value), std::abs(ab.stro_value + ba.stro_value)});
    }
  return worst;
}

double corner_ratio(int order, std::string& note) {
  const auto grid = build_sphere_grid(std::max(order, 16));
  const auto cs = corner_cases(20);
  std::vector<double> ratios;
  for (std::size_t k = 0; k + 1 < cs.size(); k += 2) {
    const auto r = corner_pairing(cs[k].e, cs[k].v, cs[k].c, cs[k + 1].e, cs[k + 1].v, cs[k + 1].c, grid);
    if (!r.normalisation_ratio) {
      note = "degenerate pair";
      return INFINITY;
    }
    ratios.push_back(*r.normalisation_ratio);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  note = "ratio " + describe(ratios.front()) + " over " + std::to_string(ratios.size()) + " pairs";
  return (*hi - *lo) / std::abs(ratios.front());
}

double lorenz_nogo_check(int order, std::string& note) {
  const auto grid = build_sphere_grid(std::max(order, 16));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> a(-1.0, 1.0);
  double worst = 0.0;
  bool positive = true;
  for (int i = 0; i < 5; ++i) {
    const auto alpha = make_scalar_profile({term(SShape::tanh_down, a(rng), 1.0, 0, 0, a(rng)),
                                            term(SShape::tanh_down, a(rng), 0.8, 1, 1, a(rng)),
                                            term(SShape::gaussian, a(rng), 0.6, 2, -1, a(rng))});
    const double mean = grid.integrate([&](const Vector3& n) { return alpha.limit_minus(n); }) / (2 * kPi);
    const auto r = lorenz_nogo(alpha, a(rng), grid);
    worst = std::max(worst, std::abs(r.matching_gap - std::abs(mean)));
    positive = positive && r.matching_gap > 0.0;
  }
  if (!positive) {
    note = "gap vanished for nonzero mean";
    return INFINITY;
  }
  return worst;
}

double em_conservation(int order, std::string& note) {
  const auto grid = build_sphere_grid(order);
  std::mt19937_64 rng(21);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const auto s = random_em_scenario(rng, i != 1, i != 2);
    worst = std::max(worst, conservation_report_em(s, random_smearing(rng), grid).conservation_residual);
  }
  note = "5 scenarios";
  return worst;
}

double scalar_conservation(int order, std::string& note) {
  const auto grid = build_sphere_grid(order);
  std::mt19937_64 rng(22);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const auto s = random_scalar_scenario(rng, i != 1, i != 2);
    worst = std::max(worst, conservation_report_scalar(s, random_smearing(rng), grid).conservation_residual);
  }
  note = "5 scenarios";
  return worst;
}

double route_equivalence(int order, std::string& note) {
  const auto grid = build_sphere_grid(order);
  std::mt19937_64 rng(23);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto s = random_em_scenario(rng, true, i != 0);
    const auto f = derive_f0_f2(s);
    worst = std::max(worst, conservation_report_em(s, random_smearing(rng), grid, &f).soft_route_discrepancy);
  }
  note = "soft charge, (R,s,l) vs retarded";
  return worst;
}

}  // namespace

EMScenario random_em_scenario(std::mt19937_64& rng, bool radiation, bool matter) {
  std::uniform_real_distribution<double> a(-1.0, 1.0);
  std::vector<TermSpec> in, out;
  if (radiation) {
    in.push_back(term(SShape::tanh_up, a(rng), 0.8, 1, 0, a(rng)));
    in.push_back(term(SShape::gaussian, a(rng), 1.1, 2, 1, a(rng), Polarization::curl));
    in.push_back(term(SShape::tanh_up, a(rng), 1.0, 2, -2, a(rng)));
    out.push_back(term(SShape::tanh_down, a(rng), 0.9, 1, 1, a(rng)));
    out.push_back(term(SShape::gaussian, a(rng), 0.7, 3, 0, a(rng)));
  }
  MatterFlux min, mout;
  if (matter) {
    const double q1 = a(rng), q2 = a(rng), q3 = 0.5 * a(rng);
    min.particles = {{q1, random_velocity(rng, 1.0)}, {q2, random_velocity(rng, 1.0)}};
    mout.particles = {{q1 + q2 - q3, random_velocity(rng, 1.5)}, {q3, random_velocity(rng, 0.5)}};
  }
  return build_scenario(make_em_profile(in, End::past), min, mout, make_em_profile(out));
}

ScalarScenario random_scalar_scenario(std::mt19937_64& rng, bool radiation, bool matter) {
  std::uniform_real_distribution<double> a(-1.0, 1.0);
  std::vector<TermSpec> in, out;
  if (radiation) {
    in.push_back(term(SShape::tanh_up, a(rng), 0.8, 0, 0, a(rng)));
    in.push_back(term(SShape::tanh_up, a(rng), 1.2, 1, -1, a(rng)));
    in.push_back(term(SShape::gaussian, a(rng), 0.9, 2, 2, a(rng)));
    out.push_back(term(SShape::tanh_down, a(rng), 0.9, 2, 1, a(rng)));
  }
  MatterFlux min, mout;
  if (matter) {
    min.particles = {{a(rng), random_velocity(rng, 1.0)}};
    mout.particles = {{a(rng), random_velocity(rng, 1.0)}, {a(rng), random_velocity(rng, 2.0)}};
  }
  return build_scenario(make_scalar_profile(in, End::past), min, mout, make_scalar_profile(out));
}

GaugeScalarAsymptote random_smearing(std::mt19937_64& rng, int l_max) {
  std::uniform_real_distribution<double> a(-1.0, 1.0);
  std::vector<std::tuple<int, int, double>> terms;
  for (int l = 1; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m) terms.emplace_back(l, m, a(rng));
  return GaugeScalarAsymptote::harmonics(terms);
}

const std::vector<VerifyCheck>& verify_checks() {
  static const std::vector<VerifyCheck> checks{
      {"epsilonV_roundtrip", 1e-3, eps_roundtrip},
      {"epsilonV2", 1e-5, epsilon_v2},
      {"green_constant", 1e-10, green_constant},
      {"green_limit", 0.05, green_limit},
      {"laplacian_convergence", 0.3, laplacian_convergence},
      {"t_independence", 1e-8, t_independence},
      {"recon_wave", 0.3, recon_wave},
      {"recon_asymptote", 1e-3, recon_asymptote},
      {"recon_consistency", 1e-8, recon_consistency},
      {"fourier_zero_mode", 1e-8, fourier_zero_mode},
      {"corner_antisymmetry", 1e-12, corner_antisymmetry},
      {"corner_ratio", 1e-3, corner_ratio},
      {"lorenz_nogo", 1e-10, lorenz_nogo_check},
      {"em_conservation", 1e-6, em_conservation},
      {"scalar_conservation", 1e-6, scalar_conservation},
      {"route_equivalence", 1e-4, route_equivalence},
  };
  return checks;
}

}  // namespace asymp
