#include "asymp/charges.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "asymp/sphere.hpp"

namespace asymp {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

LineQuadrature line_for(const EMProfile& p, LineQuadrature quad) {
  quad.falloff = std::min(quad.falloff, p.falloff());
  double width = 0.0;
  for (const auto& t : p.terms()) width = std::max(width, t.shape.width);
  if (width > 0.0) quad.scale = std::max(quad.scale, width);
  return quad;
}

}  // namespace

double relative_spread(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// ---------------------------------------------------------------------------

RadiativeF0Data::RadiativeF0Data(EMProfile free_out, EMProfile free_in, LineQuadrature quad)
    : out_(std::move(free_out)), in_(std::move(free_in)), quad_(quad) {}

Vector3 RadiativeF0Data::f0_plus(double u, const Vector3& xhat) const {
  const Vector3 n = xhat.normalized();
  // covariant spatial components of V_dot are minus the contravariant ones
  return tangential(Vector3(-out_.rate(u, n).tail<3>()), n);
}

Vector3 RadiativeF0Data::f0_minus(double v, const Vector3& yhat) const {
  const Vector3 y = yhat.normalized();
  return tangential(Vector3(-in_.rate(v, Vector3(-y)).tail<3>()), y);
}

std::vector<double> RadiativeF0Data::term_divergences(End end, const Vector3& unit) const {
  const bool future = end == End::future;
  const auto& terms = future ? out_.terms() : in_.terms();
  std::vector<double> div;
  div.reserve(terms.size());
  for (const auto& t : terms) {
    const auto& a = t.angular;
    const SphereVectorField w = [&a, future](const Vector3& n) {
      const Vector3 at = future ? n : Vector3(-n);
      return tangential(Vector3(-a(at).tail<3>()), n);
    };
    div.push_back(surface_divergence(w, unit.normalized()));
  }
  return div;
}

double RadiativeF0Data::line_integral(End end, const std::vector<double>& div,
                                      std::optional<double> cut, bool upper) const {
  const auto& p = end == End::future ? out_ : in_;
  if (p.terms().empty()) return 0.0;
  const auto g = [&](double s) {
    double sum = 0.0;
    for (std::size_t k = 0; k < div.size(); ++k) sum += p.terms()[k].shape.rate(s) * div[k];
    return sum;
  };
  const auto quad = line_for(p, quad_);
  if (!cut) return integrate_s_line(g, quad);
  return integrate_half_line(g, *cut, upper, quad);
}

double RadiativeF0Data::source_plus(double u, const Vector3& xhat) const {
  const auto div = term_divergences(End::future, xhat);
  double sum = 0.0;
  for (std::size_t k = 0; k < div.size(); ++k) sum += out_.terms()[k].shape.rate(u) * div[k];
  return sum;
}

double RadiativeF0Data::source_minus(double v, const Vector3& yhat) const {
  const auto div = term_divergences(End::past, yhat);
  double sum = 0.0;
  for (std::size_t k = 0; k < div.size(); ++k) sum += in_.terms()[k].shape.rate(v) * div[k];
  return sum;
}

double RadiativeF0Data::f2_plus(double u, const Vector3& xhat) const {
  return -line_integral(End::future, term_divergences(End::future, xhat), u, true);
}

double RadiativeF0Data::f2_minus(double v, const Vector3& yhat) const {
  return -line_integral(End::past, term_divergences(End::past, yhat), v, false);
}

double RadiativeF0Data::f2_plus_corner(const Vector3& xhat) const {
  return -integrated_source(End::future, xhat);
}

double RadiativeF0Data::f2_minus_corner(const Vector3& yhat) const {
  return -integrated_source(End::past, yhat);
}

double RadiativeF0Data::integrated_source(End end, const Vector3& unit) const {
  return line_integral(end, term_divergences(end, unit), std::nullopt, true);
}

RadiativeF0Data derive_f0_f2(const EMScenario& scen, const LineQuadrature& quad) {
  return RadiativeF0Data(scen.free_out, scen.free_in, quad);
}

// ---------------------------------------------------------------------------

double soft_charge_em(const GaugeVectorAsymptote& v, const EMScenario& scen, End end,
                      const SphereGridd& grid) {
  const auto& p = end == End::future ? scen.free_out : scen.free_in;
  if (p.empty()) return 0.0;
  return grid.integrate([&](const Vector3& n) {
    const Vector4 corner = end == End::future ? p.limit_minus(n) : p.limit_plus(n);
    return minkowski_dot(v.value(n), corner);
  }) / kFourPi;
}

double soft_charge_em_retarded(const GaugeScalarAsymptote& e, const RadiativeF0Data& f, End end,
                               const SphereGridd& grid) {
  const auto& p = end == End::future ? f.free_out() : f.free_in();
  if (p.terms().empty()) return 0.0;
  return -grid.integrate([&](const Vector3& n) {
    const double eps = end == End::future ? e.eps(n) : e.eps(Vector3(-n));
    return eps == 0.0 ? 0.0 : eps * f.integrated_source(end, n);
  }) / kFourPi;
}

DualRoute hard_charge_em(const GaugeScalarAsymptote& e, const GaugeVectorAsymptote& v,
                         const MatterFlux& m, const SphereGridd& grid) {
  DualRoute r;
  if (m.particles.empty()) return r;
  r.value = grid.integrate([&](const Vector3& n) {
    return minkowski_dot(v.value(n), vj_limit_em(m, canonical_null(n)));
  }) / kFourPi;
  std::vector<double> parts;
  parts.reserve(m.particles.size());
  for (const auto& p : m.particles) parts.push_back(p.charge * lambda_on_hyperboloid(e, p.velocity, grid));
  r.alternate = pairwise_sum(parts);
  r.discrepancy = relative_spread(r.value, r.alternate);
  return r;
}

namespace {

// Largest single contribution. Totals that cancel to zero are compared on
// this scale, otherwise quadrature noise of order 1e-16 S would be divided
// by the bare 1e-12 floor.
double contribution_scale(const ChargeReport& r) {
  return std::max({std::abs(r.soft_plus), std::abs(r.soft_minus), std::abs(r.hard_plus),
                   std::abs(r.hard_minus)});
}

void finish(ChargeReport& r) {
  r.total_plus = r.soft_plus + r.hard_plus;
  r.total_minus = r.soft_minus + r.hard_minus;
  const double floor = std::max(1e-12, 1e-6 * contribution_scale(r));
  r.conservation_residual = std::abs(r.total_plus - r.total_minus) / std::max(std::abs(r.total_plus), floor);
  r.route_discrepancy = std::max(r.soft_route_discrepancy, r.hard_route_discrepancy);
}

}  // namespace

ChargeReport conservation_report_em(const EMScenario& scen, const GaugeScalarAsymptote& e,
                                    const SphereGridd& grid, const RadiativeF0Data* f) {
  const auto v = veps_from_eps(e);
  ChargeReport r;
  r.soft_plus = soft_charge_em(v, scen, End::future, grid);
  r.soft_minus = soft_charge_em(v, scen, End::past, grid);
  const auto hp = hard_charge_em(e, v, scen.matter_out, grid);
  const auto hm = hard_charge_em(e, v, scen.matter_in, grid);
  r.hard_plus = hp.value;
  r.hard_minus = hm.value;
  // route comparisons of charges that vanish identically are made on the
  // scale of the scenario's other contributions
  const double floor = std::max(1e-12, 1e-3 * contribution_scale(r));
  r.hard_route_discrepancy = std::max(relative_spread(hp.value, hp.alternate, floor),
                                      relative_spread(hm.value, hm.alternate, floor));
  if (f) {
    r.soft_route_discrepancy =
        std::max(relative_spread(r.soft_plus, soft_charge_em_retarded(e, *f, End::future, grid), floor),
                 relative_spread(r.soft_minus, soft_charge_em_retarded(e, *f, End::past, grid), floor));
  }
  finish(r);
  return r;
}

// ---------------------------------------------------------------------------

double soft_charge_scalar(const GaugeScalarAsymptote& lam, const ScalarScenario& scen, End end,
                          const SphereGridd& grid) {
  const auto& p = end == End::future ? scen.free_out : scen.free_in;
  if (p.empty()) return 0.0;
  return -grid.integrate([&](const Vector3& n) {
    return lam.eps(n) * (end == End::future ? p.limit_minus(n) : p.limit_plus(n));
  });
}

double hard_charge_scalar(const GaugeScalarAsymptote& lam, const MatterFlux& m,
                          const SphereGridd& grid) {
  if (m.particles.empty()) return 0.0;
  return -grid.integrate([&](const Vector3& n) {
    return lam.eps(n) * vj_limit_scalar(m, canonical_null(n));
  });
}

ChargeReport conservation_report_scalar(const ScalarScenario& scen, const GaugeScalarAsymptote& lam,
                                        const SphereGridd& grid) {
  ChargeReport r;
  r.soft_plus = soft_charge_scalar(lam, scen, End::future, grid);
  r.soft_minus = soft_charge_scalar(lam, scen, End::past, grid);
  r.hard_plus = hard_charge_scalar(lam, scen.matter_out, grid);
  r.hard_minus = hard_charge_scalar(lam, scen.matter_in, grid);
  finish(r);
  return r;
}

LimitEstimate fourier_soft_charge(const ScalarProfile& chi, const NullDirection<double>& l,
                                  const LineQuadrature& quad) {
  const Vector4 lv = l.vector();
  if (std::abs(chi.limit_plus(l.unit())) > 1e-12)
    throw VanishingViolation("chi must vanish at s -> +inf");
  static constexpr std::array<double, 4> radii{125.0, 250.0, 500.0, 1000.0};
  if (chi.terms().empty()) {
    LimitEstimate zero;
    for (double R : radii) zero.samples.emplace_back(R, 0.0);
    return zero;
  }
  LineQuadrature q = quad;
  q.falloff = std::min(q.falloff, chi.falloff());
  double width = 0.0, center = 0.0;
  for (const auto& t : chi.terms()) {
    width = std::max(width, t.shape.width);
    center += t.shape.center / static_cast<double>(chi.terms().size());
  }
  q.scale = std::max(q.scale, width * l.scale());
  q.center = center * l.scale();
  // Re chi~(w); the imaginary part vanishes at w = 0.
  return extract_limit(
      [&](double R) {
        const double w = 1.0 / R;
        return integrate_s_line([&](double s) { return chi.rate_at(s, lv) * std::cos(w * s); }, q) /
               kTwoPi;
      },
      radii);
}

// ---------------------------------------------------------------------------

CornerData corner_data(const EMScenario& scen, const RadiativeF0Data& f) {
  CornerData c;
  c.v_corner = [scen](const Vector3& n) { return scen.future_corner(n); };
  const MatterFlux out = scen.matter_out;
  c.f2_ru = [f, out](const Vector3& n) {
    double coulomb = 0.0;
    if (!out.particles.empty()) {
      const SphereVectorField w = [&out](const Vector3& m) {
        return tangential(Vector3(vj_limit_em(out, canonical_null(m)).tail<3>()), m);
      };
      coulomb = surface_divergence(w, n);
    }
    return -f.f2_plus_corner(n) + coulomb;
  };
  return c;
}

CornerPairingResult corner_pairing(const GaugeScalarAsymptote& e1, const GaugeVectorAsymptote& v1,
                                   const CornerData& c1, const GaugeScalarAsymptote& e2,
                                   const GaugeVectorAsymptote& v2, const CornerData& c2,
                                   const SphereGridd& grid) {
  CornerPairingResult r;
  double her_scale = 0.0, stro_scale = 0.0;
  std::vector<double> her(grid.size()), stro(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vector3& n = grid.nodes[i];
    const double a = minkowski_dot(v1.value(n), c2.v_corner(n));
    const double b = minkowski_dot(v2.value(n), c1.v_corner(n));
    const double c = e1.eps(n) * c2.f2_ru(n);
    const double d = e2.eps(n) * c1.f2_ru(n);
    her[i] = grid.weights[i] * (a - b);
    stro[i] = grid.weights[i] * (c - d);
    her_scale += grid.weights[i] * (std::abs(a) + std::abs(b));
    stro_scale += grid.weights[i] * (std::abs(c) + std::abs(d));
  }
  r.her_value = pairwise_sum(her);
  r.stro_value = pairwise_sum(stro);
  if (std::abs(r.her_value) > 1e-10 * her_scale && std::abs(r.stro_value) > 1e-10 * stro_scale &&
      std::abs(r.stro_value) > 0.0)
    r.normalisation_ratio = r.her_value / r.stro_value;
  return r;
}

}  // namespace asymp
