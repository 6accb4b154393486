#ifndef ASYMP_CHARGES_HPP
#define ASYMP_CHARGES_HPP

// Soft, hard and total asymptotic charges of electrodynamics and the
// massless scalar, their conservation and the corner pairings.
//
// Signs: the future-end boundary action is +Q_soft+, the past one -Q_soft-,
// and conservation reads Q+ = Q-. Past-end data on scri- are labelled by the
// spatial direction y of the point, whose null direction is l = (1, -y);
// the matched gauge parameter is eps-(y) = eps(-y).

#include <optional>
#include <vector>

#include "asymp/gauge.hpp"
#include "asymp/profiles.hpp"
#include "asymp/quadrature.hpp"

namespace asymp {

struct ChargeReport {
  double soft_plus = 0.0;
  double soft_minus = 0.0;
  double hard_plus = 0.0;
  double hard_minus = 0.0;
  double total_plus = 0.0;
  double total_minus = 0.0;
  double conservation_residual = 0.0;  // |Q+ - Q-| / max(|Q+|, 1e-12, 1e-6 max|part|)
  double route_discrepancy = 0.0;  // max over charges with a second route
  double soft_route_discrepancy = 0.0;
  double hard_route_discrepancy = 0.0;
};

/// A charge computed by two independent routes.
struct DualRoute {
  double value = 0.0;      // primary route
  double alternate = 0.0;  // second route
  double discrepancy = 0.0;
};

/// |a - b| / max(|a|, |b|, floor)
double relative_spread(double a, double b, double floor = 1e-12);

// ---------------------------------------------------------------------------
// Field-strength data on null infinity

/// Leading angular field strength F0_uA and subleading radial F2_ur on both
/// ends, derived from the free radiative data of a scenario. Tangent-plane
/// components are returned as 3-vectors.
class RadiativeF0Data {
 public:
  RadiativeF0Data(EMProfile free_out, EMProfile free_in, LineQuadrature quad = {});

  /// F0_uA(u, x) on scri+
  Vector3 f0_plus(double u, const Vector3& xhat) const;
  /// F0_vA(v, y) on scri-
  Vector3 f0_minus(double v, const Vector3& yhat) const;

  /// D^A F0_uA on scri+, D^A F0_vA on scri-
  double source_plus(double u, const Vector3& xhat) const;
  double source_minus(double v, const Vector3& yhat) const;

  /// F2_ur(u, x) = -int_u^inf D^A F0_uA du'
  double f2_plus(double u, const Vector3& xhat) const;
  /// F2_vr(v, y) = -int_-inf^v D^A F0_vA dv'
  double f2_minus(double v, const Vector3& yhat) const;
  /// F2_ur(-inf, x)
  double f2_plus_corner(const Vector3& xhat) const;
  /// F2_vr(+inf, y)
  double f2_minus_corner(const Vector3& yhat) const;

  /// int du D^A F0 over the whole line, per grid node; cached by the
  /// retarded soft charge.
  double integrated_source(End end, const Vector3& unit) const;

  const EMProfile& free_out() const { return out_; }
  const EMProfile& free_in() const { return in_; }

 private:
  std::vector<double> term_divergences(End end, const Vector3& unit) const;
  double line_integral(End end, const std::vector<double>& div, std::optional<double> cut,
                       bool upper) const;

  EMProfile out_;
  EMProfile in_;
  LineQuadrature quad_;
};

RadiativeF0Data derive_f0_f2(const EMScenario& scen, const LineQuadrature& quad = {});

// ---------------------------------------------------------------------------
// Electrodynamics

/// (1/4 pi) int d^2l V^eps . V_out(-inf)  (future) or V'_in(+inf) (past)
double soft_charge_em(const GaugeVectorAsymptote& v, const EMScenario& scen, End end,
                      const SphereGridd& grid);

/// -(1/4 pi) int du d^2 Omega eps D^A F0_uA on either end.
double soft_charge_em_retarded(const GaugeScalarAsymptote& e, const RadiativeF0Data& f, End end,
                               const SphereGridd& grid);

/// Null route (1/4 pi) int V^eps . V_J(+-inf) as value, hyperboloid route
/// sum_i q_i Lambda_H(v_i) as alternate. The routes differ by
/// mean(eps) * total charge (the l = 0 kernel of eps -> V^eps).
DualRoute hard_charge_em(const GaugeScalarAsymptote& e, const GaugeVectorAsymptote& v,
                         const MatterFlux& m, const SphereGridd& grid);

/// All six charges. The retarded soft route is evaluated when f is given.
ChargeReport conservation_report_em(const EMScenario& scen, const GaugeScalarAsymptote& e,
                                    const SphereGridd& grid,
                                    const RadiativeF0Data* f = nullptr);

// ---------------------------------------------------------------------------
// Scalar field

/// -int d^2l lambda chi_out(-inf)  (future) or chi'_in(+inf)  (past)
double soft_charge_scalar(const GaugeScalarAsymptote& lam, const ScalarScenario& scen, End end,
                          const SphereGridd& grid);

/// -int d^2l lambda sum_i g_i / (v_i . l)
double hard_charge_scalar(const GaugeScalarAsymptote& lam, const MatterFlux& m,
                          const SphereGridd& grid);

ChargeReport conservation_report_scalar(const ScalarScenario& scen, const GaugeScalarAsymptote& lam,
                                        const SphereGridd& grid);

/// Zero mode chi~(0, l) of chi~(w, l) = (1/2 pi) int chi_dot(s, l) e^{i w s} ds,
/// extrapolated from small w.
LimitEstimate fourier_soft_charge(const ScalarProfile& chi, const NullDirection<double>& l,
                                  const LineQuadrature& quad = {});

// ---------------------------------------------------------------------------
// Corner pairings

/// V(-inf, l) on scri+ and F2_ru(-inf, x) = -F2_ur(-inf, x), including the
/// Coulomb field of the outgoing matter.
struct CornerData {
  std::function<Vector4(const Vector3&)> v_corner;
  SphereFunction f2_ru;
};

CornerData corner_data(const EMScenario& scen, const RadiativeF0Data& f);

struct CornerPairingResult {
  double her_value = 0.0;
  double stro_value = 0.0;
  std::optional<double> normalisation_ratio;
};

CornerPairingResult corner_pairing(const GaugeScalarAsymptote& e1, const GaugeVectorAsymptote& v1,
                                   const CornerData& c1, const GaugeScalarAsymptote& e2,
                                   const GaugeVectorAsymptote& v2, const CornerData& c2,
                                   const SphereGridd& grid);

}  // namespace asymp

#endif  // ASYMP_CHARGES_HPP
