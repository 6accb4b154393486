#ifndef ASYMP_PROFILES_HPP
#define ASYMP_PROFILES_HPP

// Asymptotic radiative data on R x S^2, matter fluxes through timelike
// infinity and the scattering scenarios built from them.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "asymp/geometry.hpp"
#include "asymp/quadrature.hpp"

namespace asymp {

/// Future (scri+, H+) or past (scri-, H-) end of the asymptotic boundary.
enum class End { future, past };

template <typename Value>
Value zero_value() {
  if constexpr (std::is_arithmetic_v<Value>) {
    return Value(0);
  } else {
    return Value::Zero();
  }
}

template <typename Value>
double magnitude(const Value& v) {
  if constexpr (std::is_arithmetic_v<Value>) {
    return std::abs(v);
  } else {
    return v.norm();
  }
}

// ---------------------------------------------------------------------------
// s-shapes

enum class SShape { tanh_down, tanh_up, gaussian, rational };

/// One-dimensional shape in s. tanh_down = (1 - tanh x)/2, tanh_up =
/// (1 + tanh x)/2, gaussian = exp(-x^2), rational = (1 + x^2)^-power with
/// x = (s - center)/width.
struct ShapeSpec {
  SShape kind = SShape::tanh_down;
  double center = 0.0;
  double width = 1.0;
  double power = 1.0;

  double value(double s) const;
  double rate(double s) const;
  double limit_minus() const;
  double limit_plus() const;
  /// Algebraic decay exponent of value - limit; infinity for exponential tails.
  double falloff() const;
  void validate() const;
};

SShape shape_from_name(const std::string& name);
std::string shape_name(SShape shape);

// ---------------------------------------------------------------------------
// Radiative profiles

/// Radiative datum V(s, l) (Value = Vector4) or chi(s, l) (Value = double),
/// stored on the canonical representative l = (1, xhat) as a sum of
/// separable terms shape(s) * angular(xhat) plus an s-independent part.
/// Evaluation at a rescaled l uses V(lambda s, lambda l) = V(s, l) / lambda.
template <typename Value>
class RadiativeProfile {
 public:
  using Angular = std::function<Value(const Vector3&)>;

  struct Term {
    ShapeSpec shape;
    Angular angular;
  };

  RadiativeProfile() = default;
  explicit RadiativeProfile(End end) : end_(end) {}

  void add_term(const ShapeSpec& shape, Angular angular) {
    shape.validate();
    terms_.push_back({shape, std::move(angular)});
    falloff_ = std::min(falloff_, shape.falloff());
  }

  void set_constant(Angular constant) { constant_ = std::move(constant); }

  /// Overrides the declared fall-off exponent.
  RadiativeProfile with_falloff(double eps) const {
    if (!(eps > 0.0)) throw InvalidArgument("fall-off exponent must be positive");
    RadiativeProfile copy = *this;
    copy.falloff_ = eps;
    return copy;
  }

  End end() const { return end_; }
  double falloff() const { return falloff_; }
  bool empty() const { return terms_.empty() && !constant_; }
  const std::vector<Term>& terms() const { return terms_; }

  Value value(double s, const Vector3& xhat) const {
    Value out = constant_ ? constant_(xhat) : zero_value<Value>();
    for (const auto& t : terms_) {
      const double f = t.shape.value(s);
      if (f != 0.0) out += f * t.angular(xhat);
    }
    return out;
  }

  Value rate(double s, const Vector3& xhat) const {
    Value out = zero_value<Value>();
    for (const auto& t : terms_) {
      const double f = t.shape.rate(s);
      if (f != 0.0) out += f * t.angular(xhat);
    }
    return out;
  }

  Value limit_minus(const Vector3& xhat) const { return limit(xhat, false); }
  Value limit_plus(const Vector3& xhat) const { return limit(xhat, true); }

  /// Evaluation at an arbitrary future null vector l (not necessarily l0 = 1).
  Value value_at(double s, const Vector4& l) const {
    const double lambda = l(0);
    return value(s / lambda, Vector3(l.tail<3>() / lambda)) / lambda;
  }
  /// d/ds has degree -2.
  Value rate_at(double s, const Vector4& l) const {
    const double lambda = l(0);
    return rate(s / lambda, Vector3(l.tail<3>() / lambda)) / (lambda * lambda);
  }

 private:
  Value limit(const Vector3& xhat, bool plus) const {
    Value out = constant_ ? constant_(xhat) : zero_value<Value>();
    for (const auto& t : terms_) {
      const double f = plus ? t.shape.limit_plus() : t.shape.limit_minus();
      if (f != 0.0) out += f * t.angular(xhat);
    }
    return out;
  }

  End end_ = End::future;
  std::vector<Term> terms_;
  Angular constant_;
  double falloff_ = std::numeric_limits<double>::infinity();
};

using ScalarProfile = RadiativeProfile<double>;
using EMProfile = RadiativeProfile<Vector4>;

/// Angular factor: a real spherical harmonic Y_lm or an explicit map.
struct AngularSpec {
  int l = 0;
  int m = 0;
  std::function<double(const Vector3&)> map;

  double operator()(const Vector3& xhat) const;
};

/// grad: spatial part = tangential gradient of the angular factor;
/// curl: xhat x gradient; explicit_vector: the given 4-vector map.
enum class Polarization { grad, curl, explicit_vector };

struct TermSpec {
  ShapeSpec shape;
  AngularSpec angular;
  double amplitude = 1.0;
  Polarization polarization = Polarization::grad;
  std::function<Vector4(const Vector3&)> vector_map;
};

ScalarProfile make_scalar_profile(const std::vector<TermSpec>& spec, End end = End::future);
EMProfile make_em_profile(const std::vector<TermSpec>& spec, End end = End::future);

struct FalloffReport {
  bool pass = true;
  double fitted_constant = 0.0;
  double worst_ratio = 0.0;  // max over outer samples of bound / (C |s|^-eps)
  double exponent = 0.0;     // exponent that was checked
  int samples = 0;
};

/// Fits C on the inner half of log-spaced |s| samples in [s_min, s_max] and
/// checks |value - limit| <= C |s|^-eps and |rate| <= C |s|^-(1+eps) on the
/// outer half with relative slack tol. Exponential tails are checked with
/// eps = 8.
template <typename Value>
FalloffReport validate_falloff(const RadiativeProfile<Value>& p, double s_min = 1.0,
                               double s_max = 1e4, double tol = 0.05, int n_samples = 40);

// ---------------------------------------------------------------------------
// Matter

struct Particle {
  double charge;  // q for electrodynamics, coupling g for the scalar field
  HyperboloidPoint<double> velocity;
};

/// Flux through H+ (end = future) or H- (end = past); a finite atomic
/// measure on the unit hyperboloid.
struct MatterFlux {
  std::vector<Particle> particles;
  End end = End::future;

  double total_charge() const;

  /// Discretises a smooth density rho(v) on the hyperboloid (measure
  /// rho^2 drho dOmega / sqrt(1 + rho^2)) into weighted atoms.
  static MatterFlux from_density(const std::function<double(const HyperboloidPoint<double>&)>& density,
                                 double rho_max, int n_rho, int sphere_order, End end);
};

/// sum_i q_i v_i / (v_i.l)
Vector4 vj_limit_em(const MatterFlux& m, const Vector4& l);
/// sum_i g_i / (v_i.l)
double vj_limit_scalar(const MatterFlux& m, const Vector4& l);

inline Vector4 canonical_null(const Vector3& xhat) {
  Vector4 l;
  l << 1.0, xhat;
  return l;
}

template <typename Value>
Value vj_limit(const MatterFlux& m, const Vector4& l) {
  if constexpr (std::is_arithmetic_v<Value>) {
    return vj_limit_scalar(m, l);
  } else {
    return vj_limit_em(m, l);
  }
}

// ---------------------------------------------------------------------------
// Scenarios

/// Incoming free field, matter in and out, and the derived outgoing field.
/// Full future asymptote V = V_J(+inf) + V_out, past V' = V_J(-inf) + V'_in.
template <typename Value>
struct ScatteringScenario {
  RadiativeProfile<Value> free_in;
  RadiativeProfile<Value> free_out;
  MatterFlux matter_in;
  MatterFlux matter_out;

  Value vj_minus(const Vector3& xhat) const { return vj_limit<Value>(matter_in, canonical_null(xhat)); }
  Value vj_plus(const Vector3& xhat) const { return vj_limit<Value>(matter_out, canonical_null(xhat)); }

  Value full_future(double s, const Vector3& xhat) const {
    return vj_plus(xhat) + free_out.value(s, xhat);
  }
  Value full_past(double s, const Vector3& xhat) const {
    return vj_minus(xhat) + free_in.value(s, xhat);
  }
  /// V(-inf, l)
  Value future_corner(const Vector3& xhat) const {
    return vj_plus(xhat) + free_out.limit_minus(xhat);
  }
  /// V'(+inf, l)
  Value past_corner(const Vector3& xhat) const {
    return vj_minus(xhat) + free_in.limit_plus(xhat);
  }

  /// max over the grid of |V'(+inf) - V(-inf)|
  double matching_residual(const SphereGridd& grid) const {
    double worst = 0.0;
    for (const auto& n : grid.nodes)
      worst = std::max(worst, magnitude<Value>(past_corner(n) - future_corner(n)));
    return worst;
  }
};

using EMScenario = ScatteringScenario<Vector4>;
using ScalarScenario = ScatteringScenario<double>;

/// Builds V_out = free_out_shape + C(l) (1 - tanh s)/2 with
/// C = V_J(-inf) + V'_in(+inf) - V_J(+inf) - free_out_shape(-inf), so the
/// matching V'(+inf) = V(-inf) holds identically. Checks the vanishing
/// property of both free inputs on the check grid and, for electrodynamics,
/// equality of the total charges.
template <typename Value>
ScatteringScenario<Value> build_scenario(const RadiativeProfile<Value>& free_in,
                                         const MatterFlux& matter_in, const MatterFlux& matter_out,
                                         const RadiativeProfile<Value>& free_out_shape,
                                         int check_order = 12);

}  // namespace asymp

#endif  // ASYMP_PROFILES_HPP
