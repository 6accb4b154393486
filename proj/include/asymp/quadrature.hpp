#ifndef ASYMP_QUADRATURE_HPP
#define ASYMP_QUADRATURE_HPP

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "asymp/geometry.hpp"

namespace asymp {

/// Pairwise (cascade) summation; the split depends only on the length, so the
/// result is reproducible for a fixed input order.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  constexpr std::size_t kBlock = 8;
  if (values.empty()) {
    if constexpr (std::is_arithmetic_v<T>) {
      return T(0);
    } else {
      return T::Zero();
    }
  }
  if (values.size() <= kBlock) {
    T acc = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) acc += values[i];
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
  return pairwise_sum(std::span<const T>(values.data(), values.size()));
}

/// Gauss-Legendre rule on [-1, 1]: Golub-Welsch for the starting nodes,
/// Newton-polished on P_n, weights from P_n'.
template <typename Scalar>
struct GaussRule {
  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;
};

template <typename Scalar>
GaussRule<Scalar> gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const Scalar b = Scalar(k) / std::sqrt(Scalar(4) * k * k - Scalar(1));
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi, Eigen::EigenvaluesOnly);
  GaussRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    Scalar x = solver.eigenvalues()(i);
    Scalar dp = Scalar(1);
    for (int it = 0; it < 4; ++it) {
      Scalar p0 = Scalar(1), p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      Scalar pn = n == 1 ? x : p1;
      Scalar pm = n == 1 ? Scalar(1) : p0;
      dp = n * (x * pn - pm) / (x * x - Scalar(1));
      x -= pn / dp;
    }
    // Recompute the derivative at the polished node.
    Scalar p0 = Scalar(1), p1 = x;
    for (int k = 2; k <= n; ++k) {
      const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? Scalar(1) : n * (x * p1 - p0) / (x * x - Scalar(1));
    rule.nodes[i] = x;
    rule.weights[i] = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
  }
  return rule;
}

/// Quadrature over the unit sphere: nodes xhat_k with positive weights.
template <typename Scalar>
struct SphereGrid {
  std::vector<ThreeVector<Scalar>> nodes;
  std::vector<Scalar> weights;
  int order = 0;    // polynomial exactness degree of the product rule
  int n_theta = 0;  // polar nodes
  int n_phi = 0;    // azimuthal nodes

  std::size_t size() const { return nodes.size(); }

  template <typename F>
  auto integrate(F&& f) const {
    using Value = std::decay_t<decltype(f(nodes[0]))>;
    std::vector<Value> terms;
    terms.reserve(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) terms.push_back(weights[k] * f(nodes[k]));
    return pairwise_sum(terms);
  }
};

using SphereGridd = SphereGrid<double>;

/// Product grid about an arbitrary pole: a 1D rule in cos(theta) (nodes in
/// [-1, 1]) times the uniform azimuthal rule.
template <typename Scalar>
SphereGrid<Scalar> build_axial_grid(const ThreeVector<Scalar>& pole, std::span<const Scalar> cos_nodes,
                                    std::span<const Scalar> cos_weights, int n_phi) {
  if (n_phi < 1) throw InvalidArgument("azimuthal rule needs at least one node");
  const auto frame = frame_with_pole<Scalar>(pole.normalized());
  SphereGrid<Scalar> grid;
  grid.n_theta = static_cast<int>(cos_nodes.size());
  grid.n_phi = n_phi;
  const Scalar dphi = Scalar(2) * std::numbers::pi_v<Scalar> / n_phi;
  grid.nodes.reserve(cos_nodes.size() * n_phi);
  grid.weights.reserve(cos_nodes.size() * n_phi);
  for (std::size_t i = 0; i < cos_nodes.size(); ++i) {
    const Scalar c = cos_nodes[i];
    const Scalar s = std::sqrt(std::max(Scalar(0), (Scalar(1) - c) * (Scalar(1) + c)));
    for (int j = 0; j < n_phi; ++j) {
      const Scalar phi = (j + Scalar(0.5)) * dphi;
      grid.nodes.push_back(frame * ThreeVector<Scalar>(s * std::cos(phi), s * std::sin(phi), c));
      grid.weights.push_back(cos_weights[i] * dphi);
    }
  }
  return grid;
}

/// Gauss-Legendre(cos theta) x uniform(phi) grid, exact for polynomials of
/// total degree <= order.
template <typename Scalar = double>
SphereGrid<Scalar> build_sphere_grid(int order) {
  if (order < 2) throw InvalidArgument("sphere grid order must be at least 2");
  const auto rule = gauss_legendre<Scalar>(order / 2 + 1);
  auto grid = build_axial_grid<Scalar>(ThreeVector<Scalar>::UnitZ(), rule.nodes, rule.weights,
                                       order + 1);
  grid.order = order;
  return grid;
}

/// Maps a Gauss rule from [-1, 1] onto [a, b].
template <typename Scalar>
void append_mapped(const GaussRule<Scalar>& rule, Scalar a, Scalar b, std::vector<Scalar>& nodes,
                   std::vector<Scalar>& weights) {
  const Scalar half = (b - a) / 2, mid = (a + b) / 2;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    nodes.push_back(mid + half * rule.nodes[i]);
    weights.push_back(half * rule.weights[i]);
  }
}

/// Composite Gauss-Legendre rule on [a, b] whose panels start at
/// first_width next to a and grow geometrically, capped at max_width.
GaussRule<double> graded_rule(double a, double b, double first_width, double growth,
                              double max_width, int nodes_per_panel);

// ---------------------------------------------------------------------------
// Real line

enum class LineScheme { double_exponential, truncated_composite };

/// Settings for integrals over s in R of integrands bounded by C/|s|^(1+eps).
struct LineQuadrature {
  LineScheme scheme = LineScheme::double_exponential;
  double falloff = std::numeric_limits<double>::infinity();  // eps of the integrand class
  double center = 0.0;
  double scale = 1.0;
  double rel_tol = 1e-10;
  int max_levels = 12;
  // truncated_composite only
  double truncation = 0.0;  // 0 = chosen from falloff
  int nodes_per_panel = 10;
  double max_panel_width = 2.0;
};

double integrate_s_line(const std::function<double(double)>& g, const LineQuadrature& quad = {});

/// Integral over [a, inf) (upper = true) or (-inf, a] with the exp-sinh rule.
double integrate_half_line(const std::function<double(double)>& g, double a, bool upper,
                           const LineQuadrature& quad = {});

// ---------------------------------------------------------------------------
// Limits

struct LimitEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<std::pair<double, double>> samples;
  bool diverging = false;
};

/// Polynomial (Richardson/Neville) extrapolation of f(R) in 1/R to R -> inf.
LimitEstimate extract_limit(const std::function<double(double)>& f, std::span<const double> radii);

// ---------------------------------------------------------------------------
// Null directions

using NullFunction = std::function<double(const Vector4&)>;

/// Integral of a degree -2 homogeneous f over null directions, realised on the
/// unit sphere of the section t.l = |t|.
double integrate_null_directions(const NullFunction& f, const SphereGridd& grid,
                                 const TimeVector<double>& t, bool check_homogeneity = true);

/// int [num(l') - num(l)] / (l.l') d^2 l' with l = (1, xhat), l' = (1, xhat'),
/// on a polar grid about xhat (Gauss-Legendre in theta, so the 1/theta
/// behaviour of the integrand is cancelled by the measure). num(l) must vanish:
/// the remainder num(l) * int 1/(l.l') diverges.
double integrate_singular_angular(const std::function<double(const Vector3&)>& numerator,
                                  const Vector3& xhat, const SphereGridd& grid);

}  // namespace asymp

#endif  // ASYMP_QUADRATURE_HPP
