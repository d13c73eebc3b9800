#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "statichedge/errors.hpp"

namespace statichedge::quadrature {

enum class RuleKind { legendre, hermite, laguerre };

std::string to_string(RuleKind kind);

/// Integration domain of a rule. Canonical domains are [-1,1] (Legendre),
/// (-inf,inf) (Hermite) and [0,inf) (Laguerre); mapped Legendre rules carry
/// their target interval.
struct Domain {
  double lo = -1.0;
  double hi = 1.0;

  bool operator==(const Domain&) const = default;
};

/// Nodes and weights of a Gaussian rule.
///
/// For Hermite and Laguerre rules the weights belong to the weight function
/// (e^{-x^2} and e^{-x}); `scaled_weights` holds weights[i] * e^{x^2} or
/// weights[i] * e^{x}, computed without forming the underflowing product, so
/// that plain integrals over the infinite domain can be summed directly.
struct QuadratureRule {
  RuleKind kind = RuleKind::legendre;
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> scaled_weights;
  Domain domain;

  std::size_t size() const noexcept { return nodes.size(); }
};

inline constexpr int kMaxOrder = 200;
/// Laguerre weights fall below the smallest normal double past this order.
inline constexpr int kMaxLaguerreOrder = 180;

int max_order(RuleKind kind) noexcept;

/// Builds the n-point rule from the Jacobi matrix eigenvalues, refined by
/// Newton iteration on the orthonormal three-term recurrence. Weights come
/// from the Christoffel function 1 / sum_k p_k(x)^2.
QuadratureRule make_rule(RuleKind kind, int n);

/// Thread-safe memoised make_rule. The returned reference stays valid for
/// the lifetime of the program.
const QuadratureRule& cached_rule(RuleKind kind, int n);

/// Affine map of a Legendre rule from [-1,1] onto [a,b].
QuadratureRule map_to_interval(const QuadratureRule& rule, double a, double b);

namespace detail {
[[noreturn]] void throw_non_finite(const char* where, int index, double node,
                                   double value);
void check_bounds(double a, double b);
}  // namespace detail

/// Sum of mapped-Legendre weights times f at the mapped nodes of an n-point
/// rule on [a,b].
template <std::invocable<double> F>
double integrate_bounded(F&& f, double a, double b, int n) {
  detail::check_bounds(a, b);
  const QuadratureRule& rule = cached_rule(RuleKind::legendre, n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = half * rule.nodes[i] + mid;
    const double v = static_cast<double>(f(x));
    if (!std::isfinite(v)) {
      detail::throw_non_finite("integrate_bounded", static_cast<int>(i), x, v);
    }
    sum += half * rule.weights[i] * v;
  }
  return sum;
}

/// Approximates the plain integral of f over [a, inf) with an n-point
/// Laguerre rule shifted to a: sum_i w_i e^{x_i} f(x_i + a).
template <std::invocable<double> F>
double integrate_shifted_laguerre(F&& f, double a, int n) {
  if (!std::isfinite(a)) {
    throw DomainError("integrate_shifted_laguerre: lower limit must be finite");
  }
  const QuadratureRule& rule = cached_rule(RuleKind::laguerre, n);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes[i] + a;
    const double v = static_cast<double>(f(x));
    if (!std::isfinite(v)) {
      detail::throw_non_finite("integrate_shifted_laguerre", static_cast<int>(i),
                               x, v);
    }
    sum += rule.scaled_weights[i] * v;
  }
  return sum;
}

}  // namespace statichedge::quadrature
