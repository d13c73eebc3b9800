#include "statichedge/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cfloat>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace statichedge::quadrature {
namespace {

// Monic three-term recurrence p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}
// and the total mass mu0 of the weight function.
struct Recurrence {
  RuleKind kind;

  double alpha(int k) const {
    return kind == RuleKind::laguerre ? 2.0 * k + 1.0 : 0.0;
  }
  double beta(int k) const {
    const double kk = static_cast<double>(k);
    switch (kind) {
      case RuleKind::legendre:
        return kk * kk / (4.0 * kk * kk - 1.0);
      case RuleKind::hermite:
        return 0.5 * kk;
      case RuleKind::laguerre:
        return kk * kk;
    }
    return 0.0;
  }
  double mu0() const {
    switch (kind) {
      case RuleKind::legendre:
        return 2.0;
      case RuleKind::hermite:
        return std::sqrt(std::numbers::pi);
      case RuleKind::laguerre:
        return 1.0;
    }
    return 0.0;
  }
};

struct PolyEval {
  double newton_step;      // p_n(x) / p_n'(x)
  double log_christoffel;  // log sum_{k<n} p_k(x)^2, orthonormal p_k
};

// Orthonormal recurrence with rescaling so Laguerre polynomials at nodes
// near 700 do not overflow. True values are stored values times e^{log_scale}.
PolyEval evaluate(const Recurrence& rec, int n, double x) {
  constexpr double kBig = 1e150;
  constexpr double kShrink = 1e-150;
  const double log_shrink = std::log(kShrink);

  double p_prev = 0.0;
  double p = 1.0 / std::sqrt(rec.mu0());
  double dp_prev = 0.0;
  double dp = 0.0;
  double sum_sq = 0.0;
  double log_scale = 0.0;

  for (int k = 0; k < n; ++k) {
    sum_sq += p * p;
    const double b_k = k == 0 ? 0.0 : std::sqrt(rec.beta(k));
    const double b_next = std::sqrt(rec.beta(k + 1));
    const double a_k = rec.alpha(k);
    const double p_next = ((x - a_k) * p - b_k * p_prev) / b_next;
    const double dp_next = ((x - a_k) * dp + p - b_k * dp_prev) / b_next;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
    if (std::abs(p) > kBig || std::abs(dp) > kBig) {
      p *= kShrink;
      p_prev *= kShrink;
      dp *= kShrink;
      dp_prev *= kShrink;
      sum_sq *= kShrink * kShrink;
      log_scale -= log_shrink;
    }
  }
  return {p / dp, std::log(sum_sq) + 2.0 * log_scale};
}

std::vector<double> jacobi_eigenvalues(const Recurrence& rec, int n) {
  if (n == 1) return {rec.alpha(0)};
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 0; k < n; ++k) diag[k] = rec.alpha(k);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(rec.beta(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("quadrature: Jacobi eigenvalue iteration did not converge");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

std::string to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::legendre:
      return "legendre";
    case RuleKind::hermite:
      return "hermite";
    case RuleKind::laguerre:
      return "laguerre";
  }
  return "unknown";
}

int max_order(RuleKind kind) noexcept {
  return kind == RuleKind::laguerre ? kMaxLaguerreOrder : kMaxOrder;
}

QuadratureRule make_rule(RuleKind kind, int n) {
  if (n < 1 || n > max_order(kind)) {
    std::ostringstream msg;
    msg << "make_rule: " << to_string(kind) << " order " << n
        << " outside supported range [1, " << max_order(kind) << "]";
    throw DomainError(msg.str());
  }
  const Recurrence rec{kind};
  std::vector<double> nodes = jacobi_eigenvalues(rec, n);

  for (double& x : nodes) {
    for (int iter = 0; iter < 10; ++iter) {
      const double step = evaluate(rec, n, x).newton_step;
      x -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
  }

  const bool symmetric = kind != RuleKind::laguerre;
  if (symmetric) {
    for (int i = 0; i < n / 2; ++i) {
      const double half_gap = 0.5 * (nodes[n - 1 - i] - nodes[i]);
      nodes[i] = -half_gap;
      nodes[n - 1 - i] = half_gap;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
  }

  QuadratureRule rule;
  rule.kind = kind;
  rule.order = n;
  rule.nodes = nodes;
  rule.weights.resize(n);
  rule.scaled_weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = nodes[i];
    const double log_w = -evaluate(rec, n, x).log_christoffel;
    rule.weights[i] = std::exp(log_w);
    switch (kind) {
      case RuleKind::legendre:
        rule.scaled_weights[i] = rule.weights[i];
        break;
      case RuleKind::hermite:
        rule.scaled_weights[i] = std::exp(log_w + x * x);
        break;
      case RuleKind::laguerre:
        rule.scaled_weights[i] = std::exp(log_w + x);
        break;
    }
  }
  if (symmetric) {
    for (int i = 0; i < n / 2; ++i) {
      const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
      const double sw = 0.5 * (rule.scaled_weights[i] + rule.scaled_weights[n - 1 - i]);
      rule.weights[i] = rule.weights[n - 1 - i] = w;
      rule.scaled_weights[i] = rule.scaled_weights[n - 1 - i] = sw;
    }
  }

  for (int i = 0; i < n; ++i) {
    if (!(rule.weights[i] >= DBL_MIN) || !std::isfinite(rule.scaled_weights[i])) {
      throw NumericalError("make_rule: weight underflow at order " + std::to_string(n));
    }
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw NumericalError("make_rule: nodes not strictly ascending at order " +
                           std::to_string(n));
    }
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case RuleKind::legendre:
      rule.domain = {-1.0, 1.0};
      break;
    case RuleKind::hermite:
      rule.domain = {-inf, inf};
      break;
    case RuleKind::laguerre:
      rule.domain = {0.0, inf};
      break;
  }
  return rule;
}

const QuadratureRule& cached_rule(RuleKind kind, int n) {
  struct Slot {
    std::once_flag once;
    std::unique_ptr<QuadratureRule> rule;
  };
  static std::array<std::array<Slot, kMaxOrder + 1>, 3> cache;

  if (n < 1 || n > max_order(kind)) {
    (void)make_rule(kind, n);  // throws the DomainError
  }
  Slot& slot = cache[static_cast<std::size_t>(kind)][static_cast<std::size_t>(n)];
  std::call_once(slot.once, [&] {
    slot.rule = std::make_unique<QuadratureRule>(make_rule(kind, n));
  });
  return *slot.rule;
}

QuadratureRule map_to_interval(const QuadratureRule& rule, double a, double b) {
  if (rule.kind != RuleKind::legendre) {
    throw DomainError("map_to_interval: only Legendre rules can be mapped");
  }
  detail::check_bounds(a, b);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double src_half = 0.5 * (rule.domain.hi - rule.domain.lo);
  const double src_mid = 0.5 * (rule.domain.hi + rule.domain.lo);

  QuadratureRule mapped = rule;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = (rule.nodes[i] - src_mid) / src_half;
    mapped.nodes[i] = half * x + mid;
    mapped.weights[i] = half / src_half * rule.weights[i];
    mapped.scaled_weights[i] = mapped.weights[i];
  }
  mapped.domain = {a, b};
  return mapped;
}

namespace detail {

void throw_non_finite(const char* where, int index, double node, double value) {
  std::ostringstream msg;
  msg.precision(17);
  msg << where << ": integrand is " << value << " at node " << index << " (x = " << node
      << ")";
  throw IntegrationError(msg.str(), index, node);
}

void check_bounds(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    std::ostringstream msg;
    msg << "integration interval [" << a << ", " << b << "] must be finite with a < b";
    throw DomainError(msg.str());
  }
}

}  // namespace detail
}  // namespace statichedge::quadrature
