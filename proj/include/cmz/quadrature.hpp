#pragma once

// Quadrature building blocks: adaptive Gauss-Kronrod (7/15) with a global
// error budget, and Gauss-Jacobi rules for endpoint power singularities.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <vector>

#include "cmz/errors.hpp"

namespace cmz::quad {

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
  /// Final partition; re-usable for refinement checks.
  std::vector<Panel> panels;
};

namespace detail {

// Kronrod abscissae on [0, 1] (positive half), Gauss nodes at odd indices.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

} // namespace detail

/// Seven-point Gauss / fifteen-point Kronrod estimate on one panel.
template <class F>
Panel gauss_kronrod_15(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * detail::kWgk[7];
  double gauss = fc * detail::kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * detail::kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += detail::kWgk[j] * sum;
    if (j % 2 == 1) gauss += detail::kWg[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

struct AdaptiveOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  std::size_t max_evaluations = 200000;
};

/// Starts from the partition given by `breaks` (sorted, at least two points) and
/// bisects the panel with the largest error estimate until the summed estimate
/// meets max(abs_tol, rel_tol * |I|) or the evaluation budget runs out.
template <class F>
Result integrate_adaptive(F&& f, const std::vector<double>& breaks, const AdaptiveOptions& options = {}) {
  Result result;
  if (breaks.size() < 2 || breaks.front() == breaks.back()) {
    result.converged = true;
    return result;
  }
  auto worse = [](const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> queue(worse);
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Panel p = gauss_kronrod_15(f, breaks[i], breaks[i + 1]);
    result.evaluations += 15;
    total += p.value;
    error += p.error;
    queue.push(p);
  }
  while (error > std::max(options.abs_tol, options.rel_tol * std::abs(total))) {
    if (result.evaluations + 30 > options.max_evaluations) break;
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      queue.push(worst);
      break;
    }
    const Panel left = gauss_kronrod_15(f, worst.a, mid);
    const Panel right = gauss_kronrod_15(f, mid, worst.b);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  result.converged = error <= std::max(options.abs_tol, options.rel_tol * std::abs(total));
  result.panels.reserve(queue.size());
  while (!queue.empty()) {
    result.panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(result.panels.begin(), result.panels.end(),
            [](const Panel& l, const Panel& r) { return l.a < r.a; });
  // Re-sum in order so the value does not depend on the update history.
  result.value = 0.0;
  result.error = 0.0;
  for (const Panel& p : result.panels) {
    result.value += p.value;
    result.error += p.error;
  }
  return result;
}

template <class F>
Result integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& options = {}) {
  return integrate_adaptive(std::forward<F>(f), std::vector<double>{a, b}, options);
}

/// Integral over a fixed partition with every panel bisected (double the nodes).
template <class F>
double integrate_refined(F&& f, const std::vector<Panel>& panels) {
  double total = 0.0;
  for (const Panel& p : panels) {
    const double mid = 0.5 * (p.a + p.b);
    total += gauss_kronrod_15(f, p.a, mid).value + gauss_kronrod_15(f, mid, p.b).value;
  }
  return total;
}

/// Breakpoints of `panels` with every panel bisected.
inline std::vector<double> bisected_breaks(const std::vector<Panel>& panels) {
  std::vector<double> breaks;
  breaks.reserve(2 * panels.size() + 1);
  for (const Panel& p : panels) {
    breaks.push_back(p.a);
    breaks.push_back(0.5 * (p.a + p.b));
  }
  if (!panels.empty()) breaks.push_back(panels.back().b);
  return breaks;
}

// ---------------------------------------------------------------------------
// Gauss-Jacobi

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1 - t)^alpha (1 + t)^beta,
/// alpha, beta > -1. Roots by Newton iteration on the three-term recurrence.
inline Rule gauss_jacobi_rule(std::size_t n, double alpha, double beta) {
  cmz::detail::require(n >= 1, "Gauss-Jacobi rule needs n >= 1");
  cmz::detail::require(alpha > -1.0 && beta > -1.0, "Gauss-Jacobi exponents must exceed -1");
  const double ab = alpha + beta;
  const auto nd = static_cast<double>(n);
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  // P_n(z) and P_{n-1}(z) by recurrence.
  auto evaluate = [&](double z, double& pn, double& pn1) {
    double p0 = 1.0;
    double p1 = 0.5 * (alpha - beta + (ab + 2.0) * z);
    if (n == 1) {
      pn = p1;
      pn1 = p0;
      return;
    }
    for (std::size_t k = 2; k <= n; ++k) {
      const auto kd = static_cast<double>(k);
      const double c = 2.0 * kd + ab;
      const double a1 = 2.0 * kd * (kd + ab) * (c - 2.0);
      const double a2 = (c - 1.0) * (alpha * alpha - beta * beta);
      const double a3 = (c - 2.0) * (c - 1.0) * c;
      const double a4 = 2.0 * (kd + alpha - 1.0) * (kd + beta - 1.0) * c;
      const double p2 = ((a2 + a3 * z) * p1 - a4 * p0) / a1;
      p0 = p1;
      p1 = p2;
    }
    pn = p1;
    pn1 = p0;
  };
  auto derivative = [&](double z, double pn, double pn1) {
    const double c = 2.0 * nd + ab;
    return (nd * (alpha - beta - c * z) * pn + 2.0 * (nd + alpha) * (nd + beta) * pn1) /
           (c * (1.0 - z * z));
  };

  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Initial guesses follow the classic Numerical Recipes scheme.
    if (i == 0) {
      const double an = alpha / nd, bn = beta / nd;
      const double r1 = (1.0 + alpha) * (2.78 / (4.0 + nd * nd) + 0.768 * an / nd);
      const double r2 = 1.0 + 1.48 * an + 0.96 * bn + 0.452 * an * an + 0.83 * an * bn;
      z = 1.0 - r1 / r2;
    } else if (i == 1) {
      const double r1 = (4.1 + alpha) / ((1.0 + alpha) * (1.0 + 0.156 * alpha));
      const double r2 = 1.0 + 0.06 * (nd - 8.0) * (1.0 + 0.12 * alpha) / nd;
      const double r3 = 1.0 + 0.012 * beta * (1.0 + 0.25 * std::abs(alpha)) / nd;
      z -= (1.0 - z) * r1 * r2 * r3;
    } else if (i == 2) {
      const double r1 = (1.67 + 0.28 * alpha) / (1.0 + 0.37 * alpha);
      const double r2 = 1.0 + 0.22 * (nd - 8.0) / nd;
      const double r3 = 1.0 + 8.0 * beta / ((6.28 + beta) * nd * nd);
      z -= (rule.nodes[0] - z) * r1 * r2 * r3;
    } else if (i == n - 2) {
      const double r1 = (1.0 + 0.235 * beta) / (0.766 + 0.119 * beta);
      const double r2 = 1.0 / (1.0 + 0.639 * (nd - 4.0) / (1.0 + 0.71 * (nd - 4.0)));
      const double r3 = 1.0 / (1.0 + 20.0 * alpha / ((7.5 + alpha) * nd * nd));
      z += (z - rule.nodes[i - 2]) * r1 * r2 * r3;
    } else if (i == n - 1) {
      const double r1 = (1.0 + 0.37 * beta) / (1.67 + 0.28 * beta);
      const double r2 = 1.0 / (1.0 + 0.22 * (nd - 8.0) / nd);
      const double r3 = 1.0 / (1.0 + 8.0 * alpha / ((6.28 + alpha) * nd * nd));
      z += (z - rule.nodes[i - 2]) * r1 * r2 * r3;
    } else {
      z = 3.0 * rule.nodes[i - 1] - 3.0 * rule.nodes[i - 2] + rule.nodes[i - 3];
    }
    double pn = 0.0, pn1 = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      evaluate(z, pn, pn1);
      const double step = pn / derivative(z, pn, pn1);
      z -= step;
      if (std::abs(step) <= 1e-15) break;
    }
    evaluate(z, pn, pn1);
    const double dp = derivative(z, pn, pn1);
    rule.nodes[i] = z;
    const double log_w = std::lgamma(alpha + nd) + std::lgamma(beta + nd) -
                         std::lgamma(nd + 1.0) - std::lgamma(nd + ab + 1.0);
    const double c = 2.0 * nd + ab;
    // pn1 here is P_{n-1}; standard weight formula via P_n' and P_{n-1}.
    rule.weights[i] = std::exp(log_w) * c * std::pow(2.0, ab) / (dp * pn1);
  }
  return rule;
}

} // namespace cmz::quad
