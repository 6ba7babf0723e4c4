#pragma once

// Fractal CBC quantization integral
//   I(lambda, x_t) = (2 / Gamma(beta)) * int_{-x_t}^{x_t} sqrt(max(0, lambda - Phi^2(x'))) (x_t - x')^{beta - 1} dx'
// and the per-level ratio I_j / (j pi).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "cmz/errors.hpp"
#include "cmz/format.hpp"
#include "cmz/fractal_model.hpp"
#include "cmz/quadrature.hpp"
#include "cmz/ws_potential.hpp"
#include "cmz/zeta_zeros.hpp"

namespace cmz {

enum class Substitution { power_sub, gauss_jacobi };

struct QuadratureConfig {
  double beta = 0.75;
  /// Integrand evaluations allowed (power_sub) or largest rule size (gauss_jacobi).
  std::size_t node_budget = 200000;
  double rel_tol = 1e-8;
  Substitution substitution = Substitution::power_sub;
  /// Accept only when the doubled-node sum agrees to rel_tol; otherwise restart
  /// from the bisected partition. Off, the adaptive error estimate alone decides.
  bool check_doubling = true;
  /// Widest starting panel in x; 0 starts from one panel. Set it below the
  /// shortest oscillation of phi2 so no window where the integrand vanishes
  /// (or does not) can hide between nodes.
  double panel_width = 0.0;
};

inline void validate(const QuadratureConfig& config) {
  detail::require(config.beta > 0.0 && config.beta < 1.0, "kernel exponent beta must lie in (0, 1)");
  detail::require(config.rel_tol > 0.0 && config.rel_tol < 1e-4, "rel_tol must lie in (0, 1e-4)");
  detail::require(config.node_budget >= 16, "node_budget must be at least 16");
  detail::require(config.panel_width >= 0.0, "panel_width must be >= 0");
}

/// `config` with the starting panels no wider than a quarter period of the
/// fastest Weierstrass term that still matters, nor than 0.05. A term matters
/// when its peak contribution to Phi^2, 4 sigma |cos 2 pi alpha_k| / gamma^(k(2-D)),
/// is at least rel_tol; smaller ripples shift the integral by about that
/// relative amount. Left unchanged when no term matters.
inline QuadratureConfig resolved_for(QuadratureConfig config, const FractalParams& params) {
  config.beta = params.beta();
  std::size_t fastest = 0;
  for (std::size_t k = 1; k <= params.m(); ++k) {
    const double kd = static_cast<double>(k);
    const double ripple = 4.0 * params.sigma * std::abs(std::cos(2.0 * std::numbers::pi * params.phases[k - 1])) /
                          std::pow(params.gamma, kd * (2.0 - params.D));
    if (ripple >= config.rel_tol) fastest = k;
  }
  if (fastest > 0) {
    const double quarter = 0.5 * std::numbers::pi / std::pow(params.gamma, static_cast<double>(fastest));
    config.panel_width = std::min(quarter, 0.05);
  }
  return config;
}

struct CbcIntegral {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  /// Same integral with the node count doubled on the final partition
  /// (0 when the doubling check is off).
  double refined = 0.0;
};

namespace detail {

inline double cbc_prefactor(double beta) { return 2.0 / std::tgamma(beta); }

} // namespace detail

/// Evaluates the CBC integral with its diagnostics. `phi2` is any callable double -> double.
template <class Phi2>
CbcIntegral cbc_integral_detail(double lambda, double x_t, const Phi2& phi2, const QuadratureConfig& config = {}) {
  validate(config);
  detail::require(x_t > 0.0, "turning point must be positive, got " + format_number(x_t));
  detail::require(lambda > 0.0, "lambda must be positive");
  const double beta = config.beta;
  const double prefactor = detail::cbc_prefactor(beta);
  auto g = [&](double x) { return std::sqrt(std::max(0.0, lambda - phi2(x))); };

  CbcIntegral out;
  if (config.substitution == Substitution::power_sub) {
    // u = x_t - x' = s^{1/beta}: the kernel becomes the constant 1 / beta.
    const double inv_beta = 1.0 / beta;
    auto h = [&](double s) { return g(x_t - std::pow(s, inv_beta)) * inv_beta; };
    const double s_max = std::pow(2.0 * x_t, beta);
    quad::AdaptiveOptions options;
    options.rel_tol = config.rel_tol;
    options.abs_tol = 1e-15 * std::sqrt(lambda) * s_max;
    // The GK error estimate can miss a narrow window where the integrand is
    // (non)zero; the doubling check catches that and forces a finer start.
    // Starting partition uniform in x, mapped to s.
    std::size_t panels = 1;
    if (config.panel_width > 0.0) {
      const double count = std::ceil(2.0 * x_t / config.panel_width);
      if (15.0 * count > static_cast<double>(config.node_budget))
        throw NumericalError("CBC integral needs " + format_number(count) + " starting panels, over the budget of " +
                             std::to_string(config.node_budget) + " evaluations (x_t = " + format_number(x_t) + ")");
      panels = static_cast<std::size_t>(count);
    }
    std::vector<double> breaks(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i)
      breaks[i] = i == panels ? s_max : std::pow(2.0 * x_t * static_cast<double>(i) / static_cast<double>(panels), beta);
    std::size_t spent = 0;
    for (;;) {
      options.max_evaluations = config.node_budget - std::min(spent, config.node_budget);
      const quad::Result r = quad::integrate_adaptive(h, breaks, options);
      spent += r.evaluations;
      if (!r.converged)
        throw NumericalError("CBC integral not converged within " + std::to_string(config.node_budget) +
                             " evaluations (lambda = " + format_number(lambda) + ", x_t = " + format_number(x_t) +
                             ", error estimate " + format_number(r.error) + ")");
      out.value = prefactor * r.value;
      out.error = prefactor * r.error;
      out.evaluations = spent;
      if (!config.check_doubling) return out;
      out.refined = prefactor * quad::integrate_refined(h, r.panels);
      spent += 30 * r.panels.size();
      out.evaluations = spent;
      if (std::abs(out.refined - out.value) <= std::max(config.rel_tol * std::abs(out.value), prefactor * options.abs_tol))
        return out;
      if (spent >= config.node_budget)
        throw NumericalError("CBC integral failed the node-doubling check within " +
                             std::to_string(config.node_budget) + " evaluations (lambda = " +
                             format_number(lambda) + ", x_t = " + format_number(x_t) + ")");
      breaks = quad::bisected_breaks(r.panels);
    }
  }

  // Gauss-Jacobi on t in [-1, 1], x' = x_t t: weight (1 - t)^{beta - 1}.
  const double scale = prefactor * std::pow(x_t, beta);
  double previous = 0.0;
  bool have_previous = false;
  for (std::size_t n = 16; n <= config.node_budget; n *= 2) {
    const quad::Rule rule = quad::gauss_jacobi_rule(n, beta - 1.0, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += rule.weights[i] * g(x_t * rule.nodes[i]);
    sum *= scale;
    out.evaluations += n;
    if (have_previous && std::abs(sum - previous) <= config.rel_tol * std::abs(sum)) {
      out.value = previous;
      out.refined = sum;
      out.error = std::abs(sum - previous);
      return out;
    }
    previous = sum;
    have_previous = true;
  }
  throw NumericalError("Gauss-Jacobi CBC integral not converged within " +
                       std::to_string(config.node_budget) + " nodes");
}

template <class Phi2>
double cbc_integral(double lambda, double x_t, const Phi2& phi2, const QuadratureConfig& config = {}) {
  return cbc_integral_detail(lambda, x_t, phi2, config).value;
}

/// Closed form for a constant potential phi2 = c < lambda.
inline double cbc_constant_potential(double lambda, double c, double x_t, double beta) {
  return detail::cbc_prefactor(beta) * std::sqrt(lambda - c) * std::pow(2.0 * x_t, beta) / beta;
}

// ---------------------------------------------------------------------------

struct CbcLevel {
  std::size_t j = 0;
  double lambda = 0.0;
  double x = 0.0;
  double integral = 0.0;
  double ratio = 0.0;
};

struct CbcReport {
  std::vector<CbcLevel> levels;

  [[nodiscard]] std::vector<double> ratios() const {
    std::vector<double> r;
    r.reserve(levels.size());
    for (const auto& level : levels) r.push_back(level.ratio);
    return r;
  }
};

inline CbcLevel make_level(std::size_t j, double lambda, double x, double integral) {
  return {j, lambda, x, integral, integral / (static_cast<double>(j) * std::numbers::pi)};
}

/// CBC ratios I_j / (j pi) for j = 1..n at the given turning points (any order).
inline CbcReport cbc_ratio_series(const ZeroTable& zeros, const std::vector<double>& x,
                                  const SmoothPotential& potential, const FractalParams& params,
                                  QuadratureConfig config = {}) {
  detail::require(x.size() == zeros.count(),
                  "turning point count " + std::to_string(x.size()) + " != zero count " +
                      std::to_string(zeros.count()));
  config = resolved_for(config, params);
  const SusyPotential phi2(potential, params);
  CbcReport report;
  report.levels.reserve(x.size());
  for (std::size_t j = 1; j <= x.size(); ++j) {
    const double lambda = zeros.lambda(j);
    report.levels.push_back(make_level(j, lambda, x[j - 1], cbc_integral(lambda, x[j - 1], phi2, config)));
  }
  return report;
}

/// CSV with header "j,lambda,x,integral,ratio".
inline void write_csv(std::ostream& out, const CbcReport& report) {
  out << "j,lambda,x,integral,ratio\n";
  for (const auto& l : report.levels) {
    out << l.j << ',' << format_number(l.lambda) << ',' << format_number(l.x) << ','
        << format_number(l.integral) << ',' << format_number(l.ratio) << '\n';
  }
}

// ---------------------------------------------------------------------------

struct AdjustOptions {
  /// Search interval; a default-constructed one means (0, 1.05 x_smooth].
  Interval search{};
  std::size_t grid_points = 400;
  double x_tol = 1e-7;
};

struct AdjustResult {
  double x = 0.0;
  double ratio = 0.0;
};

/// Moves the j-th turning point to minimize |I_j(x) / (j pi) - 1|:
/// grid scan followed by golden-section refinement around the best node.
inline AdjustResult adjust_turning_point(std::size_t j, double lambda, const SmoothPotential& potential,
                                         const FractalParams& params, QuadratureConfig config = {},
                                         AdjustOptions options = {}) {
  detail::require(j >= 1, "level index j must be >= 1");
  config = resolved_for(config, params);
  Interval search = options.search;
  if (search.low == 0.0 && search.high == 0.0)
    search = {0.0, 1.05 * potential.smooth_turning_point(lambda)};
  detail::require(search.high >= search.low && search.high > 0.0 && search.low >= 0.0,
                  "adjust_turning_point needs a nonempty positive search interval");
  const SusyPotential phi2(potential, params);
  const double target = static_cast<double>(j) * std::numbers::pi;
  auto ratio_at = [&](double x) { return cbc_integral(lambda, x, phi2, config) / target; };
  auto loss = [&](double x) { return std::abs(ratio_at(x) - 1.0); };

  if (search.degenerate()) return {search.high, ratio_at(search.high)};

  // Open at a zero lower end: the integral vanishes there.
  const std::size_t points = std::max<std::size_t>(options.grid_points, 2);
  const double step = search.width() / static_cast<double>(search.low == 0.0 ? points : points - 1);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = search.low == 0.0 ? step * static_cast<double>(i + 1)
                                : search.low + step * static_cast<double>(i);
  std::size_t best = 0;
  double best_loss = loss(grid[0]);
  for (std::size_t i = 1; i < points; ++i) {
    const double l = loss(grid[i]);
    if (l < best_loss) {
      best_loss = l;
      best = i;
    }
  }
  double a = best == 0 ? std::max(search.low, grid[0] - step) : grid[best - 1];
  double b = best + 1 < points ? grid[best + 1] : grid[best];
  if (a <= 0.0) a = 0.5 * grid[0];
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = loss(c), fd = loss(d);
  while (b - a > options.x_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = loss(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = loss(d);
    }
  }
  double x_best = 0.5 * (a + b);
  double r_best = ratio_at(x_best);
  if (best_loss < std::abs(r_best - 1.0)) {
    x_best = grid[best];
    r_best = ratio_at(x_best);
  }
  return {x_best, r_best};
}

} // namespace cmz
