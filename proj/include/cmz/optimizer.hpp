#pragma once

// Joint estimation of phases, turning points, gamma and sigma against the
// coupled system
//   Phi^2(x_j) = lambda_j                         (susy part)
//   I_j(x_j, lambda_j) = j pi                     (CBC part)
// by minimizing w_susy * sum (Phi^2(x_j) - lambda_j)^2 + w_cbc * sum (I_j - j pi)^2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cmz/cbc_quadrature.hpp"
#include "cmz/differential_evolution.hpp"
#include "cmz/errors.hpp"
#include "cmz/fractal_model.hpp"
#include "cmz/ws_potential.hpp"
#include "cmz/zeta_zeros.hpp"

namespace cmz {

enum class PhaseMode { free, zero_fixed, monotone, fixed_values };
enum class SigmaMode { fixed, free };
enum class XMode { fixed_smooth, free_increasing, fixed_values };

struct Weights {
  double susy = 1.0;
  double cbc = 1.0;
};

struct FitProblem {
  std::size_t n = 7;
  std::size_t m = 7;
  ZeroTable zeros;

  PhaseMode phase_mode = PhaseMode::free;
  std::vector<double> fixed_phases;
  Interval phase_bounds{0.0, 1.0};

  /// A degenerate interval fixes gamma. The lower end is treated as open at 1.
  Interval gamma_bounds{1.0, 5.0};

  SigmaMode sigma_mode = SigmaMode::fixed;
  double sigma_value = 1.0;
  Interval sigma_bounds{0.1, 10.0};

  XMode x_mode = XMode::free_increasing;
  std::vector<double> fixed_x;
  /// Increments x_1 = d_1, x_j = x_{j-1} + d_j.
  Interval delta_bounds{1e-3, 2.0};

  double D = 1.5;
  Weights weights;
  DeControls de;
  QuadratureConfig quadrature{0.75, 200000, 1e-7, Substitution::power_sub};
  PotentialConfig potential;
  /// Extra DE starting points in parameter-vector space.
  std::vector<std::vector<double>> initial_points;
};

inline void validate(const FitProblem& p) {
  detail::require(p.n >= 1, "fit needs n >= 1");
  detail::require(p.zeros.count() >= p.n, "zero table shorter than n");
  detail::require(p.gamma_bounds.low >= 1.0 && p.gamma_bounds.high >= p.gamma_bounds.low,
                  "gamma bounds must satisfy 1 <= low <= high");
  detail::require(p.weights.susy >= 0.0 && p.weights.cbc >= 0.0 &&
                      (p.weights.susy > 0.0 || p.weights.cbc > 0.0),
                  "weights must be nonnegative and not both zero");
  detail::require(p.phase_bounds.low <= p.phase_bounds.high, "inverted phase bounds");
  if (p.phase_mode == PhaseMode::fixed_values)
    detail::require(p.fixed_phases.size() == p.m, "fixed phase count != m");
  if (p.x_mode == XMode::fixed_values)
    detail::require(p.fixed_x.size() == p.n, "fixed turning point count != n");
  if (p.x_mode == XMode::free_increasing)
    detail::require(p.delta_bounds.low > 0.0 && p.delta_bounds.high >= p.delta_bounds.low,
                    "turning point increments must be positive");
  if (p.sigma_mode == SigmaMode::free)
    detail::require(p.sigma_bounds.low >= 0.0 && p.sigma_bounds.high >= p.sigma_bounds.low,
                    "sigma bounds must be nonnegative");
  else
    detail::require(p.sigma_value >= 0.0, "sigma must be nonnegative");
}

/// Positions of each parameter group inside the DE vector.
struct ParamLayout {
  std::size_t phase_offset = 0, phase_count = 0;
  std::size_t delta_offset = 0, delta_count = 0;
  std::optional<std::size_t> gamma_index;
  std::optional<std::size_t> sigma_index;
  std::size_t dimension = 0;
};

inline ParamLayout layout_of(const FitProblem& p) {
  ParamLayout l;
  if (p.phase_mode == PhaseMode::free || p.phase_mode == PhaseMode::monotone) l.phase_count = p.m;
  l.delta_offset = l.phase_offset + l.phase_count;
  if (p.x_mode == XMode::free_increasing) l.delta_count = p.n;
  std::size_t next = l.delta_offset + l.delta_count;
  if (!p.gamma_bounds.degenerate()) l.gamma_index = next++;
  if (p.sigma_mode == SigmaMode::free) l.sigma_index = next++;
  l.dimension = next;
  return l;
}

inline std::vector<Interval> bounds_of(const FitProblem& p) {
  const ParamLayout l = layout_of(p);
  std::vector<Interval> b(l.dimension);
  for (std::size_t k = 0; k < l.phase_count; ++k) b[l.phase_offset + k] = p.phase_bounds;
  for (std::size_t k = 0; k < l.delta_count; ++k) b[l.delta_offset + k] = p.delta_bounds;
  if (l.gamma_index) b[*l.gamma_index] = p.gamma_bounds;
  if (l.sigma_index) b[*l.sigma_index] = p.sigma_bounds;
  return b;
}

/// A point of the model: fractal parameters plus turning points.
struct Candidate {
  FractalParams params;
  std::vector<double> x;
};

inline double open_gamma(double gamma) { return std::max(gamma, 1.0 + 1e-12); }

/// Maps a DE vector to model parameters; `potential` supplies smooth turning points.
inline Candidate decode(const std::vector<double>& v, const FitProblem& p, const SmoothPotential& potential) {
  const ParamLayout l = layout_of(p);
  detail::require(v.size() == l.dimension, "parameter vector has dimension " + std::to_string(v.size()) +
                                               ", expected " + std::to_string(l.dimension));
  Candidate c;
  c.params.D = p.D;
  c.params.phase_range = p.phase_bounds;
  switch (p.phase_mode) {
  case PhaseMode::free:
    c.params.phases.assign(v.begin() + static_cast<std::ptrdiff_t>(l.phase_offset),
                           v.begin() + static_cast<std::ptrdiff_t>(l.phase_offset + l.phase_count));
    break;
  case PhaseMode::monotone:
    c.params.phases.assign(v.begin() + static_cast<std::ptrdiff_t>(l.phase_offset),
                           v.begin() + static_cast<std::ptrdiff_t>(l.phase_offset + l.phase_count));
    std::sort(c.params.phases.begin(), c.params.phases.end());
    break;
  case PhaseMode::zero_fixed:
    c.params.phases.assign(p.m, 0.0);
    break;
  case PhaseMode::fixed_values:
    c.params.phases = p.fixed_phases;
    break;
  }
  c.params.gamma = open_gamma(l.gamma_index ? v[*l.gamma_index] : p.gamma_bounds.low);
  c.params.sigma = l.sigma_index ? v[*l.sigma_index] : p.sigma_value;
  switch (p.x_mode) {
  case XMode::free_increasing: {
    c.x.resize(p.n);
    double acc = 0.0;
    for (std::size_t j = 0; j < p.n; ++j) {
      acc += v[l.delta_offset + j];
      c.x[j] = acc;
    }
    break;
  }
  case XMode::fixed_smooth:
    c.x.resize(p.n);
    for (std::size_t j = 0; j < p.n; ++j) c.x[j] = potential.smooth_turning_point(p.zeros.values[j]);
    break;
  case XMode::fixed_values:
    c.x = p.fixed_x;
    break;
  }
  return c;
}

/// Inverse of decode for the free groups of the layout.
inline std::vector<double> encode(const Candidate& c, const FitProblem& p) {
  const ParamLayout l = layout_of(p);
  std::vector<double> v(l.dimension);
  for (std::size_t k = 0; k < l.phase_count; ++k) v[l.phase_offset + k] = c.params.phases.at(k);
  double prev = 0.0;
  for (std::size_t j = 0; j < l.delta_count; ++j) {
    v[l.delta_offset + j] = c.x.at(j) - prev;
    prev = c.x[j];
  }
  if (l.gamma_index) v[*l.gamma_index] = c.params.gamma;
  if (l.sigma_index) v[*l.sigma_index] = c.params.sigma;
  return v;
}

struct ObjectiveValue {
  double ssq_susy = 0.0;
  double ssq_cbc = 0.0;
  double total = 0.0;
};

/// Smallest potential configuration able to invert every x the problem can produce.
inline PotentialConfig sized_potential(const FitProblem& p) {
  PotentialConfig config = p.potential;
  double needed = 0.0;
  switch (p.x_mode) {
  case XMode::free_increasing:
    needed = static_cast<double>(p.n) * p.delta_bounds.high;
    break;
  case XMode::fixed_values:
    for (double x : p.fixed_x) needed = std::max(needed, std::abs(x));
    break;
  case XMode::fixed_smooth:
    needed = 0.0;
    for (std::size_t j = 0; j < p.n; ++j) needed = std::max(needed, p.zeros.values[j] + config.V0);
    while (config.max_V < 1.05 * needed) config.max_V *= 2.0;
    return config;
  }
  while (SmoothPotential({config.V0, config.max_V, 0.0}).max_x() < needed) config.max_V *= 2.0;
  return config;
}

/// Objective evaluation bound to one problem. The smooth part of Phi^2 at
/// fixed turning points is computed once.
class FitEvaluator {
public:
  explicit FitEvaluator(FitProblem problem)
      : problem_(std::move(problem)), potential_(sized_potential(problem_)) {
    validate(problem_);
    if (problem_.x_mode != XMode::free_increasing) {
      const Candidate base = cmz::decode(std::vector<double>(layout_of(problem_).dimension, 0.0), problem_, potential_);
      fixed_x_ = base.x;
      fixed_smooth_.reserve(fixed_x_.size());
      for (double x : fixed_x_) fixed_smooth_.push_back(potential_.V_of_x(x) - potential_.V0());
    }
  }

  [[nodiscard]] const FitProblem& problem() const noexcept { return problem_; }
  [[nodiscard]] const SmoothPotential& potential() const noexcept { return potential_; }

  [[nodiscard]] Candidate decode(const std::vector<double>& v) const { return cmz::decode(v, problem_, potential_); }

  /// Both sums are always computed, with the doubling check as configured.
  [[nodiscard]] ObjectiveValue evaluate(const Candidate& c) const { return evaluate(c, true, false); }

  [[nodiscard]] ObjectiveValue evaluate(const std::vector<double>& v) const {
    return evaluate(decode(v), problem_.weights.cbc > 0.0, false);
  }

  /// Weighted total used as DE fitness. Integrals skip the doubling check
  /// here; reported results are re-evaluated with it.
  [[nodiscard]] double operator()(const std::vector<double>& v) const {
    return evaluate(decode(v), problem_.weights.cbc > 0.0, true).total;
  }

private:
  [[nodiscard]] ObjectiveValue evaluate(const Candidate& c, bool with_cbc, bool search) const {
    detail::require(c.x.size() == problem_.n, "candidate has " + std::to_string(c.x.size()) +
                                                  " turning points, expected " + std::to_string(problem_.n));
    const SusyPotential phi2(potential_, c.params);
    const WeierstrassTerms terms(c.params);
    const bool reuse = !fixed_x_.empty() && c.x == fixed_x_;
    ObjectiveValue out;
    for (std::size_t j = 0; j < problem_.n; ++j) {
      const double lambda = problem_.zeros.values[j];
      const double value = reuse ? fixed_smooth_[j] + c.params.sigma * terms(c.x[j]) : phi2(c.x[j]);
      out.ssq_susy += (value - lambda) * (value - lambda);
    }
    if (with_cbc) {
      QuadratureConfig quad = resolved_for(problem_.quadrature, c.params);
      if (search) quad.check_doubling = false;
      for (std::size_t j = 0; j < problem_.n; ++j) {
        const double lambda = problem_.zeros.values[j];
        const double target = static_cast<double>(j + 1) * std::numbers::pi;
        const double integral = cbc_integral(lambda, c.x[j], phi2, quad);
        out.ssq_cbc += (integral - target) * (integral - target);
      }
    }
    out.total = problem_.weights.susy * out.ssq_susy + problem_.weights.cbc * out.ssq_cbc;
    return out;
  }

  FitProblem problem_;
  SmoothPotential potential_;
  std::vector<double> fixed_x_;
  std::vector<double> fixed_smooth_;
};

/// Objective at a DE parameter vector.
inline ObjectiveValue objective(const std::vector<double>& candidate, const FitProblem& problem) {
  const FitEvaluator evaluator(problem);
  return evaluator.evaluate(evaluator.decode(candidate));
}

struct FitResult {
  FractalParams params;
  std::vector<double> x;
  double ssq_susy = 0.0;
  double ssq_cbc = 0.0;
  double ssq_total = 0.0;
  Weights weights;
  CbcReport cbc_report;
  std::vector<double> history;
  std::uint64_t seed = 0;
  std::size_t evaluations = 0;
  std::size_t failures = 0;
};

inline FitResult assemble_result(const FitEvaluator& evaluator, const Candidate& c) {
  const FitProblem& p = evaluator.problem();
  FitResult r;
  r.params = c.params;
  r.x = c.x;
  r.weights = p.weights;
  r.seed = p.de.seed;
  const ObjectiveValue value = evaluator.evaluate(c);
  r.ssq_susy = value.ssq_susy;
  r.ssq_cbc = value.ssq_cbc;
  r.ssq_total = value.total;
  r.cbc_report = cbc_ratio_series(p.zeros.first(p.n), c.x, evaluator.potential(), c.params, p.quadrature);
  return r;
}

inline FitResult differential_evolution(const FitProblem& problem) {
  const FitEvaluator evaluator(problem);
  const std::vector<Interval> bounds = bounds_of(problem);
  if (bounds.empty()) {
    FitResult r = assemble_result(evaluator, evaluator.decode({}));
    r.history = {r.ssq_total};
    return r;
  }
  const DeResult de = cmz::differential_evolution(
      [&evaluator](const std::vector<double>& v) { return evaluator(v); }, bounds, problem.de,
      problem.initial_points);
  FitResult r = assemble_result(evaluator, evaluator.decode(de.best));
  r.history = de.history;
  r.evaluations = de.evaluations;
  r.failures = de.failures;
  return r;
}

/// Deterministic re-evaluation of a given parameter set (no optimization).
inline FitResult replay(const FractalParams& params, const std::vector<double>& x, const FitProblem& problem) {
  detail::require(x.size() == problem.n, "replay: " + std::to_string(x.size()) +
                                             " turning points for n = " + std::to_string(problem.n));
  FitProblem p = problem;
  p.x_mode = XMode::fixed_values;
  p.fixed_x = x;
  const FitEvaluator evaluator(p);
  FitResult r = assemble_result(evaluator, {params, x});
  r.history = {r.ssq_total};
  return r;
}

/// True when every phase is within `tol` of 1/4 or 3/4 (cos(2 pi alpha) = 0).
inline bool zero_real_part_family(const std::vector<double>& phases, double tol = 1e-3) {
  return std::all_of(phases.begin(), phases.end(), [tol](double a) {
    const double frac = a - std::floor(a);
    return std::abs(frac - 0.25) <= tol || std::abs(frac - 0.75) <= tol;
  });
}

/// Phase-only fit at fixed turning points and fixed gamma; minimizes the susy sum.
inline FitResult fit_phases_fixed_x(FitProblem problem) {
  detail::require(problem.x_mode != XMode::free_increasing, "fit_phases_fixed_x needs fixed turning points");
  detail::require(problem.gamma_bounds.degenerate(), "fit_phases_fixed_x needs a fixed gamma");
  detail::require(problem.m == problem.n, "fit_phases_fixed_x expects m = n");
  problem.weights = {1.0, 0.0};
  return differential_evolution(problem);
}

struct TwoStepIteration {
  /// (a) phases refit at the current turning points.
  FitResult phase_step;
  /// (b) turning points moved toward unit CBC ratios, phases of (a) kept.
  FitResult adjust_step;
};

/// Alternates a phase fit at fixed x with per-level turning-point adjustment.
/// `initial_phases` (scaled) seed the first phase fit and are kept unless the
/// fit strictly improves on them.
inline std::vector<TwoStepIteration> iterate_two_step(const FitProblem& problem, std::size_t iterations,
                                                      std::optional<std::vector<double>> initial_phases = {},
                                                      AdjustOptions adjust = {}) {
  detail::require(iterations >= 1, "iterate_two_step needs iterations >= 1");
  detail::require(problem.gamma_bounds.degenerate(), "iterate_two_step needs a fixed gamma");
  FitProblem phase_problem = problem;
  phase_problem.phase_mode = problem.phase_mode == PhaseMode::monotone ? PhaseMode::monotone : PhaseMode::free;
  phase_problem.sigma_mode = SigmaMode::fixed;
  phase_problem.x_mode = XMode::fixed_values;
  phase_problem.weights = {1.0, 0.0};

  const SmoothPotential base_potential(sized_potential(problem));
  std::vector<double> x(problem.n);
  for (std::size_t j = 0; j < problem.n; ++j) x[j] = base_potential.smooth_turning_point(problem.zeros.values[j]);
  std::optional<std::vector<double>> phases = std::move(initial_phases);

  std::vector<TwoStepIteration> out;
  for (std::size_t it = 0; it < iterations; ++it) {
    phase_problem.fixed_x = x;
    phase_problem.de.seed = problem.de.seed + it;
    phase_problem.initial_points.clear();
    FitEvaluator evaluator(phase_problem);
    std::optional<Candidate> incumbent;
    if (phases) {
      incumbent = Candidate{evaluator.decode(std::vector<double>(layout_of(phase_problem).dimension, 0.0)).params, x};
      incumbent->params.phases = *phases;
      phase_problem.initial_points.push_back(encode(*incumbent, phase_problem));
    }
    FitResult fitted = differential_evolution(phase_problem);
    if (incumbent) {
      FitResult kept = assemble_result(FitEvaluator(phase_problem), *incumbent);
      if (!(fitted.ssq_susy < kept.ssq_susy)) {
        kept.history = fitted.history;
        kept.evaluations = fitted.evaluations;
        fitted = std::move(kept);
      }
    }

    std::vector<double> adjusted(problem.n);
    for (std::size_t j = 1; j <= problem.n; ++j) {
      adjusted[j - 1] = adjust_turning_point(j, problem.zeros.lambda(j), evaluator.potential(), fitted.params,
                                             problem.quadrature, adjust)
                            .x;
    }
    FitProblem adjusted_problem = phase_problem;
    adjusted_problem.fixed_x = adjusted;
    FitResult adjusted_result = assemble_result(FitEvaluator(adjusted_problem), {fitted.params, adjusted});

    double change = 0.0;
    if (phases)
      for (std::size_t k = 0; k < phases->size(); ++k)
        change = std::max(change, std::abs((*phases)[k] - fitted.params.phases[k]));
    for (std::size_t j = 0; j < x.size(); ++j) change = std::max(change, std::abs(x[j] - adjusted[j]));

    phases = fitted.params.phases;
    x = adjusted;
    out.push_back({std::move(fitted), std::move(adjusted_result)});
    if (change < 1e-6) break;
  }
  return out;
}

} // namespace cmz
