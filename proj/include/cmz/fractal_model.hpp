#pragma once

// Truncated Weierstrass fractal term and the supersymmetric potential-squared
//   Phi^2(x) = V_WS(|x|) - V0 + sigma * F(x),
//   F(x) = 2 sum_{k=1..m} (1 - cos(x gamma^k)) cos(2 pi alpha_k) / gamma^{k (2 - D)}.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmz/errors.hpp"
#include "cmz/format.hpp"
#include "cmz/ws_potential.hpp"

namespace cmz {

struct Interval {
  double low = 0.0;
  double high = 0.0;

  [[nodiscard]] bool contains(double v) const noexcept { return v >= low && v <= high; }
  [[nodiscard]] double width() const noexcept { return high - low; }
  [[nodiscard]] bool degenerate() const noexcept { return low == high; }
};

struct FractalParams {
  double gamma = 3.0;
  double sigma = 1.0;
  double D = 1.5;
  /// Scaled phases alpha_k, k = 1..m; the physical phase is 2 pi alpha_k.
  std::vector<double> phases;
  /// Admissible range for the scaled phases.
  Interval phase_range{0.0, 1.0};

  [[nodiscard]] double beta() const noexcept { return 0.5 * D; }
  [[nodiscard]] std::size_t m() const noexcept { return phases.size(); }
};

inline void validate(const FractalParams& params) {
  detail::require(params.gamma > 1.0, "gamma must exceed 1, got " + format_number(params.gamma));
  detail::require(params.sigma >= 0.0, "sigma must be nonnegative");
  detail::require(params.D > 1.0 && params.D < 2.0, "fractal dimension D must lie in (1, 2)");
  for (std::size_t k = 0; k < params.phases.size(); ++k) {
    detail::require(params.phase_range.contains(params.phases[k]),
                    "phase alpha_" + std::to_string(k + 1) + " = " +
                        format_number(params.phases[k]) + " outside its range");
  }
}

/// Converts physical phases (radians, as printed in fit reports) to scaled
/// alpha = theta / 2 pi. Values past the [0, 1] edges by rounding of 2 pi
/// (e.g. 6.28319) are pinned to the edge.
inline std::vector<double> phases_from_radians(std::span<const double> radians) {
  std::vector<double> alpha;
  alpha.reserve(radians.size());
  for (double theta : radians) {
    double a = theta / (2.0 * std::numbers::pi);
    if (a > 1.0 && a < 1.0 + 1e-5) a = 1.0;
    if (a < 0.0 && a > -1e-5) a = 0.0;
    alpha.push_back(a);
  }
  return alpha;
}

/// Precomputed frequencies gamma^k and amplitudes 2 cos(2 pi alpha_k) / gamma^{k(2-D)}.
class WeierstrassTerms {
public:
  WeierstrassTerms() = default;
  explicit WeierstrassTerms(const FractalParams& params) {
    validate(params);
    const std::size_t m = params.m();
    frequency_.resize(m);
    amplitude_.resize(m);
    double freq = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      freq *= params.gamma;
      const double k = static_cast<double>(i + 1);
      frequency_[i] = freq;
      amplitude_[i] = 2.0 * std::cos(2.0 * std::numbers::pi * params.phases[i]) /
                      std::pow(params.gamma, k * (2.0 - params.D));
    }
  }

  [[nodiscard]] double operator()(double x) const noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < frequency_.size(); ++i)
      sum += amplitude_[i] * (1.0 - std::cos(x * frequency_[i]));
    return sum;
  }

  [[nodiscard]] std::span<const double> frequencies() const noexcept { return frequency_; }
  [[nodiscard]] std::span<const double> amplitudes() const noexcept { return amplitude_; }

private:
  std::vector<double> frequency_;
  std::vector<double> amplitude_;
};

/// Real symmetrized Weierstrass contribution (1/2)[W(x) + W(-x) + c.c.], truncated at m.
inline double weierstrass_real(double x, const FractalParams& params) {
  return WeierstrassTerms(params)(x);
}

/// scale * F(x) + offset, for visual calibration against residual potentials.
inline double affine_weierstrass(double x, const FractalParams& params, double scale,
                                 double offset) {
  return scale * weierstrass_real(x, params) + offset;
}

/// Phi^2 as a reusable callable; holds a non-owning pointer to the potential,
/// which must outlive it.
class SusyPotential {
public:
  SusyPotential(const SmoothPotential& potential, FractalParams params)
      : potential_(&potential), params_(std::move(params)), terms_(params_) {}

  [[nodiscard]] double operator()(double x) const {
    const double smooth = potential_->V_of_x(x) - potential_->V0();
    if (params_.sigma == 0.0) return smooth;
    return smooth + params_.sigma * terms_(x);
  }

  [[nodiscard]] const FractalParams& params() const noexcept { return params_; }
  [[nodiscard]] const SmoothPotential& potential() const noexcept { return *potential_; }

private:
  const SmoothPotential* potential_;
  FractalParams params_;
  WeierstrassTerms terms_;
};

inline double phi_squared(double x, const SmoothPotential& potential, const FractalParams& params) {
  return SusyPotential(potential, params)(x);
}

} // namespace cmz
