#pragma once

// Smooth Wu-Sprung potential. The potential is given implicitly as x(V);
// V(x) is recovered numerically, and the well is extended evenly to x < 0.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "cmz/errors.hpp"
#include "cmz/format.hpp"

namespace cmz {

inline constexpr double kWuSprungV0 = 3.10073 * std::numbers::pi;

struct PotentialConfig {
  double V0 = kWuSprungV0;
  /// Ceiling for V; fixes the invertible x range.
  double max_V = 400.0;
  /// Node spacing in x of the interpolation cache; 0 disables the cache.
  double cache_resolution = 1.0 / 40.0;
};

class SmoothPotential {
public:
  explicit SmoothPotential(const PotentialConfig& config = {}) : config_(config) {
    detail::require(config_.V0 > 2.0 * std::numbers::pi,
                    "V0 must exceed 2 pi for a single-valued inverse");
    detail::require(config_.max_V > config_.V0, "max_V must exceed V0");
    detail::require(config_.cache_resolution >= 0.0, "cache resolution must be >= 0");
    log_term_ = std::log(config_.V0 / (2.0 * std::numbers::pi * std::numbers::e * std::numbers::e));
    omega_ = 1.0 / std::log(config_.V0 / (2.0 * std::numbers::pi));
    max_s_ = std::sqrt(config_.max_V - config_.V0);
    max_x_ = x_of_s(max_s_);
    if (config_.cache_resolution > 0.0) build_cache();
  }

  [[nodiscard]] const PotentialConfig& config() const noexcept { return config_; }
  [[nodiscard]] double V0() const noexcept { return config_.V0; }
  [[nodiscard]] double max_V() const noexcept { return config_.max_V; }
  /// Largest |x| at which V_of_x is defined.
  [[nodiscard]] double max_x() const noexcept { return max_x_; }
  /// 1 / ln(V0 / 2 pi).
  [[nodiscard]] double omega() const noexcept { return omega_; }
  [[nodiscard]] bool has_cache() const noexcept { return !cache_s_.empty(); }

  /// The implicit Wu-Sprung relation x(V), V >= V0.
  [[nodiscard]] double x_of_V(double V) const {
    detail::require(V >= config_.V0, "x_of_V requires V >= V0, got " + format_number(V));
    return x_of_s(std::sqrt(V - config_.V0));
  }

  /// dx/dV; diverges at V0.
  [[nodiscard]] double dx_dV(double V) const {
    detail::require(V > config_.V0, "dx_dV requires V > V0");
    const double s = std::sqrt(V - config_.V0);
    return dx_ds(s) / (2.0 * s);
  }

  /// Inverse potential V_WS(|x|); uses the cache when present.
  [[nodiscard]] double V_of_x(double x) const {
    const double ax = std::abs(x);
    check_range(ax);
    if (cache_s_.empty()) return config_.V0 + square(solve_s(ax));
    return config_.V0 + square(polish(ax, interpolate_s(ax)));
  }

  /// Inverse potential by a safeguarded Newton solve, no cache.
  [[nodiscard]] double V_of_x_direct(double x) const {
    const double ax = std::abs(x);
    check_range(ax);
    return config_.V0 + square(solve_s(ax));
  }

  /// Turning point of the translated smooth well: V_WS(x) - V0 = lambda.
  [[nodiscard]] double smooth_turning_point(double lambda) const {
    detail::require(lambda > 0.0, "turning point requires lambda > 0");
    return x_of_s(std::sqrt(lambda));
  }

  /// Coefficients a_1..a_3 of the small-x power series of V_WS(x).
  [[nodiscard]] std::array<double, 3> dominici_coefficients() const noexcept {
    const double w = omega_;
    return {w, 4.0 / 3.0 * w * w, 8.0 / 15.0 * w * w + 28.0 / 9.0 * w * w * w};
  }

  /// Truncated series V0 + sum_k a_k (pi x)^{2k} omega^{2k-1} (-V0)^{1-k}.
  /// The guard |pi x omega| < 1 is enforced unless `enforce_guard` is false.
  [[nodiscard]] double dominici_series(double x, int terms, bool enforce_guard = true) const {
    detail::require(terms >= 1 && terms <= 3, "dominici_series supports 1..3 terms");
    const double y = std::numbers::pi * std::abs(x);
    if (enforce_guard)
      detail::require(y * omega_ < 1.0, "dominici_series guard |pi x omega| < 1 violated at x = " +
                                            format_number(x));
    const auto a = dominici_coefficients();
    double value = config_.V0;
    for (int k = 1; k <= terms; ++k) {
      value += a[static_cast<std::size_t>(k - 1)] * std::pow(y, 2 * k) *
               std::pow(omega_, 2 * k - 1) * std::pow(-config_.V0, 1 - k);
    }
    return value;
  }

  /// Largest x admitted by the dominici_series guard.
  [[nodiscard]] double dominici_guard_x() const noexcept {
    return 1.0 / (std::numbers::pi * omega_);
  }

private:
  static double square(double v) noexcept { return v * v; }

  // In s = sqrt(V - V0) the relation is smooth at the origin.
  [[nodiscard]] double x_of_s(double s) const noexcept {
    const double r = std::sqrt(config_.V0 + s * s);
    return (s * log_term_ + 2.0 * r * std::atanh(s / r)) / std::numbers::pi;
  }
  [[nodiscard]] double dx_ds(double s) const noexcept {
    const double r = std::sqrt(config_.V0 + s * s);
    return (1.0 / omega_ + 2.0 * s * std::atanh(s / r) / r) / std::numbers::pi;
  }

  void check_range(double ax) const {
    if (ax > max_x_ * (1.0 + 1e-14))
      throw ValidationError("x = " + format_number(ax) + " beyond invertible range " +
                            format_number(max_x_) + " (raise max_V)");
  }

  [[nodiscard]] double solve_s(double x) const {
    if (x == 0.0) return 0.0;
    double lo = 0.0, hi = max_s_;
    double s = std::min(x * std::numbers::pi * omega_, 0.5 * (lo + hi));
    for (int iter = 0; iter < 200; ++iter) {
      const double f = x_of_s(s) - x;
      if (f > 0.0) hi = s; else lo = s;
      double next = s - f / dx_ds(s);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - s) <= 1e-15 * std::max(1.0, s)) return next;
      s = next;
    }
    return s;
  }

  [[nodiscard]] double polish(double x, double s) const noexcept {
    return s - (x_of_s(s) - x) / dx_ds(s);
  }

  void build_cache() {
    const double h = config_.cache_resolution;
    const auto nodes = static_cast<std::size_t>(std::floor(max_x_ / h)) + 2;
    cache_x_.resize(nodes);
    cache_s_.resize(nodes);
    cache_ds_.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
      const double x = std::min(static_cast<double>(i) * h, max_x_);
      const double s = solve_s(x);
      cache_x_[i] = x;
      cache_s_[i] = s;
      cache_ds_[i] = 1.0 / dx_ds(s);
    }
  }

  // Cubic Hermite interpolation of s(x) with exact slopes.
  [[nodiscard]] double interpolate_s(double x) const noexcept {
    const double h = config_.cache_resolution;
    auto i = static_cast<std::size_t>(x / h);
    if (i + 1 >= cache_x_.size()) i = cache_x_.size() - 2;
    const double x0 = cache_x_[i];
    const double width = cache_x_[i + 1] - x0;
    if (width <= 0.0) return cache_s_[i];
    const double t = (x - x0) / width;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * cache_s_[i] + (t3 - 2 * t2 + t) * width * cache_ds_[i] +
           (-2 * t3 + 3 * t2) * cache_s_[i + 1] + (t3 - t2) * width * cache_ds_[i + 1];
  }

  PotentialConfig config_;
  double log_term_ = 0.0;
  double omega_ = 0.0;
  double max_s_ = 0.0;
  double max_x_ = 0.0;
  std::vector<double> cache_x_;
  std::vector<double> cache_s_;
  std::vector<double> cache_ds_;
};

} // namespace cmz
