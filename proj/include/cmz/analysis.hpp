#pragma once

// Post-fit statistics: circular spacing test, phase-shift correlation,
// normalized residuals, and closed-form identities for fractal turning points.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cmz/errors.hpp"
#include "cmz/format.hpp"
#include "cmz/fractal_model.hpp"
#include "cmz/optimizer.hpp"
#include "cmz/ws_potential.hpp"
#include "cmz/zeta_zeros.hpp"

namespace cmz {

// ---------------------------------------------------------------------------
// Constants

/// zeta(s) for real s > 1: direct sum plus Euler-Maclaurin tail.
inline double zeta_real(double s) {
  detail::require(s > 1.0, "zeta_real requires s > 1");
  constexpr int N = 64;
  double sum = 0.0;
  for (int n = N - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
  const double Nd = N;
  // Bernoulli terms B_2/2!, B_4/4!, B_6/6!, B_8/8!.
  constexpr std::array<double, 4> b = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0};
  double tail = std::pow(Nd, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Nd, -s);
  double rising = s;  // s (s+1) ... (s + 2k - 2)
  for (std::size_t k = 0; k < b.size(); ++k) {
    tail += b[k] * rising * std::pow(Nd, -s - 2.0 * static_cast<double>(k) - 1.0);
    rising *= (s + 2.0 * static_cast<double>(k) + 1.0) * (s + 2.0 * static_cast<double>(k) + 2.0);
  }
  return sum + tail;
}

struct NamedConstants {
  double tribonacci;
  double gelfond_schneider;
  double trott;
  double cahen;
  double zeta3;
  double zeta5;
  double gamma_7_12;

  static NamedConstants compute() {
    NamedConstants c{};
    double t = 1.8;
    for (int i = 0; i < 50; ++i) t -= (t * t * t - t * t - t - 1.0) / (3.0 * t * t - 2.0 * t - 1.0);
    c.tribonacci = t;
    c.gelfond_schneider = std::pow(2.0, std::numbers::sqrt2);
    c.trott = 0.010841015122311136;
    // Cahen: sum (-1)^i / (s_i - 1) over Sylvester's sequence 2, 3, 7, 43, ...
    double sylvester = 2.0, cahen = 0.0, sign = 1.0;
    for (int i = 0; i < 8; ++i) {
      cahen += sign / (sylvester - 1.0);
      sylvester = sylvester * sylvester - sylvester + 1.0;
      sign = -sign;
    }
    c.cahen = cahen;
    c.zeta3 = zeta_real(3.0);
    c.zeta5 = zeta_real(5.0);
    c.gamma_7_12 = std::tgamma(7.0 / 12.0);
    return c;
  }
};

// ---------------------------------------------------------------------------
// Fractal turning-point identities

struct IdentityCheck {
  int id = 0;
  /// Quoted turning point of the fractal potential.
  double lhs = 0.0;
  /// Closed-form expression, including its power of ten.
  double rhs = 0.0;
  double multiplier = 0.0;
  /// Factor printed next to the expression.
  double quoted_multiplier = 0.0;
};

namespace detail {
struct IdentitySpec {
  double x_frac;
  double quoted_multiplier;
  std::size_t zero_index;
};
inline constexpr std::array<IdentitySpec, 5> kIdentities = {{
    {0.949646, 0.99999996, 1},
    {1.660974, 1.0000028005, 3},
    {1.9003895, 0.99999998, 5},
    {2.3843247, 1.00000003037, 7},
    {2.8338417, 1.00000004769, 9},
}};
} // namespace detail

/// Quoted x^frac for identity `id` (1..5).
inline double identity_quoted_x(int id) {
  detail::require(id >= 1 && id <= 5, "identity id must lie in 1..5");
  return detail::kIdentities[static_cast<std::size_t>(id - 1)].x_frac;
}

/// Evaluates identity `id` against `lhs` (defaults to the quoted x^frac).
inline IdentityCheck fractal_identity_check(int id, const NamedConstants& k, const ZeroTable& zeros,
                                            std::optional<double> lhs = {}) {
  detail::require(id >= 1 && id <= 5, "identity id must lie in 1..5, got " + std::to_string(id));
  const auto& spec = detail::kIdentities[static_cast<std::size_t>(id - 1)];
  detail::require(zeros.count() >= spec.zero_index,
                  "identity " + std::to_string(id) + " needs lambda_" + std::to_string(spec.zero_index));
  const double lambda = zeros.lambda(spec.zero_index);
  const double sqrt3 = std::sqrt(3.0);
  double rhs = 0.0;
  switch (id) {
  case 1:
    rhs = 1e-6 * k.tribonacci * std::exp(lambda) / k.gelfond_schneider;
    break;
  case 2: {
    const double l = std::log(2.0 + sqrt3);
    rhs = 1e-21 * std::exp(2.0 * lambda) / (k.tribonacci * l * l);
    break;
  }
  case 3:
    rhs = 1e-40 * std::exp(3.0 * lambda) * 3.0 * k.trott / ((2.0 + sqrt3) * (2.0 + sqrt3));
    break;
  case 4:
    rhs = 1e-72 * std::exp(4.0 * lambda) /
          (k.tribonacci * k.tribonacci * k.cahen * k.cahen * std::log(k.zeta5));
    break;
  case 5:
    rhs = 1e-106 * k.zeta3 * std::exp(4.0 * std::numbers::sqrt2) * std::exp(5.0 * lambda) / k.gamma_7_12;
    break;
  }
  IdentityCheck out;
  out.id = id;
  out.lhs = lhs.value_or(spec.x_frac);
  out.rhs = rhs;
  out.multiplier = out.lhs / rhs;
  out.quoted_multiplier = spec.quoted_multiplier;
  return out;
}

// ---------------------------------------------------------------------------
// Circular statistics

enum class Significance { p_le_0_001, p_le_0_10, not_significant, unknown };

inline std::string to_string(Significance s) {
  switch (s) {
  case Significance::p_le_0_001: return "p<=0.001";
  case Significance::p_le_0_10: return "p<=0.10";
  case Significance::not_significant: return "not-significant";
  case Significance::unknown: return "unknown";
  }
  return "unknown";
}

struct RaoResult {
  double U = 0.0;  ///< degrees
  Significance significance = Significance::unknown;
};

/// Maps any angle to [0, 2 pi).
inline double wrap_angle(double theta) {
  double w = std::fmod(theta, 2.0 * std::numbers::pi);
  if (w < 0.0) w += 2.0 * std::numbers::pi;
  if (w >= 2.0 * std::numbers::pi) w = 0.0;
  return w;
}

/// Rao's spacing statistic U = (1/2) sum |T_i - 360/n| over circular spacings,
/// angles in radians. Critical values are tabulated for n = 20 only.
inline RaoResult rao_spacing_statistic(std::span<const double> angles) {
  detail::require(angles.size() >= 4, "Rao spacing test needs at least 4 angles");
  std::vector<double> deg;
  deg.reserve(angles.size());
  for (double a : angles) {
    detail::require(a >= 0.0 && a < 2.0 * std::numbers::pi,
                    "angle " + format_number(a) + " outside [0, 2 pi)");
    deg.push_back(a * 180.0 / std::numbers::pi);
  }
  std::sort(deg.begin(), deg.end());
  const auto n = static_cast<double>(deg.size());
  double U = 0.0;
  for (std::size_t i = 0; i < deg.size(); ++i) {
    const double spacing = i + 1 < deg.size() ? deg[i + 1] - deg[i] : 360.0 - deg[i] + deg[0];
    U += std::abs(spacing - 360.0 / n);
  }
  RaoResult r;
  r.U = 0.5 * U;
  if (deg.size() == 20) {
    r.significance = r.U > 192.17   ? Significance::p_le_0_001
                     : r.U > 154.31 ? Significance::p_le_0_10
                                    : Significance::not_significant;
  }
  return r;
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
  detail::require(a.size() == b.size() && a.size() >= 3, "correlation needs equal lengths >= 3");
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) throw ValidationError("correlation of a zero-variance sample");
  return sab / std::sqrt(saa * sbb);
}

struct CorrelationCurve {
  std::vector<double> theta;
  std::vector<double> correlation;
  double max = 0.0;
  double argmax = 0.0;
  /// Contiguous theta range around the argmax within 1e-9 of the maximum,
  /// with its ends bisected past the grid resolution.
  double plateau_low = 0.0;
  double plateau_high = 0.0;
};

/// theta_count uniform points on [0, 2 pi].
inline std::vector<double> uniform_theta_grid(std::size_t theta_count = 1024) {
  detail::require(theta_count >= 2, "theta grid needs at least 2 points");
  std::vector<double> grid(theta_count);
  for (std::size_t i = 0; i < theta_count; ++i)
    grid[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(theta_count - 1);
  return grid;
}

/// Pearson correlation of a with (b + theta) mod 2 pi.
inline double shifted_correlation(std::span<const double> a, std::span<const double> b, double theta) {
  std::vector<double> shifted(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) shifted[i] = wrap_angle(b[i] + theta);
  return pearson(a, shifted);
}

inline CorrelationCurve phase_shift_correlation(std::span<const double> a, std::span<const double> b,
                                                std::span<const double> theta_grid) {
  detail::require(a.size() == b.size() && a.size() >= 3, "correlation needs equal lengths >= 3");
  detail::require(!theta_grid.empty(), "empty theta grid");
  CorrelationCurve curve;
  curve.theta.assign(theta_grid.begin(), theta_grid.end());
  curve.correlation.reserve(theta_grid.size());
  for (double t : theta_grid) curve.correlation.push_back(shifted_correlation(a, b, t));
  const auto best = static_cast<std::size_t>(
      std::max_element(curve.correlation.begin(), curve.correlation.end()) - curve.correlation.begin());
  curve.max = curve.correlation[best];
  curve.argmax = curve.theta[best];
  auto on_plateau = [&](double t) { return shifted_correlation(a, b, t) >= curve.max - 1e-9; };
  std::size_t lo = best, hi = best;
  while (lo > 0 && curve.correlation[lo - 1] >= curve.max - 1e-9) --lo;
  while (hi + 1 < curve.correlation.size() && curve.correlation[hi + 1] >= curve.max - 1e-9) ++hi;
  auto bisect = [&](double inside, double outside) {
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (inside + outside);
      (on_plateau(mid) ? inside : outside) = mid;
    }
    return inside;
  };
  curve.plateau_low = lo > 0 ? bisect(curve.theta[lo], curve.theta[lo - 1]) : curve.theta[lo];
  curve.plateau_high = hi + 1 < curve.theta.size() ? bisect(curve.theta[hi], curve.theta[hi + 1]) : curve.theta[hi];
  return curve;
}

inline void write_csv(std::ostream& out, const CorrelationCurve& curve) {
  out << "theta,correlation\n";
  for (std::size_t i = 0; i < curve.theta.size(); ++i)
    out << format_number(curve.theta[i]) << ',' << format_number(curve.correlation[i]) << '\n';
}

// ---------------------------------------------------------------------------

/// (lambda / 2 pi) ln lambda: unit mean spacing. Not used inside fits.
inline double unfold(double lambda) {
  detail::require(lambda > 1.0, "unfold requires lambda > 1");
  return lambda / (2.0 * std::numbers::pi) * std::log(lambda);
}

/// (lambda_j - Phi^2(x_j)) / (j pi) for each fitted level.
inline std::vector<double> residual_series(const FitResult& fit, const ZeroTable& zeros,
                                           const SmoothPotential& potential) {
  detail::require(zeros.count() >= fit.x.size(), "residual_series: zero table shorter than fit");
  const SusyPotential phi2(potential, fit.params);
  std::vector<double> out;
  out.reserve(fit.x.size());
  for (std::size_t j = 1; j <= fit.x.size(); ++j)
    out.push_back((zeros.lambda(j) - phi2(fit.x[j - 1])) / (static_cast<double>(j) * std::numbers::pi));
  return out;
}

inline void write_residual_csv(std::ostream& out, std::span<const double> residuals) {
  out << "j,residual\n";
  for (std::size_t j = 0; j < residuals.size(); ++j) out << j + 1 << ',' << format_number(residuals[j]) << '\n';
}

} // namespace cmz
