#pragma once

// Imaginary parts of the nontrivial zeros of zeta(s): a reference-table reader
// and an independent Riemann-Siegel root finder.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cmz/errors.hpp"
#include "cmz/format.hpp"

namespace cmz {

enum class ZeroSource { computed, ingested };

/// Ordered heights lambda_j of the nontrivial zeros, j = 1..count().
struct ZeroTable {
  std::vector<double> values;
  ZeroSource source = ZeroSource::ingested;

  [[nodiscard]] std::size_t count() const noexcept { return values.size(); }
  /// One-based access, matching the lambda_j convention.
  [[nodiscard]] double lambda(std::size_t j) const {
    detail::require(j >= 1 && j <= values.size(),
                    "zero index " + std::to_string(j) + " outside table of " +
                        std::to_string(values.size()));
    return values[j - 1];
  }
  [[nodiscard]] ZeroTable first(std::size_t n) const {
    detail::require(n <= values.size(), "requested " + std::to_string(n) +
                                            " zeros but table holds " +
                                            std::to_string(values.size()));
    return {{values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n)}, source};
  }
};

/// Throws ValidationError unless values are strictly increasing and the first
/// one lies in the bracket of the first zero.
inline void validate(const ZeroTable& table) {
  for (std::size_t i = 1; i < table.values.size(); ++i) {
    if (!(table.values[i] > table.values[i - 1]))
      throw ValidationError("zero table not strictly increasing at entry " +
                            std::to_string(i + 1));
  }
  if (!table.values.empty() && !(table.values[0] > 14.0 && table.values[0] < 14.2))
    throw ValidationError("first zero " + format_number(table.values[0]) +
                          " outside (14, 14.2)");
}

/// Reads up to `count` zeros from a text stream: one decimal per line,
/// '#' comments and blank lines ignored.
inline ZeroTable parse_zeros(std::istream& in, std::size_t count) {
  ZeroTable table;
  table.source = ZeroSource::ingested;
  std::string line;
  std::size_t line_no = 0;
  while (table.values.size() < count && std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    while (!view.empty() && std::isspace(static_cast<unsigned char>(view.front())))
      view.remove_prefix(1);
    while (!view.empty() && std::isspace(static_cast<unsigned char>(view.back())))
      view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), value);
    if (ec != std::errc{} || ptr != view.data() + view.size() || !(value > 0.0) ||
        !std::isfinite(value))
      throw ValidationError("zero table line " + std::to_string(line_no) +
                            ": cannot parse '" + std::string(view) +
                            "' as a positive decimal");
    table.values.push_back(value);
  }
  if (table.values.size() < count)
    throw ValidationError("zero table holds " + std::to_string(table.values.size()) +
                          " values, " + std::to_string(count) + " requested");
  validate(table);
  return table;
}

inline ZeroTable ingest_zeros(const std::string& path, std::size_t count) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open zero table '" + path + "'");
  return parse_zeros(in, count);
}

/// Canonical serialization: 15 significant digits, one per line, no comments.
inline void write_zeros(std::ostream& out, const ZeroTable& table) {
  for (double v : table.values) out << format_number(v, 15) << '\n';
}

// ---------------------------------------------------------------------------
// Riemann-Siegel

/// Riemann-Siegel theta function, asymptotic expansion (t >= 10).
inline double riemann_siegel_theta(double t) {
  constexpr double pi = std::numbers::pi;
  return 0.5 * t * std::log(t / (2.0 * pi)) - 0.5 * t - pi / 8.0 + 1.0 / (48.0 * t) +
         7.0 / (5760.0 * t * t * t);
}

namespace detail {

// Even Taylor coefficients of Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)
// about p = 1/2; Psi is even about 1/2 so the odd ones vanish.
inline constexpr std::array<double, 41> kPsiEvenTaylor = {
    3.8268343236508977e-1,  1.7489618723100818,     2.1180252076854964,
    -8.7072166705114807e-1, -3.4733112243465167,    -1.6626947308999324,
    1.2167312889192321,     1.3014304161007976,     3.0511021827361672e-2,
    -3.7558030515450952e-1, -1.085784416564066e-1,  5.1832902999549623e-2,
    2.9999480619902276e-2,  -2.2759396706125642e-3, -4.3826474165803383e-3,
    -4.064230183729847e-4,  4.0060977854221139e-4,  8.9710579913888413e-5,
    -2.3025650027239107e-5, -9.3800066019067925e-6, 6.3235149476091075e-7,
    6.5510228192315017e-7,  2.2105237455526973e-8,  -3.3223161764456288e-8,
    -3.7349109899336561e-9, 1.2445067060797739e-9,  2.4768205376502192e-10,
    -3.2842728168916272e-11, -1.1305406852298404e-11, 4.5654639795886939e-13,
    3.9598480945249215e-13, 7.8495662212596173e-15, -1.1059043150991233e-14,
    -7.7385439876415083e-16, 2.4857755550271372e-16, 3.0514797188827218e-17,
    -4.4142978877933028e-18, -8.6313888781884147e-19, 5.7012921968429752e-20,
    1.9529640164199341e-20, -3.3707667135349602e-22};

/// k-th derivative of Psi at p, from the Taylor series about 1/2.
inline double psi_derivative(double p, int k) {
  const double h = p - 0.5;
  double sum = 0.0;
  for (std::size_t i = 0; i < kPsiEvenTaylor.size(); ++i) {
    const int n = static_cast<int>(2 * i);
    if (n < k) continue;
    double falling = 1.0;
    for (int r = 0; r < k; ++r) falling *= static_cast<double>(n - r);
    sum += kPsiEvenTaylor[i] * falling * std::pow(h, n - k);
  }
  return sum;
}

/// Remainder coefficients C_0..C_4 (Gabcke's derivative form).
inline std::array<double, 5> riemann_siegel_coefficients(double p) {
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  constexpr double pi4 = pi2 * pi2;
  constexpr double pi6 = pi4 * pi2;
  constexpr double pi8 = pi4 * pi4;
  std::array<double, 13> d{};
  for (int k = 0; k <= 12; ++k) d[k] = psi_derivative(p, k);
  return {
      d[0],
      -d[3] / (96.0 * pi2),
      d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi4),
      -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4) - d[9] / (5308416.0 * pi6),
      d[0] / (128.0 * pi2) + 19.0 * d[4] / (24576.0 * pi4) +
          11.0 * d[8] / (5898240.0 * pi6) + d[12] / (2038431744.0 * pi8),
  };
}

} // namespace detail

inline constexpr double kRiemannSiegelMinT = 10.0;

/// Hardy's Z(t) by the Riemann-Siegel formula: main sum over n <= sqrt(t / 2 pi)
/// plus `remainder_terms` correction coefficients (1..5, i.e. C_0..C_4).
inline double riemann_siegel_Z(double t, int remainder_terms = 5) {
  detail::require(t >= kRiemannSiegelMinT,
                  "Riemann-Siegel Z requires t >= 10, got " + format_number(t));
  detail::require(remainder_terms >= 1 && remainder_terms <= 5,
                  "remainder_terms must lie in [1, 5]");
  const double a = std::sqrt(t / (2.0 * std::numbers::pi));
  const auto N = static_cast<long>(std::floor(a));
  const double p = a - static_cast<double>(N);
  const double theta = riemann_siegel_theta(t);
  double main = 0.0;
  for (long n = 1; n <= N; ++n) {
    const double dn = static_cast<double>(n);
    main += std::cos(theta - t * std::log(dn)) / std::sqrt(dn);
  }
  main *= 2.0;
  const auto c = detail::riemann_siegel_coefficients(p);
  double remainder = 0.0;
  double scale = 1.0;
  for (int k = 0; k < remainder_terms; ++k) {
    remainder += c[static_cast<std::size_t>(k)] * scale;
    scale /= a;
  }
  const double sign = (N - 1) % 2 == 0 ? 1.0 : -1.0;
  return main + sign * remainder / std::sqrt(a);
}

struct ZeroScanConfig {
  double start = kRiemannSiegelMinT;
  double grid_step = 0.1;
  double t_max = 1000.0;
  double tolerance = 1e-9;
};

/// Scans Z(t) on a uniform grid and bisects every sign change.
inline ZeroTable compute_zeros(std::size_t count, const ZeroScanConfig& config = {}) {
  detail::require(count >= 1, "compute_zeros needs count >= 1");
  detail::require(config.grid_step > 0.0 && config.grid_step <= 0.25,
                  "grid_step must lie in (0, 0.25]");
  detail::require(config.start >= kRiemannSiegelMinT, "scan must start at t >= 10");
  ZeroTable table;
  table.source = ZeroSource::computed;
  double lo = config.start;
  double z_lo = riemann_siegel_Z(lo);
  for (std::size_t step = 1; table.values.size() < count; ++step) {
    const double hi = config.start + static_cast<double>(step) * config.grid_step;
    if (hi > config.t_max) break;
    const double z_hi = riemann_siegel_Z(hi);
    if (z_hi == 0.0) {
      table.values.push_back(hi);
    } else if (z_lo != 0.0 && std::signbit(z_lo) != std::signbit(z_hi)) {
      double a = lo, b = hi, za = z_lo;
      while (b - a > config.tolerance) {
        const double mid = 0.5 * (a + b);
        const double zm = riemann_siegel_Z(mid);
        if (std::signbit(zm) == std::signbit(za)) {
          a = mid;
          za = zm;
        } else {
          b = mid;
        }
      }
      table.values.push_back(0.5 * (a + b));
    }
    lo = hi;
    z_lo = z_hi;
  }
  if (table.values.size() < count)
    throw NumericalError("found " + std::to_string(table.values.size()) +
                         " sign changes of Z(t) below t = " + format_number(config.t_max) +
                         ", " + std::to_string(count) + " requested");
  return table;
}

} // namespace cmz
