#pragma once

// JSON and CSV serialization of fit results.

#include <cstdint>
#include <numbers>
#include <ostream>
#include <string>

#include <json.hpp>

#include "cmz/analysis.hpp"
#include "cmz/cbc_quadrature.hpp"
#include "cmz/format.hpp"
#include "cmz/optimizer.hpp"

namespace cmz {

inline constexpr const char* kToolVersion = "0.3.0";

inline nlohmann::ordered_json to_json(const FractalParams& p) {
  nlohmann::ordered_json j;
  j["gamma"] = p.gamma;
  j["sigma"] = p.sigma;
  j["D"] = p.D;
  j["beta"] = p.beta();
  j["phases_scaled"] = p.phases;
  std::vector<double> radians;
  radians.reserve(p.phases.size());
  for (double a : p.phases) radians.push_back(2.0 * std::numbers::pi * a);
  j["phases_radians"] = radians;
  return j;
}

inline nlohmann::ordered_json to_json(const CbcReport& report) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& l : report.levels)
    rows.push_back({{"j", l.j}, {"lambda", l.lambda}, {"x", l.x}, {"integral", l.integral}, {"ratio", l.ratio}});
  return rows;
}

inline nlohmann::ordered_json to_json(const FitResult& r) {
  nlohmann::ordered_json j;
  j["params"] = to_json(r.params);
  j["x"] = r.x;
  j["ssq"] = {{"susy", r.ssq_susy}, {"cbc", r.ssq_cbc}, {"total", r.ssq_total}};
  j["weights"] = {{"susy", r.weights.susy}, {"cbc", r.weights.cbc}};
  j["cbc"] = to_json(r.cbc_report);
  j["seed"] = r.seed;
  j["evaluations"] = r.evaluations;
  j["failures"] = r.failures;
  j["generations"] = r.history.empty() ? 0 : r.history.size() - 1;
  return j;
}

inline nlohmann::ordered_json to_json(const IdentityCheck& c) {
  return {{"id", c.id}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"multiplier", c.multiplier},
          {"quoted_multiplier", c.quoted_multiplier}};
}

/// "generation,best_total".
inline void write_history_csv(std::ostream& out, const std::vector<double>& history) {
  out << "generation,best_total\n";
  for (std::size_t g = 0; g < history.size(); ++g) out << g << ',' << format_number(history[g]) << '\n';
}

/// FNV-1a, stable across platforms; used to tag artifacts with their configuration.
inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

} // namespace cmz
