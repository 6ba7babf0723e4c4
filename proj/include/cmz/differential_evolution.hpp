#pragma once

// Box-constrained differential evolution, rand/1/bin. Trials for a whole
// generation are built first, evaluated (optionally on several threads) and
// then selected in index order, so results depend only on the seed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "cmz/errors.hpp"
#include "cmz/fractal_model.hpp"

namespace cmz {

struct DeControls {
  /// 0 selects 15 x dimension.
  std::size_t population = 0;
  std::size_t generations = 500;
  double F = 0.7;
  double CR = 0.9;
  std::uint64_t seed = 42;
  std::size_t threads = 1;
  /// Stop as soon as the best value is <= this.
  double value_to_reach = -std::numeric_limits<double>::infinity();
};

struct DeResult {
  std::vector<double> best;
  double best_value = std::numeric_limits<double>::infinity();
  /// Best objective after initialization (entry 0) and after each generation.
  std::vector<double> history;
  std::size_t evaluations = 0;
  std::size_t failures = 0;
};

namespace detail {

/// Portable draws on top of mt19937_64 (whose sequence is fixed by the standard).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t draw = engine_();
    while (draw >= limit) draw = engine_();
    return static_cast<std::size_t>(draw % n);
  }

private:
  std::mt19937_64 engine_;
};

template <class Objective>
double safe_evaluate(Objective& f, const std::vector<double>& v, std::size_t& failures) {
  try {
    const double value = f(v);
    if (std::isnan(value)) {
      ++failures;
      return std::numeric_limits<double>::infinity();
    }
    return value;
  } catch (const std::exception&) {
    ++failures;
    return std::numeric_limits<double>::infinity();
  }
}

template <class Objective>
void evaluate_all(Objective& f, const std::vector<std::vector<double>>& points,
                  std::vector<double>& values, std::size_t threads, std::size_t& failures) {
  values.assign(points.size(), std::numeric_limits<double>::infinity());
  threads = std::max<std::size_t>(1, std::min(threads, points.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) values[i] = safe_evaluate(f, points[i], failures);
    return;
  }
  std::vector<std::size_t> worker_failures(threads, 0);
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < points.size(); i += threads)
        values[i] = safe_evaluate(f, points[i], worker_failures[w]);
    });
  }
  for (auto& worker : workers) worker.join();
  for (std::size_t c : worker_failures) failures += c;
}

} // namespace detail

/// Minimizes `f` over the box `bounds`. `f` must be safe to call concurrently when
/// threads > 1; exceptions and NaN count as +infinity. `initial_points` replace
/// the first members of the random initial population.
template <class Objective>
DeResult differential_evolution(Objective f, std::span<const Interval> bounds, const DeControls& controls,
                                std::span<const std::vector<double>> initial_points = {}) {
  const std::size_t dim = bounds.size();
  detail::require(dim >= 1, "differential evolution needs at least one dimension");
  for (const auto& b : bounds) detail::require(b.low <= b.high, "inverted parameter bounds");
  const std::size_t pop = controls.population == 0 ? 15 * dim : controls.population;
  detail::require(pop >= 4 * dim && pop >= 4, "population must be at least 4 x dimension");
  detail::require(controls.F > 0.0 && controls.F <= 2.0, "F must lie in (0, 2]");
  detail::require(controls.CR >= 0.0 && controls.CR <= 1.0, "CR must lie in [0, 1]");

  detail::Rng rng(controls.seed);
  auto clip = [&](std::vector<double>& v) {
    for (std::size_t d = 0; d < dim; ++d) v[d] = std::clamp(v[d], bounds[d].low, bounds[d].high);
  };

  std::vector<std::vector<double>> population(pop, std::vector<double>(dim));
  for (std::size_t i = 0; i < pop; ++i)
    for (std::size_t d = 0; d < dim; ++d)
      population[i][d] = bounds[d].low + rng.uniform() * bounds[d].width();
  for (std::size_t i = 0; i < std::min(pop, initial_points.size()); ++i) {
    detail::require(initial_points[i].size() == dim, "initial point has wrong dimension");
    population[i] = initial_points[i];
    clip(population[i]);
  }

  DeResult result;
  std::vector<double> fitness;
  detail::evaluate_all(f, population, fitness, controls.threads, result.failures);
  result.evaluations += pop;
  auto best_index = [&] {
    return static_cast<std::size_t>(std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
  };
  std::size_t best = best_index();
  if (!std::isfinite(fitness[best]))
    throw NumericalError("differential evolution: every initial candidate failed to evaluate (" +
                         std::to_string(result.failures) + " failures)");
  result.history.push_back(fitness[best]);

  std::vector<std::vector<double>> trials(pop, std::vector<double>(dim));
  std::vector<double> trial_fitness;
  for (std::size_t g = 0; g < controls.generations && fitness[best] > controls.value_to_reach; ++g) {
    for (std::size_t i = 0; i < pop; ++i) {
      std::size_t r1, r2, r3;
      do r1 = rng.below(pop); while (r1 == i);
      do r2 = rng.below(pop); while (r2 == i || r2 == r1);
      do r3 = rng.below(pop); while (r3 == i || r3 == r1 || r3 == r2);
      const std::size_t forced = rng.below(dim);
      auto& trial = trials[i];
      for (std::size_t d = 0; d < dim; ++d) {
        const bool cross = d == forced || rng.uniform() < controls.CR;
        trial[d] = cross ? population[r1][d] + controls.F * (population[r2][d] - population[r3][d])
                         : population[i][d];
      }
      clip(trial);
    }
    detail::evaluate_all(f, trials, trial_fitness, controls.threads, result.failures);
    result.evaluations += pop;
    for (std::size_t i = 0; i < pop; ++i) {
      if (trial_fitness[i] <= fitness[i]) {
        population[i] = trials[i];
        fitness[i] = trial_fitness[i];
      }
    }
    best = best_index();
    result.history.push_back(fitness[best]);
  }
  result.best = population[best];
  result.best_value = fitness[best];
  return result;
}

} // namespace cmz
