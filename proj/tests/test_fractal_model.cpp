#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cmz/fractal_model.hpp"
#include "cmz/optimizer.hpp"
#include "cmz/zeta_zeros.hpp"
#include "oracles.hpp"
#include "reference_sets.hpp"

using Catch::Approx;
using namespace cmz;

namespace {

FractalParams random_params(std::mt19937_64& rng, std::size_t m_max = 12) {
  std::uniform_real_distribution<double> gamma(1.05, 4.0), sigma(0.0, 5.0), D(1.1, 1.9), unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> m(1, m_max);
  FractalParams p;
  p.gamma = gamma(rng);
  p.sigma = sigma(rng);
  p.D = D(rng);
  p.phases.resize(m(rng));
  for (double& a : p.phases) a = unit(rng);
  return p;
}

} // namespace

TEST_CASE("single-term hand value", "[fractal_model]") {
  FractalParams p;
  p.gamma = 2.0;
  p.D = 1.5;
  p.phases = {0.0};
  CHECK(weierstrass_real(std::numbers::pi / 2.0, p) == Approx(2.0 * std::numbers::sqrt2).epsilon(1e-14));
}

TEST_CASE("F(0) = 0 and Phi^2(0) = 0", "[fractal_model][property]") {
  std::mt19937_64 rng(21);
  const SmoothPotential potential;
  for (int i = 0; i < 100; ++i) {
    const FractalParams p = random_params(rng);
    CHECK(weierstrass_real(0.0, p) == 0.0);
    CHECK(phi_squared(0.0, potential, p) == 0.0);
  }
}

TEST_CASE("matches the complex-exponential form", "[fractal_model][property]") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> xs(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const FractalParams p = random_params(rng);
    const double x = xs(rng);
    CHECK(weierstrass_real(x, p) == Approx(oracle::weierstrass_complex(x, p.gamma, p.D, p.phases)).margin(1e-10));
  }
}

TEST_CASE("evenness of F and Phi^2", "[fractal_model][property]") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> xs(0.0, 5.0);
  const SmoothPotential potential;
  for (int i = 0; i < 100; ++i) {
    const FractalParams p = random_params(rng);
    const double x = xs(rng);
    CHECK(weierstrass_real(x, p) == weierstrass_real(-x, p));
    CHECK(phi_squared(x, potential, p) - phi_squared(-x, potential, p) == 0.0);
  }
}

TEST_CASE("phases at 3/4 cancel the fractal term", "[fractal_model][property]") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> xs(-5.0, 5.0);
  std::bernoulli_distribution coin;
  const SmoothPotential potential;
  for (int i = 0; i < 100; ++i) {
    FractalParams p = random_params(rng);
    for (double& a : p.phases) a = 0.75;
    const double x = xs(rng);
    CHECK(std::abs(weierstrass_real(x, p)) < 1e-12);
    // Mixed 1/4 and 3/4 phases: Phi^2 coincides with the sigma = 0 curve.
    for (double& a : p.phases) a = coin(rng) ? 0.25 : 0.75;
    FractalParams flat = p;
    flat.sigma = 0.0;
    CHECK(phi_squared(x, potential, p) == Approx(phi_squared(x, potential, flat)).margin(1e-10));
  }
}

TEST_CASE("truncation tail bound", "[fractal_model][property]") {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> xs(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    FractalParams p = random_params(rng, 8);
    const std::size_t m = p.m();
    FractalParams longer = p;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 10; ++k) longer.phases.push_back(unit(rng));
    const double x = xs(rng);
    const double diff = std::abs(weierstrass_real(x, longer) - weierstrass_real(x, p));
    // Sum of the per-term bound 4 / gamma^{k (2 - D)} over k = m+1 .. m+10.
    double bound = 0.0;
    for (std::size_t k = m + 1; k <= m + 10; ++k) bound += 4.0 / std::pow(p.gamma, static_cast<double>(k) * (2.0 - p.D));
    CHECK(diff <= bound * (1.0 + 1e-12));
    // Term m+1 alone.
    FractalParams one_more = p;
    one_more.phases.push_back(longer.phases[m]);
    CHECK(std::abs(weierstrass_real(x, one_more) - weierstrass_real(x, p)) <=
          4.0 / std::pow(p.gamma, static_cast<double>(m + 1) * (2.0 - p.D)) * (1.0 + 1e-12));
  }
}

TEST_CASE("affine evaluation", "[fractal_model]") {
  FractalParams p;
  p.gamma = 2.3;
  p.phases.assign(7, 0.0);
  for (double x : {-1.0, 0.3, 2.0}) {
    CHECK(affine_weierstrass(x, p, 1.0, 0.0) == weierstrass_real(x, p));
    CHECK(affine_weierstrass(x, p, 0.0, -10.0) == -10.0);
    CHECK(affine_weierstrass(x, p, 5.0, -10.0) == Approx(5.0 * weierstrass_real(x, p) - 10.0));
  }
}

TEST_CASE("sigma = 0 at the smooth turning point returns lambda", "[fractal_model]") {
  const SmoothPotential potential;
  const ZeroTable zeros = ingest_zeros(oracle::data_file("zeros300.txt"), 20);
  FractalParams p;
  p.sigma = 0.0;
  p.phases = {0.1, 0.2, 0.3};
  for (double lambda : zeros.values)
    CHECK(phi_squared(potential.smooth_turning_point(lambda), potential, p) == Approx(lambda).margin(1e-8));
}

TEST_CASE("susy part of the seven-level published fit", "[fractal_model]") {
  const auto& fit = ref::kSevenLevel;
  const ZeroTable zeros = ingest_zeros(oracle::data_file("zeros300.txt"), 7);
  const SmoothPotential potential;
  FractalParams p;
  p.gamma = fit.gamma;
  p.sigma = fit.sigma;
  p.phases = phases_from_radians(fit.phases_radians);
  double ssq = 0.0;
  for (std::size_t j = 0; j < 7; ++j) {
    const double d = phi_squared(fit.x[j], potential, p) - zeros.values[j];
    ssq += d * d;
  }
  CHECK(ssq == Approx(fit.total - fit.cbc).epsilon(0.05));
}

TEST_CASE("parameter validation", "[fractal_model]") {
  FractalParams p;
  p.phases = {0.5};
  p.gamma = 1.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p.gamma = 2.0;
  p.D = 2.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p.D = 1.5;
  p.phases = {1.2};
  CHECK_THROWS_AS(validate(p), ValidationError);
  p.phase_range = {-0.5, 0.5};
  p.phases = {-0.3};
  CHECK_NOTHROW(validate(p));
  p.D = 1.2;
  CHECK(p.beta() == Approx(0.6));
}

TEST_CASE("radian phases convert and pin at the edges", "[fractal_model]") {
  const std::vector<double> rad{0.0, std::numbers::pi, 6.28319, 3.08389e-7};
  const auto a = phases_from_radians(rad);
  CHECK(a[0] == 0.0);
  CHECK(a[1] == Approx(0.5).epsilon(1e-15));
  CHECK(a[2] == 1.0);
  CHECK(a[3] > 0.0);
}
