#pragma once

// Batch front end. Every subcommand reads its options from flags and/or an INI
// file (one section per subcommand, flags win), writes a config echo and its
// artifacts under <outdir>/<subcommand>/<label or UTC timestamp>/.
//
// Exit status: 0 success, 1 bad input, 2 numerical failure.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmz/analysis.hpp"
#include "cmz/cbc_quadrature.hpp"
#include "cmz/errors.hpp"
#include "cmz/format.hpp"
#include "cmz/fractal_model.hpp"
#include "cmz/io.hpp"
#include "cmz/optimizer.hpp"
#include "cmz/ws_potential.hpp"
#include "cmz/zeta_zeros.hpp"

namespace cmz::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

/// Where a run writes, plus the tag stamped into every artifact.
struct RunContext {
  fs::path dir;
  std::string config_hash;
  std::size_t threads = 1;

  [[nodiscard]] std::string csv_tag() const {
    return std::string("# cmz ") + kToolVersion + " config " + config_hash + "\n";
  }

  [[nodiscard]] ordered_json meta() const {
    return {{"tool_version", kToolVersion}, {"config_hash", config_hash}};
  }

  std::ofstream open(const std::string& name) const {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + (dir / name).string());
    return out;
  }

  void write_json(const std::string& name, ordered_json body) const {
    ordered_json doc = meta();
    for (auto& [key, value] : body.items()) doc[key] = value;
    open(name) << doc.dump(2) << '\n';
  }
};

namespace detail {

using cmz::detail::require;

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y%m%dT%H%M%SZ", &tm);
  return buffer;
}

inline ZeroTable load_zeros(const std::string& path, std::size_t count) {
  if (path.empty()) return compute_zeros(count);
  return ingest_zeros(path, count);
}

inline FractalParams make_params(double gamma, double sigma, double D, const std::vector<double>& radians,
                                 std::size_t m) {
  FractalParams p;
  p.gamma = gamma;
  p.sigma = sigma;
  p.D = D;
  p.phases = radians.empty() ? std::vector<double>(m, 0.0) : phases_from_radians(radians);
  validate(p);
  return p;
}

inline Substitution parse_substitution(const std::string& name) {
  if (name == "power") return Substitution::power_sub;
  if (name == "jacobi") return Substitution::gauss_jacobi;
  throw ValidationError("unknown substitution '" + name + "' (power | jacobi)");
}

inline std::vector<double> smooth_points(const ZeroTable& zeros, std::size_t n, const SmoothPotential& potential) {
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = potential.smooth_turning_point(zeros.values[j]);
  return x;
}

inline PotentialConfig potential_for(double x_max, double lambda_max) {
  PotentialConfig config;
  const double needed_V = lambda_max + config.V0;
  while (config.max_V < 1.05 * needed_V) config.max_V *= 2.0;
  while (SmoothPotential({config.V0, config.max_V, 0.0}).max_x() < x_max) config.max_V *= 2.0;
  return config;
}

} // namespace detail

/// Options shared by the fractal-model subcommands.
struct ModelOptions {
  std::string zeros_path;
  double gamma = 3.0;
  double sigma = 1.0;
  double D = 1.5;
  std::vector<double> phases;
  std::size_t m = 0;

  void attach(CLI::App& sub, double default_sigma) {
    sigma = default_sigma;
    sub.add_option("--zeros", zeros_path, "Zero table file; computed by Riemann-Siegel when omitted");
    sub.add_option("--gamma", gamma, "Frequency ratio (> 1)")->capture_default_str();
    sub.add_option("--sigma", sigma, "Scale of the fractal term")->capture_default_str();
    sub.add_option("--D", D, "Fractal dimension in (1, 2)")->capture_default_str();
    sub.add_option("--phases", phases, "Phases in radians, comma separated")->delimiter(',');
    sub.add_option("--m", m, "Number of zero phases when --phases is absent")->capture_default_str();
  }

  [[nodiscard]] FractalParams params() const { return detail::make_params(gamma, sigma, D, phases, m); }
};

struct QuadOptions {
  double rel_tol = 1e-8;
  std::size_t node_budget = 200000;
  std::string substitution = "power";

  void attach(CLI::App& sub) {
    sub.add_option("--rel-tol", rel_tol, "Relative tolerance of the CBC integral")->capture_default_str();
    sub.add_option("--node-budget", node_budget, "Integrand evaluation budget")->capture_default_str();
    sub.add_option("--substitution", substitution, "power | jacobi")->capture_default_str();
  }

  [[nodiscard]] QuadratureConfig config(double beta) const {
    QuadratureConfig q{beta, node_budget, rel_tol, detail::parse_substitution(substitution)};
    validate(q);
    return q;
  }
};

/// All subcommands bound to one CLI11 application.
class Tool {
public:
  Tool() : app_("cmz: fractal supersymmetric model of the Riemann zeros") {
    app_.set_version_flag("--version", kToolVersion);
    app_.set_config("--config", "", "INI file; [subcommand] sections, flags take precedence");
    app_.add_option("--outdir", outdir_, "Root of the output tree")->capture_default_str();
    app_.add_option("--label", label_, "Run directory name (default: UTC timestamp)");
    app_.add_option("--threads", threads_, "Objective evaluation threads")->envname("CMZ_THREADS")->capture_default_str();
    app_.require_subcommand(1);
    add_zeros();
    add_turning_points();
    add_weier();
    add_cbc_ratios();
    add_adjust();
    add_fit();
    add_replay();
    add_iterate();
    add_analyze();
    add_identities();
    add_dominici();
  }

  int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
      app_.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      out << app_.help();
      return 0;
    } catch (const CLI::CallForAllHelp& e) {
      out << app_.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::CallForVersion&) {
      out << kToolVersion << '\n';
      return 0;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    }
    CLI::App* sub = app_.get_subcommands().front();
    try {
      const RunContext ctx = prepare(*sub);
      handlers_.at(sub->get_name())(ctx);
      out << ctx.dir.string() << '\n';
      return 0;
    } catch (const ValidationError& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      err << "numerical failure: " << e.what() << '\n';
      return 2;
    }
  }

private:
  RunContext prepare(CLI::App& sub) {
    detail::require(threads_ >= 1, "--threads must be >= 1");
    RunContext ctx;
    ctx.threads = threads_;
    // The hash covers only what the subcommand computes, not where it writes.
    const std::string resolved = sub.config_to_str(true, false);
    ctx.config_hash = hex64(fnv1a(sub.get_name() + "\n" + resolved));
    const std::string stamp = detail::utc_timestamp();
    ctx.dir = fs::path(outdir_) / sub.get_name() / (label_.empty() ? stamp : label_);
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    if (ec) throw ValidationError("cannot create " + ctx.dir.string() + ": " + ec.message());
    std::ofstream echo = ctx.open("config.ini");
    echo << "# cmz " << kToolVersion << " config " << ctx.config_hash << "\n# timestamp " << stamp << "\n["
         << sub.get_name() << "]\n"
         << resolved;
    return ctx;
  }

  CLI::App* subcommand(const std::string& name, const std::string& description,
                       std::function<void(const RunContext&)> handler) {
    handlers_[name] = std::move(handler);
    return app_.add_subcommand(name, description);
  }

  void add_zeros() {
    auto* s = subcommand("zeros", "Acquire zero heights (Riemann-Siegel scan or file)", [this](const RunContext& ctx) {
      const ZeroTable table = zeros_.path.empty()
                                  ? compute_zeros(zeros_.count, {kRiemannSiegelMinT, zeros_.grid_step, zeros_.t_max,
                                                                 zeros_.tolerance})
                                  : ingest_zeros(zeros_.path, zeros_.count);
      std::ofstream f = ctx.open("zeros.txt");
      f << ctx.csv_tag();
      write_zeros(f, table);
    });
    s->add_option("--count", zeros_.count, "Number of zeros")->capture_default_str();
    s->add_option("--zeros", zeros_.path, "Ingest and validate this file instead of computing");
    s->add_option("--grid-step", zeros_.grid_step, "Scan step in t")->capture_default_str();
    s->add_option("--t-max", zeros_.t_max, "Scan limit")->capture_default_str();
    s->add_option("--tolerance", zeros_.tolerance, "Bisection tolerance")->capture_default_str();
  }

  void add_turning_points() {
    auto* s = subcommand("turning-points", "Turning points of the smooth potential", [this](const RunContext& ctx) {
      const ZeroTable zeros = detail::load_zeros(tp_.zeros_path, tp_.n);
      const SmoothPotential potential(detail::potential_for(0.0, zeros.values.back()));
      std::ofstream f = ctx.open("turning_points.csv");
      f << ctx.csv_tag() << "j,lambda,x\n";
      for (std::size_t j = 1; j <= tp_.n; ++j)
        f << j << ',' << format_number(zeros.lambda(j)) << ','
          << format_number(potential.smooth_turning_point(zeros.lambda(j))) << '\n';
    });
    s->add_option("--zeros", tp_.zeros_path, "Zero table file");
    s->add_option("--n", tp_.n, "Number of levels")->capture_default_str();
  }

  void add_weier() {
    auto* s = subcommand("weier", "Tabulate the Weierstrass term and Phi^2", [this](const RunContext& ctx) {
      detail::require(weier_.points >= 2, "--points must be >= 2");
      detail::require(weier_.x_max > weier_.x_min, "--x-max must exceed --x-min");
      const FractalParams params = weier_model_.params();
      const double reach = std::max(std::abs(weier_.x_min), std::abs(weier_.x_max));
      const SmoothPotential potential(detail::potential_for(reach, 0.0));
      const SusyPotential phi2(potential, params);
      const WeierstrassTerms terms(params);
      std::ofstream f = ctx.open("weier.csv");
      f << ctx.csv_tag() << "x,weierstrass,phi2,affine\n";
      for (std::size_t i = 0; i < weier_.points; ++i) {
        const double x = weier_.x_min + (weier_.x_max - weier_.x_min) * static_cast<double>(i) /
                                            static_cast<double>(weier_.points - 1);
        const double w = terms(x);
        f << format_number(x) << ',' << format_number(w) << ',' << format_number(phi2(x)) << ','
          << format_number(weier_.scale * w + weier_.offset) << '\n';
      }
    });
    weier_model_.m = 7;
    weier_model_.attach(*s, 1.0);
    s->add_option("--x-min", weier_.x_min)->capture_default_str();
    s->add_option("--x-max", weier_.x_max)->capture_default_str();
    s->add_option("--points", weier_.points)->capture_default_str();
    s->add_option("--scale", weier_.scale, "Affine calibration: scale * W + offset")->capture_default_str();
    s->add_option("--offset", weier_.offset)->capture_default_str();
  }

  void add_cbc_ratios() {
    auto* s = subcommand("cbc-ratios", "CBC ratios I_j / (j pi) at given or smooth turning points",
                         [this](const RunContext& ctx) {
                           const ZeroTable zeros = detail::load_zeros(cbc_model_.zeros_path, cbc_.n);
                           const FractalParams params = cbc_model_.params();
                           double reach = 0.0;
                           for (double x : cbc_.x) reach = std::max(reach, x);
                           const SmoothPotential potential(detail::potential_for(reach, zeros.values.back()));
                           std::vector<double> x = cbc_.x;
                           if (x.empty()) x = detail::smooth_points(zeros, cbc_.n, potential);
                           detail::require(x.size() == cbc_.n, "--x holds " + std::to_string(x.size()) +
                                                                   " values for --n " + std::to_string(cbc_.n));
                           const CbcReport report =
                               cbc_ratio_series(zeros, x, potential, params, cbc_quad_.config(params.beta()));
                           std::ofstream f = ctx.open("cbc_ratios.csv");
                           f << ctx.csv_tag();
                           write_csv(f, report);
                         });
    cbc_model_.attach(*s, 0.0);
    cbc_quad_.attach(*s);
    s->add_option("--n", cbc_.n, "Number of levels")->capture_default_str();
    s->add_option("--x", cbc_.x, "Turning points, comma separated (default: smooth)")->delimiter(',');
  }

  void add_adjust() {
    auto* s = subcommand("adjust", "Move turning points toward unit CBC ratio", [this](const RunContext& ctx) {
      std::vector<std::size_t> levels = adjust_.levels;
      if (levels.empty())
        for (std::size_t j = 1; j <= adjust_.n; ++j) levels.push_back(j);
      std::size_t top = 0;
      for (std::size_t j : levels) {
        detail::require(j >= 1, "level indices start at 1");
        top = std::max(top, j);
      }
      const ZeroTable zeros = detail::load_zeros(adjust_model_.zeros_path, top);
      const FractalParams params = adjust_model_.params();
      const SmoothPotential potential(detail::potential_for(0.0, zeros.values.back()));
      const QuadratureConfig quad = adjust_quad_.config(params.beta());
      AdjustOptions options;
      options.grid_points = adjust_.grid_points;
      options.x_tol = adjust_.x_tol;
      const SusyPotential phi2(potential, params);
      std::ofstream f = ctx.open("adjust.csv");
      f << ctx.csv_tag() << "j,lambda,x_smooth,ratio_smooth,x,ratio\n";
      for (std::size_t j : levels) {
        const double lambda = zeros.lambda(j);
        const double x0 = potential.smooth_turning_point(lambda);
        const double r0 = cbc_integral(lambda, x0, phi2, quad) / (static_cast<double>(j) * std::numbers::pi);
        const AdjustResult a = adjust_turning_point(j, lambda, potential, params, quad, options);
        f << j << ',' << format_number(lambda) << ',' << format_number(x0) << ',' << format_number(r0) << ','
          << format_number(a.x) << ',' << format_number(a.ratio) << '\n';
      }
    });
    adjust_model_.attach(*s, 0.0);
    adjust_quad_.attach(*s);
    s->add_option("--n", adjust_.n, "Adjust levels 1..n when --j is absent")->capture_default_str();
    s->add_option("--j", adjust_.levels, "Level indices, comma separated")->delimiter(',');
    s->add_option("--grid-points", adjust_.grid_points)->capture_default_str();
    s->add_option("--x-tol", adjust_.x_tol)->capture_default_str();
  }

  struct FitOptions {
    std::string zeros_path;
    std::size_t n = 7, m = 7;
    std::string phase_mode = "free";
    std::vector<double> phases;
    double gamma_min = 1.0, gamma_max = 5.0;
    std::string sigma = "free";
    double sigma_min = 0.1, sigma_max = 10.0;
    std::string x_mode = "free";
    std::vector<double> x;
    double delta_min = 1e-3, delta_max = 2.0;
    double w_susy = 1.0, w_cbc = 1.0;
    std::uint64_t seed = 42;
    std::size_t population = 0, generations = 500;
    double F = 0.7, CR = 0.9;
    std::optional<double> target;
    double rel_tol = 1e-7;
    std::size_t node_budget = 200000;
  };

  static void attach_fit(CLI::App& s, FitOptions& o) {
    s.add_option("--zeros", o.zeros_path, "Zero table file");
    s.add_option("--n", o.n, "Levels fitted")->capture_default_str();
    s.add_option("--m", o.m, "Weierstrass terms")->capture_default_str();
    s.add_option("--phase-mode", o.phase_mode, "free | zero | monotone | fixed")->capture_default_str();
    s.add_option("--phases", o.phases, "Phases in radians (fixed mode, or iterate start)")->delimiter(',');
    s.add_option("--gamma-min", o.gamma_min)->capture_default_str();
    s.add_option("--gamma-max", o.gamma_max, "Equal to --gamma-min fixes gamma")->capture_default_str();
    s.add_option("--sigma", o.sigma, "'free' or a fixed value")->capture_default_str();
    s.add_option("--sigma-min", o.sigma_min)->capture_default_str();
    s.add_option("--sigma-max", o.sigma_max)->capture_default_str();
    s.add_option("--x-mode", o.x_mode, "free | smooth | fixed")->capture_default_str();
    s.add_option("--x", o.x, "Turning points for --x-mode fixed")->delimiter(',');
    s.add_option("--delta-min", o.delta_min, "Smallest turning-point increment")->capture_default_str();
    s.add_option("--delta-max", o.delta_max, "Largest turning-point increment")->capture_default_str();
    s.add_option("--w-susy", o.w_susy)->capture_default_str();
    s.add_option("--w-cbc", o.w_cbc)->capture_default_str();
    s.add_option("--seed", o.seed)->capture_default_str();
    s.add_option("--population", o.population, "0 means 15 x dimension")->capture_default_str();
    s.add_option("--generations", o.generations)->capture_default_str();
    s.add_option("--mutation", o.F, "DE scale factor F")->capture_default_str();
    s.add_option("--crossover", o.CR, "DE crossover rate CR")->capture_default_str();
    s.add_option("--target", o.target, "Stop once the best total is at or below this");
    s.add_option("--rel-tol", o.rel_tol, "CBC integral tolerance inside the objective")->capture_default_str();
    s.add_option("--node-budget", o.node_budget)->capture_default_str();
  }

  FitProblem problem_from(const FitOptions& o) const {
    FitProblem p;
    p.n = o.n;
    p.m = o.m;
    p.zeros = detail::load_zeros(o.zeros_path, o.n);
    if (o.phase_mode == "free") p.phase_mode = PhaseMode::free;
    else if (o.phase_mode == "zero") p.phase_mode = PhaseMode::zero_fixed;
    else if (o.phase_mode == "monotone") p.phase_mode = PhaseMode::monotone;
    else if (o.phase_mode == "fixed") {
      p.phase_mode = PhaseMode::fixed_values;
      p.fixed_phases = phases_from_radians(o.phases);
    } else {
      throw ValidationError("unknown --phase-mode '" + o.phase_mode + "'");
    }
    p.gamma_bounds = {o.gamma_min, o.gamma_max};
    if (o.sigma == "free") {
      p.sigma_mode = SigmaMode::free;
      p.sigma_bounds = {o.sigma_min, o.sigma_max};
    } else {
      p.sigma_mode = SigmaMode::fixed;
      try {
        std::size_t used = 0;
        p.sigma_value = std::stod(o.sigma, &used);
        detail::require(used == o.sigma.size(), "");
      } catch (const std::exception&) {
        throw ValidationError("--sigma must be 'free' or a number, got '" + o.sigma + "'");
      }
    }
    if (o.x_mode == "free") p.x_mode = XMode::free_increasing;
    else if (o.x_mode == "smooth") p.x_mode = XMode::fixed_smooth;
    else if (o.x_mode == "fixed") {
      p.x_mode = XMode::fixed_values;
      p.fixed_x = o.x;
    } else {
      throw ValidationError("unknown --x-mode '" + o.x_mode + "'");
    }
    p.delta_bounds = {o.delta_min, o.delta_max};
    p.weights = {o.w_susy, o.w_cbc};
    p.de.seed = o.seed;
    p.de.population = o.population;
    p.de.generations = o.generations;
    p.de.F = o.F;
    p.de.CR = o.CR;
    p.de.threads = threads_;
    if (o.target) p.de.value_to_reach = *o.target;
    p.quadrature.rel_tol = o.rel_tol;
    p.quadrature.node_budget = o.node_budget;
    validate(p);
    return p;
  }

  static void write_fit(const RunContext& ctx, const FitResult& r, const FitProblem& p) {
    ctx.write_json("result.json", to_json(r));
    std::ofstream h = ctx.open("history.csv");
    h << ctx.csv_tag();
    write_history_csv(h, r.history);
    std::ofstream c = ctx.open("cbc.csv");
    c << ctx.csv_tag();
    write_csv(c, r.cbc_report);
    const SmoothPotential potential(sized_potential(p));
    std::ofstream res = ctx.open("residuals.csv");
    res << ctx.csv_tag();
    write_residual_csv(res, residual_series(r, p.zeros, potential));
  }

  void add_fit() {
    auto* s = subcommand("fit", "Joint differential-evolution fit", [this](const RunContext& ctx) {
      const FitProblem p = problem_from(fit_);
      write_fit(ctx, differential_evolution(p), p);
    });
    attach_fit(*s, fit_);
  }

  void add_replay() {
    auto* s = subcommand("replay", "Evaluate a given parameter set without optimizing", [this](const RunContext& ctx) {
      detail::require(!replay_.x.empty(), "replay needs --x");
      FitProblem p;
      p.n = replay_.x.size();
      p.zeros = detail::load_zeros(replay_model_.zeros_path, p.n);
      const FractalParams params = replay_model_.params();
      p.m = params.m();
      p.weights = {replay_.w_susy, replay_.w_cbc};
      p.quadrature.rel_tol = replay_.rel_tol;
      const FitResult r = replay(params, replay_.x, p);
      FitProblem fixed = p;
      fixed.x_mode = XMode::fixed_values;
      fixed.fixed_x = replay_.x;
      write_fit(ctx, r, fixed);
    });
    replay_model_.attach(*s, 1.0);
    s->add_option("--x", replay_.x, "Turning points, comma separated")->delimiter(',');
    s->add_option("--w-susy", replay_.w_susy)->capture_default_str();
    s->add_option("--w-cbc", replay_.w_cbc)->capture_default_str();
    s->add_option("--rel-tol", replay_.rel_tol)->capture_default_str();
  }

  void add_iterate() {
    auto* s = subcommand("iterate", "Alternate phase fits and turning-point adjustment", [this](const RunContext& ctx) {
      FitOptions o = iterate_;
      o.x_mode = "smooth";
      o.sigma = o.sigma == "free" ? "1" : o.sigma;
      const FitProblem p = problem_from(o);
      // Without --phases the scheme starts from the zero-real-part family.
      std::vector<double> start(p.m, 0.75);
      if (!iterate_.phases.empty()) start = phases_from_radians(iterate_.phases);
      const auto steps = iterate_two_step(p, iterations_, start);
      auto rows = ordered_json::array();
      for (std::size_t i = 0; i < steps.size(); ++i)
        rows.push_back({{"iteration", i + 1},
                        {"phase_step", to_json(steps[i].phase_step)},
                        {"adjust_step", to_json(steps[i].adjust_step)}});
      ctx.write_json("iterations.json", {{"iterations", rows}});
      std::ofstream c = ctx.open("cbc.csv");
      c << ctx.csv_tag();
      write_csv(c, steps.back().adjust_step.cbc_report);
    });
    iterate_.n = 10;
    iterate_.m = 10;
    iterate_.gamma_min = iterate_.gamma_max = 3.0;
    iterate_.sigma = "1";
    iterate_.generations = 200;
    attach_fit(*s, iterate_);
    s->add_option("--iterations", iterations_)->capture_default_str();
  }

  void add_analyze() {
    auto* s = subcommand("analyze", "Phase statistics: Rao spacing test and shifted correlation",
                         [this](const RunContext& ctx) {
                           ordered_json doc;
                           if (!analyze_.rao.empty()) {
                             const RaoResult r = rao_spacing_statistic(analyze_.rao);
                             doc["rao"] = {{"n", analyze_.rao.size()},
                                           {"statistic_degrees", r.U},
                                           {"significance", to_string(r.significance)}};
                           }
                           if (!analyze_.a.empty() || !analyze_.b.empty()) {
                             const CorrelationCurve c = phase_shift_correlation(
                                 analyze_.a, analyze_.b, uniform_theta_grid(analyze_.theta_points));
                             doc["phases"] = {{"correlation", pearson(analyze_.a, analyze_.b)},
                                              {"shifted_max", c.max},
                                              {"argmax", c.argmax},
                                              {"plateau", {c.plateau_low, c.plateau_high}}};
                             std::ofstream f = ctx.open("correlation.csv");
                             f << ctx.csv_tag();
                             write_csv(f, c);
                           }
                           if (!analyze_.xa.empty() || !analyze_.xb.empty())
                             doc["turning_points"] = {{"correlation", pearson(analyze_.xa, analyze_.xb)}};
                           detail::require(!doc.empty(), "analyze needs --rao, --phases-a/--phases-b or --x-a/--x-b");
                           ctx.write_json("analysis.json", doc);
                         });
    s->add_option("--rao", analyze_.rao, "Angles in radians for the Rao spacing test")->delimiter(',');
    s->add_option("--phases-a", analyze_.a, "First phase set, radians")->delimiter(',');
    s->add_option("--phases-b", analyze_.b, "Second phase set, radians (shifted)")->delimiter(',');
    s->add_option("--x-a", analyze_.xa, "First turning-point set")->delimiter(',');
    s->add_option("--x-b", analyze_.xb, "Second turning-point set")->delimiter(',');
    s->add_option("--theta-points", analyze_.theta_points)->capture_default_str();
  }

  void add_identities() {
    auto* s = subcommand("identities", "Closed-form checks of fractal turning points", [this](const RunContext& ctx) {
      const ZeroTable zeros = detail::load_zeros(identities_zeros_, 9);
      const NamedConstants k = NamedConstants::compute();
      auto rows = ordered_json::array();
      for (int id = 1; id <= 5; ++id) rows.push_back(to_json(fractal_identity_check(id, k, zeros)));
      ctx.write_json("identities.json", {{"checks", rows}});
    });
    s->add_option("--zeros", identities_zeros_, "Zero table file");
  }

  void add_dominici() {
    auto* s = subcommand("dominici", "Small-x series of the smooth potential against its inverse",
                         [this](const RunContext& ctx) {
                           detail::require(dominici_.points >= 2 && dominici_.x_max > 0.0,
                                           "dominici needs --points >= 2 and --x-max > 0");
                           const SmoothPotential potential;
                           std::ofstream f = ctx.open("dominici.csv");
                           f << ctx.csv_tag() << "x,exact,terms1,terms2,terms3,rel_error3\n";
                           for (std::size_t i = 0; i < dominici_.points; ++i) {
                             const double x =
                                 dominici_.x_max * static_cast<double>(i) / static_cast<double>(dominici_.points - 1);
                             const double exact = potential.V_of_x_direct(x);
                             const double s3 = potential.dominici_series(x, 3, false);
                             f << format_number(x) << ',' << format_number(exact) << ','
                               << format_number(potential.dominici_series(x, 1, false)) << ','
                               << format_number(potential.dominici_series(x, 2, false)) << ','
                               << format_number(s3) << ',' << format_number(std::abs(s3 - exact) / exact) << '\n';
                           }
                           const auto a = potential.dominici_coefficients();
                           ctx.write_json("dominici.json", {{"omega", potential.omega()},
                                                            {"coefficients", {a[0], a[1], a[2]}},
                                                            {"guard_x", potential.dominici_guard_x()}});
                         });
    s->add_option("--x-max", dominici_.x_max)->capture_default_str();
    s->add_option("--points", dominici_.points)->capture_default_str();
  }

  CLI::App app_;
  std::map<std::string, std::function<void(const RunContext&)>> handlers_;
  std::string outdir_ = "out";
  std::string label_;
  std::size_t threads_ = 1;

  struct {
    std::size_t count = 10;
    std::string path;
    double grid_step = 0.1, t_max = 1000.0, tolerance = 1e-9;
  } zeros_;
  struct {
    std::string zeros_path;
    std::size_t n = 8;
  } tp_;
  ModelOptions weier_model_;
  struct {
    double x_min = -3.0, x_max = 3.0, scale = 1.0, offset = 0.0;
    std::size_t points = 601;
  } weier_;
  ModelOptions cbc_model_;
  QuadOptions cbc_quad_;
  struct {
    std::size_t n = 1;
    std::vector<double> x;
  } cbc_;
  ModelOptions adjust_model_;
  QuadOptions adjust_quad_;
  struct {
    std::size_t n = 1, grid_points = 400;
    std::vector<std::size_t> levels;
    double x_tol = 1e-7;
  } adjust_;
  FitOptions fit_;
  ModelOptions replay_model_;
  struct {
    std::vector<double> x;
    double w_susy = 1.0, w_cbc = 1.0, rel_tol = 1e-8;
  } replay_;
  FitOptions iterate_;
  std::size_t iterations_ = 1;
  struct {
    std::vector<double> rao, a, b, xa, xb;
    std::size_t theta_points = 1024;
  } analyze_;
  std::string identities_zeros_;
  struct {
    double x_max = 0.25;
    std::size_t points = 26;
  } dominici_;
};

/// Entry point used by the executable and by tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Tool tool;
  return tool.run(argc, argv, out, err);
}

} // namespace cmz::cli
