#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "fht/config.hpp"
#include "fht/csv.hpp"
#include "fht/errors.hpp"
#include "fht/joint.hpp"
#include "fht/laplace.hpp"
#include "fht/math.hpp"
#include "fht/mc.hpp"
#include "fht/volterra.hpp"

namespace fht {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitConfig = 2;
constexpr int kExitStrip = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitOrder = 5;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 1;
  std::int64_t seed = -1;  // -1: keep the config value
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_seed) {
  cmd->add_option("--config", args.config_path, "Path to the run config (INI)")
      ->required();
  cmd->add_option("--out-dir", args.out_dir, "Directory for output files");
  cmd->add_option("--threads", args.threads, "Worker thread count")
      ->check(CLI::PositiveNumber);
  if (with_seed)
    cmd->add_option("--seed", args.seed, "Override the simulation seed");
}

std::string out_path(const CommonArgs& args, const std::string& name) {
  std::filesystem::create_directories(args.out_dir);
  return (std::filesystem::path(args.out_dir) / name).string();
}

void require_inside(const RunConfig& rc, const char* what) {
  if (rc.strip.configuration != StripConfiguration::inside)
    throw StripError(std::string(what) +
                     " requires the starting point inside the strip");
}

void require_valid_strip(const RunConfig& rc, double horizon, double step) {
  const StripReport rep = validate_strip(rc.strip, horizon, step);
  if (!rep.valid) throw StripError(rep.message);
}

void require_laplace_route(const RunConfig& rc) {
  if (!rc.strip.lower.is_constant() || !rc.strip.upper.is_constant())
    throw StripError("laplace route requires constant boundaries");
  if (rc.strip.process.kind != ProcessKind::standard_brownian)
    throw StripError("laplace route requires standard Brownian motion");
  if (rc.strip.process.t0 != 0.0)
    throw StripError("laplace route requires t0 = 0");
}

void require_closed_form_route(const RunConfig& rc) {
  if (!rc.strip.process.bm_reducible() || !rc.strip.lower.is_constant() ||
      !rc.strip.upper.is_constant())
    throw StripError(
        "closed-form route requires a Brownian-reducible process and "
        "constant boundaries");
}

// Sides of the two boundaries relative to the starting point; needed to
// build marginal laws.
BoundarySide lower_side(const RunConfig& rc) {
  return rc.strip.configuration == StripConfiguration::outside_below
             ? BoundarySide::above_start
             : BoundarySide::below_start;
}

BoundarySide upper_side(const RunConfig& rc) {
  return rc.strip.configuration == StripConfiguration::outside_above
             ? BoundarySide::below_start
             : BoundarySide::above_start;
}

int cmd_solve(const CommonArgs& args) {
  const RunConfig rc = RunConfig::from_file(args.config_path);
  require_inside(rc, "solve");
  require_valid_strip(rc, rc.grid.horizon(), rc.grid.h);

  if (rc.method == SolveMethod::volterra) {
    const SubDensityPair sub = solve_two_boundary(rc.strip, rc.grid);
    const double first_mass =
        rc.grid.h * (sub.g_lower.front() + sub.g_upper.front());
    if (first_mass > 0.01)
      std::cerr << "warning: the first knot already carries mass "
                << format_double(first_mass)
                << "; the march cannot resolve the start, reduce h\n";
    write_sub_densities_csv(out_path(args, "sub_densities.csv"), sub);
    std::cout << "method=volterra knots=" << rc.grid.n
              << " h=" << format_double(rc.grid.h) << "\n"
              << "mass_lower=" << format_double(sub.mass_lower())
              << " mass_upper=" << format_double(sub.mass_upper())
              << " total=" << format_double(sub.total_mass()) << "\n"
              << "clamped_knots=" << sub.clamp_count() << "\n"
              << "wrote sub_densities.csv\n";
    return kExitOk;
  }

  if (rc.method == SolveMethod::laplace) {
    require_laplace_route(rc);
    const double a = rc.strip.lower.constant_level();
    const double b = rc.strip.upper.constant_level();
    std::vector<double> times(static_cast<std::size_t>(rc.grid.n));
    for (int k = 0; k < rc.grid.n; ++k)
      times[static_cast<std::size_t>(k)] = rc.grid.knot(k);
    const auto ev_lo = make_sub_density_evaluator(
        rc.representation, rc.strip.process, a, b, WhichBoundary::lower);
    const auto ev_up = make_sub_density_evaluator(
        rc.representation, rc.strip.process, a, b, WhichBoundary::upper);
    const std::vector<double> g_lower =
        laplace_invert(ev_lo, times, rc.inversion);
    const std::vector<double> g_upper =
        laplace_invert(ev_up, times, rc.inversion);
    write_laplace_csv(out_path(args, "laplace.csv"), rc.grid, g_lower, g_upper);
    std::cout << "method=laplace representation=" << to_string(rc.representation)
              << " knots=" << rc.grid.n << " h=" << format_double(rc.grid.h)
              << "\n"
              << "mass_lower=" << format_double(rc.grid.h * pairwise_sum(g_lower))
              << " mass_upper=" << format_double(rc.grid.h * pairwise_sum(g_upper))
              << "\n"
              << "wrote laplace.csv\n";
    return kExitOk;
  }

  // closed-form series route
  require_closed_form_route(rc);
  const Process& p = rc.strip.process;
  const double A = p.to_bm_coord(rc.strip.lower.constant_level());
  const double B = p.to_bm_coord(rc.strip.upper.constant_level());
  const double X = p.to_bm_coord(p.x0);
  SubDensityPair sub;
  sub.grid = rc.grid;
  sub.g_lower.resize(static_cast<std::size_t>(rc.grid.n));
  sub.g_upper.resize(static_cast<std::size_t>(rc.grid.n));
  sub.clamped.assign(static_cast<std::size_t>(rc.grid.n), 0);
  for (int k = 0; k < rc.grid.n; ++k) {
    const double t = rc.grid.knot(k) - p.t0;
    const SeriesValue lo = bm_sub_density_lower(t, X, A, B, rc.series);
    const SeriesValue up = bm_sub_density_upper(t, X, A, B, rc.series);
    sub.g_lower[static_cast<std::size_t>(k)] = lo.value;
    sub.g_upper[static_cast<std::size_t>(k)] = up.value;
    sub.clamped[static_cast<std::size_t>(k)] =
        (lo.clamped || up.clamped) ? 1 : 0;
  }
  write_sub_densities_csv(out_path(args, "sub_densities.csv"), sub);
  std::cout << "method=closed_form knots=" << rc.grid.n
            << " h=" << format_double(rc.grid.h) << "\n"
            << "mass_lower=" << format_double(sub.mass_lower())
            << " mass_upper=" << format_double(sub.mass_upper())
            << " total=" << format_double(sub.total_mass()) << "\n"
            << "clamped_knots=" << sub.clamp_count() << "\n"
            << "wrote sub_densities.csv\n";
  return kExitOk;
}

int cmd_joint(const CommonArgs& args) {
  const RunConfig rc = RunConfig::from_file(args.config_path);
  const double sh = rc.joint.surface_h > 0.0 ? rc.joint.surface_h : rc.grid.h;
  const double shz = rc.joint.surface_horizon > 0.0 ? rc.joint.surface_horizon
                                                    : rc.grid.horizon();
  const TimeGrid sgrid = TimeGrid::over(rc.strip.process.t0, shz, sh);
  require_valid_strip(rc, sgrid.horizon(), sgrid.h);

  AssembleOptions opt;
  opt.series = rc.series;
  opt.prefer_closed_form = rc.joint.use_closed_form;

  JointDensitySurface surf;
  if (rc.strip.configuration == StripConfiguration::inside) {
    SubDensityPair sub;
    const bool closed_ok = rc.strip.process.bm_reducible() &&
                           rc.strip.lower.is_constant() &&
                           rc.strip.upper.is_constant();
    if (!(opt.prefer_closed_form && closed_ok))
      sub = solve_two_boundary(rc.strip, sgrid);
    surf = assemble_case_ii(rc.strip, sub, sgrid, opt);
  } else {
    surf = assemble_case_i(rc.strip, sgrid, opt);
  }

  if (rc.joint.write_long)
    write_joint_long_csv(out_path(args, "joint_long.csv"), surf);
  if (rc.joint.write_matrix)
    write_joint_matrix_csv(out_path(args, "joint_matrix.csv"), surf);

  std::cout << "case="
            << (surf.case_tag == JointCase::case_i ? "i" : "ii")
            << " knots=" << sgrid.n << " h=" << format_double(sgrid.h) << "\n"
            << "grid_mass=" << format_double(surf.grid_mass())
            << " completed_mass=" << format_double(surf.completed_mass())
            << "\n";
  if (rc.joint.write_long) std::cout << "wrote joint_long.csv\n";
  if (rc.joint.write_matrix) std::cout << "wrote joint_matrix.csv\n";
  return kExitOk;
}

int cmd_copula(const CommonArgs& args) {
  const RunConfig rc = RunConfig::from_file(args.config_path);
  const double sh = rc.joint.surface_h > 0.0 ? rc.joint.surface_h : rc.grid.h;
  const double shz = rc.joint.surface_horizon > 0.0 ? rc.joint.surface_horizon
                                                    : rc.grid.horizon();
  const TimeGrid sgrid = TimeGrid::over(rc.strip.process.t0, shz, sh);
  require_valid_strip(rc, sgrid.horizon(), sgrid.h);

  AssembleOptions opt;
  opt.series = rc.series;
  opt.prefer_closed_form = rc.joint.use_closed_form;

  JointDensitySurface surf;
  if (rc.strip.configuration == StripConfiguration::inside) {
    SubDensityPair sub;
    const bool closed_ok = rc.strip.process.bm_reducible() &&
                           rc.strip.lower.is_constant() &&
                           rc.strip.upper.is_constant();
    if (!(opt.prefer_closed_form && closed_ok))
      sub = solve_two_boundary(rc.strip, sgrid);
    surf = assemble_case_ii(rc.strip, sub, sgrid, opt);
  } else {
    surf = assemble_case_i(rc.strip, sgrid, opt);
  }

  const double mhz = rc.copula.marginal_horizon > 0.0
                         ? rc.copula.marginal_horizon
                         : sgrid.horizon();
  const MarginalRoute route = rc.joint.use_closed_form
                                  ? MarginalRoute::automatic
                                  : MarginalRoute::solver;
  const Marginal ml =
      make_marginal(rc.strip.process, rc.strip.lower, lower_side(rc), mhz,
                    sgrid.h, route);
  const Marginal mu =
      make_marginal(rc.strip.process, rc.strip.upper, upper_side(rc), mhz,
                    sgrid.h, route);

  const CopulaSurface cop = copula_density(surf, ml, mu, rc.copula.m);
  write_copula_csv(out_path(args, "copula.csv"), cop);
  write_copula_quantiles_csv(out_path(args, "copula_quantiles.csv"), cop);

  int uncovered = 0;
  for (auto c : cop.covered) uncovered += c == 0;
  std::cout << "m=" << cop.m << " uncovered_cells=" << uncovered << "\n"
            << "wrote copula.csv\nwrote copula_quantiles.csv\n";
  return kExitOk;
}

int cmd_converge(const CommonArgs& args) {
  const RunConfig rc = RunConfig::from_file(args.config_path);
  require_inside(rc, "converge");
  if (rc.converge.h_list.empty())
    throw ConfigError("config: converge needs h_list");
  const double horizon = rc.converge.horizon > 0.0 ? rc.converge.horizon
                                                   : rc.grid.horizon();
  require_valid_strip(rc, horizon, rc.converge.h_list.back());

  ConvergenceReport rep;
  try {
    rep = convergence_study(rc.strip, rc.converge.h_list,
                            rc.converge.reference, horizon);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  write_convergence_csv(out_path(args, "convergence.csv"), rep);
  for (std::size_t k = 0; k < rep.steps.size(); ++k)
    std::cout << "h=" << format_double(rep.steps[k])
              << " max_error=" << format_double(rep.max_errors[k])
              << " mse=" << format_double(rep.mse[k]) << "\n";
  const bool have_order = std::isfinite(rep.empirical_order);
  std::cout << "empirical_order="
            << (have_order ? format_double(rep.empirical_order)
                           : std::string("not-available"))
            << "\n"
            << "wrote convergence.csv\n";
  if (have_order && rep.empirical_order < 0.8) {
    std::cerr << "ERROR:" << kExitOrder << ":empirical order "
              << format_double(rep.empirical_order)
              << " is below the acceptance threshold 0.8\n";
    return kExitOrder;
  }
  return kExitOk;
}

int cmd_simulate(const CommonArgs& args) {
  const RunConfig rc = RunConfig::from_file(args.config_path);
  SimConfig sc;
  sc.n_paths = rc.simulate.n_paths;
  sc.dt = rc.simulate.dt;
  sc.horizon = rc.simulate.horizon > 0.0 ? rc.simulate.horizon
                                         : rc.grid.horizon();
  sc.seed = args.seed >= 0 ? static_cast<std::uint64_t>(args.seed)
                           : rc.simulate.seed;
  sc.threads = args.threads;

  const StripReport rep = validate_strip(rc.strip, sc.horizon, sc.dt * 16.0);
  if (!rep.valid) throw StripError(rep.message);
  if (sc.dt > std::pow(rep.min_gap / 10.0, 2.0))
    std::cerr << "warning: dt=" << format_double(sc.dt)
              << " is coarse for a strip gap of "
              << format_double(rep.min_gap)
              << "; hitting times will be biased late\n";

  const std::vector<HittingTimeSample> samples = simulate_pair(rc.strip, sc);
  write_samples_csv(out_path(args, "samples.csv"), samples);

  std::int64_t lower_first = 0, upper_first = 0, censored = 0;
  for (const auto& s : samples) {
    lower_first += s.first_hit == FirstHit::lower;
    upper_first += s.first_hit == FirstHit::upper;
    censored += s.first_hit == FirstHit::none;
  }
  const double n = static_cast<double>(samples.size());
  std::cout << "paths=" << samples.size() << " dt=" << format_double(sc.dt)
            << " horizon=" << format_double(sc.horizon) << " seed=" << sc.seed
            << "\n"
            << "lower_first=" << format_double(static_cast<double>(lower_first) / n)
            << " upper_first=" << format_double(static_cast<double>(upper_first) / n)
            << " censored=" << format_double(static_cast<double>(censored) / n)
            << "\n"
            << "wrote samples.csv\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"First-hitting-time toolkit for one-dimensional diffusions"};
  app.require_subcommand(1);

  CommonArgs solve_args, joint_args, copula_args, converge_args, sim_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "Two-boundary sub-densities on a time grid");
  add_common(solve, solve_args, false);
  CLI::App* joint = app.add_subcommand(
      "joint", "Joint density surface of the two hitting times");
  add_common(joint, joint_args, false);
  CLI::App* copula = app.add_subcommand(
      "copula", "Copula density of the two hitting times");
  add_common(copula, copula_args, false);
  CLI::App* converge = app.add_subcommand(
      "converge", "Step-halving convergence study");
  add_common(converge, converge_args, false);
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo simulation of both hitting times");
  add_common(simulate, sim_args, true);

  // CLI11 wants argv in reverse order without the program name.
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR:" << kExitConfig << ":" << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_args);
    if (joint->parsed()) return cmd_joint(joint_args);
    if (copula->parsed()) return cmd_copula(copula_args);
    if (converge->parsed()) return cmd_converge(converge_args);
    if (simulate->parsed()) return cmd_simulate(sim_args);
    std::cerr << "ERROR:" << kExitConfig << ":no command given\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "ERROR:" << kExitConfig << ":" << e.what() << "\n";
    return kExitConfig;
  } catch (const StripError& e) {
    std::cerr << "ERROR:" << kExitStrip << ":" << e.what() << "\n";
    return kExitStrip;
  } catch (const NumericalError& e) {
    std::cerr << "ERROR:" << kExitNumerical << ":" << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "ERROR:" << kExitUnexpected << ":unexpected: " << e.what()
              << "\n";
    return kExitUnexpected;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace fht
