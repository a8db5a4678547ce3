#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fht/bm_closed_form.hpp"
#include "fht/boundary.hpp"
#include "fht/process.hpp"
#include "fht/volterra.hpp"

namespace fht {

// Full (not sub-) law of a single first hitting time, exposed as callables
// over absolute time. Closed-form marginals cover [t0, inf); solver-backed
// ones cover [t0, horizon] with cdf plateauing at `captured` beyond.
struct Marginal {
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
  double t0{0.0};
  double horizon{0.0};
  double captured{1.0};
  bool closed_form{false};

  // Inverse CDF by bisection. Returns nullopt when u exceeds the captured
  // mass (solver route) or is not in (0, 1).
  std::optional<double> quantile(double u) const;
};

enum class MarginalRoute { automatic, closed_form, solver };

Marginal make_marginal(const Process& p, const Boundary& bd, BoundarySide side,
                       double horizon, double h,
                       MarginalRoute route = MarginalRoute::automatic);

// Per-knot marginal hitting-time CDF. The closed-form route is exact for
// Brownian-reducible processes with a constant boundary; the solver route is
// the cumulative h-sum of the one-boundary density, clipped to [0, 1].
std::vector<double> marginal_cdf(const Process& p, const Boundary& bd,
                                 BoundarySide side, const TimeGrid& grid,
                                 MarginalRoute route = MarginalRoute::automatic);

enum class JointCase { case_i, case_ii };

// Joint density of the two hitting times on a square grid (same knots on
// both axes), plus component callables that extend the density off-grid and
// supply the analytic tail corrections a truncated grid cannot hold.
struct JointDensitySurface {
  TimeGrid grid;
  JointCase case_tag{JointCase::case_ii};
  std::vector<double> values;  // row-major, values[it * grid.n + is]

  // f(t, s) at absolute times; valid anywhere in (t0, inf)^2.
  std::function<double(double, double)> density;

  // Mass sitting beyond the grid in the s (resp. t) direction for a fixed
  // t-knot (resp. s-knot), divided by h. Used for tail completion.
  std::function<double(double)> tail_weight_t;
  std::function<double(double)> tail_weight_s;

  // Mass entirely outside the grid square (case i: the first factor's own
  // tail; case ii: the probability that the first exit falls beyond the
  // horizon, so both coordinates do).
  double off_grid_mass{0.0};

  // The sub-density pair the surface was assembled from (case ii solver
  // route); empty when closed-form components were used.
  SubDensityPair components;

  double value(int it, int is) const {
    return values[static_cast<std::size_t>(it) * static_cast<std::size_t>(grid.n) +
                  static_cast<std::size_t>(is)];
  }
  double grid_mass() const;       // h^2 * sum of values
  double completed_mass() const;  // grid mass + tail terms + off_grid_mass

  // s-integrated (resp. t-integrated) marginal density at each knot,
  // tail-completed. Row/column rectangle sums plus the analytic remainder.
  std::vector<double> marginal_lower() const;
  std::vector<double> marginal_upper() const;
};

struct AssembleOptions {
  SeriesControl series{};
  // Prefer exact Brownian components when the process is reducible and both
  // boundaries are constant; otherwise solver-backed components are used.
  bool prefer_closed_form{true};
};

// Starting point outside the strip: one boundary must be crossed first, the
// joint density lives on one side of the diagonal only and factorizes into
// first passage x restarted passage.
JointDensitySurface assemble_case_i(const StripProblem& sp, const TimeGrid& grid,
                                    const AssembleOptions& opt = {});

// Starting point inside the strip. `sub` is the solver output for the strip;
// it may be left empty when closed-form components are available and
// preferred. Off the diagonal the density is a sub-density value times a
// restarted one-boundary passage density; on the diagonal it is zero.
JointDensitySurface assemble_case_ii(const StripProblem& sp,
                                     const SubDensityPair& sub,
                                     const TimeGrid& grid,
                                     const AssembleOptions& opt = {});

// Copula density on the interior grid u_i = i/(m+1). Cells whose quantile
// falls outside the covered span of a marginal are flagged not-covered and
// carry value 0.
struct CopulaSurface {
  int m{0};
  std::vector<double> u;        // the m interior grid points
  std::vector<double> q_lower;  // quantiles of the lower-boundary time at u
  std::vector<double> q_upper;
  std::vector<double> values;   // m*m, row-major in the u (lower) index
  std::vector<std::uint8_t> covered;

  double value(int i, int j) const {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
                  static_cast<std::size_t>(j)];
  }
  bool is_covered(int i, int j) const {
    return covered[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
                   static_cast<std::size_t>(j)] != 0;
  }
};

CopulaSurface copula_density(const JointDensitySurface& surf,
                             const Marginal& lower_marginal,
                             const Marginal& upper_marginal, int m);

}  // namespace fht
