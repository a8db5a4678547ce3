#pragma once

#include <cstdint>
#include <vector>

#include "fht/boundary.hpp"
#include "fht/process.hpp"

namespace fht {

// Uniform grid of knots t_k = t0 + (k+1) h for k in [0, n). The left
// endpoint t0 itself carries no knot; densities start one step in.
struct TimeGrid {
  double t0{0.0};
  double h{0.0};
  int n{0};

  double knot(int k) const { return t0 + h * static_cast<double>(k + 1); }
  double horizon() const { return knot(n - 1); }
  void validate() const;

  static TimeGrid over(double t0, double horizon, double h);
};

// Discrete boundary-hitting sub-densities on a TimeGrid. g_lower[k] is the
// density of reaching the lower boundary first at knot k, likewise g_upper.
// clamped[k] is set when a small negative value was clamped to 0 at knot k
// in either array.
struct SubDensityPair {
  TimeGrid grid;
  std::vector<double> g_lower;
  std::vector<double> g_upper;
  std::vector<std::uint8_t> clamped;

  int clamp_count() const;
  double mass_lower() const;  // h * sum g_lower
  double mass_upper() const;
  double total_mass() const;
  // Running h-sum of g_lower + g_upper per knot.
  std::vector<double> cumulative_mass() const;
};

// Two-boundary solver. Marches the discretized first-kind system forward in
// time: at each knot the new pair of density values follows from the known
// transition law and the previously computed knots. Same-boundary kernels
// carry a diagonal weight of one half (reflection limit) and cross-boundary
// kernels vanish on the diagonal, which is what the leading 2/h and the
// doubled correction sums encode.
//
// Small negative values (above -severe_negative_fraction times the running
// maximum) are clamped to 0 and flagged; anything more negative aborts with
// NumericalError. The quadrature bias makes the captured mass overshoot one
// by O(h), and on long horizons the convolution echoes that excess back as a
// negative floor of roughly excess/h, independent of h; the default fraction
// sits well above that floor and well below a genuinely diverging march.
// Invalid strips throw StripError.
struct SolveControl {
  double severe_negative_fraction{5e-2};
};

SubDensityPair solve_two_boundary(const StripProblem& sp, const TimeGrid& grid,
                                  const SolveControl& ctl = {});

// One-boundary variant (classical integral-equation march). "side" says
// where the boundary sits relative to the starting point.
enum class BoundarySide { below_start, above_start };

std::vector<double> solve_single_boundary(const Process& p, const Boundary& bd,
                                          BoundarySide side,
                                          const TimeGrid& grid,
                                          const SolveControl& ctl = {});

// Step-halving study. Solves the same strip on each step size and compares
// against either the closed-form series (standard Brownian motion with
// constant boundaries only) or the finest-grid solution, on the knots of the
// coarsest grid. empirical_order is the least-squares slope of log(max_err)
// against log(h); NaN when fewer than two usable error points exist.
enum class ConvergenceReference { closed_form, finest_grid };

struct ConvergenceReport {
  std::vector<double> steps;
  std::vector<double> max_errors;
  std::vector<double> mse;
  double empirical_order{};
};

ConvergenceReport convergence_study(const StripProblem& sp,
                                    const std::vector<double>& h_list,
                                    ConvergenceReference reference,
                                    double horizon);

}  // namespace fht
