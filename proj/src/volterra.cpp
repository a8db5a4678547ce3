#include "fht/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fht/bm_closed_form.hpp"
#include "fht/errors.hpp"
#include "fht/math.hpp"

namespace fht {

void TimeGrid::validate() const {
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("grid: step must be positive");
  if (n < 1) throw std::invalid_argument("grid: need at least one knot");
  if (!std::isfinite(t0)) throw std::invalid_argument("grid: t0 must be finite");
}

TimeGrid TimeGrid::over(double t0, double horizon, double h) {
  TimeGrid g;
  g.t0 = t0;
  g.h = h;
  if (!(h > 0.0) || !(horizon > t0))
    throw std::invalid_argument("grid: need h > 0 and horizon > t0");
  g.n = static_cast<int>(std::llround((horizon - t0) / h));
  if (g.n < 1) g.n = 1;
  g.validate();
  return g;
}

int SubDensityPair::clamp_count() const {
  int c = 0;
  for (auto f : clamped) c += f != 0;
  return c;
}

double SubDensityPair::mass_lower() const {
  return grid.h * pairwise_sum(g_lower);
}

double SubDensityPair::mass_upper() const {
  return grid.h * pairwise_sum(g_upper);
}

double SubDensityPair::total_mass() const {
  return mass_lower() + mass_upper();
}

std::vector<double> SubDensityPair::cumulative_mass() const {
  std::vector<double> out(g_lower.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < g_lower.size(); ++k) {
    acc += grid.h * (g_lower[k] + g_upper[k]);
    out[k] = acc;
  }
  return out;
}

namespace {

// Clamp-or-abort policy shared by both solvers.
struct NegativeGuard {
  double severe_fraction;
  double running_max{0.0};

  // Returns the accepted value and sets the clamp flag on small negatives.
  double accept(double v, double t, bool& clamp_flag) {
    if (v >= 0.0) {
      running_max = std::max(running_max, v);
      return v;
    }
    if (-v > severe_fraction * running_max && running_max > 0.0)
      throw NumericalError(
          "solver: severely negative density at t=" + std::to_string(t) +
          "; step size too large for this strip");
    clamp_flag = true;
    return 0.0;
  }
};

}  // namespace

SubDensityPair solve_two_boundary(const StripProblem& sp, const TimeGrid& grid,
                                  const SolveControl& ctl) {
  grid.validate();
  if (sp.configuration != StripConfiguration::inside)
    throw StripError("solver: starting point must lie inside the strip");
  StripReport rep = validate_strip(sp, grid.horizon(), grid.h);
  if (!rep.valid)
    throw StripError("solver: invalid strip: " + rep.message);

  const Process& p = sp.process;
  const int n = grid.n;
  const double h = grid.h;
  const double t0 = p.t0;
  const double x0 = p.x0;

  SubDensityPair out;
  out.grid = grid;
  out.g_lower.assign(n, 0.0);
  out.g_upper.assign(n, 0.0);
  out.clamped.assign(n, 0);

  // Right-hand sides at each knot.
  std::vector<double> rhs_a(n), rhs_b(n);
  for (int i = 0; i < n; ++i) {
    const double ti = grid.knot(i);
    rhs_a[i] = transition_cdf(p, sp.lower(ti), ti, x0, t0);
    rhs_b[i] = transition_sf(p, sp.upper(ti), ti, x0, t0);
  }

  // All supported processes are time-homogeneous, so with constant
  // boundaries every kernel depends on the knot lag only.
  const bool lag_kernels = sp.lower.is_constant() && sp.upper.is_constant();
  std::vector<double> kaa, kab, kba, kbb;  // lag l = i - j at index l-1
  if (lag_kernels) {
    const double A = sp.lower.constant_level();
    const double B = sp.upper.constant_level();
    kaa.resize(n - 1 > 0 ? n - 1 : 0);
    kab.resize(kaa.size());
    kba.resize(kaa.size());
    kbb.resize(kaa.size());
    for (int l = 1; l < n; ++l) {
      const double t = t0 + h * static_cast<double>(l);
      kaa[l - 1] = transition_cdf(p, A, t, A, t0);
      kab[l - 1] = transition_cdf(p, A, t, B, t0);
      kba[l - 1] = transition_sf(p, B, t, A, t0);
      kbb[l - 1] = transition_sf(p, B, t, B, t0);
    }
  }

  std::vector<double> terms_a(n), terms_b(n);
  NegativeGuard guard{ctl.severe_negative_fraction};
  const double two_over_h = 2.0 / h;

  for (int i = 0; i < n; ++i) {
    const double ti = grid.knot(i);
    double corr_a = 0.0, corr_b = 0.0;
    if (i > 0) {
      if (lag_kernels) {
        for (int j = 0; j < i; ++j) {
          const int l = i - j - 1;
          terms_a[j] = kaa[l] * out.g_lower[j] + kab[l] * out.g_upper[j];
          terms_b[j] = kba[l] * out.g_lower[j] + kbb[l] * out.g_upper[j];
        }
      } else {
        const double ai = sp.lower(ti);
        const double bi = sp.upper(ti);
        for (int j = 0; j < i; ++j) {
          const double tj = grid.knot(j);
          const double aj = sp.lower(tj);
          const double bj = sp.upper(tj);
          terms_a[j] = transition_cdf(p, ai, ti, aj, tj) * out.g_lower[j] +
                       transition_cdf(p, ai, ti, bj, tj) * out.g_upper[j];
          terms_b[j] = transition_sf(p, bi, ti, aj, tj) * out.g_lower[j] +
                       transition_sf(p, bi, ti, bj, tj) * out.g_upper[j];
        }
      }
      corr_a = pairwise_sum(terms_a.data(), static_cast<std::size_t>(i));
      corr_b = pairwise_sum(terms_b.data(), static_cast<std::size_t>(i));
    }

    const double ga = two_over_h * (rhs_a[i] - h * corr_a);
    const double gb = two_over_h * (rhs_b[i] - h * corr_b);

    bool flag = false;
    out.g_lower[i] = guard.accept(ga, ti, flag);
    out.g_upper[i] = guard.accept(gb, ti, flag);
    out.clamped[i] = flag ? 1 : 0;
  }

  return out;
}

std::vector<double> solve_single_boundary(const Process& p, const Boundary& bd,
                                          BoundarySide side,
                                          const TimeGrid& grid,
                                          const SolveControl& ctl) {
  grid.validate();
  p.validate();
  const double t0 = p.t0;
  const double x0 = p.x0;

  const double c0 = bd.eval(t0);
  if (side == BoundarySide::below_start && !(c0 < x0))
    throw StripError("solver: boundary must start below the starting point");
  if (side == BoundarySide::above_start && !(c0 > x0))
    throw StripError("solver: boundary must start above the starting point");

  const int n = grid.n;
  const double h = grid.h;

  // For a boundary below the start the relevant tail is the lower one; for a
  // boundary above, the upper one.
  auto tail = [&](double level, double t, double y, double tau) {
    return side == BoundarySide::below_start
               ? transition_cdf(p, level, t, y, tau)
               : transition_sf(p, level, t, y, tau);
  };

  for (int i = 0; i < n; ++i) {
    const double c = bd.eval(grid.knot(i));
    if (!p.contains(c))
      throw StripError("solver: boundary leaves the state interval");
  }

  std::vector<double> rhs(n);
  for (int i = 0; i < n; ++i) {
    const double ti = grid.knot(i);
    rhs[i] = tail(bd(ti), ti, x0, t0);
  }

  const bool lag_kernels = bd.is_constant();
  std::vector<double> klag;
  if (lag_kernels) {
    const double C = bd.constant_level();
    klag.resize(n - 1 > 0 ? n - 1 : 0);
    for (int l = 1; l < n; ++l)
      klag[l - 1] = tail(C, t0 + h * static_cast<double>(l), C, t0);
  }

  std::vector<double> f(n, 0.0), terms(n);
  NegativeGuard guard{ctl.severe_negative_fraction};
  const double two_over_h = 2.0 / h;

  for (int i = 0; i < n; ++i) {
    const double ti = grid.knot(i);
    double corr = 0.0;
    if (i > 0) {
      if (lag_kernels) {
        for (int j = 0; j < i; ++j) terms[j] = klag[i - j - 1] * f[j];
      } else {
        const double ci = bd(ti);
        for (int j = 0; j < i; ++j) {
          const double tj = grid.knot(j);
          terms[j] = tail(ci, ti, bd(tj), tj) * f[j];
        }
      }
      corr = pairwise_sum(terms.data(), static_cast<std::size_t>(i));
    }
    bool flag = false;
    f[i] = guard.accept(two_over_h * (rhs[i] - h * corr), ti, flag);
  }

  return f;
}

ConvergenceReport convergence_study(const StripProblem& sp,
                                    const std::vector<double>& h_list,
                                    ConvergenceReference reference,
                                    double horizon) {
  if (h_list.empty())
    throw std::invalid_argument("convergence: need at least one step size");
  for (std::size_t i = 0; i + 1 < h_list.size(); ++i)
    if (!(h_list[i] > h_list[i + 1]))
      throw std::invalid_argument("convergence: steps must strictly decrease");
  for (double h : h_list)
    if (!(h > 0.0))
      throw std::invalid_argument("convergence: steps must be positive");

  const double t0 = sp.process.t0;
  if (!(horizon > t0))
    throw std::invalid_argument("convergence: horizon must exceed t0");

  const bool closed =
      reference == ConvergenceReference::closed_form;
  if (closed) {
    if (sp.process.kind != ProcessKind::standard_brownian ||
        !sp.lower.is_constant() || !sp.upper.is_constant())
      throw std::invalid_argument(
          "convergence: closed-form reference needs standard Brownian motion "
          "with constant boundaries");
  }

  const double h_coarse = h_list.front();
  const double h_fine = h_list.back();

  // Every step must hit the coarse knots exactly.
  std::vector<long> stride(h_list.size());
  for (std::size_t k = 0; k < h_list.size(); ++k) {
    const double r = h_coarse / h_list[k];
    stride[k] = std::llround(r);
    if (std::abs(r - static_cast<double>(stride[k])) > 1e-9 || stride[k] < 1)
      throw std::invalid_argument(
          "convergence: step sizes must nest (each must divide the coarsest)");
  }

  std::vector<SubDensityPair> solutions;
  solutions.reserve(h_list.size());
  for (double h : h_list)
    solutions.push_back(solve_two_boundary(sp, TimeGrid::over(t0, horizon, h)));

  const int n_coarse = solutions.front().grid.n;

  // Reference values on the coarse knots.
  std::vector<double> ref_a(n_coarse), ref_b(n_coarse);
  if (closed) {
    const double A = sp.lower.constant_level();
    const double B = sp.upper.constant_level();
    for (int m = 0; m < n_coarse; ++m) {
      const double t = solutions.front().grid.knot(m) - t0;
      ref_a[m] = bm_sub_density_lower(t, sp.process.x0, A, B).value;
      ref_b[m] = bm_sub_density_upper(t, sp.process.x0, A, B).value;
    }
  } else {
    const SubDensityPair& fine = solutions.back();
    const long r = std::llround(h_coarse / h_fine);
    for (int m = 0; m < n_coarse; ++m) {
      const long idx = static_cast<long>(m + 1) * r - 1;
      ref_a[m] = fine.g_lower[static_cast<std::size_t>(idx)];
      ref_b[m] = fine.g_upper[static_cast<std::size_t>(idx)];
    }
  }

  ConvergenceReport rep;
  rep.steps = h_list;
  for (std::size_t k = 0; k < h_list.size(); ++k) {
    const SubDensityPair& sol = solutions[k];
    double max_err = 0.0, sq = 0.0;
    for (int m = 0; m < n_coarse; ++m) {
      const long idx = static_cast<long>(m + 1) * stride[k] - 1;
      const double ea = sol.g_lower[static_cast<std::size_t>(idx)] - ref_a[m];
      const double eb = sol.g_upper[static_cast<std::size_t>(idx)] - ref_b[m];
      max_err = std::max({max_err, std::abs(ea), std::abs(eb)});
      sq += ea * ea + eb * eb;
    }
    rep.max_errors.push_back(max_err);
    rep.mse.push_back(sq / (2.0 * static_cast<double>(n_coarse)));
  }

  // Least-squares slope of log(err) vs log(h), skipping exact zeros (the
  // finest grid compared against itself).
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < h_list.size(); ++k) {
    if (rep.max_errors[k] > 0.0) {
      lx.push_back(std::log(h_list[k]));
      ly.push_back(std::log(rep.max_errors[k]));
    }
  }
  if (lx.size() < 2) {
    rep.empirical_order = std::numeric_limits<double>::quiet_NaN();
  } else {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(lx.size());
    for (std::size_t k = 0; k < lx.size(); ++k) {
      sx += lx[k];
      sy += ly[k];
      sxx += lx[k] * lx[k];
      sxy += lx[k] * ly[k];
    }
    rep.empirical_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }

  return rep;
}

}  // namespace fht
