#include "fht/joint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "fht/errors.hpp"
#include "fht/math.hpp"

namespace fht {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Piecewise-linear reader over knot values v[k] at t0 + (k+1) h, anchored to
// 0 at t0, returning `beyond` past the last knot.
struct GridFn {
  double t0{};
  double h{};
  std::vector<double> v;
  double beyond{};

  double operator()(double t) const {
    const double p = (t - t0) / h;
    if (p <= 0.0) return 0.0;
    const double n = static_cast<double>(v.size());
    if (p >= n) return beyond;
    const std::size_t k = static_cast<std::size_t>(p);
    const double frac = p - static_cast<double>(k);
    const double v0 = k == 0 ? 0.0 : v[k - 1];
    return v0 + frac * (v[k] - v0);
  }
};

std::vector<double> clipped_cumsum(const std::vector<double>& f, double h) {
  std::vector<double> cum(f.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    acc += h * f[k];
    cum[k] = std::min(std::max(acc, 0.0), 1.0);
  }
  return cum;
}

// Density/CDF of the passage from a point sitting on `src` at absolute time
// r to the boundary `tgt`, evaluated at absolute time u > r.
struct RestartFamily {
  std::function<double(double, double)> pdf;
  std::function<double(double, double)> cdf;
};

RestartFamily make_restart_family(const Process& p, const Boundary& src,
                                  const Boundary& tgt, BoundarySide side,
                                  double h, double span,
                                  const std::vector<double>& src_knots,
                                  bool prefer_closed_form) {
  RestartFamily rf;
  const bool both_const = src.is_constant() && tgt.is_constant();

  if (prefer_closed_form && p.bm_reducible() && both_const) {
    const double sl = p.to_bm_coord(src.constant_level());
    const double tl = p.to_bm_coord(tgt.constant_level());
    rf.pdf = [sl, tl](double r, double u) {
      return u > r ? bm_fpt_pdf(u - r, sl, tl) : 0.0;
    };
    rf.cdf = [sl, tl](double r, double u) {
      return u > r ? bm_fpt_cdf(u - r, sl, tl) : 0.0;
    };
    return rf;
  }

  if (both_const) {
    // Time-homogeneous: one solve from the source level covers every r.
    Process p2 = p;
    p2.x0 = src.constant_level();
    p2.t0 = 0.0;
    p2.validate();
    const TimeGrid g = TimeGrid::over(0.0, span, h);
    std::vector<double> f = solve_single_boundary(p2, tgt, side, g);
    std::vector<double> cum = clipped_cumsum(f, h);
    const double captured = cum.empty() ? 0.0 : cum.back();
    auto fpdf = std::make_shared<GridFn>(GridFn{0.0, h, std::move(f), 0.0});
    auto fcdf = std::make_shared<GridFn>(GridFn{0.0, h, std::move(cum), captured});
    rf.pdf = [fpdf](double r, double u) { return (*fpdf)(u - r); };
    rf.cdf = [fcdf](double r, double u) { return (*fcdf)(u - r); };
    return rf;
  }

  // Time-dependent boundaries: one solve per source knot, nearest-knot lookup
  // in r, linear interpolation in u.
  const double t0 = p.t0;
  auto pdf_rows = std::make_shared<std::vector<GridFn>>();
  auto cdf_rows = std::make_shared<std::vector<GridFn>>();
  pdf_rows->reserve(src_knots.size());
  cdf_rows->reserve(src_knots.size());
  const double t_end = src_knots.empty() ? t0 : src_knots.back();
  for (double r : src_knots) {
    const double row_span = t_end - r;
    if (row_span < h * 0.5) {
      pdf_rows->push_back(GridFn{r, h, {}, 0.0});
      cdf_rows->push_back(GridFn{r, h, {}, 0.0});
      continue;
    }
    Process p2 = p;
    p2.x0 = src.eval(r);
    p2.t0 = r;
    p2.validate();
    const TimeGrid g = TimeGrid::over(r, r + row_span, h);
    std::vector<double> f = solve_single_boundary(p2, tgt, side, g);
    std::vector<double> cum = clipped_cumsum(f, h);
    const double captured = cum.empty() ? 0.0 : cum.back();
    pdf_rows->push_back(GridFn{r, h, std::move(f), 0.0});
    cdf_rows->push_back(GridFn{r, h, std::move(cum), captured});
  }
  const double hh = h;
  auto row_index = [t0, hh](const std::vector<GridFn>& rows, double r) {
    long j = std::lround((r - t0) / hh) - 1;
    if (j < 0) j = 0;
    if (j >= static_cast<long>(rows.size()))
      j = static_cast<long>(rows.size()) - 1;
    return static_cast<std::size_t>(j);
  };
  rf.pdf = [pdf_rows, row_index](double r, double u) {
    return (*pdf_rows)[row_index(*pdf_rows, r)](u);
  };
  rf.cdf = [cdf_rows, row_index](double r, double u) {
    return (*cdf_rows)[row_index(*cdf_rows, r)](u);
  };
  return rf;
}

}  // namespace

std::optional<double> Marginal::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) return std::nullopt;
  if (closed_form) {
    double hi = t0 + 1.0;
    int guard = 0;
    while (cdf(hi) < u) {
      hi = t0 + (hi - t0) * 2.0;
      if (++guard > 200) return std::nullopt;
    }
    return invert_monotone(cdf, u, t0, hi);
  }
  if (!(u <= captured - 1e-12)) return std::nullopt;
  return invert_monotone(cdf, u, t0, horizon);
}

Marginal make_marginal(const Process& p, const Boundary& bd, BoundarySide side,
                       double horizon, double h, MarginalRoute route) {
  p.validate();
  const bool closed_ok = p.bm_reducible() && bd.is_constant();
  if (route == MarginalRoute::closed_form && !closed_ok)
    throw std::invalid_argument(
        "marginal: closed form needs a Brownian-reducible process and a "
        "constant boundary");
  const bool use_closed = route != MarginalRoute::solver && closed_ok;

  Marginal m;
  m.t0 = p.t0;

  if (use_closed) {
    const double c = p.to_bm_coord(bd.constant_level());
    const double x0 = p.to_bm_coord(p.x0);
    if (c == x0)
      throw std::invalid_argument("marginal: boundary equals starting point");
    const double t0 = p.t0;
    m.closed_form = true;
    m.horizon = kInf;
    m.captured = 1.0;
    m.pdf = [t0, x0, c](double t) {
      return t > t0 ? bm_fpt_pdf(t - t0, x0, c) : 0.0;
    };
    m.cdf = [t0, x0, c](double t) {
      return t > t0 ? bm_fpt_cdf(t - t0, x0, c) : 0.0;
    };
    return m;
  }

  const TimeGrid grid = TimeGrid::over(p.t0, horizon, h);
  std::vector<double> f = solve_single_boundary(p, bd, side, grid);
  std::vector<double> cum = clipped_cumsum(f, h);

  std::vector<double> knots(f.size() + 1), fv(f.size() + 1), cv(f.size() + 1);
  knots[0] = p.t0;
  fv[0] = 0.0;
  cv[0] = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    knots[k + 1] = grid.knot(static_cast<int>(k));
    fv[k + 1] = f[k];
    cv[k + 1] = cum[k];
  }
  auto pdf_tab = std::make_shared<PchipInterpolant>(knots, fv);
  auto cdf_tab = std::make_shared<PchipInterpolant>(knots, cv);

  m.closed_form = false;
  m.horizon = grid.horizon();
  m.captured = cum.back();
  const double t0 = p.t0, hz = m.horizon;
  m.pdf = [pdf_tab, t0, hz](double t) {
    if (t <= t0 || t > hz) return 0.0;
    return std::max(0.0, (*pdf_tab)(t));
  };
  const double cap = m.captured;
  m.cdf = [cdf_tab, t0, hz, cap](double t) {
    if (t <= t0) return 0.0;
    if (t >= hz) return cap;
    return std::clamp((*cdf_tab)(t), 0.0, 1.0);
  };
  return m;
}

std::vector<double> marginal_cdf(const Process& p, const Boundary& bd,
                                 BoundarySide side, const TimeGrid& grid,
                                 MarginalRoute route) {
  grid.validate();
  p.validate();
  const bool closed_ok = p.bm_reducible() && bd.is_constant();
  if (route == MarginalRoute::closed_form && !closed_ok)
    throw std::invalid_argument(
        "marginal: closed form needs a Brownian-reducible process and a "
        "constant boundary");
  if (route != MarginalRoute::solver && closed_ok) {
    const double c = p.to_bm_coord(bd.constant_level());
    const double x0 = p.to_bm_coord(p.x0);
    std::vector<double> out(static_cast<std::size_t>(grid.n));
    for (int k = 0; k < grid.n; ++k)
      out[static_cast<std::size_t>(k)] =
          bm_fpt_cdf(grid.knot(k) - p.t0, x0, c);
    return out;
  }
  return clipped_cumsum(solve_single_boundary(p, bd, side, grid), grid.h);
}

double JointDensitySurface::grid_mass() const {
  return grid.h * grid.h * pairwise_sum(values);
}

double JointDensitySurface::completed_mass() const {
  const int n = grid.n;
  std::vector<double> tw(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    tw[static_cast<std::size_t>(k)] = tail_weight_t(grid.knot(k));
  double mass = grid_mass() + grid.h * pairwise_sum(tw);
  for (int k = 0; k < n; ++k)
    tw[static_cast<std::size_t>(k)] = tail_weight_s(grid.knot(k));
  mass += grid.h * pairwise_sum(tw);
  return mass + off_grid_mass;
}

std::vector<double> JointDensitySurface::marginal_lower() const {
  const int n = grid.n;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int it = 0; it < n; ++it) {
    const double* row = values.data() + static_cast<std::size_t>(it) * n;
    out[static_cast<std::size_t>(it)] =
        grid.h * pairwise_sum(row, static_cast<std::size_t>(n)) +
        tail_weight_t(grid.knot(it));
  }
  return out;
}

std::vector<double> JointDensitySurface::marginal_upper() const {
  const int n = grid.n;
  std::vector<double> col(static_cast<std::size_t>(n));
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int is = 0; is < n; ++is) {
    for (int it = 0; it < n; ++it)
      col[static_cast<std::size_t>(it)] =
          values[static_cast<std::size_t>(it) * n + is];
    out[static_cast<std::size_t>(is)] =
        grid.h * pairwise_sum(col) + tail_weight_s(grid.knot(is));
  }
  return out;
}

namespace {

void validate_surface_problem(const StripProblem& sp, const TimeGrid& grid) {
  grid.validate();
  const StripReport rep = validate_strip(sp, grid.horizon(), grid.h);
  if (!rep.valid) throw StripError("assemble: invalid strip: " + rep.message);
}

}  // namespace

JointDensitySurface assemble_case_i(const StripProblem& sp, const TimeGrid& grid,
                                    const AssembleOptions& opt) {
  if (sp.configuration == StripConfiguration::inside)
    throw std::invalid_argument(
        "assemble: case i needs a starting point outside the strip");
  validate_surface_problem(sp, grid);

  const Process& p = sp.process;
  const bool below = sp.configuration == StripConfiguration::outside_below;
  const Boundary& near_bd = below ? sp.lower : sp.upper;
  const Boundary& far_bd = below ? sp.upper : sp.lower;
  // Starting outside, the near boundary sits above the start iff the start
  // is below the strip; the far boundary continues in the same direction.
  const BoundarySide side = below ? BoundarySide::above_start
                                  : BoundarySide::below_start;

  const MarginalRoute route =
      opt.prefer_closed_form ? MarginalRoute::automatic : MarginalRoute::solver;
  const Marginal first =
      make_marginal(p, near_bd, side, grid.horizon(), grid.h, route);

  std::vector<double> knots(static_cast<std::size_t>(grid.n));
  for (int k = 0; k < grid.n; ++k)
    knots[static_cast<std::size_t>(k)] = grid.knot(k);
  const RestartFamily rf =
      make_restart_family(p, near_bd, far_bd, side, grid.h,
                          grid.horizon() - p.t0, knots, opt.prefer_closed_form);

  JointDensitySurface surf;
  surf.grid = grid;
  surf.case_tag = JointCase::case_i;
  const int n = grid.n;
  surf.values.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int it = 0; it < n; ++it) {
    const double t = grid.knot(it);
    for (int is = 0; is < n; ++is) {
      const double s = grid.knot(is);
      double v = 0.0;
      if (below && t < s)
        v = first.pdf(t) * rf.pdf(t, s);
      else if (!below && s < t)
        v = first.pdf(s) * rf.pdf(s, t);
      surf.values[static_cast<std::size_t>(it) * n + is] = v;
    }
  }

  auto first_pdf = first.pdf;
  auto rf_pdf = rf.pdf;
  auto rf_cdf = rf.cdf;
  surf.density = [below, first_pdf, rf_pdf](double t, double s) {
    if (below) return t < s ? first_pdf(t) * rf_pdf(t, s) : 0.0;
    return s < t ? first_pdf(s) * rf_pdf(s, t) : 0.0;
  };
  const double end = grid.horizon();
  if (below) {
    surf.tail_weight_t = [first_pdf, rf_cdf, end](double t) {
      return first_pdf(t) * (1.0 - rf_cdf(t, end));
    };
    surf.tail_weight_s = [](double) { return 0.0; };
  } else {
    surf.tail_weight_t = [](double) { return 0.0; };
    surf.tail_weight_s = [first_pdf, rf_cdf, end](double s) {
      return first_pdf(s) * (1.0 - rf_cdf(s, end));
    };
  }
  surf.off_grid_mass = 1.0 - first.cdf(end);
  return surf;
}

JointDensitySurface assemble_case_ii(const StripProblem& sp,
                                     const SubDensityPair& sub,
                                     const TimeGrid& grid,
                                     const AssembleOptions& opt) {
  if (sp.configuration != StripConfiguration::inside)
    throw std::invalid_argument(
        "assemble: case ii needs a starting point inside the strip");
  validate_surface_problem(sp, grid);

  const Process& p = sp.process;
  const bool closed = opt.prefer_closed_form && p.bm_reducible() &&
                      sp.lower.is_constant() && sp.upper.is_constant();

  JointDensitySurface surf;
  surf.grid = grid;
  surf.case_tag = JointCase::case_ii;

  std::function<double(double)> gA, gB;
  if (closed) {
    const double A = p.to_bm_coord(sp.lower.constant_level());
    const double B = p.to_bm_coord(sp.upper.constant_level());
    const double X = p.to_bm_coord(p.x0);
    const double t0 = p.t0;
    const SeriesControl series = opt.series;
    gA = [t0, X, A, B, series](double t) {
      return t > t0 ? bm_sub_density_lower(t - t0, X, A, B, series).value : 0.0;
    };
    gB = [t0, X, A, B, series](double t) {
      return t > t0 ? bm_sub_density_upper(t - t0, X, A, B, series).value : 0.0;
    };
  } else {
    if (sub.g_lower.empty())
      throw std::invalid_argument(
          "assemble: solver components requested but the sub-density input "
          "is empty");
    if (std::abs(sub.grid.t0 - p.t0) > 1e-12)
      throw std::invalid_argument("assemble: sub-density grid starts at a "
                                  "different t0 than the process");
    if (sub.grid.horizon() + 1e-9 < grid.horizon())
      throw std::invalid_argument(
          "assemble: sub-density grid does not cover the surface horizon");
    surf.components = sub;
    auto ga_fn = std::make_shared<GridFn>(
        GridFn{sub.grid.t0, sub.grid.h, sub.g_lower, 0.0});
    auto gb_fn = std::make_shared<GridFn>(
        GridFn{sub.grid.t0, sub.grid.h, sub.g_upper, 0.0});
    gA = [ga_fn](double t) { return (*ga_fn)(t); };
    gB = [gb_fn](double t) { return (*gb_fn)(t); };
  }

  std::vector<double> knots(static_cast<std::size_t>(grid.n));
  for (int k = 0; k < grid.n; ++k)
    knots[static_cast<std::size_t>(k)] = grid.knot(k);
  const double span = grid.horizon() - p.t0;
  const RestartFamily rf_low =
      make_restart_family(p, sp.lower, sp.upper, BoundarySide::above_start,
                          grid.h, span, knots, opt.prefer_closed_form);
  const RestartFamily rf_up =
      make_restart_family(p, sp.upper, sp.lower, BoundarySide::below_start,
                          grid.h, span, knots, opt.prefer_closed_form);

  const int n = grid.n;
  surf.values.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int it = 0; it < n; ++it) {
    const double t = grid.knot(it);
    const double gat = gA(t);
    for (int is = 0; is < n; ++is) {
      const double s = grid.knot(is);
      double v = 0.0;
      if (it < is)
        v = gat * rf_low.pdf(t, s);
      else if (it > is)
        v = gB(s) * rf_up.pdf(s, t);
      surf.values[static_cast<std::size_t>(it) * n + is] = v;
    }
  }

  auto rfl_pdf = rf_low.pdf;
  auto rfu_pdf = rf_up.pdf;
  surf.density = [gA, gB, rfl_pdf, rfu_pdf](double t, double s) {
    if (t == s) return 0.0;
    if (t < s) return gA(t) * rfl_pdf(t, s);
    return gB(s) * rfu_pdf(s, t);
  };
  const double end = grid.horizon();
  auto rfl_cdf = rf_low.cdf;
  auto rfu_cdf = rf_up.cdf;
  surf.tail_weight_t = [gA, rfl_cdf, end](double t) {
    return gA(t) * (1.0 - rfl_cdf(t, end));
  };
  surf.tail_weight_s = [gB, rfu_cdf, end](double s) {
    return gB(s) * (1.0 - rfu_cdf(s, end));
  };
  // Mass with both hits beyond the horizon equals the probability that the
  // first exit itself lands there: the tail strips only cover one late
  // coordinate each.
  std::vector<double> first_exit(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    first_exit[static_cast<std::size_t>(k)] = gA(knots[static_cast<std::size_t>(k)]) +
                                              gB(knots[static_cast<std::size_t>(k)]);
  surf.off_grid_mass =
      std::max(0.0, 1.0 - grid.h * pairwise_sum(first_exit));
  return surf;
}

CopulaSurface copula_density(const JointDensitySurface& surf,
                             const Marginal& lower_marginal,
                             const Marginal& upper_marginal, int m) {
  if (m < 1) throw std::invalid_argument("copula: need m >= 1");
  CopulaSurface cop;
  cop.m = m;
  cop.u.resize(static_cast<std::size_t>(m));
  cop.q_lower.resize(static_cast<std::size_t>(m));
  cop.q_upper.resize(static_cast<std::size_t>(m));
  std::vector<bool> ok_lower(static_cast<std::size_t>(m)),
      ok_upper(static_cast<std::size_t>(m));

  for (int i = 0; i < m; ++i) {
    const double u =
        static_cast<double>(i + 1) / static_cast<double>(m + 1);
    cop.u[static_cast<std::size_t>(i)] = u;
    const auto ql = lower_marginal.quantile(u);
    const auto qu = upper_marginal.quantile(u);
    ok_lower[static_cast<std::size_t>(i)] = ql.has_value();
    ok_upper[static_cast<std::size_t>(i)] = qu.has_value();
    cop.q_lower[static_cast<std::size_t>(i)] =
        ql.value_or(std::numeric_limits<double>::quiet_NaN());
    cop.q_upper[static_cast<std::size_t>(i)] =
        qu.value_or(std::numeric_limits<double>::quiet_NaN());
  }

  cop.values.assign(static_cast<std::size_t>(m) * m, 0.0);
  cop.covered.assign(static_cast<std::size_t>(m) * m, 0);
  for (int i = 0; i < m; ++i) {
    if (!ok_lower[static_cast<std::size_t>(i)]) continue;
    const double t = cop.q_lower[static_cast<std::size_t>(i)];
    const double ft = lower_marginal.pdf(t);
    for (int j = 0; j < m; ++j) {
      if (!ok_upper[static_cast<std::size_t>(j)]) continue;
      const double s = cop.q_upper[static_cast<std::size_t>(j)];
      const double fs = upper_marginal.pdf(s);
      const double den = ft * fs;
      if (!(den > 0.0) || !std::isfinite(den)) continue;
      const std::size_t idx =
          static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
          static_cast<std::size_t>(j);
      cop.values[idx] = surf.density(t, s) / den;
      cop.covered[idx] = 1;
    }
  }
  return cop;
}

}  // namespace fht
