#include "fht/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "fht/errors.hpp"
#include "fht/rng.hpp"

namespace fht {

std::string to_string(FirstHit f) {
  switch (f) {
    case FirstHit::lower: return "lower";
    case FirstHit::upper: return "upper";
    case FirstHit::none: return "none";
  }
  return "unknown";
}

namespace {

struct PathSetup {
  // Euler state recursion x <- a1 * x + a0 + s * z (exact for the Gaussian
  // kinds, first-order for Ornstein-Uhlenbeck).
  double a1{1.0};
  double a0{0.0};
  double s{0.0};
  // Boundary evaluation happens in the simulation coordinate (log coordinate
  // for geometric Brownian motion).
  bool log_coord{false};
};

PathSetup make_setup(const Process& p, double dt) {
  PathSetup st;
  switch (p.kind) {
    case ProcessKind::standard_brownian:
      st.s = std::sqrt(dt);
      break;
    case ProcessKind::scaled_brownian:
      st.s = p.sigma * std::sqrt(dt);
      break;
    case ProcessKind::geometric_brownian:
      // Simulated exactly: log(x) is Brownian motion with volatility sigma.
      st.s = p.sigma * std::sqrt(dt);
      st.log_coord = true;
      break;
    case ProcessKind::ornstein_uhlenbeck:
      st.a1 = 1.0 - dt / p.theta;
      st.a0 = p.mu * dt;
      st.s = p.sigma * std::sqrt(dt);
      break;
  }
  return st;
}

}  // namespace

std::vector<HittingTimeSample> simulate_pair(const StripProblem& sp,
                                             const SimConfig& cfg) {
  if (cfg.n_paths < 1)
    throw std::invalid_argument("simulate: need at least one path");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("simulate: need dt > 0");
  const Process& p = sp.process;
  if (!(cfg.horizon > p.t0))
    throw std::invalid_argument("simulate: horizon must exceed t0");

  const StripReport rep = validate_strip(sp, cfg.horizon, cfg.dt * 16.0);
  if (!rep.valid) throw StripError("simulate: invalid strip: " + rep.message);

  const PathSetup st = make_setup(p, cfg.dt);
  const bool const_bounds = sp.lower.is_constant() && sp.upper.is_constant();
  double lo_level = 0.0, up_level = 0.0;
  if (const_bounds) {
    lo_level = sp.lower.constant_level();
    up_level = sp.upper.constant_level();
    if (st.log_coord) {
      if (!(lo_level > 0.0))
        throw StripError("simulate: boundary outside the state interval");
      lo_level = std::log(lo_level);
      up_level = std::log(up_level);
    }
  }

  const double t0 = p.t0;
  const double x_start = st.log_coord ? std::log(p.x0) : p.x0;
  const std::int64_t max_steps =
      static_cast<std::int64_t>(std::ceil((cfg.horizon - t0) / cfg.dt));

  // Starting side of each boundary at t0, fixed by the configuration.
  const double a0v = st.log_coord && const_bounds
                         ? lo_level
                         : (st.log_coord ? std::log(sp.lower.eval(t0))
                                         : sp.lower.eval(t0));
  const double b0v = st.log_coord && const_bounds
                         ? up_level
                         : (st.log_coord ? std::log(sp.upper.eval(t0))
                                         : sp.upper.eval(t0));
  const bool start_above_lower = x_start > a0v;
  const bool start_below_upper = x_start < b0v;

  std::vector<HittingTimeSample> out(static_cast<std::size_t>(cfg.n_paths));

  auto run_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t k = begin; k < end; ++k) {
      Xoshiro256pp rng(cfg.seed, static_cast<std::uint64_t>(k));
      double x = x_start;
      double t_lo = cfg.horizon, t_up = cfg.horizon;
      bool hit_lo = false, hit_up = false;
      FirstHit first = FirstHit::none;

      if (const_bounds) {
        const double a1 = st.a1, a0c = st.a0, s = st.s;
        for (std::int64_t step = 1; step <= max_steps; ++step) {
          x = a1 * x + a0c + s * rng.normal();
          if (!hit_lo && (start_above_lower ? x <= lo_level : x >= lo_level)) {
            hit_lo = true;
            t_lo = t0 + static_cast<double>(step) * cfg.dt;
            if (first == FirstHit::none) first = FirstHit::lower;
            if (hit_up) break;
          }
          if (!hit_up && (start_below_upper ? x >= up_level : x <= up_level)) {
            hit_up = true;
            t_up = t0 + static_cast<double>(step) * cfg.dt;
            if (first == FirstHit::none) first = FirstHit::upper;
            if (hit_lo) break;
          }
        }
      } else {
        for (std::int64_t step = 1; step <= max_steps; ++step) {
          x = st.a1 * x + st.a0 + st.s * rng.normal();
          const double t = t0 + static_cast<double>(step) * cfg.dt;
          double av = sp.lower.eval(t);
          double bv = sp.upper.eval(t);
          if (st.log_coord) {
            av = std::log(av);
            bv = std::log(bv);
          }
          if (!hit_lo && (start_above_lower ? x <= av : x >= av)) {
            hit_lo = true;
            t_lo = t;
            if (first == FirstHit::none) first = FirstHit::lower;
            if (hit_up) break;
          }
          if (!hit_up && (start_below_upper ? x >= bv : x <= bv)) {
            hit_up = true;
            t_up = t;
            if (first == FirstHit::none) first = FirstHit::upper;
            if (hit_lo) break;
          }
        }
      }

      HittingTimeSample& smp = out[static_cast<std::size_t>(k)];
      smp.t_lower = t_lo;
      smp.t_upper = t_up;
      smp.path_index = static_cast<std::uint64_t>(k);
      smp.first_hit = first;
      smp.censored_lower = !hit_lo;
      smp.censored_upper = !hit_up;
    }
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1 || cfg.n_paths < 2 * threads) {
    run_range(0, cfg.n_paths);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const std::int64_t chunk = (cfg.n_paths + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const std::int64_t b = static_cast<std::int64_t>(w) * chunk;
      const std::int64_t e = std::min<std::int64_t>(b + chunk, cfg.n_paths);
      if (b >= e) break;
      pool.emplace_back(run_range, b, e);
    }
    for (auto& th : pool) th.join();
  }

  return out;
}

double compare_marginal(std::span<const HittingTimeSample> samples,
                        WhichBoundary side,
                        const std::function<double(double)>& analytic_cdf,
                        double t_max) {
  if (samples.size() < 10000)
    throw std::invalid_argument("compare_marginal: need at least 1e4 samples");

  std::vector<double> hits;
  hits.reserve(samples.size());
  for (const auto& s : samples) {
    const bool censored =
        side == WhichBoundary::lower ? s.censored_lower : s.censored_upper;
    if (censored) continue;
    const double t = side == WhichBoundary::lower ? s.t_lower : s.t_upper;
    if (t <= t_max) hits.push_back(t);
  }
  std::sort(hits.begin(), hits.end());

  // Sub-CDF comparison: censored paths and hits beyond t_max stay in the
  // denominator only.
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    const double fa = analytic_cdf(hits[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::abs(fa - lo), std::abs(fa - hi)});
  }
  d = std::max(d, std::abs(analytic_cdf(t_max) -
                           static_cast<double>(hits.size()) / n));
  return d;
}

std::vector<double> sub_density_histogram(
    std::span<const HittingTimeSample> samples, WhichBoundary side, double t0,
    double bin_width, int n_bins) {
  if (!(bin_width > 0.0) || n_bins < 1)
    throw std::invalid_argument("histogram: need positive bins");
  std::vector<double> dens(static_cast<std::size_t>(n_bins), 0.0);
  const FirstHit want =
      side == WhichBoundary::lower ? FirstHit::lower : FirstHit::upper;
  for (const auto& s : samples) {
    if (s.first_hit != want) continue;
    const double t = side == WhichBoundary::lower ? s.t_lower : s.t_upper;
    const double pos = (t - t0) / bin_width;
    if (pos < 0.0) continue;
    const auto b = static_cast<long>(pos);
    if (b >= 0 && b < n_bins) dens[static_cast<std::size_t>(b)] += 1.0;
  }
  const double scale =
      1.0 / (static_cast<double>(samples.size()) * bin_width);
  for (auto& v : dens) v *= scale;
  return dens;
}

}  // namespace fht
