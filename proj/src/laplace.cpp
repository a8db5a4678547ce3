#include "fht/laplace.hpp"

#include <cmath>
#include <stdexcept>

#include "fht/errors.hpp"
#include "fht/math.hpp"

namespace fht {

std::string to_string(LaplaceRep rep) {
  switch (rep) {
    case LaplaceRep::ito_mckean: return "ito_mckean";
    case LaplaceRep::fortet: return "fortet";
    case LaplaceRep::density_ratio: return "density_ratio";
  }
  return "unknown";
}

namespace {

template <class T>
T fpt_transform(double x0, double level, T lambda) {
  return std::exp(-std::abs(x0 - level) * std::sqrt(2.0 * lambda));
}

// Laplace transform in t of the transition distribution function
// P(X_t <= x | X_0 = y) for standard Brownian motion.
template <class T>
T resolvent_cdf(double x, double y, T lambda) {
  const T q = std::sqrt(2.0 * lambda);
  if (x < y) return std::exp(-(y - x) * q) / (2.0 * lambda);
  return 1.0 / lambda - std::exp(-(x - y) * q) / (2.0 * lambda);
}

// lambda times the Laplace transform in t of P(X_t > x | X_0 = y), i.e.
// 1 - lambda * resolvent_cdf(x, y).  Written branch-wise: the x >= y case
// would otherwise cancel to zero once exp(-(x-y)q)/2 drops below machine
// epsilon, wiping out g_b at large lambda.
template <class T>
T resolvent_sf_scaled(double x, double y, T lambda) {
  const T q = std::sqrt(2.0 * lambda);
  if (x < y) return 1.0 - std::exp(-(y - x) * q) / 2.0;
  return std::exp(-(x - y) * q) / 2.0;
}

// Laplace transform in t of the transition density at x given start y.
template <class T>
T resolvent_pdf(double x, double y, T lambda) {
  const T q = std::sqrt(2.0 * lambda);
  return std::exp(-std::abs(x - y) * q) / q;
}

template <class T>
void check_denominator(T den) {
  if (!(std::abs(den) > 1e-300))
    throw NumericalError("laplace: representation denominator underflows");
}

template <class T>
std::pair<T, T> transforms_impl(LaplaceRep rep, double a, double b, double x0,
                                T lambda, const ProbePoints& pr) {
  switch (rep) {
    case LaplaceRep::ito_mckean: {
      const T fa_x0 = fpt_transform(x0, a, lambda);
      const T fb_x0 = fpt_transform(x0, b, lambda);
      const T fa_b = fpt_transform(b, a, lambda);
      const T fb_a = fpt_transform(a, b, lambda);
      const T den = fa_b * fb_a - 1.0;
      check_denominator(den);
      return {(fb_x0 * fa_b - fa_x0) / den, (fa_x0 * fb_a - fb_x0) / den};
    }
    case LaplaceRep::fortet: {
      // Upper-tail terms 1 - lambda * resolvent_cdf(b | .) pair with the
      // survival function; plain resolvent_cdf(a | .) with the lower tail.
      const T tb_x0 = resolvent_sf_scaled(b, x0, lambda);
      const T tb_a = resolvent_sf_scaled(b, a, lambda);
      const T tb_b = resolvent_sf_scaled(b, b, lambda);
      const T Fa_x0 = resolvent_cdf(a, x0, lambda);
      const T Fa_a = resolvent_cdf(a, a, lambda);
      const T Fa_b = resolvent_cdf(a, b, lambda);
      const T den = tb_a * Fa_b - tb_b * Fa_a;
      check_denominator(den);
      const T ga = (tb_x0 * Fa_b - tb_b * Fa_x0) / den;
      const T gb = (tb_x0 * Fa_a - tb_a * Fa_x0) / (-den);
      return {ga, gb};
    }
    case LaplaceRep::density_ratio: {
      const T f1_a = resolvent_pdf(pr.x1, a, lambda);
      const T f1_b = resolvent_pdf(pr.x1, b, lambda);
      const T f1_x0 = resolvent_pdf(pr.x1, x0, lambda);
      const T f2_a = resolvent_pdf(pr.x2, a, lambda);
      const T f2_b = resolvent_pdf(pr.x2, b, lambda);
      const T f2_x0 = resolvent_pdf(pr.x2, x0, lambda);
      const T den = f1_a * f2_b - f1_b * f2_a;
      check_denominator(den);
      return {(f1_x0 * f2_b - f1_b * f2_x0) / den,
              (f1_a * f2_x0 - f1_x0 * f2_a) / den};
    }
  }
  throw std::logic_error("laplace: unknown representation");
}

ProbePoints default_probes(double a, double b) { return {b + 1.0, a - 1.0}; }

void check_problem(const Process& p, double a, double b,
                   const std::optional<ProbePoints>& probes) {
  if (p.kind != ProcessKind::standard_brownian)
    throw std::invalid_argument(
        "laplace: transforms require standard Brownian motion");
  if (p.t0 != 0.0)
    throw std::invalid_argument("laplace: transforms require t0 = 0");
  if (!(a < p.x0 && p.x0 < b))
    throw std::invalid_argument("laplace: need a < x0 < b");
  if (probes && !(probes->x1 > b && probes->x2 < a))
    throw std::invalid_argument(
        "laplace: probes must satisfy x1 > b and x2 < a");
}

}  // namespace

double bm_fpt_laplace(double x0, double level, double lambda) {
  if (!(lambda > 0.0))
    throw std::domain_error("laplace: need lambda > 0");
  return fpt_transform(x0, level, lambda);
}

Cplx bm_fpt_laplace(double x0, double level, Cplx lambda) {
  return fpt_transform(x0, level, lambda);
}

std::pair<double, double> sub_density_laplace(
    LaplaceRep rep, const Process& p, double a, double b, double lambda,
    std::optional<ProbePoints> probes) {
  check_problem(p, a, b, probes);
  if (!(lambda > 0.0))
    throw std::domain_error("laplace: need lambda > 0");
  return transforms_impl(rep, a, b, p.x0, lambda,
                         probes.value_or(default_probes(a, b)));
}

std::pair<Cplx, Cplx> sub_density_laplace(
    LaplaceRep rep, const Process& p, double a, double b, Cplx lambda,
    std::optional<ProbePoints> probes) {
  check_problem(p, a, b, probes);
  return transforms_impl(rep, a, b, p.x0, lambda,
                         probes.value_or(default_probes(a, b)));
}

LaplaceEvaluator make_sub_density_evaluator(LaplaceRep rep, const Process& p,
                                            double a, double b,
                                            WhichBoundary which,
                                            std::optional<ProbePoints> probes) {
  check_problem(p, a, b, probes);
  const double x0 = p.x0;
  const ProbePoints pr = probes.value_or(default_probes(a, b));
  LaplaceEvaluator ev;
  ev.rep = rep;
  ev.label = std::string(which == WhichBoundary::lower ? "g_lower " : "g_upper ") +
             to_string(rep);
  ev.transform = [rep, a, b, x0, pr, which](Cplx lambda) {
    auto pairv = transforms_impl(rep, a, b, x0, lambda, pr);
    return which == WhichBoundary::lower ? pairv.first : pairv.second;
  };
  return ev;
}

std::vector<double> laplace_invert(const std::function<Cplx(Cplx)>& transform,
                                   std::span<const double> times,
                                   const InversionControl& ctl) {
  if (ctl.terms < 10)
    throw std::invalid_argument("laplace: need at least 10 inversion terms");
  if (ctl.precision_decimals < 1)
    throw std::invalid_argument("laplace: need precision_decimals >= 1");

  const double A = static_cast<double>(ctl.precision_decimals) * std::log(10.0);
  int m = ctl.terms / 4;
  if (m > 12) m = 12;
  if (m < 1) m = 1;
  const int nbase = ctl.terms - m;

  // Binomial averaging weights C(m, j) / 2^m.
  std::vector<double> w(static_cast<std::size_t>(m) + 1);
  w[0] = std::pow(0.5, m);
  for (int j = 1; j <= m; ++j)
    w[static_cast<std::size_t>(j)] =
        w[static_cast<std::size_t>(j - 1)] * static_cast<double>(m - j + 1) /
        static_cast<double>(j);

  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::domain_error("laplace: inversion times must be positive");
    const double half_inv_t = 0.5 / t;

    auto eval_re = [&](int k) {
      const Cplx s(A * half_inv_t, 2.0 * kPi * static_cast<double>(k) * half_inv_t);
      const Cplx v = transform(s);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericalError("laplace: transform returned a non-finite value");
      return v.real();
    };

    double partial = 0.5 * eval_re(0);
    for (int k = 1; k <= nbase; ++k)
      partial += (k % 2 == 0 ? 1.0 : -1.0) * eval_re(k);

    double acc = w[0] * partial;
    for (int j = 1; j <= m; ++j) {
      const int k = nbase + j;
      partial += (k % 2 == 0 ? 1.0 : -1.0) * eval_re(k);
      acc += w[static_cast<std::size_t>(j)] * partial;
    }

    const double value = std::exp(0.5 * A) / t * acc;
    if (!std::isfinite(value))
      throw NumericalError("laplace: inversion produced a non-finite value");
    out.push_back(value);
  }
  return out;
}

}  // namespace fht
