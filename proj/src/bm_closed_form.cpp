#include "fht/bm_closed_form.hpp"

#include <cmath>
#include <stdexcept>

#include "fht/math.hpp"

namespace fht {

namespace {

constexpr double kTinyTime = 1e-12;

void check_strip(double t, double x0, double a, double b) {
  if (!std::isfinite(t) || !std::isfinite(x0) || !std::isfinite(a) ||
      !std::isfinite(b))
    throw std::domain_error("bm series: arguments must be finite");
  if (!(a < x0 && x0 < b))
    throw std::domain_error("bm series: need a < x0 < b");
  if (!(t > 0.0)) throw std::domain_error("bm series: need t > 0");
}

// Sum of c_k/sqrt(2 pi t^3) exp(-c_k^2 / (2 t)) over images, where
// c_k = base + 2 k (b - a). The sign alternation lives in c_k itself.
SeriesValue image_series(double t, double base, double width,
                         const SeriesControl& ctl) {
  if (t < kTinyTime) return {0.0, false};
  const double pref = 1.0 / std::sqrt(2.0 * kPi * t * t * t);
  const double inv2t = 0.5 / t;
  auto term = [&](long k) {
    const double c = base + 2.0 * static_cast<double>(k) * width;
    return pref * c * std::exp(-c * c * inv2t);
  };
  double s = term(0);
  for (long k = 1; k <= ctl.max_terms; ++k) {
    const double tp = term(k);
    const double tm = term(-k);
    s += tp;
    s += tm;
    if (std::abs(tp) < ctl.tail_tolerance && std::abs(tm) < ctl.tail_tolerance)
      break;
  }
  if (s < 0.0) return {0.0, true};
  return {s, false};
}

}  // namespace

SeriesValue bm_sub_density_lower(double t, double x0, double a, double b,
                                 const SeriesControl& ctl) {
  check_strip(t, x0, a, b);
  return image_series(t, x0 - a, b - a, ctl);
}

SeriesValue bm_sub_density_upper(double t, double x0, double a, double b,
                                 const SeriesControl& ctl) {
  check_strip(t, x0, a, b);
  return image_series(t, b - x0, b - a, ctl);
}

double bm_fpt_pdf(double t, double x0, double level) {
  if (!std::isfinite(t) || !std::isfinite(x0) || !std::isfinite(level))
    throw std::domain_error("bm fpt: arguments must be finite");
  if (level == x0) throw std::domain_error("bm fpt: need level != x0");
  if (!(t > 0.0)) throw std::domain_error("bm fpt: need t > 0");
  if (t < kTinyTime) return 0.0;
  const double d = std::abs(level - x0);
  return d / std::sqrt(2.0 * kPi * t * t * t) * std::exp(-d * d / (2.0 * t));
}

double bm_fpt_cdf(double t, double x0, double level) {
  if (!std::isfinite(t) || !std::isfinite(x0) || !std::isfinite(level))
    throw std::domain_error("bm fpt: arguments must be finite");
  if (level == x0) throw std::domain_error("bm fpt: need level != x0");
  if (!(t > 0.0)) throw std::domain_error("bm fpt: need t > 0");
  const double d = std::abs(level - x0);
  return std::erfc(d / std::sqrt(2.0 * t));
}

}  // namespace fht
