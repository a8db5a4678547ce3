#pragma once

namespace fht {

// Controls for the method-of-images series.
struct SeriesControl {
  int max_terms{1000};          // cap on |k|
  double tail_tolerance{1e-16}; // absolute stop threshold on a term pair
};

struct SeriesValue {
  double value{0.0};
  bool clamped{false};  // true when a small negative sum was clamped to 0
};

// Sub-density of hitting the lower (resp. upper) constant boundary first at
// elapsed time t, for standard Brownian motion started at x0 with a < x0 < b.
// Image-charge series; terms are summed in +-k pairs from k = 0 upward and
// the loop stops once a full pair falls below tail_tolerance in magnitude.
// t below 1e-12 returns 0. Throws std::domain_error if the ordering is
// violated or t <= 0.
SeriesValue bm_sub_density_lower(double t, double x0, double a, double b,
                                 const SeriesControl& ctl = {});
SeriesValue bm_sub_density_upper(double t, double x0, double a, double b,
                                 const SeriesControl& ctl = {});

// Single-boundary first-passage density and distribution for standard
// Brownian motion at elapsed time t (level != x0, t > 0).
double bm_fpt_pdf(double t, double x0, double level);
double bm_fpt_cdf(double t, double x0, double level);

}  // namespace fht
