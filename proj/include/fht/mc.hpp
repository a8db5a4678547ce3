#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fht/boundary.hpp"
#include "fht/process.hpp"

namespace fht {

enum class FirstHit : std::uint8_t { lower, upper, none };

std::string to_string(FirstHit f);

// One simulated path. Times are absolute. A hitting time equal to the
// horizon with the censored flag set means the boundary was not reached
// before the horizon.
struct HittingTimeSample {
  double t_lower{};
  double t_upper{};
  std::uint64_t path_index{};
  FirstHit first_hit{FirstHit::none};
  bool censored_lower{true};
  bool censored_upper{true};
};

struct SimConfig {
  std::int64_t n_paths{0};
  double dt{0.0};
  double horizon{0.0};  // absolute end time
  std::uint64_t seed{0};
  int threads{1};
};

// Euler-Maruyama simulation of both hitting times on one path set. Crossings
// are detected at grid times by comparing against the starting side of each
// boundary; each path continues after its first hit until the other boundary
// is hit or the horizon ends it. The generator for path k is seeded from
// (seed, k) alone, so results are identical for any thread count.
// Geometric Brownian motion is simulated exactly in its log coordinate.
std::vector<HittingTimeSample> simulate_pair(const StripProblem& sp,
                                             const SimConfig& cfg);

// Kolmogorov-Smirnov distance between the empirical law of one hitting time
// and an analytic CDF, on [t0, t_max]. Censored paths stay in the
// denominator (the comparison is between sub-CDFs), so t_max must not exceed
// the simulation horizon. Requires at least 10^4 samples.
double compare_marginal(std::span<const HittingTimeSample> samples,
                        WhichBoundary side,
                        const std::function<double(double)>& analytic_cdf,
                        double t_max);

// Histogram estimate of a sub-density: counts paths whose *first* hit is the
// given side, binned by that hitting time. Returned values are densities
// (count / (n_paths * bin_width)) at bins [t0 + k w, t0 + (k+1) w).
std::vector<double> sub_density_histogram(
    std::span<const HittingTimeSample> samples, WhichBoundary side, double t0,
    double bin_width, int n_bins);

}  // namespace fht
