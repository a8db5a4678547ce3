#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fht {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

inline double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

// Survival function computed through erfc directly, not as 1 - cdf.
// normal_sf(z) == normal_cdf(-z) bitwise, which downstream code relies on
// for mirror-symmetric problems.
inline double normal_sf(double z) { return 0.5 * std::erfc(z * kInvSqrt2); }

// Deterministic pairwise summation. The reduction tree depends only on the
// length, so results are reproducible across runs and thread counts.
double pairwise_sum(const double* v, std::size_t n);

inline double pairwise_sum(std::span<const double> v) {
  return pairwise_sum(v.data(), v.size());
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

// Monotone cubic interpolant (Fritsch-Carlson slopes). Used for tabulated
// boundaries and for CDF tables that must stay monotone under interpolation.
class PchipInterpolant {
 public:
  PchipInterpolant() = default;

  // x strictly increasing, sizes equal, at least 2 knots.
  PchipInterpolant(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double deriv(double t) const;

  bool empty() const { return x_.empty(); }
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::size_t locate(double t) const;  // throws std::out_of_range outside span

  std::vector<double> x_, y_, m_;
};

// Bisection on a nondecreasing function. Returns x in [lo, hi] with
// f(x) ~ target. Assumes f(lo) <= target <= f(hi).
double invert_monotone(const std::function<double(double)>& f, double target,
                       double lo, double hi, double xtol = 1e-12);

}  // namespace fht
