#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fht/boundary.hpp"
#include "fht/process.hpp"

namespace fht {

using Cplx = std::complex<double>;

// Three algebraically equivalent representations of the two-boundary
// sub-density transforms for standard Brownian motion between constant
// boundaries (started at t0 = 0):
//   ito_mckean     ratios of single-boundary hitting transforms
//   fortet         built from the resolvent distribution function
//   density_ratio  built from the resolvent density at two probe points
enum class LaplaceRep { ito_mckean, fortet, density_ratio };

std::string to_string(LaplaceRep rep);

// Laplace transform of the one-boundary first-passage density,
// exp(-|x0 - level| sqrt(2 lambda)). Real lambda must be positive.
double bm_fpt_laplace(double x0, double level, double lambda);
Cplx bm_fpt_laplace(double x0, double level, Cplx lambda);

// Probe points for density_ratio: x1 above the strip, x2 below it.
struct ProbePoints {
  double x1{};
  double x2{};
};

// Transforms of (lower-first, upper-first) sub-densities at a single lambda.
// The complex overload is what the inversion contour evaluates.
std::pair<double, double> sub_density_laplace(
    LaplaceRep rep, const Process& p, double a, double b, double lambda,
    std::optional<ProbePoints> probes = std::nullopt);
std::pair<Cplx, Cplx> sub_density_laplace(
    LaplaceRep rep, const Process& p, double a, double b, Cplx lambda,
    std::optional<ProbePoints> probes = std::nullopt);

// A transform bundled with the metadata the CLI reports.
struct LaplaceEvaluator {
  std::function<Cplx(Cplx)> transform;
  LaplaceRep rep{LaplaceRep::ito_mckean};
  std::string label;
};

LaplaceEvaluator make_sub_density_evaluator(
    LaplaceRep rep, const Process& p, double a, double b, WhichBoundary which,
    std::optional<ProbePoints> probes = std::nullopt);

// Euler-summed Fourier-series inversion on a vertical contour. terms is the
// total number of series terms; the last quarter (capped at 12) is binomially
// averaged. precision_decimals sets the contour shift A = decimals * ln 10.
struct InversionControl {
  int terms{50};
  int precision_decimals{10};
};

std::vector<double> laplace_invert(const std::function<Cplx(Cplx)>& transform,
                                   std::span<const double> times,
                                   const InversionControl& ctl = {});

inline std::vector<double> laplace_invert(const LaplaceEvaluator& ev,
                                          std::span<const double> times,
                                          const InversionControl& ctl = {}) {
  return laplace_invert(ev.transform, times, ctl);
}

}  // namespace fht
