#pragma once

#include <limits>
#include <string>

namespace fht {

enum class ProcessKind {
  standard_brownian,
  scaled_brownian,
  geometric_brownian,
  ornstein_uhlenbeck,
};

std::string to_string(ProcessKind kind);

// A time-homogeneous diffusion with known Gaussian (or log-Gaussian)
// transition law, together with its starting point (x0, t0).
//
// ornstein_uhlenbeck solves dX = (-X/theta + mu) dt + sigma dW, so the
// stationary mean is mu*theta and the relaxation time is theta.
struct Process {
  ProcessKind kind{ProcessKind::standard_brownian};
  double sigma{1.0};
  double theta{1.0};
  double mu{0.0};
  double x0{0.0};
  double t0{0.0};

  static Process standard(double x0, double t0 = 0.0);
  static Process scaled(double sigma, double x0, double t0 = 0.0);
  static Process geometric(double sigma, double x0, double t0 = 0.0);
  static Process ou(double theta, double mu, double sigma, double x0,
                    double t0 = 0.0);

  // Throws std::invalid_argument on nonpositive sigma/theta or a starting
  // point outside the state interval.
  void validate() const;

  // Natural state interval (open). Geometric Brownian motion lives on
  // (0, inf); the others on the whole line.
  double interval_lower() const {
    return kind == ProcessKind::geometric_brownian
               ? 0.0
               : -std::numeric_limits<double>::infinity();
  }
  double interval_upper() const {
    return std::numeric_limits<double>::infinity();
  }

  bool contains(double x) const {
    return x > interval_lower() && x < interval_upper();
  }

  // True when a deterministic coordinate change maps the process to standard
  // Brownian motion (identity, linear scaling, or log scaling).
  bool bm_reducible() const { return kind != ProcessKind::ornstein_uhlenbeck; }

  // The coordinate change itself. Only valid when bm_reducible().
  double to_bm_coord(double x) const;
};

// Mean and standard deviation of X_t | X_tau = y in the Gaussian coordinate
// (for geometric Brownian motion this is the law of log(X_t)/sigma).
struct GaussianLaw {
  double mean{};
  double sd{};
};

GaussianLaw transition_law(const Process& p, double y, double dt);

// P(X_t <= x | X_tau = y), its complement, and the transition density.
// Preconditions: t > tau, x and y inside the state interval; violations
// throw std::domain_error. The survival function is evaluated through
// erfc directly so that mirror-symmetric inputs produce bitwise mirrored
// outputs.
double transition_cdf(const Process& p, double x, double t, double y,
                      double tau);
double transition_sf(const Process& p, double x, double t, double y,
                     double tau);
double transition_pdf(const Process& p, double x, double t, double y,
                      double tau);

}  // namespace fht
