#include "fht/process.hpp"

#include <cmath>
#include <stdexcept>

#include "fht/math.hpp"

namespace fht {

std::string to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::standard_brownian: return "standard_brownian";
    case ProcessKind::scaled_brownian: return "scaled_brownian";
    case ProcessKind::geometric_brownian: return "geometric_brownian";
    case ProcessKind::ornstein_uhlenbeck: return "ornstein_uhlenbeck";
  }
  return "unknown";
}

Process Process::standard(double x0, double t0) {
  Process p;
  p.kind = ProcessKind::standard_brownian;
  p.x0 = x0;
  p.t0 = t0;
  p.validate();
  return p;
}

Process Process::scaled(double sigma, double x0, double t0) {
  Process p;
  p.kind = ProcessKind::scaled_brownian;
  p.sigma = sigma;
  p.x0 = x0;
  p.t0 = t0;
  p.validate();
  return p;
}

Process Process::geometric(double sigma, double x0, double t0) {
  Process p;
  p.kind = ProcessKind::geometric_brownian;
  p.sigma = sigma;
  p.x0 = x0;
  p.t0 = t0;
  p.validate();
  return p;
}

Process Process::ou(double theta, double mu, double sigma, double x0,
                    double t0) {
  Process p;
  p.kind = ProcessKind::ornstein_uhlenbeck;
  p.theta = theta;
  p.mu = mu;
  p.sigma = sigma;
  p.x0 = x0;
  p.t0 = t0;
  p.validate();
  return p;
}

void Process::validate() const {
  if (!std::isfinite(x0) || !std::isfinite(t0))
    throw std::invalid_argument("process: x0 and t0 must be finite");
  switch (kind) {
    case ProcessKind::standard_brownian:
      break;
    case ProcessKind::scaled_brownian:
    case ProcessKind::geometric_brownian:
      if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("process: sigma must be positive");
      break;
    case ProcessKind::ornstein_uhlenbeck:
      if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("process: sigma must be positive");
      if (!(theta > 0.0) || !std::isfinite(theta))
        throw std::invalid_argument("process: theta must be positive");
      if (!std::isfinite(mu))
        throw std::invalid_argument("process: mu must be finite");
      break;
  }
  if (!contains(x0))
    throw std::invalid_argument("process: x0 outside the state interval");
}

double Process::to_bm_coord(double x) const {
  switch (kind) {
    case ProcessKind::standard_brownian:
      return x;
    case ProcessKind::scaled_brownian:
      return x / sigma;
    case ProcessKind::geometric_brownian:
      if (!(x > 0.0))
        throw std::domain_error("process: log coordinate needs x > 0");
      return std::log(x) / sigma;
    case ProcessKind::ornstein_uhlenbeck:
      throw std::domain_error(
          "process: ornstein_uhlenbeck has no Brownian coordinate change");
  }
  return x;
}

GaussianLaw transition_law(const Process& p, double y, double dt) {
  if (!(dt > 0.0)) throw std::domain_error("transition law: need dt > 0");
  switch (p.kind) {
    case ProcessKind::standard_brownian:
      return {y, std::sqrt(dt)};
    case ProcessKind::scaled_brownian:
      return {y, p.sigma * std::sqrt(dt)};
    case ProcessKind::geometric_brownian:
      // Law of log(X)/sigma, which is standard Brownian motion.
      return {std::log(y) / p.sigma, std::sqrt(dt)};
    case ProcessKind::ornstein_uhlenbeck: {
      const double e1 = std::exp(-dt / p.theta);
      const double mean = y * e1 + p.mu * p.theta * (-std::expm1(-dt / p.theta));
      const double var = 0.5 * p.sigma * p.sigma * p.theta *
                         (-std::expm1(-2.0 * dt / p.theta));
      return {mean, std::sqrt(var)};
    }
  }
  return {y, std::sqrt(dt)};
}

namespace {

void check_transition_args(const Process& p, double x, double t, double y,
                           double tau) {
  if (!std::isfinite(x) || !std::isfinite(t) || !std::isfinite(y) ||
      !std::isfinite(tau))
    throw std::domain_error("transition: arguments must be finite");
  if (!(t > tau)) throw std::domain_error("transition: need t > tau");
  if (!p.contains(x) || !p.contains(y))
    throw std::domain_error("transition: state outside the interval");
}

// z-score of x under the conditional law given y, in the Gaussian coordinate.
double zscore(const Process& p, double x, double y, double dt) {
  const GaussianLaw law = transition_law(p, y, dt);
  const double xg = p.kind == ProcessKind::geometric_brownian
                        ? std::log(x) / p.sigma
                        : x;
  return (xg - law.mean) / law.sd;
}

}  // namespace

double transition_cdf(const Process& p, double x, double t, double y,
                      double tau) {
  check_transition_args(p, x, t, y, tau);
  return normal_cdf(zscore(p, x, y, t - tau));
}

double transition_sf(const Process& p, double x, double t, double y,
                     double tau) {
  check_transition_args(p, x, t, y, tau);
  return normal_sf(zscore(p, x, y, t - tau));
}

double transition_pdf(const Process& p, double x, double t, double y,
                      double tau) {
  check_transition_args(p, x, t, y, tau);
  const GaussianLaw law = transition_law(p, y, t - tau);
  const double xg = p.kind == ProcessKind::geometric_brownian
                        ? std::log(x) / p.sigma
                        : x;
  const double z = (xg - law.mean) / law.sd;
  double dens = normal_pdf(z) / law.sd;
  if (p.kind == ProcessKind::geometric_brownian) dens /= x * p.sigma;
  return dens;
}

}  // namespace fht
