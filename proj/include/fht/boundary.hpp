#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fht/math.hpp"
#include "fht/process.hpp"

namespace fht {

// Deterministic time-dependent boundary. Three shapes: constant, sinusoidal
// (c + A cos(w t + phi)), and a monotone-cubic interpolant of a sampled
// curve. Tabulated boundaries are only defined on their knot span; eval
// outside it throws std::out_of_range.
class Boundary {
 public:
  enum class Kind { constant, cosine, tabulated };

  Boundary() = default;

  static Boundary constant(double level);
  static Boundary cosine(double center, double amplitude,
                         double angular_frequency, double phase);
  static Boundary tabulated(std::vector<double> t, std::vector<double> value);

  // Loads a two-column CSV "t,value" with a header row.
  static Boundary from_csv(const std::string& path);

  double eval(double t) const;
  double deriv(double t) const;
  double operator()(double t) const { return eval(t); }

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::constant; }
  double constant_level() const;  // throws unless constant

  std::string describe() const;

 private:
  Kind kind_{Kind::constant};
  double level_{0.0};
  double center_{0.0}, amplitude_{0.0}, omega_{0.0}, phase_{0.0};
  PchipInterpolant table_;
};

enum class StripConfiguration { inside, outside_below, outside_above };

// Which of the two strip boundaries an operation refers to.
enum class WhichBoundary { lower, upper };

std::string to_string(StripConfiguration c);

// Process plus a pair of boundaries. "configuration" records where the
// starting point sits relative to the strip at t0; validate_strip checks it.
struct StripProblem {
  Process process;
  Boundary lower;
  Boundary upper;
  StripConfiguration configuration{StripConfiguration::inside};
};

struct StripReport {
  bool valid{true};
  std::optional<double> first_violation;  // earliest probe time that failed
  std::string message;
  double min_gap{0.0};  // min over probes of upper(t) - lower(t)
};

// Probes t in [t0, horizon] with the given step and checks that the strip is
// ordered, inside the state interval of the process, and that x0 sits where
// the configuration says it does at t0.
StripReport validate_strip(const StripProblem& sp, double horizon,
                           double probe_step);

}  // namespace fht
