#include "fht/boundary.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fht/errors.hpp"

namespace fht {

Boundary Boundary::constant(double level) {
  if (!std::isfinite(level))
    throw std::invalid_argument("boundary: level must be finite");
  Boundary b;
  b.kind_ = Kind::constant;
  b.level_ = level;
  return b;
}

Boundary Boundary::cosine(double center, double amplitude,
                          double angular_frequency, double phase) {
  if (!std::isfinite(center) || !std::isfinite(amplitude) ||
      !std::isfinite(angular_frequency) || !std::isfinite(phase))
    throw std::invalid_argument("boundary: cosine parameters must be finite");
  Boundary b;
  b.kind_ = Kind::cosine;
  b.center_ = center;
  b.amplitude_ = amplitude;
  b.omega_ = angular_frequency;
  b.phase_ = phase;
  return b;
}

Boundary Boundary::tabulated(std::vector<double> t, std::vector<double> value) {
  Boundary b;
  b.kind_ = Kind::tabulated;
  b.table_ = PchipInterpolant(std::move(t), std::move(value));
  return b;
}

Boundary Boundary::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("boundary csv: cannot open " + path);
  std::string line;
  std::vector<double> t, v;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (first) {
      first = false;  // header row
      continue;
    }
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b))
      throw ConfigError("boundary csv: bad row at line " +
                        std::to_string(lineno) + " in " + path);
    try {
      t.push_back(std::stod(a));
      v.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw ConfigError("boundary csv: non-numeric field at line " +
                        std::to_string(lineno) + " in " + path);
    }
  }
  if (t.size() < 2)
    throw ConfigError("boundary csv: need at least 2 rows in " + path);
  try {
    return tabulated(std::move(t), std::move(v));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("boundary csv: ") + e.what() + " in " + path);
  }
}

double Boundary::eval(double t) const {
  switch (kind_) {
    case Kind::constant: return level_;
    case Kind::cosine: return center_ + amplitude_ * std::cos(omega_ * t + phase_);
    case Kind::tabulated: return table_(t);
  }
  return level_;
}

double Boundary::deriv(double t) const {
  switch (kind_) {
    case Kind::constant: return 0.0;
    case Kind::cosine: return -amplitude_ * omega_ * std::sin(omega_ * t + phase_);
    case Kind::tabulated: return table_.deriv(t);
  }
  return 0.0;
}

double Boundary::constant_level() const {
  if (kind_ != Kind::constant)
    throw std::logic_error("boundary: not a constant boundary");
  return level_;
}

std::string Boundary::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant:
      os << "constant(" << level_ << ")";
      break;
    case Kind::cosine:
      os << "cosine(center=" << center_ << ", amplitude=" << amplitude_
         << ", omega=" << omega_ << ", phase=" << phase_ << ")";
      break;
    case Kind::tabulated:
      os << "tabulated[" << table_.x_front() << ", " << table_.x_back() << "]";
      break;
  }
  return os.str();
}

std::string to_string(StripConfiguration c) {
  switch (c) {
    case StripConfiguration::inside: return "inside";
    case StripConfiguration::outside_below: return "outside_below";
    case StripConfiguration::outside_above: return "outside_above";
  }
  return "unknown";
}

StripReport validate_strip(const StripProblem& sp, double horizon,
                           double probe_step) {
  if (!(probe_step > 0.0))
    throw std::invalid_argument("validate_strip: probe_step must be positive");
  const double t0 = sp.process.t0;
  if (!(horizon > t0))
    throw std::invalid_argument("validate_strip: horizon must exceed t0");

  StripReport rep;
  rep.min_gap = std::numeric_limits<double>::infinity();

  auto fail = [&](double t, const std::string& msg) {
    rep.valid = false;
    rep.first_violation = t;
    rep.message = msg;
  };

  try {
    sp.process.validate();
  } catch (const std::exception& e) {
    rep.valid = false;
    rep.message = e.what();
    return rep;
  }

  const long n_probe =
      static_cast<long>(std::ceil((horizon - t0) / probe_step)) + 1;
  for (long i = 0; i < n_probe && rep.valid; ++i) {
    const double t = std::min(t0 + static_cast<double>(i) * probe_step, horizon);
    double a, b;
    try {
      a = sp.lower.eval(t);
      b = sp.upper.eval(t);
    } catch (const std::out_of_range&) {
      fail(t, "tabulated boundary does not cover the requested horizon");
      break;
    }
    if (!(a < b)) {
      fail(t, "boundaries out of order: lower >= upper");
      break;
    }
    if (!(a > sp.process.interval_lower()) ||
        !(b < sp.process.interval_upper())) {
      fail(t, "boundary leaves the state interval of the process");
      break;
    }
    rep.min_gap = std::min(rep.min_gap, b - a);
  }

  if (rep.valid) {
    const double a0 = sp.lower.eval(t0);
    const double b0 = sp.upper.eval(t0);
    const double x0 = sp.process.x0;
    bool ok = false;
    switch (sp.configuration) {
      case StripConfiguration::inside: ok = a0 < x0 && x0 < b0; break;
      case StripConfiguration::outside_below: ok = x0 < a0; break;
      case StripConfiguration::outside_above: ok = x0 > b0; break;
    }
    if (!ok)
      fail(t0, "starting point is not where the configuration requires at t0");
  }

  return rep;
}

}  // namespace fht
