#include "fht/math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fht {

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

namespace {

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

PchipInterpolant::PchipInterpolant(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw std::invalid_argument("pchip: need at least 2 knots and equal sizes");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(x_[i] < x_[i + 1]))
      throw std::invalid_argument("pchip: knots must be strictly increasing");

  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    d[i] = (y_[i + 1] - y_[i]) / h[i];
  }

  m_.assign(n, 0.0);
  if (n == 2) {
    m_[0] = m_[1] = d[0];
    return;
  }

  // One-sided three-point estimate at an endpoint, clamped so the first
  // interval stays monotone (Fritsch-Carlson endpoint rule).
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sgn(m) != sgn(d0))
      m = 0.0;
    else if (sgn(d0) != sgn(d1) && std::abs(m) > 3.0 * std::abs(d0))
      m = 3.0 * d0;
    return m;
  };

  m_[0] = endpoint(h[0], h[1], d[0], d[1]);
  m_[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (d[k - 1] * d[k] <= 0.0) {
      m_[k] = 0.0;
    } else {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      m_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
    }
  }
}

std::size_t PchipInterpolant::locate(double t) const {
  if (!(t >= x_.front() && t <= x_.back()))
    throw std::out_of_range("pchip: query outside knot span");
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - x_.begin());
  if (k > 0) --k;
  if (k + 1 >= x_.size()) k = x_.size() - 2;
  return k;
}

double PchipInterpolant::operator()(double t) const {
  const std::size_t k = locate(t);
  const double h = x_[k + 1] - x_[k];
  const double u = (t - x_[k]) / h;
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  return h00 * y_[k] + h10 * h * m_[k] + h01 * y_[k + 1] + h11 * h * m_[k + 1];
}

double PchipInterpolant::deriv(double t) const {
  const std::size_t k = locate(t);
  const double h = x_[k + 1] - x_[k];
  const double u = (t - x_[k]) / h;
  const double u2 = u * u;
  const double dh00 = (6.0 * u2 - 6.0 * u) / h;
  const double dh10 = (3.0 * u2 - 4.0 * u + 1.0) / h;
  const double dh01 = (-6.0 * u2 + 6.0 * u) / h;
  const double dh11 = (3.0 * u2 - 2.0 * u) / h;
  return dh00 * y_[k] + dh10 * h * m_[k] + dh01 * y_[k + 1] + dh11 * h * m_[k + 1];
}

double invert_monotone(const std::function<double(double)>& f, double target,
                       double lo, double hi, double xtol) {
  if (!(lo <= hi)) throw std::invalid_argument("invert_monotone: lo > hi");
  double flo = f(lo) - target;
  if (flo >= 0.0) return lo;
  if (f(hi) - target <= 0.0) return hi;
  for (int it = 0; it < 200 && (hi - lo) > xtol * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) - target <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace fht
