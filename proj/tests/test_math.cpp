#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fht/math.hpp"
#include "fht/rng.hpp"

using namespace fht;

TEST_SUITE_BEGIN("math");

TEST_CASE("normal cdf/pdf reference values") {
  // Phi(0) = 1/2, Phi(1) = 0.8413447460685429, phi(0) = 1/sqrt(2 pi).
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
  CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  CHECK(normal_sf(1.0) == doctest::Approx(1.0 - 0.8413447460685429).epsilon(1e-12));
}

TEST_CASE("normal sf is the bitwise mirror of cdf") {
  for (double z : {0.0, 0.3, 1.7, -2.4, 5.5, -0.001}) {
    CHECK(normal_sf(z) == normal_cdf(-z));
  }
}

TEST_CASE("pairwise sum matches simple sum and is order-deterministic") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::sin(static_cast<double>(i)) * 1e-3;
  double plain = 0.0;
  for (double x : v) plain += x;
  const double p1 = pairwise_sum(v);
  const double p2 = pairwise_sum(v);
  CHECK(p1 == p2);
  CHECK(p1 == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("pchip interpolates knots exactly and preserves monotonicity") {
  std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.5};
  std::vector<double> y{0.0, 0.2, 0.9, 0.95, 1.0};
  PchipInterpolant f(x, y);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(f(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
  // Monotone data must stay monotone between knots.
  double prev = -1.0;
  for (double t = 0.0; t <= 4.5; t += 0.01) {
    const double v = f(t);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  CHECK_THROWS_AS(f(-0.1), std::out_of_range);
  CHECK_THROWS_AS(f(4.6), std::out_of_range);
}

TEST_CASE("pchip derivative is consistent with finite differences") {
  std::vector<double> x{0.0, 0.5, 1.5, 2.0, 3.0};
  std::vector<double> y{0.0, 0.4, 0.6, 0.9, 1.4};
  PchipInterpolant f(x, y);
  for (double t : {0.2, 0.7, 1.0, 1.7, 2.5}) {
    const double eps = 1e-6;
    const double fd = (f(t + eps) - f(t - eps)) / (2.0 * eps);
    CHECK(f.deriv(t) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("invert_monotone finds the quantile of an analytic cdf") {
  auto cdf = [](double t) { return normal_cdf(t); };
  const double q = invert_monotone(cdf, 0.8413447460685429, -10.0, 10.0);
  CHECK(q == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("xoshiro stream depends only on (seed, stream index)") {
  Xoshiro256pp a(42, 7), b(42, 7), c(42, 8);
  bool same = true, diff = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next();
    same = same && (va == b.next());
    diff = diff || (va != c.next());
  }
  CHECK(same);
  CHECK(diff);
}

TEST_CASE("ziggurat normal has correct moments and tail mass") {
  Xoshiro256pp rng(123, 0);
  const int n = 2000000;
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  int beyond3 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    s3 += z * z * z;
    s4 += z * z * z * z;
    beyond3 += std::abs(z) > 3.0;
  }
  const double nn = n;
  CHECK(s1 / nn == doctest::Approx(0.0).epsilon(1).scale(0.005));
  CHECK(s2 / nn == doctest::Approx(1.0).epsilon(0.005));
  CHECK(s3 / nn == doctest::Approx(0.0).epsilon(1).scale(0.02));
  CHECK(s4 / nn == doctest::Approx(3.0).epsilon(0.02));
  // P(|Z| > 3) = 2 * (1 - Phi(3)) = 0.0026997961.
  CHECK(static_cast<double>(beyond3) / nn ==
        doctest::Approx(0.0026997961).epsilon(0.1));
}

TEST_CASE("ziggurat normal empirical cdf matches Phi") {
  Xoshiro256pp rng(9, 0);
  const int n = 1000000;
  std::vector<double> z(n);
  for (auto& v : z) v = rng.normal();
  std::sort(z.begin(), z.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = normal_cdf(z[static_cast<std::size_t>(i)]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  // 99.9% KS quantile at n=1e6 is about 1.95 / sqrt(n) = 0.00195.
  CHECK(d < 0.00195);
}

TEST_SUITE_END();
