#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fht/bm_closed_form.hpp"
#include "fht/errors.hpp"
#include "fht/laplace.hpp"

using namespace fht;

namespace {

const LaplaceRep kReps[] = {LaplaceRep::ito_mckean, LaplaceRep::fortet,
                            LaplaceRep::density_ratio};

double rel_err(double x, double ref) {
  return std::abs(x - ref) / std::abs(ref);
}

}  // namespace

TEST_SUITE_BEGIN("laplace");

TEST_CASE("single-boundary transform reference value") {
  // E[exp(-T)] for a unit barrier is exp(-sqrt(2)).
  CHECK(bm_fpt_laplace(0.0, 1.0, 1.0) ==
        doctest::Approx(0.24311673443421421).epsilon(1e-14));
  CHECK(bm_fpt_laplace(0.0, -1.0, 1.0) == bm_fpt_laplace(0.0, 1.0, 1.0));
  CHECK_THROWS_AS(bm_fpt_laplace(0.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("two-boundary transforms match the exact exit values") {
  // sinh-ratio values for a=-1, b=2, x0=0, computed at 40 digits. The
  // lambda=1000 pair probes the deep tail where naive evaluations cancel.
  const Process p = Process::standard(0.0);
  const double a = -1.0, b = 2.0;
  struct Row {
    double lam, ga, gb;
  };
  const Row rows[] = {
      {0.001, 0.66555744108017446, 0.33244621890978032},
      {1.0, 0.24231744371756987, 0.055623742770067053},
      {1000.0, 3.7823378976455696e-20, 1.4306079971965907e-39},
  };
  for (const Row& r : rows) {
    for (LaplaceRep rep : kReps) {
      const auto [ga, gb] = sub_density_laplace(rep, p, a, b, r.lam);
      CHECK(rel_err(ga, r.ga) < 1e-12);
      CHECK(rel_err(gb, r.gb) < 1e-12);
    }
  }
}

TEST_CASE("transforms tend to the exit split as lambda vanishes") {
  // lim g_a = P(hit lower first) = (b - x0)/(b - a).
  const Process p = Process::standard(0.5);
  const auto [ga, gb] =
      sub_density_laplace(LaplaceRep::ito_mckean, p, -1.0, 2.0, 1e-9);
  CHECK(ga == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(gb == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("representations agree pairwise across the lambda range") {
  const Process p = Process::standard(0.0);
  const double a = -1.0, b = 2.0;
  for (int i = 0; i < 13; ++i) {
    const double lam = std::pow(10.0, -3.0 + 0.5 * static_cast<double>(i));
    double ga[3], gb[3];
    for (int r = 0; r < 3; ++r) {
      const auto v = sub_density_laplace(kReps[r], p, a, b, lam);
      ga[r] = v.first;
      gb[r] = v.second;
    }
    for (int r = 1; r < 3; ++r) {
      CHECK(rel_err(ga[r], ga[0]) < 1e-10);
      CHECK(rel_err(gb[r], gb[0]) < 1e-10);
    }
  }
}

TEST_CASE("density-ratio result does not depend on the probe points") {
  const Process p = Process::standard(0.0);
  const double a = -1.0, b = 2.0;
  const ProbePoints alt1{b + 0.5, a - 0.5};
  const ProbePoints alt2{b + 2.0, a - 1.0};
  for (double lam : {0.001, 0.1, 1.0, 10.0, 1000.0}) {
    const auto v0 = sub_density_laplace(LaplaceRep::density_ratio, p, a, b, lam);
    const auto v1 =
        sub_density_laplace(LaplaceRep::density_ratio, p, a, b, lam, alt1);
    const auto v2 =
        sub_density_laplace(LaplaceRep::density_ratio, p, a, b, lam, alt2);
    CHECK(rel_err(v1.first, v0.first) < 1e-10);
    CHECK(rel_err(v1.second, v0.second) < 1e-10);
    CHECK(rel_err(v2.first, v0.first) < 1e-10);
    CHECK(rel_err(v2.second, v0.second) < 1e-10);
  }
}

TEST_CASE("complex overload agrees with the real one on the real axis") {
  const Process p = Process::standard(0.0);
  for (LaplaceRep rep : kReps) {
    const auto rv = sub_density_laplace(rep, p, -1.0, 2.0, 2.5);
    const auto cv = sub_density_laplace(rep, p, -1.0, 2.0, Cplx(2.5, 0.0));
    CHECK(cv.first.real() == doctest::Approx(rv.first).epsilon(1e-14));
    CHECK(cv.second.real() == doctest::Approx(rv.second).epsilon(1e-14));
    CHECK(std::abs(cv.first.imag()) < 1e-16);
  }
}

TEST_CASE("inversion recovers a constant from 1/lambda") {
  const auto one = [](Cplx s) { return 1.0 / s; };
  const std::vector<double> times{0.1, 0.5, 1.0, 3.0, 10.0};
  const std::vector<double> vals = laplace_invert(one, times);
  for (double v : vals) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("inversion recovers the single-boundary density") {
  const auto hat = [](Cplx s) { return bm_fpt_laplace(0.0, 1.0, s); };
  const std::vector<double> times{1.0};
  const std::vector<double> vals = laplace_invert(hat, times);
  CHECK(vals[0] == doctest::Approx(0.24197072451914335).epsilon(1e-9));
}

TEST_CASE("inverted transforms track the image series") {
  // Pointwise comparison on a short grid; the mean square agreement over a
  // long grid is part of the acceptance run.
  const Process p = Process::standard(0.0);
  const double a = -1.0, b = 2.0;
  const LaplaceEvaluator ea = make_sub_density_evaluator(
      LaplaceRep::ito_mckean, p, a, b, WhichBoundary::lower);
  const LaplaceEvaluator eb = make_sub_density_evaluator(
      LaplaceRep::ito_mckean, p, a, b, WhichBoundary::upper);
  std::vector<double> times;
  for (int k = 1; k <= 40; ++k) times.push_back(0.05 * static_cast<double>(k));
  const std::vector<double> ga = laplace_invert(ea, times);
  const std::vector<double> gb = laplace_invert(eb, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double sa = bm_sub_density_lower(times[k], 0.0, a, b).value;
    const double sb = bm_sub_density_upper(times[k], 0.0, a, b).value;
    CHECK(std::abs(ga[k] - sa) < 1e-8);
    CHECK(std::abs(gb[k] - sb) < 1e-8);
  }
}

TEST_CASE("evaluator carries representation and side") {
  const Process p = Process::standard(0.0);
  const LaplaceEvaluator ev = make_sub_density_evaluator(
      LaplaceRep::fortet, p, -1.0, 2.0, WhichBoundary::upper);
  CHECK(ev.rep == LaplaceRep::fortet);
  CHECK(ev.label.find("g_upper") != std::string::npos);
  CHECK(ev.label.find("fortet") != std::string::npos);
  const auto ref = sub_density_laplace(LaplaceRep::fortet, p, -1.0, 2.0, 1.0);
  CHECK(ev.transform(Cplx(1.0, 0.0)).real() ==
        doctest::Approx(ref.second).epsilon(1e-14));
}

TEST_CASE("input validation") {
  const Process p = Process::standard(0.0);
  CHECK_THROWS_AS(
      sub_density_laplace(LaplaceRep::fortet, Process::ou(1.0, 0.0, 1.0, 0.0),
                          -1.0, 1.0, 1.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      sub_density_laplace(LaplaceRep::fortet, Process::standard(0.0, 0.5),
                          -1.0, 1.0, 1.0),
      std::invalid_argument);
  CHECK_THROWS_AS(sub_density_laplace(LaplaceRep::fortet, p, 1.0, -1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(sub_density_laplace(LaplaceRep::fortet, p, -1.0, 1.0, -2.0),
                  std::domain_error);
  // Probes on the wrong side of the strip.
  CHECK_THROWS_AS(sub_density_laplace(LaplaceRep::density_ratio, p, -1.0, 1.0,
                                      1.0, ProbePoints{0.5, -2.0}),
                  std::invalid_argument);
  // Probes so remote that the resolvent underflows outright.
  CHECK_THROWS_AS(sub_density_laplace(LaplaceRep::density_ratio, p, -1.0, 1.0,
                                      1000.0, ProbePoints{41.0, -41.0}),
                  NumericalError);
  const auto one = [](Cplx s) { return 1.0 / s; };
  CHECK_THROWS_AS(laplace_invert(one, std::vector<double>{-1.0}),
                  std::domain_error);
  InversionControl ctl;
  ctl.terms = 5;
  CHECK_THROWS_AS(laplace_invert(one, std::vector<double>{1.0}, ctl),
                  std::invalid_argument);
}

TEST_SUITE_END();
