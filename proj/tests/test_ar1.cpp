#include <ar1bayes/ar1.hpp>

#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include <ar1bayes/estimators.hpp>

using ar1bayes::Ar1Params;
using ar1bayes::TimeSeries;

TEST_CASE("TimeSeries validates its invariants") {
  CHECK_THROWS_AS(TimeSeries({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TimeSeries({1.0, std::nan("")}), std::invalid_argument);
  const TimeSeries s({1.0, 2.0, 3.0});
  CHECK(s.length() == 3);
  CHECK(s.prefix(2).length() == 2);
  CHECK(s.window(1, 2).at(0) == 2.0);
}

TEST_CASE("simulate: stationarity precondition and determinism") {
  CHECK_THROWS_AS(ar1bayes::simulate({1.2, 1.0}, 100, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(ar1bayes::simulate({1.0, 1.0}, 100, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(ar1bayes::simulate({0.5, -1.0}, 100, 0, 1),
                  std::invalid_argument);

  const TimeSeries a = ar1bayes::simulate({0.5, 1.0}, 200, 200, 7);
  const TimeSeries b = ar1bayes::simulate({0.5, 1.0}, 200, 200, 7);
  CHECK(a.values() == b.values());
  CHECK(a.length() == 200);

  // same seed, longer run: the retained prefix is shared
  const TimeSeries c = ar1bayes::simulate({0.5, 1.0}, 300, 200, 7);
  for (std::size_t i = 0; i < a.length(); ++i) {
    CHECK(a.at(i) == c.at(i));
  }
}

TEST_CASE("simulate: independence case has no autocorrelation") {
  const TimeSeries s = ar1bayes::simulate({0.0, 1.0}, 100000, 200, 99);
  const double r1 = ar1bayes::mme(s).estimate;
  CHECK(std::abs(r1) < 0.01);
}

TEST_CASE("simulate: stationary variance matches sigma2/(1-phi^2)") {
  const TimeSeries s = ar1bayes::simulate({0.8, 1.0}, 100000, 200, 123);
  double mean = 0.0;
  for (double v : s.values()) mean += v;
  mean /= static_cast<double>(s.length());
  double var = 0.0;
  for (double v : s.values()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(s.length());
  const double target = 1.0 / (1.0 - 0.64);
  CHECK(std::abs(var - target) / target < 0.05);

  // mean sanity: within 4 standard errors of zero with effective size
  const double eff_var = target * (1.0 + 0.8) / (1.0 - 0.8);
  CHECK(std::abs(mean) <= 4.0 * std::sqrt(eff_var / s.length()));
}

TEST_CASE("conditional log likelihood") {
  const TimeSeries zeros({0.0, 0.0, 0.0});
  CHECK(ar1bayes::conditional_log_likelihood(zeros, 0.5, 1.0) ==
        doctest::Approx(-1.837877).epsilon(1e-6));
  CHECK_THROWS_AS(ar1bayes::conditional_log_likelihood(zeros, 0.5, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(ar1bayes::conditional_log_likelihood(zeros, 0.5, -1.0),
                  std::invalid_argument);

  // the maximizer in phi is the regression-through-origin slope
  const TimeSeries s = ar1bayes::simulate({0.6, 2.0}, 150, 200, 5);
  const double cls_hat = ar1bayes::cls(s).estimate;
  const double at_cls = ar1bayes::conditional_log_likelihood(s, cls_hat, 2.0);
  for (double phi = -0.99; phi <= 0.99; phi += 0.01) {
    CHECK(ar1bayes::conditional_log_likelihood(s, phi, 2.0) <= at_cls + 1e-12);
  }
}

TEST_CASE("conditional log likelihood is strictly concave in phi") {
  const TimeSeries s = ar1bayes::simulate({0.3, 1.0}, 50, 200, 17);
  const double h = 0.05;
  for (double phi = -0.9; phi <= 0.9; phi += 0.1) {
    const double second =
        ar1bayes::conditional_log_likelihood(s, phi - h, 1.0) -
        2.0 * ar1bayes::conditional_log_likelihood(s, phi, 1.0) +
        ar1bayes::conditional_log_likelihood(s, phi + h, 1.0);
    CHECK(second < 0.0);
  }
}

TEST_CASE("exact log likelihood adds the stationary initial term") {
  const TimeSeries s = ar1bayes::simulate({0.4, 1.5}, 80, 200, 31);
  CHECK_THROWS_AS(ar1bayes::exact_log_likelihood(s, 1.0, 1.5),
                  std::invalid_argument);

  SUBCASE("phi = 0 reduces to the standard-normal density of y1") {
    const double diff = ar1bayes::exact_log_likelihood(s, 0.0, 1.5) -
                        ar1bayes::conditional_log_likelihood(s, 0.0, 1.5);
    const double y1 = s.at(0);
    const double expected =
        -0.5 * std::log(2.0 * M_PI * 1.5) - y1 * y1 / (2.0 * 1.5);
    CHECK(diff == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("algebraic identity for random phi") {
    for (double phi : {-0.95, -0.3, 0.2, 0.7, 1.0 - 1e-8}) {
      const double diff = ar1bayes::exact_log_likelihood(s, phi, 1.5) -
                          ar1bayes::conditional_log_likelihood(s, phi, 1.5);
      const double omp = 1.0 - phi * phi;
      const double y1 = s.at(0);
      const double expected = -0.5 * std::log(2.0 * M_PI * 1.5 / omp) -
                              y1 * y1 * omp / (2.0 * 1.5);
      CHECK(diff == doctest::Approx(expected).epsilon(1e-9));
      CHECK(std::isfinite(ar1bayes::exact_log_likelihood(s, phi, 1.5)));
    }
  }
}

TEST_CASE("lag_sums matches direct summation") {
  const TimeSeries s({1.0, 2.0, 4.0, 8.0});
  const auto sums = ar1bayes::lag_sums(s);
  CHECK(sums.sxy == 42.0);
  CHECK(sums.sxx == 21.0);
}
