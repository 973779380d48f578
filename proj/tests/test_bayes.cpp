#include <ar1bayes/bayes.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "oracles.hpp"

using ar1bayes::GPrior;
using ar1bayes::Interval;
using ar1bayes::JeffreysPrior;
using ar1bayes::NcPrior;
using ar1bayes::NormalDist;
using ar1bayes::PosteriorFamily;
using ar1bayes::PosteriorSummary;
using ar1bayes::TimeSeries;
using ar1bayes::TnPrior;
using ar1bayes::TruncatedNormal;

namespace {

TimeSeries random_series(std::mt19937_64& gen, std::size_t len, double phi) {
  std::normal_distribution<double> nd;
  std::vector<double> y(len);
  double prev = nd(gen);
  for (std::size_t t = 0; t < len; ++t) {
    prev = phi * prev + nd(gen);
    y[t] = prev;
  }
  return TimeSeries(y);
}

}  // namespace

TEST_CASE("compute_ef: closed-form sums") {
  const TimeSeries s({1.0, 2.0, 4.0, 8.0});
  const auto ef = ar1bayes::compute_ef(s, 1.0, 0.0, 1.0);
  CHECK(ef.e == 42.0);
  CHECK(ef.f == 22.0);

  // a zero series carries no information: posterior equals the prior
  const TimeSeries zeros({0.0, 0.0, 0.0, 0.0});
  const auto ef0 = ar1bayes::compute_ef(zeros, 1.0, 0.3, 0.25);
  CHECK(ef0.e == doctest::Approx(0.3 / 0.25).epsilon(1e-15));
  CHECK(ef0.f == doctest::Approx(4.0).epsilon(1e-15));

  CHECK(ef0.f >= 1.0 / 0.25);
  CHECK_THROWS_AS(ar1bayes::compute_ef(s, 1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ar1bayes::compute_ef(s, 0.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("posterior_tn reduces to the prior on a zero series") {
  const TimeSeries zeros({0.0, 0.0, 0.0, 0.0, 0.0});
  const TruncatedNormal post = ar1bayes::posterior_tn(zeros, 1.0, 0.4, 0.49);
  CHECK(post.location() == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(post.scale() == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(post.lower() == -1.0);
  CHECK(post.upper() == 1.0);
}

TEST_CASE("posterior pdf matches the grid-normalized likelihood times prior") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> uphi(-0.9, 0.9);
  std::uniform_real_distribution<double> ud(-0.9, 0.9);
  std::uniform_real_distribution<double> us2(0.1, 4.0);

  for (int rep = 0; rep < 12; ++rep) {
    const std::size_t len = rep % 2 == 0 ? 5 : 20;
    const TimeSeries s = random_series(gen, len, uphi(gen));
    const double d = ud(gen);
    const double sp2 = us2(gen);
    const TruncatedNormal post = ar1bayes::posterior_tn(s, 1.0, d, sp2);

    const auto gp = oracle::grid_posterior(s, 1.0, d, sp2, 20000);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < gp.grid.size(); ++i) {
      max_dev = std::max(max_dev, std::abs(post.pdf(gp.grid[i]) - gp.density[i]));
    }
    CHECK(max_dev <= 1e-6);
  }
}

TEST_CASE("posterior location dominates the prior as data accumulate") {
  for (double d : {-0.5, 0.0, 0.5}) {
    const TimeSeries s = ar1bayes::simulate({0.5, 1.0}, 10000, 200, 77);
    const TruncatedNormal post = ar1bayes::posterior_tn(s, 1.0, d, 1.0);
    CHECK(std::abs(post.location() - 0.5) < 0.05);
  }
}

TEST_CASE("bayes_estimator equals the quadrature posterior mean") {
  SUBCASE("zero series, symmetric prior") {
    const TimeSeries zeros({0.0, 0.0, 0.0, 0.0});
    CHECK(ar1bayes::bayes_estimator(zeros, 1.0, 0.0, 1.0).estimate ==
          doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("random configurations") {
    std::mt19937_64 gen(22);
    std::uniform_real_distribution<double> uphi(-0.9, 0.9);
    std::uniform_real_distribution<double> ud(-0.9, 0.9);
    std::uniform_real_distribution<double> us2(0.1, 4.0);
    for (int rep = 0; rep < 10; ++rep) {
      const TimeSeries s = random_series(gen, 20, uphi(gen));
      const double d = ud(gen);
      const double sp2 = us2(gen);
      const TruncatedNormal post = ar1bayes::posterior_tn(s, 1.0, d, sp2);
      const double be = ar1bayes::bayes_estimator(s, 1.0, d, sp2).estimate;
      const long double qmean = oracle::tn_moment(
          post.location(), post.scale(), -1.0L, 1.0L, 1);
      CHECK(std::abs(be - static_cast<double>(qmean)) <= 1e-8);
      CHECK(be > -1.0);
      CHECK(be < 1.0);
    }
  }
}

TEST_CASE("posterior_for_prior: the four closed forms") {
  std::mt19937_64 gen(23);
  const TimeSeries s = random_series(gen, 40, 0.5);
  const auto sums = ar1bayes::lag_sums(s);

  SUBCASE("Jeffreys equals the conditional least-squares fit") {
    const PosteriorSummary post =
        ar1bayes::posterior_for_prior(s, 1.0, JeffreysPrior{});
    CHECK(post.family == PosteriorFamily::kNormal);
    CHECK(post.mean == doctest::Approx(ar1bayes::cls(s).estimate).epsilon(1e-14));
    CHECK(post.variance == doctest::Approx(1.0 / sums.sxx).epsilon(1e-12));
  }

  SUBCASE("NC mean equals the TN posterior location") {
    const PosteriorSummary nc =
        ar1bayes::posterior_for_prior(s, 1.0, NcPrior{0.3, 0.5});
    const TruncatedNormal tn = ar1bayes::posterior_tn(s, 1.0, 0.3, 0.5);
    CHECK(nc.mean == doctest::Approx(tn.location()).epsilon(1e-14));
    CHECK(nc.variance ==
          doctest::Approx(tn.scale() * tn.scale()).epsilon(1e-12));
  }

  SUBCASE("g posterior converges to Jeffreys as g grows") {
    const PosteriorSummary jeff =
        ar1bayes::posterior_for_prior(s, 1.0, JeffreysPrior{});
    const PosteriorSummary g =
        ar1bayes::posterior_for_prior(s, 1.0, GPrior{1e9, 0.0});
    CHECK(std::abs(g.mean - jeff.mean) <= 1e-6);
    CHECK(std::abs(g.variance - jeff.variance) <= 1e-6);
  }

  SUBCASE("precision additivity is exact") {
    const double sp2 = 0.37;
    const PosteriorSummary nc =
        ar1bayes::posterior_for_prior(s, 1.0, NcPrior{0.1, sp2});
    CHECK(1.0 / nc.variance ==
          doctest::Approx(1.0 / sp2 + sums.sxx).epsilon(1e-12));
  }

  SUBCASE("shrinkage: TN location lies between d and cls") {
    std::uniform_real_distribution<double> ud(-0.9, 0.9);
    for (int rep = 0; rep < 50; ++rep) {
      const double d = ud(gen);
      const TruncatedNormal tn = ar1bayes::posterior_tn(s, 1.0, d, 0.2);
      const double c = ar1bayes::cls(s).estimate;
      CHECK(tn.location() >= std::min(d, c) - 1e-12);
      CHECK(tn.location() <= std::max(d, c) + 1e-12);
    }
  }

  SUBCASE("degenerate data rejected for the flat priors") {
    const TimeSeries zeros({0.0, 0.0, 0.0});
    CHECK_THROWS_AS(ar1bayes::posterior_for_prior(zeros, 1.0, JeffreysPrior{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ar1bayes::posterior_for_prior(zeros, 1.0, GPrior{10.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("centered_interval: normal case quantile") {
  PosteriorSummary post{PosteriorFamily::kNormal, 0.0, 1.0, NormalDist{0.0, 1.0}};
  const Interval iv = ar1bayes::centered_interval(post, 0.95);
  CHECK(iv.lo == doctest::Approx(-1.959964).epsilon(1e-6));
  CHECK(iv.hi == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK_THROWS_AS(ar1bayes::centered_interval(post, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ar1bayes::centered_interval(post, 1.0), std::invalid_argument);
}

TEST_CASE("centered_interval: truncated case reaches the exact mass") {
  SUBCASE("prob near one covers the whole support") {
    const TruncatedNormal tn(0.0, 1.0, -1.0, 1.0);
    PosteriorSummary post{PosteriorFamily::kTruncatedNormal, tn.mean(),
                          tn.variance(), tn};
    const Interval iv = ar1bayes::centered_interval(post, 0.999999);
    CHECK(iv.lo <= -0.999);
    CHECK(iv.hi >= 0.999);
  }

  SUBCASE("random posteriors") {
    std::mt19937_64 gen(24);
    std::uniform_real_distribution<double> uloc(-1.2, 1.2);
    std::uniform_real_distribution<double> usc(0.02, 1.5);
    for (int rep = 0; rep < 300; ++rep) {
      const TruncatedNormal tn(uloc(gen), usc(gen), -1.0, 1.0);
      PosteriorSummary post{PosteriorFamily::kTruncatedNormal, tn.mean(),
                            tn.variance(), tn};
      const Interval iv = ar1bayes::centered_interval(post, 0.95);
      CHECK(std::abs((tn.cdf(iv.hi) - tn.cdf(iv.lo)) - 0.95) <= 1e-9);

      // the truncated interval is never wider than the untruncated one
      // with the same natural parameters
      PosteriorSummary norm{
          PosteriorFamily::kNormal, tn.location(),
          tn.scale() * tn.scale(),
          NormalDist{tn.location(), tn.scale() * tn.scale()}};
      const Interval nv = ar1bayes::centered_interval(norm, 0.95);
      CHECK(iv.hi - iv.lo <= nv.hi - nv.lo + 1e-9);
    }
  }
}

TEST_CASE("coverage_percentage") {
  CHECK(ar1bayes::coverage_percentage(486, 500) ==
        doctest::Approx(97.2).epsilon(1e-12));
  CHECK(ar1bayes::coverage_percentage(0, 500) == 0.0);
  CHECK(ar1bayes::coverage_percentage(500, 500) == 100.0);
  CHECK_THROWS_AS(ar1bayes::coverage_percentage(501, 500), std::invalid_argument);
  CHECK_THROWS_AS(ar1bayes::coverage_percentage(0, 0), std::invalid_argument);
}
