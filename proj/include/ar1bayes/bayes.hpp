#pragma once

#include <cstddef>
#include <variant>

#include <ar1bayes/ar1.hpp>
#include <ar1bayes/estimators.hpp>
#include <ar1bayes/truncnorm.hpp>

namespace ar1bayes {

// The four prior families compared in the sensitivity study.

// Normal(d, sigma_phi2) truncated to (-1, 1).
struct TnPrior {
  double d;
  double sigma_phi2;
};

// Flat over phi for the known-variance conditional model.
struct JeffreysPrior {};

// Zellner prior N(location, g * sigma_eps2 / sxx).  Requires g > 0.
struct GPrior {
  double g;
  double location = 0.0;
};

// Untruncated normal N(d, sigma_phi2).
struct NcPrior {
  double d;
  double sigma_phi2;
};

using PriorSpec = std::variant<TnPrior, JeffreysPrior, GPrior, NcPrior>;

struct NormalDist {
  double mean;
  double variance;
};

enum class PosteriorFamily { kTruncatedNormal, kNormal };

struct PosteriorSummary {
  PosteriorFamily family;
  double mean;
  double variance;
  std::variant<TruncatedNormal, NormalDist> dist;
};

// Natural parameters of the posterior under a (truncated or not) normal
// prior with location d and variance sigma_phi2:
//   e = sxy/sigma_eps2 + d/sigma_phi2,  f = sxx/sigma_eps2 + 1/sigma_phi2.
struct EF {
  double e;
  double f;
};
EF compute_ef(const TimeSeries& series, double sigma_eps2, double d,
              double sigma_phi2);

// Posterior under the truncated normal prior:
// TruncatedNormal(e/f, sqrt(1/f), -1, 1).
TruncatedNormal posterior_tn(const TimeSeries& series, double sigma_eps2,
                             double d, double sigma_phi2);

// Posterior mean under squared error loss (the mean of posterior_tn).
EstimatorResult bayes_estimator(const TimeSeries& series, double sigma_eps2,
                                double d, double sigma_phi2);

// Closed-form posterior for any of the four priors.  The non-truncated
// priors require sxx > 0.
PosteriorSummary posterior_for_prior(const TimeSeries& series,
                                     double sigma_eps2,
                                     const PriorSpec& prior);

struct Interval {
  double lo;
  double hi;
};

// (m-h, m+h) around the posterior mean with posterior mass prob; h is
// solved by bisection for the truncated family.
Interval centered_interval(const PosteriorSummary& posterior,
                           double prob = 0.95);

// hits/total * 100.  Rejects total == 0 and hits > total.
double coverage_percentage(std::size_t hits, std::size_t total);

}  // namespace ar1bayes
