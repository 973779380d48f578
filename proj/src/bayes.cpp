#include <ar1bayes/bayes.hpp>

#include <cmath>
#include <stdexcept>

namespace ar1bayes {

EF compute_ef(const TimeSeries& series, double sigma_eps2, double d,
              double sigma_phi2) {
  if (!(sigma_eps2 > 0.0)) {
    throw std::invalid_argument("compute_ef: sigma_eps2 must be positive");
  }
  if (!(sigma_phi2 > 0.0)) {
    throw std::invalid_argument("compute_ef: sigma_phi2 must be positive");
  }
  const LagSums s = lag_sums(series);
  return {s.sxy / sigma_eps2 + d / sigma_phi2,
          s.sxx / sigma_eps2 + 1.0 / sigma_phi2};
}

TruncatedNormal posterior_tn(const TimeSeries& series, double sigma_eps2,
                             double d, double sigma_phi2) {
  const EF ef = compute_ef(series, sigma_eps2, d, sigma_phi2);
  return TruncatedNormal(ef.e / ef.f, std::sqrt(1.0 / ef.f), -1.0, 1.0);
}

EstimatorResult bayes_estimator(const TimeSeries& series, double sigma_eps2,
                                double d, double sigma_phi2) {
  return {Method::kBe, posterior_tn(series, sigma_eps2, d, sigma_phi2).mean()};
}

namespace {

LagSums positive_lag_sums(const TimeSeries& series, const char* who) {
  const LagSums s = lag_sums(series);
  if (!(s.sxx > 0.0)) {
    throw std::invalid_argument(std::string(who) +
                                ": zero lagged sum of squares");
  }
  return s;
}

}  // namespace

PosteriorSummary posterior_for_prior(const TimeSeries& series,
                                     double sigma_eps2,
                                     const PriorSpec& prior) {
  if (!(sigma_eps2 > 0.0)) {
    throw std::invalid_argument("posterior_for_prior: sigma_eps2 must be positive");
  }
  struct Visitor {
    const TimeSeries& series;
    double sigma_eps2;

    PosteriorSummary operator()(const TnPrior& p) const {
      TruncatedNormal post =
          posterior_tn(series, sigma_eps2, p.d, p.sigma_phi2);
      const double m = post.mean();
      const double v = post.variance();
      return {PosteriorFamily::kTruncatedNormal, m, v, std::move(post)};
    }
    PosteriorSummary operator()(const JeffreysPrior&) const {
      const LagSums s = positive_lag_sums(series, "posterior_for_prior[Jeffreys]");
      const NormalDist nd{s.sxy / s.sxx, sigma_eps2 / s.sxx};
      return {PosteriorFamily::kNormal, nd.mean, nd.variance, nd};
    }
    PosteriorSummary operator()(const GPrior& p) const {
      if (!(p.g > 0.0)) {
        throw std::invalid_argument("posterior_for_prior: g must be positive");
      }
      const LagSums s = positive_lag_sums(series, "posterior_for_prior[g]");
      const double mean =
          (s.sxy / sigma_eps2 + p.location * s.sxx / (p.g * sigma_eps2)) /
          ((1.0 + 1.0 / p.g) * s.sxx / sigma_eps2);
      const NormalDist nd{mean, p.g * sigma_eps2 / ((1.0 + p.g) * s.sxx)};
      return {PosteriorFamily::kNormal, nd.mean, nd.variance, nd};
    }
    PosteriorSummary operator()(const NcPrior& p) const {
      const EF ef = compute_ef(series, sigma_eps2, p.d, p.sigma_phi2);
      const NormalDist nd{ef.e / ef.f, 1.0 / ef.f};
      return {PosteriorFamily::kNormal, nd.mean, nd.variance, nd};
    }
  };
  return std::visit(Visitor{series, sigma_eps2}, prior);
}

Interval centered_interval(const PosteriorSummary& posterior, double prob) {
  if (!(prob > 0.0) || !(prob < 1.0)) {
    throw std::invalid_argument("centered_interval: prob must be in (0,1)");
  }
  const double m = posterior.mean;

  if (posterior.family == PosteriorFamily::kNormal) {
    const double z = std_normal_quantile(0.5 * (1.0 + prob));
    const double h = z * std::sqrt(posterior.variance);
    return {m - h, m + h};
  }

  const auto& tn = std::get<TruncatedNormal>(posterior.dist);
  // Mass(h) = F(m+h) - F(m-h) is nondecreasing in h and reaches 1 once
  // both ends leave the support, so bisection over [0, b-a] is enough.
  double lo = 0.0;
  double hi = tn.upper() - tn.lower();
  for (int it = 0; it < 90 && hi - lo > 1e-13; ++it) {
    const double h = 0.5 * (lo + hi);
    const double mass = tn.cdf(m + h) - tn.cdf(m - h);
    if (mass < prob) {
      lo = h;
    } else {
      hi = h;
    }
  }
  const double h = 0.5 * (lo + hi);
  return {m - h, m + h};
}

double coverage_percentage(std::size_t hits, std::size_t total) {
  if (total == 0) {
    throw std::invalid_argument("coverage_percentage: total must be positive");
  }
  if (hits > total) {
    throw std::invalid_argument("coverage_percentage: hits exceed total");
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace ar1bayes
