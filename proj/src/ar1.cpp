#include <ar1bayes/ar1.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <ar1bayes/rng.hpp>

namespace ar1bayes {

namespace {

constexpr double kLog2Pi = 1.83787706640934548356;

void check_sigma(double sigma_eps2) {
  if (!(sigma_eps2 > 0.0)) {
    throw std::invalid_argument("sigma_eps2 must be positive");
  }
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw std::invalid_argument("TimeSeries: need at least 2 observations");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("TimeSeries: observations must be finite");
    }
  }
}

TimeSeries TimeSeries::prefix(std::size_t n) const {
  if (n > values_.size()) {
    throw std::invalid_argument("TimeSeries::prefix: n exceeds length");
  }
  return TimeSeries(std::vector<double>(values_.begin(), values_.begin() + n));
}

TimeSeries TimeSeries::window(std::size_t first, std::size_t last) const {
  if (first > last || last >= values_.size()) {
    throw std::invalid_argument("TimeSeries::window: bad range");
  }
  return TimeSeries(
      std::vector<double>(values_.begin() + first, values_.begin() + last + 1));
}

TimeSeries simulate(const Ar1Params& params, std::size_t length,
                    std::size_t burn_in, std::uint64_t seed) {
  if (!(std::abs(params.phi) < 1.0)) {
    throw std::invalid_argument("simulate: |phi| < 1 required (stationarity)");
  }
  check_sigma(params.sigma_eps2);
  if (length < 2) {
    throw std::invalid_argument("simulate: length must be at least 2");
  }
  Rng rng(seed);
  const double sd = std::sqrt(params.sigma_eps2);
  std::vector<double> values;
  values.reserve(length);
  double y = 0.0;
  for (std::size_t t = 0; t < burn_in + length; ++t) {
    y = params.phi * y + sd * rng.normal();
    if (t >= burn_in) values.push_back(y);
  }
  return TimeSeries(std::move(values));
}

double conditional_log_likelihood(const TimeSeries& series, double phi,
                                  double sigma_eps2) {
  check_sigma(sigma_eps2);
  const auto& y = series.values();
  double ss = 0.0;
  for (std::size_t t = 1; t < y.size(); ++t) {
    const double r = y[t] - phi * y[t - 1];
    ss += r * r;
  }
  const double n = static_cast<double>(y.size() - 1);
  return -0.5 * n * (kLog2Pi + std::log(sigma_eps2)) - ss / (2.0 * sigma_eps2);
}

double exact_log_likelihood(const TimeSeries& series, double phi,
                            double sigma_eps2) {
  if (!(std::abs(phi) < 1.0)) {
    throw std::invalid_argument(
        "exact_log_likelihood: |phi| < 1 required for the stationary initial "
        "distribution");
  }
  const double one_minus_phi2 = 1.0 - phi * phi;
  const double y1 = series.values().front();
  const double initial =
      -0.5 * (kLog2Pi + std::log(sigma_eps2 / one_minus_phi2)) -
      y1 * y1 * one_minus_phi2 / (2.0 * sigma_eps2);
  return conditional_log_likelihood(series, phi, sigma_eps2) + initial;
}

LagSums lag_sums(const TimeSeries& series) {
  const auto& y = series.values();
  LagSums s{0.0, 0.0};
  for (std::size_t t = 1; t < y.size(); ++t) {
    s.sxy += y[t] * y[t - 1];
    s.sxx += y[t - 1] * y[t - 1];
  }
  return s;
}

}  // namespace ar1bayes
