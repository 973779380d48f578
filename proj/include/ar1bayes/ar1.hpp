#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ar1bayes {

// Ordered real observations y_1..y_T.  Requires T >= 2 and finite values.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values);

  std::size_t length() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  // 0-based access: at(0) is y_1.
  double at(std::size_t i) const { return values_[i]; }

  // First n observations, n >= 2.
  TimeSeries prefix(std::size_t n) const;

  // Observations first..last inclusive, 0-based.
  TimeSeries window(std::size_t first, std::size_t last) const;

 private:
  std::vector<double> values_;
};

// y_t = phi * y_{t-1} + eps_t with Gaussian innovations; the constant
// term of the recursion is fixed at zero throughout.
struct Ar1Params {
  double phi;
  double sigma_eps2;
};

// Generates burn_in + length values starting from y_0 = 0 and discards
// the first burn_in.  Requires |phi| < 1 and length >= 2.
TimeSeries simulate(const Ar1Params& params, std::size_t length,
                    std::size_t burn_in, std::uint64_t seed);

// log of the likelihood conditional on y_1: sum over t = 2..T of the
// Gaussian log density of y_t - phi*y_{t-1}.
double conditional_log_likelihood(const TimeSeries& series, double phi,
                                  double sigma_eps2);

// Conditional log likelihood plus the stationary initial term
// log N(y_1; 0, sigma_eps2/(1-phi^2)).  Requires |phi| < 1.
double exact_log_likelihood(const TimeSeries& series, double phi,
                            double sigma_eps2);

// sxy = sum_{t=2..T} y_t y_{t-1},  sxx = sum_{t=2..T} y_{t-1}^2.
struct LagSums {
  double sxy;
  double sxx;
};
LagSums lag_sums(const TimeSeries& series);

}  // namespace ar1bayes
