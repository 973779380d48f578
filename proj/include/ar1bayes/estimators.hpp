#pragma once

#include <functional>
#include <string_view>

#include <ar1bayes/ar1.hpp>

namespace ar1bayes {

enum class Method { kMme, kCls, kMle, kCmle, kBe };

std::string_view method_name(Method m);

struct EstimatorResult {
  Method method;
  double estimate;
};

// Lag-1 sample autocorrelation with mean correction:
//   r1 = sum_{t=2..T}(y_t - ybar)(y_{t-1} - ybar) / sum_{t=1..T}(y_t - ybar)^2.
// Rejects constant series (zero denominator).
EstimatorResult mme(const TimeSeries& series);

// Regression-through-origin slope sxy/sxx, the analytic maximizer of the
// conditional likelihood in phi.  Not restricted to (-1,1).
EstimatorResult cls(const TimeSeries& series);

// Numerical maximizer of the exact log likelihood over (-1+1e-8, 1-1e-8).
EstimatorResult mle(const TimeSeries& series, double sigma_eps2 = 1.0,
                    double tol = 1e-8);

// Numerical maximizer of the conditional log likelihood over [-1.5, 1.5];
// agrees with cls up to optimizer tolerance.
EstimatorResult cmle(const TimeSeries& series, double sigma_eps2 = 1.0,
                     double tol = 1e-8);

// Maximizes a unimodal f on [lo, hi]: a 100-interval grid scan brackets
// the optimum, golden-section narrows the bracket to width tol.
double maximize_scalar(const std::function<double(double)>& f, double lo,
                       double hi, double tol);

}  // namespace ar1bayes
