#include <ar1bayes/estimators.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ar1bayes {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kMme:
      return "MME";
    case Method::kCls:
      return "CLS";
    case Method::kMle:
      return "MLE";
    case Method::kCmle:
      return "CMLE";
    case Method::kBe:
      return "BE";
  }
  return "?";
}

EstimatorResult mme(const TimeSeries& series) {
  const auto& y = series.values();
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());

  double num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double c = y[t] - mean;
    den += c * c;
    if (t > 0) num += c * (y[t - 1] - mean);
  }
  if (!(den > 0.0)) {
    throw std::invalid_argument("mme: constant series (zero sample variance)");
  }
  return {Method::kMme, num / den};
}

EstimatorResult cls(const TimeSeries& series) {
  const LagSums s = lag_sums(series);
  if (!(s.sxx > 0.0)) {
    throw std::invalid_argument("cls: zero lagged sum of squares");
  }
  return {Method::kCls, s.sxy / s.sxx};
}

double maximize_scalar(const std::function<double(double)>& f, double lo,
                       double hi, double tol) {
  // Grid scan to bracket the optimum, guarding against flat stretches or
  // spurious side lobes.
  constexpr int kGrid = 100;
  double best_x = lo;
  double best_f = f(lo);
  for (int i = 1; i <= kGrid; ++i) {
    const double x = lo + (hi - lo) * i / kGrid;
    const double fx = f(x);
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  const double h = (hi - lo) / kGrid;
  double a = std::max(lo, best_x - h);
  double b = std::min(hi, best_x + h);

  constexpr double kInvGolden = 0.61803398874989484820;
  double c = b - kInvGolden * (b - a);
  double d = a + kInvGolden * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvGolden * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

EstimatorResult mle(const TimeSeries& series, double sigma_eps2, double tol) {
  constexpr double kEdge = 1e-8;
  const double est = maximize_scalar(
      [&](double phi) { return exact_log_likelihood(series, phi, sigma_eps2); },
      -1.0 + kEdge, 1.0 - kEdge, tol);
  return {Method::kMle, est};
}

EstimatorResult cmle(const TimeSeries& series, double sigma_eps2, double tol) {
  const LagSums s = lag_sums(series);
  if (!(s.sxx > 0.0)) {
    throw std::invalid_argument("cmle: zero lagged sum of squares");
  }
  const double est = maximize_scalar(
      [&](double phi) {
        return conditional_log_likelihood(series, phi, sigma_eps2);
      },
      -1.5, 1.5, tol);
  return {Method::kCmle, est};
}

}  // namespace ar1bayes
