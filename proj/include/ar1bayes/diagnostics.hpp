#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <ar1bayes/ar1.hpp>

namespace ar1bayes {

struct UnitRootResult {
  std::size_t lag;
  double rho_stat;  // Z_rho
  double tau_stat;  // Z_tau
  double rho_p;     // table-interpolated approximation in [0,1]
  double tau_p;
};

// Phillips-Perron unit root test, single-mean variant: first-order
// autoregression with intercept, Newey-West (Bartlett) long-run variance
// at each lag truncation 0..max_lag, p-values interpolated from embedded
// Dickey-Fuller tables.  Requires length >= max_lag + 10.
std::vector<UnitRootResult> phillips_perron(const TimeSeries& series,
                                            std::size_t max_lag);

// e_t = y_t - phi_hat * y_{t-1} for t = 2..T.
std::vector<double> residuals(const TimeSeries& series, double phi_hat);

enum class NormalityTest { kKolmogorovSmirnov, kCramerVonMises, kAndersonDarling };

std::string_view normality_test_name(NormalityTest t);

struct NormalityResult {
  NormalityTest test;
  double statistic;
  double p_value;  // estimated-parameter approximation in [0,1]
};

// KS D, Cramer-von Mises W^2 and Anderson-Darling A^2 of the sample
// standardized by its own mean and standard deviation, against the
// standard normal.  P-values use the estimated-parameter (Lilliefors /
// Stephens) approximations.  Requires length >= 8 and nonzero variance.
std::vector<NormalityResult> normality_tests(std::span<const double> sample);

}  // namespace ar1bayes
