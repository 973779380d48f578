#include <ar1bayes/diagnostics.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <ar1bayes/truncnorm.hpp>

namespace ar1bayes {

namespace {

// Finite-sample quantiles of the Dickey-Fuller distributions for the
// regression with intercept (single-mean case), Fuller (1976) Tables
// 8.5.1 and 8.5.2.  Rows are sample sizes 25, 50, 100, 250, 500, inf;
// columns are lower-tail probabilities.
constexpr std::array<double, 6> kTableN = {25, 50, 100, 250, 500, 1e9};
constexpr std::array<double, 8> kTableP = {0.01, 0.025, 0.05, 0.10,
                                           0.90, 0.95, 0.975, 0.99};

constexpr double kTauMu[6][8] = {
    {-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72},
    {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66},
    {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63},
    {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62},
    {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61},
    {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60}};

constexpr double kRhoMu[6][8] = {
    {-17.2, -14.6, -12.5, -10.2, -0.76, 0.01, 0.65, 1.40},
    {-18.9, -15.7, -13.3, -10.7, -0.81, -0.07, 0.53, 1.22},
    {-19.8, -16.3, -13.7, -11.0, -0.83, -0.10, 0.47, 1.14},
    {-20.3, -16.6, -14.0, -11.2, -0.84, -0.12, 0.43, 1.09},
    {-20.5, -16.8, -14.0, -11.2, -0.84, -0.13, 0.42, 1.06},
    {-20.7, -16.9, -14.1, -11.3, -0.85, -0.13, 0.41, 1.04}};

// Interpolates the table at the given effective sample size, then maps
// the statistic to a lower-tail probability.  Beyond the tabulated range
// the last segment is extrapolated linearly and clamped.
double df_table_p(const double table[6][8], double n_eff, double stat) {
  std::array<double, 8> row;
  if (n_eff <= kTableN.front()) {
    for (int j = 0; j < 8; ++j) row[j] = table[0][j];
  } else if (n_eff >= kTableN.back()) {
    for (int j = 0; j < 8; ++j) row[j] = table[5][j];
  } else {
    std::size_t i = 0;
    while (n_eff > kTableN[i + 1]) ++i;
    const double w = (n_eff - kTableN[i]) / (kTableN[i + 1] - kTableN[i]);
    for (int j = 0; j < 8; ++j) {
      row[j] = (1.0 - w) * table[i][j] + w * table[i + 1][j];
    }
  }

  // The rows increase with probability, so search the bracketing pair.
  std::size_t j = 0;
  if (stat >= row[7]) {
    j = 6;
  } else {
    while (j < 6 && stat > row[j + 1]) ++j;
  }
  const double slope = (kTableP[j + 1] - kTableP[j]) / (row[j + 1] - row[j]);
  const double p = kTableP[j] + slope * (stat - row[j]);
  return std::clamp(p, 1e-4, 0.9999);
}

struct PpRegression {
  double rho;
  double se_rho2;  // squared OLS standard error of rho
  double s2;       // residual variance, n - 2 degrees of freedom
  std::vector<double> resid;
};

PpRegression fit_mean_ar1(const std::vector<double>& y) {
  const std::size_t n = y.size() - 1;
  double sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
  for (std::size_t t = 1; t <= n; ++t) {
    const double x = y[t - 1];
    sx += x;
    sxx += x * x;
    sy += y[t];
    sxy += x * y[t];
  }
  const double nn = static_cast<double>(n);
  const double det = nn * sxx - sx * sx;
  if (!(det > 0.0)) {
    throw std::invalid_argument("phillips_perron: degenerate regression");
  }
  const double rho = (nn * sxy - sx * sy) / det;
  const double intercept = (sy - rho * sx) / nn;

  PpRegression fit;
  fit.rho = rho;
  fit.resid.resize(n);
  double ss = 0.0;
  for (std::size_t t = 1; t <= n; ++t) {
    const double u = y[t] - intercept - rho * y[t - 1];
    fit.resid[t - 1] = u;
    ss += u * u;
  }
  fit.s2 = ss / (nn - 2.0);
  fit.se_rho2 = fit.s2 * nn / det;
  return fit;
}

}  // namespace

std::vector<UnitRootResult> phillips_perron(const TimeSeries& series,
                                            std::size_t max_lag) {
  if (series.length() < max_lag + 10) {
    throw std::invalid_argument(
        "phillips_perron: series too short for the requested lag");
  }
  const auto& y = series.values();
  const PpRegression fit = fit_mean_ar1(y);
  const std::size_t n = fit.resid.size();
  const double nn = static_cast<double>(n);

  double gamma0 = 0.0;
  for (double u : fit.resid) gamma0 += u * u;
  gamma0 /= nn;

  std::vector<UnitRootResult> results;
  results.reserve(max_lag + 1);
  for (std::size_t q = 0; q <= max_lag; ++q) {
    // Newey-West long-run variance with Bartlett weights at truncation q.
    double lambda2 = gamma0;
    for (std::size_t j = 1; j <= q; ++j) {
      double gj = 0.0;
      for (std::size_t t = j; t < n; ++t) {
        gj += fit.resid[t] * fit.resid[t - j];
      }
      gj /= nn;
      lambda2 += 2.0 * (1.0 - static_cast<double>(j) / (q + 1.0)) * gj;
    }

    const double se_rho = std::sqrt(fit.se_rho2);
    const double t_rho = (fit.rho - 1.0) / se_rho;
    const double z_rho = nn * (fit.rho - 1.0) -
                         0.5 * (nn * nn * fit.se_rho2 / fit.s2) *
                             (lambda2 - gamma0);
    const double z_tau =
        std::sqrt(gamma0 / lambda2) * t_rho -
        0.5 * (lambda2 - gamma0) / std::sqrt(lambda2) * nn * se_rho /
            std::sqrt(fit.s2);

    UnitRootResult res;
    res.lag = q;
    res.rho_stat = z_rho;
    res.tau_stat = z_tau;
    res.rho_p = df_table_p(kRhoMu, nn, z_rho);
    res.tau_p = df_table_p(kTauMu, nn, z_tau);
    results.push_back(res);
  }
  return results;
}

std::vector<double> residuals(const TimeSeries& series, double phi_hat) {
  const auto& y = series.values();
  std::vector<double> e(y.size() - 1);
  for (std::size_t t = 1; t < y.size(); ++t) {
    e[t - 1] = y[t] - phi_hat * y[t - 1];
  }
  return e;
}

std::string_view normality_test_name(NormalityTest t) {
  switch (t) {
    case NormalityTest::kKolmogorovSmirnov:
      return "Kolmogorov-Smirnov";
    case NormalityTest::kCramerVonMises:
      return "Cramer-von Mises";
    case NormalityTest::kAndersonDarling:
      return "Anderson-Darling";
  }
  return "?";
}

namespace {

// P-value approximations for composite normality (mean and variance
// estimated): Dallal-Wilkinson plus the Stephens polynomial for the
// Lilliefors statistic, and the Stephens-modified asymptotic formulas for
// Cramer-von Mises and Anderson-Darling.

double lilliefors_p(double D, std::size_t n) {
  const double nd_raw = static_cast<double>(n);
  double Kd = D;
  double nd = nd_raw;
  if (n > 100) {
    Kd = D * std::pow(nd_raw / 100.0, 0.49);
    nd = 100.0;
  }
  double p = std::exp(-7.01256 * Kd * Kd * (nd + 2.78019) +
                      2.99587 * Kd * std::sqrt(nd + 2.78019) - 0.122119 +
                      0.974598 / std::sqrt(nd) + 1.67997 / nd);
  if (p > 0.1) {
    const double kk = (std::sqrt(nd_raw) - 0.01 + 0.85 / std::sqrt(nd_raw)) * D;
    if (kk <= 0.302) {
      p = 1.0;
    } else if (kk <= 0.5) {
      p = 2.76773 - 19.828315 * kk + 80.709644 * kk * kk -
          138.55152 * kk * kk * kk + 81.218052 * kk * kk * kk * kk;
    } else if (kk <= 0.9) {
      p = -4.901232 + 40.662806 * kk - 97.490286 * kk * kk +
          94.029866 * kk * kk * kk - 32.355711 * kk * kk * kk * kk;
    } else if (kk <= 1.31) {
      p = 6.198765 - 19.558097 * kk + 23.186922 * kk * kk -
          12.234627 * kk * kk * kk + 2.423045 * kk * kk * kk * kk;
    } else {
      p = 0.0;
    }
  }
  return std::clamp(p, 0.0, 1.0);
}

double cvm_p(double W, std::size_t n) {
  const double ww = (1.0 + 0.5 / static_cast<double>(n)) * W;
  double p;
  if (ww < 0.0275) {
    p = 1.0 - std::exp(-13.953 + 775.5 * ww - 12542.61 * ww * ww);
  } else if (ww < 0.051) {
    p = 1.0 - std::exp(-5.903 + 179.546 * ww - 1515.29 * ww * ww);
  } else if (ww < 0.092) {
    p = std::exp(0.886 - 31.62 * ww + 10.897 * ww * ww);
  } else if (ww < 1.1) {
    p = std::exp(1.111 - 34.242 * ww + 12.832 * ww * ww);
  } else {
    p = 7.37e-10;
  }
  return std::clamp(p, 0.0, 1.0);
}

double ad_p(double A, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double aa = (1.0 + 0.75 / nn + 2.25 / (nn * nn)) * A;
  double p;
  if (aa < 0.2) {
    p = 1.0 - std::exp(-13.436 + 101.14 * aa - 223.73 * aa * aa);
  } else if (aa < 0.34) {
    p = 1.0 - std::exp(-8.318 + 42.796 * aa - 59.938 * aa * aa);
  } else if (aa < 0.6) {
    p = std::exp(0.9177 - 4.279 * aa - 1.38 * aa * aa);
  } else if (aa < 10.0) {
    p = std::exp(1.2937 - 5.709 * aa + 0.0186 * aa * aa);
  } else {
    p = 3.7e-24;
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

std::vector<NormalityResult> normality_tests(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 8) {
    throw std::invalid_argument("normality_tests: need at least 8 observations");
  }
  double mean = 0.0;
  for (double x : sample) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  if (!(ss > 0.0)) {
    throw std::invalid_argument("normality_tests: zero-variance sample");
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  std::vector<double> z(sample.begin(), sample.end());
  for (double& x : z) x = (x - mean) / sd;
  std::sort(z.begin(), z.end());

  const double nn = static_cast<double>(n);
  double d_plus = 0.0, d_minus = 0.0, w2 = 1.0 / (12.0 * nn), a2_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std_normal_cdf(z[i]);
    const double fi = static_cast<double>(i + 1);
    d_plus = std::max(d_plus, fi / nn - p);
    d_minus = std::max(d_minus, p - (fi - 1.0) / nn);
    const double diff = p - (2.0 * fi - 1.0) / (2.0 * nn);
    w2 += diff * diff;
    a2_sum += (2.0 * fi - 1.0) *
              (std_normal_logcdf(z[i]) + std_normal_logcdf(-z[n - 1 - i]));
  }
  const double D = std::max(d_plus, d_minus);
  const double A2 = -nn - a2_sum / nn;

  return {
      {NormalityTest::kKolmogorovSmirnov, D, lilliefors_p(D, n)},
      {NormalityTest::kCramerVonMises, w2, cvm_p(w2, n)},
      {NormalityTest::kAndersonDarling, A2, ad_p(A2, n)},
  };
}

}  // namespace ar1bayes
