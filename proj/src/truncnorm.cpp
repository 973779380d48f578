#include <ar1bayes/truncnorm.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ar1bayes {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSqrt2Pi = 2.50662827463100050242;
constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

double std_normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double std_normal_ccdf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double std_normal_logcdf(double x) {
  if (x > -37.0) {
    return std::log(std_normal_cdf(x));
  }
  // Mills-ratio asymptote for the deep lower tail, where erfc underflows:
  // Phi(x) ~ phi(x)/|x| * (1 - 1/x^2 + 3/x^4).
  const double x2 = x * x;
  return -0.5 * x2 - std::log(-x * kSqrt2Pi) +
         std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

double normal_cdf_diff(double lo, double hi) {
  if (lo >= 0.0) return std_normal_ccdf(lo) - std_normal_ccdf(hi);
  if (hi <= 0.0) return std_normal_cdf(hi) - std_normal_cdf(lo);
  return std_normal_cdf(hi) - std_normal_cdf(lo);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("std_normal_quantile: p must be in (0,1)");
  }

  // Acklam's rational approximation, then one Halley refinement against
  // the erfc-based cdf; the result is accurate to a few ulps.
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double err = std_normal_cdf(x) - p;
  const double u = err * kSqrt2Pi * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

TruncatedNormal::TruncatedNormal(double d, double sigma, double a, double b)
    : d_(d), sigma_(sigma), a_(a), b_(b) {
  if (!std::isfinite(d) || !std::isfinite(sigma) || !std::isfinite(a) ||
      !std::isfinite(b)) {
    throw std::invalid_argument("TruncatedNormal: parameters must be finite");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("TruncatedNormal: sigma must be positive");
  }
  if (!(a < b)) {
    throw std::invalid_argument("TruncatedNormal: requires a < b");
  }
  alpha_ = (a - d) / sigma;
  beta_ = (b - d) / sigma;
  normalizer_ = normal_cdf_diff(alpha_, beta_);
  if (!(normalizer_ > 0.0)) {
    throw std::invalid_argument(
        "TruncatedNormal: truncation interval carries no probability mass");
  }
}

double TruncatedNormal::pdf(double x) const {
  if (x < a_ || x > b_) return 0.0;
  const double xi = (x - d_) / sigma_;
  return std_normal_pdf(xi) / (sigma_ * normalizer_);
}

double TruncatedNormal::cdf(double x) const {
  if (x <= a_) return 0.0;
  if (x >= b_) return 1.0;
  const double xi = (x - d_) / sigma_;
  const double p = normal_cdf_diff(alpha_, xi) / normalizer_;
  return std::min(1.0, std::max(0.0, p));
}

double TruncatedNormal::quantile(double p) const {
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    throw std::invalid_argument("TruncatedNormal::quantile: p must be in [0,1]");
  }
  if (p == 0.0) return a_;
  if (p == 1.0) return b_;

  // Analytic start: invert Phi at the matching parent-tail mass, staying
  // in whichever tail keeps precision.
  double x;
  if (alpha_ >= 0.0) {
    const double uc = std_normal_ccdf(alpha_) - p * normalizer_;
    if (uc > 0.0 && uc < 1.0) {
      x = d_ - sigma_ * std_normal_quantile(uc);
    } else {
      x = 0.5 * (a_ + b_);
    }
  } else {
    const double u = std_normal_cdf(alpha_) + p * normalizer_;
    if (u > 0.0 && u < 1.0) {
      x = d_ + sigma_ * std_normal_quantile(u);
    } else {
      x = 0.5 * (a_ + b_);
    }
  }
  if (!(x >= a_ && x <= b_)) x = 0.5 * (a_ + b_);

  // Safeguarded Newton on cdf(x) - p with a shrinking bisection bracket.
  double lo = a_;
  double hi = b_;
  const double xtol = 1e-14 * std::max({1.0, std::abs(a_), std::abs(b_)});
  for (int it = 0; it < 100; ++it) {
    const double err = cdf(x) - p;
    if (err > 0.0) {
      hi = x;
    } else if (err < 0.0) {
      lo = x;
    } else {
      return x;
    }
    if (std::abs(err) < 1e-15 || hi - lo < xtol) break;
    const double deriv = pdf(x);
    double next = (deriv > 0.0) ? x - err / deriv
                                : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return std::min(b_, std::max(a_, x));
}

double TruncatedNormal::mean() const {
  const double ratio =
      (std_normal_pdf(alpha_) - std_normal_pdf(beta_)) / normalizer_;
  return d_ + sigma_ * ratio;
}

double TruncatedNormal::variance() const {
  // alpha*phi(alpha) -> 0 as |alpha| -> inf, so the underflowed products
  // are already correct.
  const double t1 =
      (alpha_ * std_normal_pdf(alpha_) - beta_ * std_normal_pdf(beta_)) /
      normalizer_;
  const double t2 =
      (std_normal_pdf(alpha_) - std_normal_pdf(beta_)) / normalizer_;
  return sigma_ * sigma_ * (1.0 + t1 - t2 * t2);
}

double TruncatedNormal::sample(Rng& rng) const { return quantile(rng.uniform()); }

}  // namespace ar1bayes
