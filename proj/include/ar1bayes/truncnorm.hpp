#pragma once

#include <ar1bayes/rng.hpp>

namespace ar1bayes {

double std_normal_pdf(double x);

// Phi(x).  Absolute error below 1e-14 over the whole real line.
double std_normal_cdf(double x);

// 1 - Phi(x) with full relative precision in the upper tail.
double std_normal_ccdf(double x);

// log Phi(x), stable arbitrarily deep in the lower tail.
double std_normal_logcdf(double x);

// Inverse of std_normal_cdf.  Rejects p outside the open interval (0,1).
double std_normal_quantile(double p);

// Phi(hi) - Phi(lo) computed through whichever tail keeps relative
// precision when both arguments lie on the same side of zero.
double normal_cdf_diff(double lo, double hi);

// Normal distribution with location d and scale sigma, truncated to
// [a, b] and renormalized.
class TruncatedNormal {
 public:
  // Requires sigma > 0, a < b, and a strictly positive normalizer
  // Phi((b-d)/sigma) - Phi((a-d)/sigma); throws std::invalid_argument
  // otherwise.
  TruncatedNormal(double d, double sigma, double a, double b);

  double location() const { return d_; }
  double scale() const { return sigma_; }
  double lower() const { return a_; }
  double upper() const { return b_; }
  double normalizer() const { return normalizer_; }

  double pdf(double x) const;       // 0 outside [a, b]
  double cdf(double x) const;       // 0 below a, 1 above b
  double quantile(double p) const;  // p in [0,1]; quantile(0)=a, quantile(1)=b
  double mean() const;
  double variance() const;

  // Inverse-cdf transform of one uniform draw; always lands in [a, b].
  double sample(Rng& rng) const;

 private:
  double d_;
  double sigma_;
  double a_;
  double b_;
  double alpha_;       // (a - d) / sigma
  double beta_;        // (b - d) / sigma
  double normalizer_;  // Phi(beta) - Phi(alpha)
};

}  // namespace ar1bayes
