#include <ar1bayes/rng.hpp>

#include <ar1bayes/truncnorm.hpp>

namespace ar1bayes {

double Rng::normal() { return std_normal_quantile(uniform()); }

}  // namespace ar1bayes
