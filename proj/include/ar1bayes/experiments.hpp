#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <ar1bayes/bayes.hpp>

namespace ar1bayes {

// Column order of the sensitivity tables.
enum class PriorKind { kJeffreys, kG, kNc, kTn };
inline constexpr std::array<PriorKind, 4> kAllPriors = {
    PriorKind::kJeffreys, PriorKind::kG, PriorKind::kNc, PriorKind::kTn};

std::string_view prior_name(PriorKind kind);

// Where the prior hyperparameters come from, relative to the analyzed
// series.
//
//  kSplit: the training prefix sets (d, sigma_phi2) and the posterior is
//    evaluated on the remaining observations, conditioning on the last
//    training value as the first lag.  Prior and likelihood then use
//    disjoint information.
//  kSharedPrefix: the training prefix sets the hyperparameters and the
//    posterior reuses the whole series, training prefix included.
enum class TrainingSource { kSplit, kSharedPrefix };

struct SimulationConfig {
  std::vector<double> phi_grid;
  std::vector<std::size_t> lengths;
  std::size_t replications = 500;
  std::size_t burn_in = 200;
  double sigma_eps2 = 1.0;
  std::uint64_t base_seed = 907;
  std::vector<PriorKind> priors{kAllPriors.begin(), kAllPriors.end()};
  // Unset: g equals the number of likelihood terms (unit information).
  std::optional<double> g_value;
  double interval_prob = 0.95;
  TrainingSource training = TrainingSource::kSplit;
  unsigned threads = 1;
};

SimulationConfig default_comparison_config();
SimulationConfig default_sensitivity_config();
SimulationConfig default_bias_config();

// Training prefix size for a series of length n: max(10, ceil(0.10*n)).
std::size_t training_size(std::size_t series_length);

struct Hyperparams {
  double d;
  double sigma_phi2;
};

// Fits the prior on the training prefix: d is the CLS estimate clamped to
// [-0.999, 0.999] and sigma_phi2 its sampling variance
// sigma_eps2 / sum y_{t-1}^2, floored at 1e-4.  Requires length >= 12.
Hyperparams training_hyperparams(const TimeSeries& series, double sigma_eps2);

struct ComparisonRow {
  double phi;
  std::size_t length;
  // Indexed by Method order MME, CLS, MLE, CMLE, BE; nullopt marks a
  // failed cell.
  std::array<std::optional<double>, 5> estimates;
};

// One row per (phi, T).  With replications == 1 each cell is a single
// seeded run; otherwise cells are averaged over replications.
std::vector<ComparisonRow> run_estimator_comparison(
    const SimulationConfig& config);

struct BiasRow {
  std::size_t repeat;
  Method method;
  double abs_bias;
};

// Long-format |estimate - phi| per repeat and method for the single phi
// and length in the config.
std::vector<BiasRow> run_bias_study(const SimulationConfig& config,
                                    std::size_t repeats = 10);

struct CoverageCell {
  std::size_t hits = 0;
  std::size_t valid = 0;  // replications that produced an interval
  double percentage() const;
};

struct CoverageReport {
  std::vector<PriorKind> priors;
  std::vector<std::size_t> lengths;
  std::vector<double> phis;
  std::size_t replications = 0;
  double interval_prob = 0.95;
  std::vector<CoverageCell> cells;  // prior-major, then length, then phi

  const CoverageCell& cell(std::size_t prior_idx, std::size_t length_idx,
                           std::size_t phi_idx) const;
  CoverageCell& cell(std::size_t prior_idx, std::size_t length_idx,
                     std::size_t phi_idx);
};

// The four-prior coverage study: per replication and phi, one simulated
// series; per length n, hyperparameters from the n-prefix and a centered
// interval per prior; a hit when the true phi falls inside.
CoverageReport run_sensitivity_study(const SimulationConfig& config);

}  // namespace ar1bayes
