#include <ar1bayes/experiments.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ar1bayes {

std::string_view prior_name(PriorKind kind) {
  switch (kind) {
    case PriorKind::kJeffreys:
      return "Jeffreys";
    case PriorKind::kG:
      return "G";
    case PriorKind::kNc:
      return "NC";
    case PriorKind::kTn:
      return "TN";
  }
  return "?";
}

SimulationConfig default_comparison_config() {
  SimulationConfig c;
  c.phi_grid = {-0.9, -0.5, 0.0, 0.5, 0.9};
  c.lengths = {30, 100};
  c.replications = 1;
  return c;
}

SimulationConfig default_sensitivity_config() {
  SimulationConfig c;
  c.phi_grid = {-0.2, 0.2, -0.5, 0.5, -0.8, 0.8};
  c.lengths = {30, 50, 100, 200, 500};
  c.replications = 500;
  return c;
}

SimulationConfig default_bias_config() {
  SimulationConfig c;
  c.phi_grid = {0.5};
  c.lengths = {30};
  c.replications = 1;
  return c;
}

std::size_t training_size(std::size_t series_length) {
  return std::max<std::size_t>(10, (series_length + 9) / 10);
}

Hyperparams training_hyperparams(const TimeSeries& series, double sigma_eps2) {
  if (series.length() < 12) {
    throw std::invalid_argument(
        "training_hyperparams: need at least 12 observations");
  }
  const TimeSeries prefix = series.prefix(training_size(series.length()));
  const LagSums s = lag_sums(prefix);
  if (!(s.sxx > 0.0)) {
    throw std::invalid_argument(
        "training_hyperparams: degenerate training prefix");
  }
  const double d = std::clamp(s.sxy / s.sxx, -0.999, 0.999);
  const double sigma_phi2 = std::max(sigma_eps2 / s.sxx, 1e-4);
  return {d, sigma_phi2};
}

namespace {

// Runs fn(worker, r) for r in [0, count), with workers 0..nworkers-1 each
// owning a disjoint stride of indices.  Results keyed by r are identical
// at any thread count.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(unsigned, std::size_t)>& fn) {
  const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(
      std::max(1u, threads), std::max<std::size_t>(1, count)));
  if (nt <= 1) {
    for (std::size_t r = 0; r < count; ++r) fn(0, r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (unsigned k = 0; k < nt; ++k) {
    pool.emplace_back([&, k] {
      for (std::size_t r = k; r < count; r += nt) fn(k, r);
    });
  }
  for (auto& t : pool) t.join();
}

// The Bayes estimator of the comparison studies: hyperparameters from the
// series prefix, posterior on the data selected by the training source.
double trained_be(const TimeSeries& series, const SimulationConfig& config) {
  const Hyperparams hp = training_hyperparams(series, config.sigma_eps2);
  if (config.training == TrainingSource::kSplit) {
    const std::size_t m = training_size(series.length());
    const TimeSeries window = series.window(m - 1, series.length() - 1);
    return bayes_estimator(window, config.sigma_eps2, hp.d, hp.sigma_phi2)
        .estimate;
  }
  return bayes_estimator(series, config.sigma_eps2, hp.d, hp.sigma_phi2)
      .estimate;
}

std::array<std::optional<double>, 5> estimate_all(
    const TimeSeries& series, const SimulationConfig& config) {
  std::array<std::optional<double>, 5> out;
  const auto attempt = [&](std::size_t idx, auto&& fn) {
    try {
      out[idx] = fn();
    } catch (const std::invalid_argument&) {
      out[idx] = std::nullopt;
    }
  };
  attempt(0, [&] { return mme(series).estimate; });
  attempt(1, [&] { return cls(series).estimate; });
  attempt(2, [&] { return mle(series, config.sigma_eps2).estimate; });
  attempt(3, [&] { return cmle(series, config.sigma_eps2).estimate; });
  attempt(4, [&] { return trained_be(series, config); });
  return out;
}

void validate(const SimulationConfig& config) {
  if (config.phi_grid.empty()) {
    throw std::invalid_argument("simulation config: empty phi grid");
  }
  for (double phi : config.phi_grid) {
    if (!(std::abs(phi) < 1.0)) {
      throw std::invalid_argument("simulation config: phi grid must be stationary");
    }
  }
  if (config.lengths.empty()) {
    throw std::invalid_argument("simulation config: empty length list");
  }
  if (config.replications == 0) {
    throw std::invalid_argument("simulation config: replications must be >= 1");
  }
  if (!(config.sigma_eps2 > 0.0)) {
    throw std::invalid_argument("simulation config: sigma_eps2 must be positive");
  }
  if (config.priors.empty()) {
    throw std::invalid_argument("simulation config: empty prior list");
  }
}

}  // namespace

std::vector<ComparisonRow> run_estimator_comparison(
    const SimulationConfig& config) {
  validate(config);
  std::vector<ComparisonRow> rows;
  for (std::size_t length : config.lengths) {
    for (double phi : config.phi_grid) {
      // Per-replication results in a fixed layout, then a sequential
      // reduction: the averaged table does not depend on thread count.
      std::vector<std::array<std::optional<double>, 5>> reps(
          config.replications);
      parallel_for(config.replications, config.threads,
                   [&](unsigned, std::size_t r) {
                     const TimeSeries series =
                         simulate({phi, config.sigma_eps2}, length,
                                  config.burn_in, config.base_seed + r);
                     reps[r] = estimate_all(series, config);
                   });

      ComparisonRow row{phi, length, {}};
      for (std::size_t k = 0; k < 5; ++k) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& rep : reps) {
          if (rep[k]) {
            sum += *rep[k];
            ++n;
          }
        }
        if (n > 0) row.estimates[k] = sum / static_cast<double>(n);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<BiasRow> run_bias_study(const SimulationConfig& config,
                                    std::size_t repeats) {
  validate(config);
  if (config.phi_grid.size() != 1) {
    throw std::invalid_argument("run_bias_study: exactly one phi value expected");
  }
  if (repeats == 0) {
    throw std::invalid_argument("run_bias_study: repeats must be >= 1");
  }
  const double phi = config.phi_grid.front();
  const std::size_t length = config.lengths.front();

  std::vector<std::array<std::optional<double>, 5>> reps(repeats);
  parallel_for(repeats, config.threads, [&](unsigned, std::size_t r) {
    const TimeSeries series = simulate({phi, config.sigma_eps2}, length,
                                       config.burn_in, config.base_seed + r);
    reps[r] = estimate_all(series, config);
  });

  constexpr Method kMethods[5] = {Method::kMme, Method::kCls, Method::kMle,
                                  Method::kCmle, Method::kBe};
  std::vector<BiasRow> rows;
  for (std::size_t r = 0; r < repeats; ++r) {
    for (std::size_t k = 0; k < 5; ++k) {
      if (reps[r][k]) {
        rows.push_back({r, kMethods[k], std::abs(*reps[r][k] - phi)});
      }
    }
  }
  return rows;
}

double CoverageCell::percentage() const {
  return coverage_percentage(hits, valid);
}

const CoverageCell& CoverageReport::cell(std::size_t prior_idx,
                                         std::size_t length_idx,
                                         std::size_t phi_idx) const {
  return cells[(prior_idx * lengths.size() + length_idx) * phis.size() +
               phi_idx];
}

CoverageCell& CoverageReport::cell(std::size_t prior_idx,
                                   std::size_t length_idx,
                                   std::size_t phi_idx) {
  return cells[(prior_idx * lengths.size() + length_idx) * phis.size() +
               phi_idx];
}

CoverageReport run_sensitivity_study(const SimulationConfig& config) {
  validate(config);

  CoverageReport report;
  report.priors = config.priors;
  report.lengths = config.lengths;
  report.phis = config.phi_grid;
  report.replications = config.replications;
  report.interval_prob = config.interval_prob;
  report.cells.assign(
      config.priors.size() * config.lengths.size() * config.phi_grid.size(),
      CoverageCell{});

  const std::size_t retained =
      *std::max_element(config.lengths.begin(), config.lengths.end());

  struct Tally {
    std::vector<std::size_t> hits;
    std::vector<std::size_t> valid;
  };
  const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(
      std::max(1u, config.threads),
      std::max<std::size_t>(1, config.replications)));
  std::vector<Tally> tallies(
      nt, Tally{std::vector<std::size_t>(report.cells.size(), 0),
                std::vector<std::size_t>(report.cells.size(), 0)});

  const auto cell_index = [&](std::size_t p, std::size_t l, std::size_t f) {
    return (p * config.lengths.size() + l) * config.phi_grid.size() + f;
  };

  parallel_for(config.replications, nt, [&](unsigned worker, std::size_t r) {
    Tally& tally = tallies[worker];
    for (std::size_t fi = 0; fi < config.phi_grid.size(); ++fi) {
      const double phi = config.phi_grid[fi];
      const TimeSeries full = simulate({phi, config.sigma_eps2}, retained,
                                       config.burn_in, config.base_seed + r);
      for (std::size_t li = 0; li < config.lengths.size(); ++li) {
        const std::size_t n = config.lengths[li];
        const TimeSeries prefix = full.prefix(n);

        std::optional<Hyperparams> hp;
        std::optional<TimeSeries> window;
        try {
          hp = training_hyperparams(prefix, config.sigma_eps2);
          if (config.training == TrainingSource::kSplit) {
            window = prefix.window(training_size(n) - 1, n - 1);
          } else {
            window = prefix;
          }
        } catch (const std::invalid_argument&) {
          // Degenerate prefix: every prior's cell is excluded below.
        }

        for (std::size_t pi = 0; pi < config.priors.size(); ++pi) {
          if (!window) continue;
          const std::size_t likelihood_terms = window->length() - 1;
          PriorSpec prior;
          switch (config.priors[pi]) {
            case PriorKind::kJeffreys:
              prior = JeffreysPrior{};
              break;
            case PriorKind::kG:
              prior = GPrior{config.g_value.value_or(
                                 static_cast<double>(likelihood_terms)),
                             0.0};
              break;
            case PriorKind::kNc:
              prior = NcPrior{hp->d, hp->sigma_phi2};
              break;
            case PriorKind::kTn:
              prior = TnPrior{hp->d, hp->sigma_phi2};
              break;
          }
          try {
            const PosteriorSummary post =
                posterior_for_prior(*window, config.sigma_eps2, prior);
            const Interval iv = centered_interval(post, config.interval_prob);
            const std::size_t idx = cell_index(pi, li, fi);
            tally.valid[idx] += 1;
            if (phi >= iv.lo && phi <= iv.hi) tally.hits[idx] += 1;
          } catch (const std::invalid_argument&) {
            // Excluded replication: valid not incremented.
          }
        }
      }
    }
  });

  for (const Tally& tally : tallies) {
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
      report.cells[i].hits += tally.hits[i];
      report.cells[i].valid += tally.valid[i];
    }
  }
  return report;
}

}  // namespace ar1bayes
