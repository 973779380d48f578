#include <ar1bayes/cli.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <ar1bayes/bayes.hpp>
#include <ar1bayes/diagnostics.hpp>
#include <ar1bayes/version.hpp>

namespace ar1bayes::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v, int precision) {
  char buf[64];
  if (precision <= 0) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  }
  return buf;
}

// Short exact form for identifier columns and file names.
std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  if (line.find(',') != std::string::npos) {
    std::string tok;
    std::stringstream ss(line);
    while (std::getline(ss, tok, ',')) {
      const auto b = tok.find_first_not_of(" \t");
      const auto e = tok.find_last_not_of(" \t");
      tokens.push_back(b == std::string::npos ? ""
                                              : tok.substr(b, e - b + 1));
    }
  } else {
    std::string tok;
    std::stringstream ss(line);
    while (ss >> tok) tokens.push_back(tok);
  }
  return tokens;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

TimeSeries read_series_file(const fs::path& path, int column) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open input file: " + path.string());
  }
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  bool may_be_header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    const std::vector<std::string> tokens = split_tokens(line);
    std::size_t idx;
    if (column <= 0) {
      idx = tokens.size() - 1;
    } else {
      idx = static_cast<std::size_t>(column - 1);
      if (idx >= tokens.size()) {
        throw DataError(path.string() + ":" + std::to_string(lineno) +
                        ": line has only " + std::to_string(tokens.size()) +
                        " column(s)");
      }
    }
    double v;
    if (!parse_double(tokens[idx], v)) {
      if (may_be_header) {  // a single leading header row is accepted
        may_be_header = false;
        continue;
      }
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": cannot parse '" + tokens[idx] + "' as a number");
    }
    if (!std::isfinite(v)) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": non-finite observation");
    }
    values.push_back(v);
    may_be_header = false;
  }
  if (values.size() < 2) {
    throw DataError(path.string() + ": need at least 2 observations, got " +
                    std::to_string(values.size()));
  }
  return TimeSeries(std::move(values));
}

ConfigFile ConfigFile::parse(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open config file: " + path.string());
  }
  ConfigFile cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    cfg.entries.emplace_back(trim(line.substr(0, eq)),
                             trim(line.substr(eq + 1)));
  }
  return cfg;
}

const std::string* ConfigFile::find(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

std::vector<double> parse_double_list(const std::string& s, const char* key) {
  std::vector<double> out;
  for (const std::string& tok : split_tokens(s)) {
    double v;
    if (!parse_double(tok, v)) {
      throw UsageError(std::string("config key '") + key +
                       "': cannot parse '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<PriorKind> parse_prior_list(const std::string& s) {
  std::vector<PriorKind> out;
  for (std::string tok : split_tokens(s)) {
    std::transform(tok.begin(), tok.end(), tok.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (tok == "jeffreys") {
      out.push_back(PriorKind::kJeffreys);
    } else if (tok == "g") {
      out.push_back(PriorKind::kG);
    } else if (tok == "nc") {
      out.push_back(PriorKind::kNc);
    } else if (tok == "tn") {
      out.push_back(PriorKind::kTn);
    } else {
      throw UsageError("unknown prior '" + tok +
                       "' (expected jeffreys, g, nc or tn)");
    }
  }
  return out;
}

void check_grid(const SimulationConfig& c) {
  if (c.phi_grid.empty()) throw UsageError("empty grid of phi values");
  for (double phi : c.phi_grid) {
    if (!(std::abs(phi) < 1.0)) {
      throw UsageError("stationarity violated: phi grid value " +
                       fmt_short(phi) + " is outside (-1,1)");
    }
  }
  if (c.lengths.empty()) throw UsageError("empty grid of series lengths");
  for (std::size_t n : c.lengths) {
    if (n < 2) throw UsageError("series lengths must be at least 2");
  }
  if (c.replications == 0) throw UsageError("replications must be at least 1");
  if (!(c.sigma_eps2 > 0.0)) throw UsageError("sigma2 must be positive");
  if (!(c.interval_prob > 0.0 && c.interval_prob < 1.0)) {
    throw UsageError("prob must lie strictly between 0 and 1");
  }
  if (c.priors.empty()) throw UsageError("empty prior list");
}

}  // namespace

SimulationConfig load_simulation_config(const fs::path& path,
                                        const SimulationConfig& defaults) {
  const ConfigFile cfg = ConfigFile::parse(path);
  SimulationConfig out = defaults;
  for (const auto& [key, value] : cfg.entries) {
    if (key == "phi_grid") {
      out.phi_grid = parse_double_list(value, "phi_grid");
    } else if (key == "lengths") {
      out.lengths.clear();
      for (double v : parse_double_list(value, "lengths")) {
        if (v < 2 || v != std::floor(v)) {
          throw UsageError("config key 'lengths': bad length " + fmt_short(v));
        }
        out.lengths.push_back(static_cast<std::size_t>(v));
      }
    } else if (key == "replications") {
      out.replications = static_cast<std::size_t>(std::stoull(value));
    } else if (key == "burn_in") {
      out.burn_in = static_cast<std::size_t>(std::stoull(value));
    } else if (key == "sigma2") {
      if (!parse_double(value, out.sigma_eps2)) {
        throw UsageError("config key 'sigma2': cannot parse '" + value + "'");
      }
    } else if (key == "seed") {
      out.base_seed = std::stoull(value);
    } else if (key == "priors") {
      out.priors = parse_prior_list(value);
    } else if (key == "g") {
      if (value == "unit") {
        out.g_value.reset();
      } else {
        double g;
        if (!parse_double(value, g) || !(g > 0.0)) {
          throw UsageError("config key 'g': expected 'unit' or a positive number");
        }
        out.g_value = g;
      }
    } else if (key == "prob") {
      if (!parse_double(value, out.interval_prob)) {
        throw UsageError("config key 'prob': cannot parse '" + value + "'");
      }
    } else if (key == "training") {
      if (value == "split") {
        out.training = TrainingSource::kSplit;
      } else if (value == "shared") {
        out.training = TrainingSource::kSharedPrefix;
      } else {
        throw UsageError("config key 'training': expected 'split' or 'shared'");
      }
    } else if (key == "threads") {
      out.threads = static_cast<unsigned>(std::stoul(value));
    } else {
      throw UsageError(path.string() + ": unknown config key '" + key + "'");
    }
  }
  return out;
}

namespace {

struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> fields;
  std::vector<std::string> outputs;

  void add(const std::string& key, const std::string& value) {
    fields.emplace_back(key, value);
  }

  void write(const fs::path& file, double duration_seconds) const {
    std::ofstream out(file);
    if (!out) throw DataError("cannot write manifest: " + file.string());
    out << "command = " << command << "\n";
    out << "version = " << kVersion << "\n";
    for (const auto& [k, v] : fields) out << k << " = " << v << "\n";
    for (const auto& o : outputs) out << "output = " << o << "\n";
    out << "duration_seconds = " << fmt_double(duration_seconds, 3) << "\n";
  }
};

void add_config_fields(Manifest& m, const SimulationConfig& c) {
  std::string phis, lens, priors;
  for (double p : c.phi_grid) phis += (phis.empty() ? "" : " ") + fmt_short(p);
  for (std::size_t n : c.lengths) {
    lens += (lens.empty() ? "" : " ") + std::to_string(n);
  }
  for (PriorKind p : c.priors) {
    priors += (priors.empty() ? "" : " ") + std::string(prior_name(p));
  }
  m.add("seed", std::to_string(c.base_seed));
  m.add("replications", std::to_string(c.replications));
  m.add("phi_grid", phis);
  m.add("lengths", lens);
  m.add("burn_in", std::to_string(c.burn_in));
  m.add("sigma2", fmt_short(c.sigma_eps2));
  m.add("priors", priors);
  m.add("g", c.g_value ? fmt_short(*c.g_value) : "unit");
  m.add("prob", fmt_short(c.interval_prob));
  m.add("training",
        c.training == TrainingSource::kSplit ? "split" : "shared");
  m.add("threads", std::to_string(c.threads));
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const fs::path& file, const CsvTable& table,
               const std::string& manifest_name) {
  std::ofstream out(file);
  if (!out) throw DataError("cannot write output file: " + file.string());
  out << "# manifest: " << manifest_name << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << row[i];
    }
    out << "\n";
  }
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------------
// bias chart

const char* method_color(Method m) {
  switch (m) {
    case Method::kMme:
      return "#d62728";
    case Method::kCls:
      return "#2ca02c";
    case Method::kMle:
      return "#ff7f0e";
    case Method::kCmle:
      return "#9467bd";
    case Method::kBe:
      return "#1f77b4";
  }
  return "#000000";
}

void write_bias_svg(const fs::path& file, const std::vector<BiasRow>& rows,
                    std::size_t repeats) {
  constexpr double kW = 840, kH = 520;
  constexpr double kL = 70, kR = 700, kT = 40, kB = 460;

  double max_bias = 0.0;
  for (const auto& r : rows) max_bias = std::max(max_bias, r.abs_bias);
  if (max_bias <= 0.0) max_bias = 1.0;
  max_bias *= 1.05;

  const auto x_of = [&](std::size_t rep) {
    return repeats > 1
               ? kL + (kR - kL) * static_cast<double>(rep) /
                         static_cast<double>(repeats - 1)
               : 0.5 * (kL + kR);
  };
  const auto y_of = [&](double b) { return kB - (kB - kT) * b / max_bias; };

  std::ofstream out(file);
  if (!out) throw DataError("cannot write svg: " + file.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
      << "\">\n";
  out << "<rect width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\"/>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kB << "\" x2=\"" << kR
      << "\" y2=\"" << kB << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL
      << "\" y2=\"" << kB << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = max_bias * i / 4.0;
    const double y = y_of(v);
    out << "<line x1=\"" << kL - 4 << "\" y1=\"" << fmt_double(y, 1)
        << "\" x2=\"" << kL << "\" y2=\"" << fmt_double(y, 1)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kL - 8 << "\" y=\"" << fmt_double(y + 4, 1)
        << "\" font-size=\"12\" text-anchor=\"end\">" << fmt_double(v, 3)
        << "</text>\n";
  }
  for (std::size_t rep = 0; rep < repeats; ++rep) {
    out << "<text x=\"" << fmt_double(x_of(rep), 1) << "\" y=\"" << kB + 18
        << "\" font-size=\"12\" text-anchor=\"middle\">" << rep + 1
        << "</text>\n";
  }
  out << "<text x=\"" << 0.5 * (kL + kR) << "\" y=\"" << kB + 40
      << "\" font-size=\"13\" text-anchor=\"middle\">repeat</text>\n";
  out << "<text x=\"18\" y=\"" << 0.5 * (kT + kB)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "18 "
      << 0.5 * (kT + kB) << ")\">absolute bias</text>\n";

  constexpr Method kMethods[5] = {Method::kMme, Method::kCls, Method::kMle,
                                  Method::kCmle, Method::kBe};
  double legend_y = kT + 10;
  for (Method m : kMethods) {
    std::string points;
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      for (const auto& r : rows) {
        if (r.repeat == rep && r.method == m) {
          points += fmt_double(x_of(rep), 1) + "," +
                    fmt_double(y_of(r.abs_bias), 1) + " ";
        }
      }
    }
    out << "<polyline fill=\"none\" stroke=\"" << method_color(m)
        << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
    out << "<rect x=\"" << kR + 20 << "\" y=\"" << fmt_double(legend_y - 9, 1)
        << "\" width=\"14\" height=\"4\" fill=\"" << method_color(m)
        << "\"/>\n";
    out << "<text x=\"" << kR + 40 << "\" y=\"" << fmt_double(legend_y, 1)
        << "\" font-size=\"13\">" << method_name(m) << "</text>\n";
    legend_y += 20;
  }
  out << "</svg>\n";
}

// ---------------------------------------------------------------------
// command option bundles

struct PriorOptions {
  bool train = false;
  std::optional<double> d;
  double sigma_phi2 = 1.0;
  std::string training_mode = "split";

  // Returns (hyperparams, posterior window) for the given series.
  std::pair<Hyperparams, TimeSeries> resolve(const TimeSeries& series,
                                             double sigma2) const {
    if (train || !d) {
      Hyperparams hp = training_hyperparams(series, sigma2);
      if (training_mode == "split") {
        const std::size_t m = training_size(series.length());
        return {hp, series.window(m - 1, series.length() - 1)};
      }
      return {hp, series};
    }
    return {Hyperparams{*d, sigma_phi2}, series};
  }
};

void add_prior_options(CLI::App* cmd, PriorOptions& opts) {
  cmd->add_flag("--train", opts.train,
                "derive d and sigma_phi2 from the training prefix");
  cmd->add_option("--d", opts.d, "prior location d");
  cmd->add_option("--sigma-phi2", opts.sigma_phi2,
                  "prior variance sigma_phi2 (default 1)");
  cmd->add_option("--training", opts.training_mode,
                  "training data use: split or shared (default split)")
      ->check(CLI::IsMember({"split", "shared"}));
}

std::string estimate_row_value(const std::optional<double>& v, int precision) {
  return v ? fmt_double(*v, precision) : "NA";
}

// ---------------------------------------------------------------------
// commands

struct SimulateArgs {
  double phi = 0.5;
  std::size_t length = 500;
  std::size_t burn_in = 200;
  double sigma2 = 1.0;
  std::uint64_t seed = 907;
  int precision = 0;
  std::string out;
};

void cmd_simulate(const SimulateArgs& a) {
  if (!(std::abs(a.phi) < 1.0)) {
    throw UsageError("stationarity violated: |phi| must be < 1, got " +
                     fmt_short(a.phi));
  }
  if (a.length < 2) throw UsageError("length must be at least 2");
  if (!(a.sigma2 > 0.0)) throw UsageError("sigma2 must be positive");

  Timer timer;
  const TimeSeries series =
      simulate({a.phi, a.sigma2}, a.length, a.burn_in, a.seed);

  const fs::path out_path(a.out);
  const std::string manifest_name = out_path.filename().string() +
                                    ".manifest.txt";
  CsvTable table;
  table.header = {"index", "value"};
  for (std::size_t i = 0; i < series.length(); ++i) {
    table.rows.push_back(
        {std::to_string(i + 1), fmt_double(series.at(i), a.precision)});
  }
  write_csv(out_path, table, manifest_name);

  Manifest m;
  m.command = "simulate";
  m.add("phi", fmt_short(a.phi));
  m.add("length", std::to_string(a.length));
  m.add("burn_in", std::to_string(a.burn_in));
  m.add("sigma2", fmt_short(a.sigma2));
  m.add("seed", std::to_string(a.seed));
  m.add("precision", std::to_string(a.precision));
  m.outputs.push_back(out_path.filename().string());
  m.write(out_path.parent_path() / manifest_name, timer.seconds());
}

struct EstimateArgs {
  std::string input;
  int column = 0;
  double sigma2 = 1.0;
  PriorOptions prior;
  int precision = 4;
  std::string out;
};

std::array<std::optional<double>, 5> five_estimates(const TimeSeries& series,
                                                    double sigma2,
                                                    const PriorOptions& prior) {
  std::array<std::optional<double>, 5> est;
  est[0] = mme(series).estimate;
  est[1] = cls(series).estimate;
  est[2] = mle(series, sigma2).estimate;
  est[3] = cmle(series, sigma2).estimate;
  const auto [hp, window] = prior.resolve(series, sigma2);
  est[4] = bayes_estimator(window, sigma2, hp.d, hp.sigma_phi2).estimate;
  return est;
}

void cmd_estimate(const EstimateArgs& a) {
  if (!(a.sigma2 > 0.0)) throw UsageError("sigma2 must be positive");
  const TimeSeries series = read_series_file(a.input, a.column);

  Timer timer;
  std::array<std::optional<double>, 5> est;
  try {
    est = five_estimates(series, a.sigma2, a.prior);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }

  CsvTable table;
  table.header = {"MME", "CLS", "MLE", "CMLE", "BE"};
  table.rows.push_back({
      estimate_row_value(est[0], a.precision),
      estimate_row_value(est[1], a.precision),
      estimate_row_value(est[2], a.precision),
      estimate_row_value(est[3], a.precision),
      estimate_row_value(est[4], a.precision),
  });

  if (a.out.empty()) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      std::cout << (i ? "," : "") << table.header[i];
    }
    std::cout << "\n";
    for (std::size_t i = 0; i < table.rows[0].size(); ++i) {
      std::cout << (i ? "," : "") << table.rows[0][i];
    }
    std::cout << "\n";
    return;
  }

  const fs::path out_path(a.out);
  const std::string manifest_name =
      out_path.filename().string() + ".manifest.txt";
  write_csv(out_path, table, manifest_name);
  Manifest m;
  m.command = "estimate";
  m.add("input", a.input);
  m.add("column", std::to_string(a.column));
  m.add("sigma2", fmt_short(a.sigma2));
  m.add("trained", a.prior.train || !a.prior.d ? "yes" : "no");
  if (a.prior.d) m.add("d", fmt_short(*a.prior.d));
  m.add("sigma_phi2", fmt_short(a.prior.sigma_phi2));
  m.add("precision", std::to_string(a.precision));
  m.outputs.push_back(out_path.filename().string());
  m.write(out_path.parent_path() / manifest_name, timer.seconds());
}

struct StudyArgs {
  std::string config;
  std::string out_dir;
  std::optional<std::size_t> replications;
  std::optional<std::uint64_t> seed;
  std::optional<double> prob;
  std::optional<unsigned> threads;
  std::optional<std::string> training_mode;
  int precision = 4;
};

SimulationConfig resolve_study_config(const StudyArgs& a,
                                      const SimulationConfig& defaults) {
  SimulationConfig cfg = defaults;
  if (!a.config.empty()) cfg = load_simulation_config(a.config, defaults);
  if (a.replications) cfg.replications = *a.replications;
  if (a.seed) cfg.base_seed = *a.seed;
  if (a.prob) cfg.interval_prob = *a.prob;
  if (a.threads) cfg.threads = *a.threads;
  if (a.training_mode) {
    cfg.training = *a.training_mode == "shared" ? TrainingSource::kSharedPrefix
                                                : TrainingSource::kSplit;
  }
  check_grid(cfg);
  return cfg;
}

void cmd_compare(const StudyArgs& a) {
  const SimulationConfig cfg =
      resolve_study_config(a, default_comparison_config());
  fs::create_directories(a.out_dir);

  Timer timer;
  const std::vector<ComparisonRow> rows = run_estimator_comparison(cfg);

  Manifest m;
  m.command = "compare";
  add_config_fields(m, cfg);
  m.add("precision", std::to_string(a.precision));

  for (std::size_t T : cfg.lengths) {
    CsvTable table;
    table.header = {"phi", "MME", "CLS", "MLE", "CMLE", "BE"};
    for (const auto& row : rows) {
      if (row.length != T) continue;
      std::vector<std::string> cells{fmt_short(row.phi)};
      for (const auto& est : row.estimates) {
        cells.push_back(estimate_row_value(est, a.precision));
      }
      table.rows.push_back(std::move(cells));
    }
    const std::string name = "compare_T" + std::to_string(T) + ".csv";
    write_csv(fs::path(a.out_dir) / name, table, "manifest.txt");
    m.outputs.push_back(name);
  }
  m.write(fs::path(a.out_dir) / "manifest.txt", timer.seconds());
}

void cmd_sensitivity(const StudyArgs& a) {
  const SimulationConfig cfg =
      resolve_study_config(a, default_sensitivity_config());
  fs::create_directories(a.out_dir);

  Timer timer;
  const CoverageReport report = run_sensitivity_study(cfg);

  Manifest m;
  m.command = "sensitivity";
  add_config_fields(m, cfg);
  m.add("precision", std::to_string(a.precision));

  for (std::size_t fi = 0; fi < report.phis.size(); ++fi) {
    bool excluded = false;
    for (std::size_t pi = 0; pi < report.priors.size(); ++pi) {
      for (std::size_t li = 0; li < report.lengths.size(); ++li) {
        if (report.cell(pi, li, fi).valid != report.replications) {
          excluded = true;
        }
      }
    }
    CsvTable table;
    table.header = {"n"};
    for (PriorKind p : report.priors) {
      table.header.push_back(std::string(prior_name(p)));
    }
    if (excluded) {
      for (PriorKind p : report.priors) {
        table.header.push_back(std::string(prior_name(p)) + "_reps");
      }
    }
    for (std::size_t li = 0; li < report.lengths.size(); ++li) {
      std::vector<std::string> cells{std::to_string(report.lengths[li])};
      for (std::size_t pi = 0; pi < report.priors.size(); ++pi) {
        const CoverageCell& c = report.cell(pi, li, fi);
        cells.push_back(c.valid > 0 ? fmt_double(c.percentage(), a.precision)
                                    : "NA");
      }
      if (excluded) {
        for (std::size_t pi = 0; pi < report.priors.size(); ++pi) {
          cells.push_back(std::to_string(report.cell(pi, li, fi).valid));
        }
      }
      table.rows.push_back(std::move(cells));
    }
    const std::string name =
        "sensitivity_phi_" + fmt_short(report.phis[fi]) + ".csv";
    write_csv(fs::path(a.out_dir) / name, table, "manifest.txt");
    m.outputs.push_back(name);
  }
  m.write(fs::path(a.out_dir) / "manifest.txt", timer.seconds());
}

struct AnalyzeArgs {
  std::string input;
  int column = 0;
  double sigma2 = 1.0;
  PriorOptions prior;
  std::optional<double> g;
  std::vector<std::string> priors{"jeffreys", "g", "nc", "tn"};
  std::size_t pp_lags = 3;
  double prob = 0.95;
  int precision = 4;
  std::string out_dir;
};

void cmd_analyze(const AnalyzeArgs& a) {
  if (!(a.sigma2 > 0.0)) throw UsageError("sigma2 must be positive");
  if (!(a.prob > 0.0 && a.prob < 1.0)) {
    throw UsageError("prob must lie strictly between 0 and 1");
  }
  std::string prior_csv;
  for (const auto& p : a.priors) prior_csv += (prior_csv.empty() ? "" : " ") + p;
  const std::vector<PriorKind> priors = parse_prior_list(prior_csv);

  const TimeSeries series = read_series_file(a.input, a.column);
  if (series.length() < 20) {
    throw DataError("series too short: analyze needs at least 20 observations, got " +
                    std::to_string(series.length()));
  }

  Timer timer;
  fs::create_directories(a.out_dir);
  Manifest m;
  m.command = "analyze";
  m.add("input", a.input);
  m.add("column", std::to_string(a.column));
  m.add("sigma2", fmt_short(a.sigma2));
  m.add("pp_lags", std::to_string(a.pp_lags));
  m.add("prob", fmt_short(a.prob));
  m.add("precision", std::to_string(a.precision));

  try {
    // Stationarity check.
    const auto pp = phillips_perron(series, a.pp_lags);
    CsvTable pp_table;
    pp_table.header = {"lag", "rho", "pr_rho", "tau", "pr_tau"};
    for (const auto& r : pp) {
      pp_table.rows.push_back({std::to_string(r.lag),
                               fmt_double(r.rho_stat, a.precision),
                               fmt_double(r.rho_p, a.precision),
                               fmt_double(r.tau_stat, a.precision),
                               fmt_double(r.tau_p, a.precision)});
    }
    write_csv(fs::path(a.out_dir) / "pp.csv", pp_table, "manifest.txt");
    m.outputs.push_back("pp.csv");

    // Point estimates.
    const auto est = five_estimates(series, a.sigma2, a.prior);
    CsvTable est_table;
    est_table.header = {"MME", "CLS", "MLE", "CMLE", "BE"};
    est_table.rows.push_back({estimate_row_value(est[0], a.precision),
                              estimate_row_value(est[1], a.precision),
                              estimate_row_value(est[2], a.precision),
                              estimate_row_value(est[3], a.precision),
                              estimate_row_value(est[4], a.precision)});
    write_csv(fs::path(a.out_dir) / "estimates.csv", est_table,
              "manifest.txt");
    m.outputs.push_back("estimates.csv");

    // Residual diagnostics on the CLS fit.
    const auto resid = residuals(series, *est[1]);
    const auto norm = normality_tests(resid);
    CsvTable norm_table;
    norm_table.header = {"test", "statistic", "p_value"};
    for (const auto& r : norm) {
      norm_table.rows.push_back({std::string(normality_test_name(r.test)),
                                 fmt_double(r.statistic, a.precision),
                                 fmt_double(r.p_value, a.precision)});
    }
    write_csv(fs::path(a.out_dir) / "normality.csv", norm_table,
              "manifest.txt");
    m.outputs.push_back("normality.csv");

    // Posterior analysis per prior.
    const auto [hp, window] = a.prior.resolve(series, a.sigma2);
    m.add("d", fmt_short(hp.d));
    m.add("sigma_phi2", fmt_short(hp.sigma_phi2));
    CsvTable post_table;
    post_table.header = {"prior", "posterior_mean", "lo", "hi", "length"};
    for (PriorKind kind : priors) {
      PriorSpec prior;
      switch (kind) {
        case PriorKind::kJeffreys:
          prior = JeffreysPrior{};
          break;
        case PriorKind::kG:
          prior = GPrior{
              a.g.value_or(static_cast<double>(window.length() - 1)), 0.0};
          break;
        case PriorKind::kNc:
          prior = NcPrior{hp.d, hp.sigma_phi2};
          break;
        case PriorKind::kTn:
          prior = TnPrior{hp.d, hp.sigma_phi2};
          break;
      }
      const PosteriorSummary post =
          posterior_for_prior(window, a.sigma2, prior);
      const Interval iv = centered_interval(post, a.prob);
      post_table.rows.push_back({std::string(prior_name(kind)),
                                 fmt_double(post.mean, a.precision),
                                 fmt_double(iv.lo, a.precision),
                                 fmt_double(iv.hi, a.precision),
                                 fmt_double(iv.hi - iv.lo, a.precision)});
    }
    write_csv(fs::path(a.out_dir) / "posterior.csv", post_table,
              "manifest.txt");
    m.outputs.push_back("posterior.csv");
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }

  m.write(fs::path(a.out_dir) / "manifest.txt", timer.seconds());
}

struct BiasArgs {
  std::string config;
  std::optional<double> phi;
  std::optional<std::size_t> length;
  std::size_t repeats = 10;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> training_mode;
  int precision = 4;
  std::string out;
  std::string svg;
};

void cmd_bias_plot(const BiasArgs& a) {
  StudyArgs study;
  study.config = a.config;
  study.seed = a.seed;
  study.threads = a.threads;
  study.training_mode = a.training_mode;
  SimulationConfig cfg = resolve_study_config(study, default_bias_config());
  if (a.phi) cfg.phi_grid = {*a.phi};
  if (a.length) cfg.lengths = {*a.length};
  check_grid(cfg);
  if (cfg.phi_grid.size() != 1 || cfg.lengths.size() != 1) {
    throw UsageError("bias-plot expects exactly one phi and one length");
  }
  if (a.repeats == 0) throw UsageError("repeats must be at least 1");

  Timer timer;
  const std::vector<BiasRow> rows = run_bias_study(cfg, a.repeats);

  const fs::path out_path(a.out);
  const std::string manifest_name =
      out_path.filename().string() + ".manifest.txt";
  CsvTable table;
  table.header = {"repeat", "method", "abs_bias"};
  for (const auto& r : rows) {
    table.rows.push_back({std::to_string(r.repeat + 1),
                          std::string(method_name(r.method)),
                          fmt_double(r.abs_bias, a.precision)});
  }
  write_csv(out_path, table, manifest_name);

  Manifest m;
  m.command = "bias-plot";
  add_config_fields(m, cfg);
  m.add("repeats", std::to_string(a.repeats));
  m.add("precision", std::to_string(a.precision));
  m.outputs.push_back(out_path.filename().string());
  if (!a.svg.empty()) {
    write_bias_svg(a.svg, rows, a.repeats);
    m.outputs.push_back(fs::path(a.svg).filename().string());
  }
  m.write(out_path.parent_path() / manifest_name, timer.seconds());
}

void add_study_options(CLI::App* cmd, StudyArgs& a) {
  cmd->add_option("--config", a.config, "key = value config file");
  cmd->add_option("--out", a.out_dir, "output directory")->required();
  cmd->add_option("--replications", a.replications, "replications per cell");
  cmd->add_option("--seed", a.seed, "base seed");
  cmd->add_option("--threads", a.threads, "worker threads");
  cmd->add_option("--training", a.training_mode,
                  "training data use: split or shared")
      ->check(CLI::IsMember({"split", "shared"}));
  cmd->add_option("--precision", a.precision, "table decimal places (0 = full)");
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{
      "AR(1) estimation under a truncated-normal prior: simulation, "
      "estimation and coverage studies"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "simulate an AR(1) series");
  c_sim->add_option("--phi", sim.phi, "autoregressive parameter")->required();
  c_sim->add_option("--length", sim.length, "observations to keep");
  c_sim->add_option("--burn-in", sim.burn_in, "discarded initial observations");
  c_sim->add_option("--sigma2", sim.sigma2, "innovation variance");
  c_sim->add_option("--seed", sim.seed, "random seed");
  c_sim->add_option("--precision", sim.precision,
                    "decimal places (0 = full precision)");
  c_sim->add_option("--out", sim.out, "output csv path")->required();
  c_sim->callback([&] { cmd_simulate(sim); });

  EstimateArgs est;
  CLI::App* c_est =
      app.add_subcommand("estimate", "the five point estimates of phi");
  c_est->add_option("input", est.input, "observation file")->required();
  c_est->add_option("--column", est.column,
                    "1-based data column (0 = last column)");
  c_est->add_option("--sigma2", est.sigma2, "innovation variance");
  add_prior_options(c_est, est.prior);
  c_est->add_option("--precision", est.precision, "decimal places (0 = full)");
  c_est->add_option("--out", est.out, "output csv path (default stdout)");
  c_est->callback([&] { cmd_estimate(est); });

  StudyArgs cmp;
  CLI::App* c_cmp = app.add_subcommand(
      "compare", "estimator comparison tables over a phi/length grid");
  add_study_options(c_cmp, cmp);
  c_cmp->callback([&] { cmd_compare(cmp); });

  StudyArgs sens;
  CLI::App* c_sens = app.add_subcommand(
      "sensitivity", "four-prior interval coverage study");
  add_study_options(c_sens, sens);
  c_sens->add_option("--prob", sens.prob, "interval probability");
  c_sens->callback([&] { cmd_sensitivity(sens); });

  AnalyzeArgs ana;
  CLI::App* c_ana = app.add_subcommand(
      "analyze", "full pipeline: unit root, estimation, residual "
                 "diagnostics, posterior analysis");
  c_ana->add_option("input", ana.input, "observation file")->required();
  c_ana->add_option("--column", ana.column,
                    "1-based data column (0 = last column)");
  c_ana->add_option("--sigma2", ana.sigma2, "innovation variance");
  add_prior_options(c_ana, ana.prior);
  c_ana->add_option("--g", ana.g, "g prior coefficient (default: unit information)");
  c_ana->add_option("--prior", ana.priors,
                    "priors for the posterior table (jeffreys g nc tn)");
  c_ana->add_option("--pp-lags", ana.pp_lags, "max Phillips-Perron lag");
  c_ana->add_option("--prob", ana.prob, "interval probability");
  c_ana->add_option("--precision", ana.precision, "decimal places (0 = full)");
  c_ana->add_option("--out", ana.out_dir, "output directory")->required();
  c_ana->callback([&] { cmd_analyze(ana); });

  BiasArgs bias;
  CLI::App* c_bias = app.add_subcommand(
      "bias-plot", "long-format absolute bias data, optionally with a chart");
  c_bias->add_option("--config", bias.config, "key = value config file");
  c_bias->add_option("--phi", bias.phi, "autoregressive parameter (default 0.5)");
  c_bias->add_option("--length", bias.length, "series length (default 30)");
  c_bias->add_option("--repeats", bias.repeats, "study repeats (default 10)");
  c_bias->add_option("--seed", bias.seed, "base seed");
  c_bias->add_option("--threads", bias.threads, "worker threads");
  c_bias->add_option("--training", bias.training_mode,
                     "training data use: split or shared")
      ->check(CLI::IsMember({"split", "shared"}));
  c_bias->add_option("--precision", bias.precision, "decimal places (0 = full)");
  c_bias->add_option("--out", bias.out, "output csv path")->required();
  c_bias->add_option("--svg", bias.svg, "also render a line chart to this path");
  c_bias->callback([&] { cmd_bias_plot(bias); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace ar1bayes::cli
