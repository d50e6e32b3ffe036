#pragma once

// Experiment grid: model variant x communication method x perception
// condition, repeated over seeded trials, with CSV output and a comparison
// against published reference numbers.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <locale>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"

#include "inter_mdm/dataset.hpp"
#include "inter_mdm/errors.hpp"
#include "inter_mdm/metrics.hpp"
#include "inter_mdm/naming_game.hpp"
#include "inter_mdm/types.hpp"

namespace inter_mdm {

inline Variant parse_variant(const std::string& s) {
  if (s == "t2t") return Variant::T2T;
  if (s == "h2h") return Variant::H2H;
  throw ConfigError("variant", "expected t2t or h2h, got '" + s + "'");
}

inline CommunicationMode parse_method(const std::string& s) {
  if (s == "mh") return CommunicationMode::MH;
  if (s == "reject") return CommunicationMode::AllRejection;
  if (s == "gibbs") return CommunicationMode::GibbsTopline;
  throw ConfigError("method", "expected mh, reject or gibbs, got '" + s + "'");
}

inline constexpr int kNumConditions = 4;

// Perception of agents A and B in each condition.
inline std::pair<ModalityMask, ModalityMask> condition_masks(int condition) {
  switch (condition) {
    case 1: return {ModalityMask("vsh"), ModalityMask("vsh")};
    case 2: return {ModalityMask("vsh"), ModalityMask("vs")};
    case 3: return {ModalityMask("vsh"), ModalityMask("v")};
    case 4: return {ModalityMask("vs"), ModalityMask("h")};
    default: throw ConfigError("condition", "must be in 1..4, got " + std::to_string(condition));
  }
}

struct ExperimentConfig {
  Variant variant = Variant::H2H;
  CommunicationMode method = CommunicationMode::MH;
  int condition = 1;
  int trials = 10;
  int iterations = 300;
  std::uint64_t seed = 1;
  Hyperparams hyper{};
  // Dataset shape; generation uses `hyper` for its Dirichlet priors.
  SyntheticConfig synthetic{};
  std::string out = "results";
  int jobs = 1;

  void validate() const {
    condition_masks(condition);
    if (trials < 1) throw ConfigError("trials", "must be >= 1");
    if (iterations < 1) throw ConfigError("iterations", "must be >= 1");
    if (jobs < 1) throw ConfigError("jobs", "must be >= 1");
    hyper.validate();
    synthetic_config().validate();
  }

  SyntheticConfig synthetic_config() const {
    SyntheticConfig s = synthetic;
    s.hyper = hyper;
    return s;
  }
};

// Applies the keys present in `j` on top of `cfg`.
inline void config_from_json(const nlohmann::json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  auto get = [](const nlohmann::json& v, const std::string& key, auto& target) {
    try {
      target = v.get<std::decay_t<decltype(target)>>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(key, "has the wrong type");
    }
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const auto& v = it.value();
    if (k == "variant") {
      std::string s;
      get(v, k, s);
      cfg.variant = parse_variant(s);
    } else if (k == "method") {
      std::string s;
      get(v, k, s);
      cfg.method = parse_method(s);
    } else if (k == "condition") get(v, k, cfg.condition);
    else if (k == "trials") get(v, k, cfg.trials);
    else if (k == "iterations") get(v, k, cfg.iterations);
    else if (k == "seed") get(v, k, cfg.seed);
    else if (k == "out") get(v, k, cfg.out);
    else if (k == "jobs") get(v, k, cfg.jobs);
    else if (k == "hyperparams") hyperparams_from_json(v, cfg.hyper);
    else if (k == "synthetic") synthetic_from_json(v, cfg.synthetic);
    else throw ConfigError(k, "unknown key");
  }
}

struct ResultRow {
  Variant variant;
  CommunicationMode method;
  int condition;
  int trial;
  MetricsRecord metrics;
};

struct SummaryRow {
  Variant variant;
  CommunicationMode method;
  int condition;
  Summary ari_a;
  Summary ari_b;
  std::optional<Summary> kappa;
};

// Trial t of every cell sees the same dataset, so cells are paired.
inline Dataset trial_dataset(const ExperimentConfig& cfg, int trial) {
  const auto [mask_a, mask_b] = condition_masks(cfg.condition);
  RngStream rng = RngStream(cfg.seed, static_cast<std::uint64_t>(trial)).derive(1);
  return generate_dataset(cfg.synthetic_config(), mask_a, mask_b, rng);
}

inline std::vector<ResultRow> run_trial(const ExperimentConfig& cfg, int trial) {
  const Dataset data = trial_dataset(cfg, trial);
  const RngStream game_rng = RngStream(cfg.seed, static_cast<std::uint64_t>(trial)).derive(2);
  const GameResult result =
      run_game(cfg.variant, cfg.method, cfg.hyper, data, cfg.iterations, game_rng);
  std::vector<ResultRow> rows;
  rows.reserve(result.metrics.size());
  for (const auto& m : result.metrics) rows.push_back({cfg.variant, cfg.method, cfg.condition, trial, m});
  return rows;
}

// All trials of one cell, ordered by (trial, iteration).
inline std::vector<ResultRow> run_cell(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<ResultRow>> per_trial(static_cast<std::size_t>(cfg.trials));
  const int workers = std::min(cfg.jobs, cfg.trials);
  if (workers <= 1) {
    for (int t = 0; t < cfg.trials; ++t) per_trial[static_cast<std::size_t>(t)] = run_trial(cfg, t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int t = next++; t < cfg.trials; t = next++)
            per_trial[static_cast<std::size_t>(t)] = run_trial(cfg, t);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::vector<ResultRow> rows;
  for (auto& t : per_trial) rows.insert(rows.end(), t.begin(), t.end());
  return rows;
}

// Summary over trials of the final-iteration metrics.
inline SummaryRow summarize_cell(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw ParameterError("no result rows to summarize");
  std::map<int, const ResultRow*> last;
  for (const auto& r : rows) {
    auto& slot = last[r.trial];
    if (!slot || r.metrics.iteration > slot->metrics.iteration) slot = &r;
  }
  std::vector<double> a, b, k;
  for (const auto& [_, r] : last) {
    a.push_back(r->metrics.ari_a);
    b.push_back(r->metrics.ari_b);
    if (r->metrics.kappa) k.push_back(*r->metrics.kappa);
  }
  const auto& first = rows.front();
  SummaryRow s{first.variant, first.method, first.condition, summarize(a), summarize(b), std::nullopt};
  if (!k.empty()) s.kappa = summarize(k);
  return s;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kDetailHeader = "variant,method,condition,trial,iteration,ari_a,ari_b,kappa";
inline constexpr const char* kSummaryHeader =
    "variant,method,condition,ari_a_mean,ari_a_sd,ari_b_mean,ari_b_sd,kappa_mean,kappa_sd";

// Six significant digits, '.' decimal point regardless of locale.
inline std::string format_number(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(6);
  os << x;
  return os.str();
}

inline void write_detail_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool header = true) {
  if (header) os << kDetailHeader << '\n';
  for (const auto& r : rows) {
    os << to_string(r.variant) << ',' << to_string(r.method) << ',' << r.condition << ',' << r.trial
       << ',' << r.metrics.iteration << ',' << format_number(r.metrics.ari_a) << ','
       << format_number(r.metrics.ari_b) << ',';
    if (r.metrics.kappa) os << format_number(*r.metrics.kappa);
    os << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows, bool header = true) {
  if (header) os << kSummaryHeader << '\n';
  for (const auto& s : rows) {
    os << to_string(s.variant) << ',' << to_string(s.method) << ',' << s.condition << ','
       << format_number(s.ari_a.mean) << ',' << format_number(s.ari_a.sd) << ','
       << format_number(s.ari_b.mean) << ',' << format_number(s.ari_b.sd) << ',';
    if (s.kappa) os << format_number(s.kappa->mean) << ',' << format_number(s.kappa->sd);
    else os << ',';
    os << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_number(const std::string& s) {
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  double x = 0.0;
  if (!(is >> x)) throw IoError("malformed number '" + s + "' in summary CSV");
  return x;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
}

}  // namespace detail

inline std::vector<SummaryRow> read_summary_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kSummaryHeader) throw IoError("unexpected summary CSV header");
  std::vector<SummaryRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 9) throw IoError("summary CSV row has " + std::to_string(f.size()) + " fields");
    SummaryRow s{parse_variant(f[0]), parse_method(f[1]), static_cast<int>(detail::parse_number(f[2])),
                 {detail::parse_number(f[3]), detail::parse_number(f[4])},
                 {detail::parse_number(f[5]), detail::parse_number(f[6])},
                 std::nullopt};
    if (!f[7].empty()) s.kappa = Summary{detail::parse_number(f[7]), detail::parse_number(f[8])};
    rows.push_back(s);
  }
  return rows;
}

struct ExperimentOutput {
  std::vector<ResultRow> detail;
  std::vector<SummaryRow> summary;
};

inline void write_outputs(const std::filesystem::path& dir, const ExperimentOutput& out) {
  detail::ensure_directory(dir);
  {
    auto os = detail::open_for_write(dir / "detail.csv");
    write_detail_csv(os, out.detail);
    if (!os) throw IoError("failed writing detail.csv");
  }
  auto os = detail::open_for_write(dir / "summary.csv");
  write_summary_csv(os, out.summary);
  if (!os) throw IoError("failed writing summary.csv");
}

// One grid cell; writes detail.csv and summary.csv under cfg.out.
inline SummaryRow run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentOutput out;
  out.detail = run_cell(cfg);
  out.summary.push_back(summarize_cell(out.detail));
  write_outputs(cfg.out, out);
  return out.summary.front();
}

// Every (variant, method, condition) cell with the trial/iteration settings of `base`.
inline std::vector<SummaryRow> run_full_grid(const ExperimentConfig& base) {
  base.validate();
  ExperimentOutput out;
  for (Variant v : {Variant::T2T, Variant::H2H}) {
    for (CommunicationMode m :
         {CommunicationMode::MH, CommunicationMode::AllRejection, CommunicationMode::GibbsTopline}) {
      for (int c = 1; c <= kNumConditions; ++c) {
        ExperimentConfig cfg = base;
        cfg.variant = v;
        cfg.method = m;
        cfg.condition = c;
        auto rows = run_cell(cfg);
        out.summary.push_back(summarize_cell(rows));
        out.detail.insert(out.detail.end(), rows.begin(), rows.end());
      }
    }
  }
  write_outputs(base.out, out);
  return out.summary;
}

// ---------------------------------------------------------------------------
// Published reference values (10 trials x 300 iterations).

struct ReferenceRow {
  Variant variant;
  CommunicationMode method;
  int condition;
  Summary ari_a;
  Summary ari_b;
  std::optional<Summary> kappa;
};

inline const std::vector<ReferenceRow>& reference_table() {
  using V = Variant;
  using M = CommunicationMode;
  static const std::vector<ReferenceRow> table = {
      // condition 1
      {V::T2T, M::MH, 1, {0.881, 0.031}, {0.886, 0.035}, Summary{0.947, 0.046}},
      {V::T2T, M::AllRejection, 1, {0.883, 0.035}, {0.886, 0.039}, Summary{0.004, 0.019}},
      {V::T2T, M::GibbsTopline, 1, {0.884, 0.033}, {0.886, 0.031}, std::nullopt},
      {V::H2H, M::MH, 1, {0.881, 0.031}, {0.888, 0.033}, Summary{0.999, 0.003}},
      {V::H2H, M::AllRejection, 1, {0.882, 0.037}, {0.889, 0.037}, Summary{0.004, 0.032}},
      {V::H2H, M::GibbsTopline, 1, {0.881, 0.031}, {0.882, 0.042}, std::nullopt},
      // condition 2
      {V::T2T, M::MH, 2, {0.888, 0.033}, {0.708, 0.009}, Summary{0.954, 0.024}},
      {V::T2T, M::AllRejection, 2, {0.878, 0.037}, {0.650, 0.025}, Summary{0.001, 0.012}},
      {V::T2T, M::GibbsTopline, 2, {0.880, 0.033}, {0.706, 0.009}, std::nullopt},
      {V::H2H, M::MH, 2, {0.879, 0.033}, {0.704, 0.006}, Summary{0.996, 0.011}},
      {V::H2H, M::AllRejection, 2, {0.885, 0.053}, {0.649, 0.035}, Summary{-0.010, 0.022}},
      {V::H2H, M::GibbsTopline, 2, {0.881, 0.047}, {0.705, 0.004}, std::nullopt},
      // condition 3
      {V::T2T, M::MH, 3, {0.882, 0.055}, {0.453, 0.029}, Summary{0.931, 0.039}},
      {V::T2T, M::AllRejection, 3, {0.874, 0.037}, {0.342, 0.019}, Summary{-0.011, 0.027}},
      {V::T2T, M::GibbsTopline, 3, {0.880, 0.029}, {0.451, 0.035}, std::nullopt},
      {V::H2H, M::MH, 3, {0.883, 0.070}, {0.444, 0.016}, Summary{1.000, 0.000}},
      {V::H2H, M::AllRejection, 3, {0.876, 0.031}, {0.348, 0.018}, Summary{-0.011, 0.015}},
      {V::H2H, M::GibbsTopline, 3, {0.881, 0.031}, {0.447, 0.020}, std::nullopt},
      // condition 4
      {V::T2T, M::MH, 4, {0.710, 0.017}, {0.460, 0.042}, Summary{0.943, 0.043}},
      {V::T2T, M::AllRejection, 4, {0.658, 0.027}, {0.348, 0.023}, Summary{-0.006, 0.023}},
      {V::T2T, M::GibbsTopline, 4, {0.706, 0.015}, {0.460, 0.014}, std::nullopt},
      {V::H2H, M::MH, 4, {0.704, 0.010}, {0.450, 0.015}, Summary{0.992, 0.012}},
      {V::H2H, M::AllRejection, 4, {0.658, 0.024}, {0.352, 0.011}, Summary{0.004, 0.024}},
      {V::H2H, M::GibbsTopline, 4, {0.705, 0.009}, {0.453, 0.023}, std::nullopt},
  };
  return table;
}

inline const ReferenceRow* find_reference(Variant v, CommunicationMode m, int condition) {
  for (const auto& r : reference_table())
    if (r.variant == v && r.method == m && r.condition == condition) return &r;
  return nullptr;
}

// Markdown table of measured vs. reference values. Informational only.
inline std::string compare_to_reference(const std::vector<SummaryRow>& summary) {
  auto cell = [](const Summary& s) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f (%.3f)", s.mean, s.sd);
    return std::string(buf);
  };
  auto diff = [](double x, double y) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%+.3f", x - y);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "| condition | model | method | ARI A | ref | diff | ARI B | ref | diff | kappa | ref | diff |\n";
  os << "|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& s : summary) {
    const ReferenceRow* ref = find_reference(s.variant, s.method, s.condition);
    if (!ref) continue;
    os << "| " << s.condition << " | " << to_string(s.variant) << " | " << to_string(s.method) << " | "
       << cell(s.ari_a) << " | " << cell(ref->ari_a) << " | " << diff(s.ari_a.mean, ref->ari_a.mean)
       << " | " << cell(s.ari_b) << " | " << cell(ref->ari_b) << " | "
       << diff(s.ari_b.mean, ref->ari_b.mean) << " | ";
    if (s.kappa && ref->kappa) {
      os << cell(*s.kappa) << " (" << kappa_band(s.kappa->mean) << ") | " << cell(*ref->kappa) << " | "
         << diff(s.kappa->mean, ref->kappa->mean) << " |\n";
    } else {
      os << "-- | -- | -- |\n";
    }
  }
  return os.str();
}

}  // namespace inter_mdm
