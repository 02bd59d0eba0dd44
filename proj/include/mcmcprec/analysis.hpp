#pragma once

// End-to-end analysis behind the `analyze` subcommand: load chains, merge
// their transition counts, draw the posterior, summarize, and build a
// self-describing report. JSON is the canonical form; the text and CSV
// renderings are produced from the same JSON document.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mcmcprec/chain_ingest.hpp"
#include "mcmcprec/chain_io.hpp"
#include "mcmcprec/errors.hpp"
#include "mcmcprec/ess.hpp"
#include "mcmcprec/markov_posterior.hpp"
#include "mcmcprec/summaries.hpp"
#include "mcmcprec/synthetic.hpp"

#ifndef MCMCPREC_VERSION
#define MCMCPREC_VERSION "0.0.0"
#endif

namespace mcmcprec {

using json = nlohmann::ordered_json;

inline constexpr const char* version = MCMCPREC_VERSION;

enum class EpsilonMode { DefaultReduced, Fixed, MatrixFile };

struct EpsilonConfig {
  EpsilonMode mode = EpsilonMode::DefaultReduced;
  double value = 0.0;
  std::filesystem::path matrix_path;

  /// "default", "fixed:<value>" or "matrix:<path>".
  static EpsilonConfig parse(const std::string& text) {
    EpsilonConfig c;
    if (text == "default" || text == "default_reduced") return c;
    if (text.rfind("fixed:", 0) == 0) {
      c.mode = EpsilonMode::Fixed;
      const std::string v = text.substr(6);
      std::size_t used = 0;
      try {
        c.value = std::stod(v, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != v.size() || !(c.value >= 0.0) || !std::isfinite(c.value))
        throw Error(ErrorKind::InvalidArgument, "invalid epsilon value '" + v + "'");
      return c;
    }
    if (text.rfind("matrix:", 0) == 0 && text.size() > 7) {
      c.mode = EpsilonMode::MatrixFile;
      c.matrix_path = text.substr(7);
      return c;
    }
    throw Error(ErrorKind::InvalidArgument,
                "epsilon must be 'default', 'fixed:<value>' or 'matrix:<path>', got '" + text + "'");
  }

  std::string to_string() const {
    switch (mode) {
      case EpsilonMode::DefaultReduced: return "default";
      case EpsilonMode::Fixed: {
        std::ostringstream os;
        os << std::setprecision(17) << "fixed:" << value;
        return os.str();
      }
      case EpsilonMode::MatrixFile: return "matrix:" + matrix_path.string();
    }
    return "default";
  }
};

enum class OutputFormat { Json, Csv, Text };

struct NamedSubset {
  std::string name;
  std::vector<std::string> labels;
};

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  ChainFormat format = ChainFormat::Auto;
  std::string label_column = "label";
  EpsilonConfig epsilon;
  std::size_t draws = default_draw_count;
  std::uint64_t seed = 1;
  QuantileLevels levels{0.05, 0.95};
  /// Unset: min(10, I*).
  std::optional<std::size_t> top_k;
  std::vector<NamedSubset> subsets;
  std::vector<std::pair<std::string, std::string>> bayes_factor_pairs;
  /// Prior model probabilities by label, for Bayes factors; uniform if empty.
  std::map<std::string, double> model_priors;
  /// Models that could have been sampled; unsampled ones are reported with mass 0.
  std::vector<std::string> declared_models;
  std::size_t threads = default_thread_count();

  void validate() const {
    if (inputs.empty()) throw Error(ErrorKind::InvalidArgument, "at least one input file is required");
    if (draws < 1) throw Error(ErrorKind::InvalidArgument, "draws must be >= 1");
    validate_levels(levels);
    if (top_k && *top_k < 1) throw Error(ErrorKind::InvalidArgument, "top-k must be >= 1");
  }
};

/// Reads a labelled prior-shape matrix: header "<any>,<label>,...", then one
/// row per source label. Rows and columns are matched to the observed models
/// by label; extra labels are ignored.
inline Eigen::MatrixXd read_epsilon_matrix(const std::filesystem::path& path,
                                           const LabelDictionary& dict) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open epsilon matrix '" + path.string() + "'");
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line))
    if (!detail::trim(line).empty()) {
      header = split_csv_record(line);
      break;
    }
  if (header.size() < 2) throw Error(ErrorKind::InvalidArgument, "epsilon matrix has no column labels");
  const auto n = static_cast<Eigen::Index>(dict.size());
  Eigen::MatrixXd eps = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    auto f = split_csv_record(line);
    if (f.size() != header.size())
      throw Error(ErrorKind::InvalidArgument, "epsilon matrix row has " + std::to_string(f.size()) +
                                                  " fields, expected " + std::to_string(header.size()));
    const auto row = dict.find(f[0]);
    if (!row) continue;
    for (std::size_t c = 1; c < f.size(); ++c) {
      const auto col = dict.find(header[c]);
      if (!col) continue;
      double v = 0.0;
      try {
        v = std::stod(f[c]);
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument, "epsilon matrix entry '" + f[c] + "' is not a number");
      }
      eps(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(*col)) = v;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::isnan(eps(i, j)))
        throw Error(ErrorKind::InvalidArgument,
                    "epsilon matrix has no entry for transition " + dict.label(static_cast<std::size_t>(i)) +
                        " -> " + dict.label(static_cast<std::size_t>(j)));
  return eps;
}

inline TransitionCounts load_counts(const RunConfig& cfg) {
  std::vector<TransitionCounts> parts;
  for (const auto& path : cfg.inputs)
    for (auto& raw : load_chains(path, cfg.format, cfg.label_column)) {
      try {
        parts.push_back(count_transitions(index_chain(raw.labels)));
      } catch (const Error& e) {
        throw Error(e.kind(), "chain '" + raw.chain_id + "': " + e.detail());
      }
    }
  return merge_counts(parts);
}

inline PriorSpec resolve_prior(const EpsilonConfig& eps, const LabelDictionary& dict) {
  switch (eps.mode) {
    case EpsilonMode::DefaultReduced: return PriorSpec::default_reduced();
    case EpsilonMode::Fixed: return PriorSpec::uniform_fixed(eps.value);
    case EpsilonMode::MatrixFile: return PriorSpec::matrix(read_epsilon_matrix(eps.matrix_path, dict));
  }
  return PriorSpec::default_reduced();
}

namespace detail {

inline json warning(const std::string& code, const std::string& message) {
  return json{{"code", code}, {"message", message}};
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json moments_json(const stats::Moments& m) {
  return json{{"mean", number_or_null(m.mean)},
              {"sd", number_or_null(m.sd)},
              {"median", number_or_null(m.median)},
              {"lower", number_or_null(m.lower)},
              {"upper", number_or_null(m.upper)}};
}

}  // namespace detail

/// Runs the whole pipeline on already merged counts.
inline json analyze_counts(const TransitionCounts& counts, const RunConfig& cfg) {
  cfg.validate();
  const auto& dict = counts.dictionary;
  const std::size_t n = counts.model_count();
  const PriorSpec prior = resolve_prior(cfg.epsilon, dict);
  json warnings = json::array();

  const auto draws = draw_posterior(counts, prior, cfg.draws, cfg.seed, cfg.threads);
  const auto summary = summarize(draws, cfg.levels);
  if (summary.insufficient_draws)
    warnings.push_back(detail::warning("insufficient_draws", "fewer than 2 draws; SDs are undefined"));
  if (draws.power_iteration_fallbacks > 0)
    warnings.push_back(detail::warning(
        "power_iteration_fallback", std::to_string(draws.power_iteration_fallbacks) +
                                        " draws needed the power-iteration stationary solver"));

  json report;
  report["tool"] = "mcmcprec";
  report["version"] = version;

  json inputs = json::array();
  for (const auto& p : cfg.inputs) inputs.push_back(p.string());
  json subsets_cfg = json::array();
  for (const auto& s : cfg.subsets) subsets_cfg.push_back(json{{"name", s.name}, {"labels", s.labels}});
  json bf_cfg = json::array();
  for (const auto& [a, b] : cfg.bayes_factor_pairs) bf_cfg.push_back(json::array({a, b}));
  json model_priors = json::object();
  for (const auto& [label, p] : cfg.model_priors) model_priors[label] = p;
  report["config"] = json{{"inputs", inputs},
                          {"label_column", cfg.label_column},
                          {"epsilon", cfg.epsilon.to_string()},
                          {"draws", cfg.draws},
                          {"seed", cfg.seed},
                          {"ci", json::array({cfg.levels.lower, cfg.levels.upper})},
                          {"top_k", cfg.top_k ? json(*cfg.top_k) : json(nullptr)},
                          {"subsets", subsets_cfg},
                          {"bayes_factors", bf_cfg},
                          {"model_priors", model_priors},
                          {"declared_models", cfg.declared_models}};

  json prior_json{{"mode", std::string(to_string(prior.mode))},
                  {"description", prior.describe(n)},
                  {"total_weight", draws.prior_weight()}};
  if (prior.mode != PriorMode::Matrix) prior_json["epsilon"] = draws.epsilon(0, 0);
  report["prior"] = prior_json;

  json count_rows = json::array();
  for (Eigen::Index i = 0; i < counts.counts.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < counts.counts.cols(); ++j) row.push_back(counts.counts(i, j));
    count_rows.push_back(row);
  }
  report["data"] = json{{"chains", counts.chains},
                        {"iterations", counts.iterations},
                        {"transitions", counts.total_transitions},
                        {"observed_models", n},
                        {"labels", dict.labels()},
                        {"transition_counts", count_rows}};

  json models = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = summary.models[i];
    models.push_back(json{
        {"label", s.label},
        {"visits", counts.visits[i]},
        {"frequency", static_cast<double>(counts.visits[i]) / static_cast<double>(counts.iterations)},
        {"mean", s.mean},
        {"sd", detail::number_or_null(s.sd)},
        {"median", s.median},
        {"lower", s.lower},
        {"upper", s.upper},
        {"never_sampled", false}});
  }
  std::set<std::string> declared_seen;
  for (const auto& label : cfg.declared_models) {
    if (dict.find(label) || !declared_seen.insert(label).second) continue;
    models.push_back(json{{"label", label}, {"visits", 0}, {"frequency", 0.0}, {"mean", 0.0},
                          {"sd", 0.0}, {"median", 0.0}, {"lower", 0.0}, {"upper", 0.0},
                          {"never_sampled", true}});
    warnings.push_back(detail::warning("never_sampled", "declared model '" + label +
                                                            "' never appears in the chains; reported with probability 0"));
  }
  report["models"] = models;

  // ESS
  json ess_json;
  std::optional<EssEstimate> ess_opt;
  if (cfg.draws >= 2) {
    try {
      ess_opt = effective_sample_size(draws);
    } catch (const Error& e) {
      warnings.push_back(detail::warning("ess_failed", e.what()));
    }
  } else {
    warnings.push_back(detail::warning("ess_skipped", "effective sample size needs at least 2 draws"));
  }
  if (ess_opt) {
    const auto& ess = *ess_opt;
    json alpha = json::array();
    for (Eigen::Index i = 0; i < ess.alpha_hat.size(); ++i) alpha.push_back(detail::number_or_null(ess.alpha_hat[i]));
    ess_json = json{{"t_eff", detail::number_or_null(ess.t_eff)},
                    {"t_raw", ess.t_raw},
                    {"ratio", detail::number_or_null(ess.ratio)},
                    {"prior_weight", ess.prior_weight},
                    {"alpha_hat", alpha},
                    {"fit_iterations", ess.fit.iterations},
                    {"converged", ess.converged},
                    {"log_likelihood", ess.trivial ? json(nullptr) : detail::number_or_null(ess.fit.log_likelihood)},
                    {"flags", json{{"trivial", ess.trivial},
                                   {"negative", ess.negative},
                                   {"exceeds_cap", ess.exceeds_cap},
                                   {"approximate", ess.approximate}}}};
    if (ess.trivial)
      warnings.push_back(detail::warning("ess_trivial", "only one model observed; effective sample size is undefined"));
    if (!ess.converged)
      warnings.push_back(detail::warning("dirichlet_not_converged",
                                         "Dirichlet fit did not converge after " +
                                             std::to_string(ess.fit.iterations) + " iterations"));
    if (ess.negative)
      warnings.push_back(detail::warning("ess_negative", "fitted Dirichlet mass is below the prior weight; t_eff reported as 0"));
    if (ess.exceeds_cap)
      warnings.push_back(detail::warning("ess_exceeds_iterations", "t_eff exceeds 1.5 times the number of iterations"));
    if (ess.approximate)
      warnings.push_back(detail::warning("ess_approximate", "draws contained exact zeros that were clamped before fitting"));
  } else {
    ess_json = nullptr;
  }
  report["ess"] = ess_json;

  // ranks
  const std::size_t k_top = std::min(cfg.top_k.value_or(10), n);
  if (cfg.top_k && k_top != *cfg.top_k)
    warnings.push_back(detail::warning("top_k_reduced", "top-k reduced from " + std::to_string(*cfg.top_k) +
                                                            " to the number of observed models (" +
                                                            std::to_string(n) + ")"));
  const auto ranks = rank_stability(draws, k_top);
  json rank_models_json = json::array();
  for (const auto& m : ranks.models)
    rank_models_json.push_back(json{{"label", m.label},
                                    {"point_rank", m.point_rank},
                                    {"mean_rank", m.mean_rank},
                                    {"sd_rank", m.sd_rank},
                                    {"p_point_rank", m.p_point_rank},
                                    {"p_top_k", m.p_top_k}});
  report["ranks"] = json{{"k_top", k_top},
                         {"p_top_order_reproduced", ranks.p_top_order_reproduced},
                         {"models", rank_models_json}};

  // Bayes factors
  std::optional<Eigen::VectorXd> priors;
  if (!cfg.model_priors.empty()) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      auto it = cfg.model_priors.find(dict.label(i));
      if (it == cfg.model_priors.end())
        throw Error(ErrorKind::InvalidArgument, "no prior probability given for model '" + dict.label(i) + "'");
      p[static_cast<Eigen::Index>(i)] = it->second;
    }
    priors = p;
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [a, b] : cfg.bayes_factor_pairs) pairs.emplace_back(dict.at(a), dict.at(b));
  json bfs = json::array();
  for (const auto& bf : bayes_factors(draws, pairs, priors, cfg.levels)) {
    json entry = detail::moments_json(bf.moments);
    entry["numerator"] = bf.numerator_label;
    entry["denominator"] = bf.denominator_label;
    entry["odds_factor"] = bf.odds_factor;
    entry["finite_draws"] = bf.samples.size();
    entry["zero_denominator_draws"] = bf.zero_denominator_draws;
    entry["unstable"] = bf.unstable();
    bfs.push_back(entry);
    if (bf.unstable())
      warnings.push_back(detail::warning(
          "bayes_factor_unstable", "B(" + bf.numerator_label + "," + bf.denominator_label + "): " +
                                       std::to_string(bf.zero_denominator_draws) +
                                       " draws have zero denominator; summaries use the remaining draws"));
  }
  report["bayes_factors"] = bfs;

  json subsets = json::array();
  for (const auto& s : cfg.subsets) {
    const auto sub = subset_probability(draws, s.labels, cfg.levels);
    json entry = detail::moments_json(sub.moments);
    entry["name"] = s.name;
    entry["labels"] = sub.labels;
    subsets.push_back(entry);
  }
  report["subsets"] = subsets;
  report["warnings"] = warnings;
  return report;
}

inline json analyze(const RunConfig& cfg) {
  cfg.validate();
  return analyze_counts(load_counts(cfg), cfg);
}

// ---------------------------------------------------------------------------
// Rendering

inline void write_json(std::ostream& os, const json& report) { os << report.dump(2) << '\n'; }

namespace detail {

inline std::string fmt_num(const json& v, int precision = 6) {
  if (v.is_null()) return "NA";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  std::ostringstream os;
  os << std::setprecision(precision) << v.get<double>();
  return os.str();
}

inline void csv_row(std::ostream& os, const std::string& section, const std::string& key,
                    const std::string& stat, const json& v) {
  auto esc = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + '"';
  };
  os << esc(section) << ',' << esc(key) << ',' << esc(stat) << ',';
  if (v.is_boolean()) os << (v.get<bool>() ? "true" : "false");
  else if (v.is_string()) os << esc(v.get<std::string>());
  else os << fmt_num(v, 17);
  os << '\n';
}

}  // namespace detail

/// Long-format CSV: section,key,statistic,value.
inline void write_csv(std::ostream& os, const json& r) {
  os << "section,key,statistic,value\n";
  detail::csv_row(os, "run", "config", "seed", r["config"]["seed"]);
  detail::csv_row(os, "run", "config", "draws", r["config"]["draws"]);
  detail::csv_row(os, "run", "config", "epsilon", r["config"]["epsilon"]);
  detail::csv_row(os, "run", "prior", "total_weight", r["prior"]["total_weight"]);
  detail::csv_row(os, "run", "data", "iterations", r["data"]["iterations"]);
  detail::csv_row(os, "run", "data", "observed_models", r["data"]["observed_models"]);
  for (const auto& m : r["models"])
    for (const char* k : {"visits", "frequency", "mean", "sd", "median", "lower", "upper", "never_sampled"})
      detail::csv_row(os, "model", m["label"].get<std::string>(), k, m[k]);
  if (!r["ess"].is_null())
    for (const char* k : {"t_eff", "t_raw", "ratio", "prior_weight", "converged"})
      detail::csv_row(os, "ess", "ess", k, r["ess"][k]);
  for (const auto& m : r["ranks"]["models"])
    for (const char* k : {"point_rank", "mean_rank", "sd_rank", "p_point_rank", "p_top_k"})
      detail::csv_row(os, "rank", m["label"].get<std::string>(), k, m[k]);
  detail::csv_row(os, "rank", "top_order", "p_reproduced", r["ranks"]["p_top_order_reproduced"]);
  for (const auto& b : r["bayes_factors"]) {
    const std::string key = b["numerator"].get<std::string>() + "/" + b["denominator"].get<std::string>();
    for (const char* k : {"mean", "sd", "median", "lower", "upper", "zero_denominator_draws", "unstable"})
      detail::csv_row(os, "bayes_factor", key, k, b[k]);
  }
  for (const auto& s : r["subsets"])
    for (const char* k : {"mean", "sd", "median", "lower", "upper"})
      detail::csv_row(os, "subset", s["name"].get<std::string>(), k, s[k]);
  for (const auto& w : r["warnings"])
    detail::csv_row(os, "warning", w["code"].get<std::string>(), "message", w["message"]);
}

inline void write_text(std::ostream& os, const json& r) {
  using detail::fmt_num;
  const auto& cfg = r["config"];
  os << "mcmcprec " << r["version"].get<std::string>() << "\n";
  os << "seed " << cfg["seed"].dump() << ", draws " << cfg["draws"].dump() << ", prior "
     << r["prior"]["description"].get<std::string>() << "\n";
  os << "chains " << r["data"]["chains"].dump() << ", iterations " << r["data"]["iterations"].dump()
     << ", observed models " << r["data"]["observed_models"].dump() << "\n\n";

  const auto& ci = cfg["ci"];
  os << "Posterior model probabilities (CI " << fmt_num(ci[0]) << " - " << fmt_num(ci[1]) << ")\n";
  os << std::left << std::setw(16) << "model" << std::right;
  for (const char* h : {"visits", "freq", "mean", "sd", "median", "lower", "upper"}) os << std::setw(13) << h;
  os << "\n";
  for (const auto& m : r["models"]) {
    os << std::left << std::setw(16) << m["label"].get<std::string>() << std::right;
    for (const char* k : {"visits", "frequency", "mean", "sd", "median", "lower", "upper"})
      os << std::setw(13) << fmt_num(m[k]);
    if (m["never_sampled"].get<bool>()) os << "  (never sampled)";
    os << "\n";
  }
  os << "\n";
  if (!r["ess"].is_null()) {
    const auto& e = r["ess"];
    os << "Effective sample size: t_eff " << fmt_num(e["t_eff"]) << " of " << fmt_num(e["t_raw"])
       << " iterations (ratio " << fmt_num(e["ratio"]) << ", prior weight " << fmt_num(e["prior_weight"])
       << ", converged " << (e["converged"].get<bool>() ? "yes" : "no") << ")\n\n";
  }
  const auto& rk = r["ranks"];
  os << "Rank stability (top " << rk["k_top"].dump() << ", share of draws reproducing the ordered top list "
     << fmt_num(rk["p_top_order_reproduced"]) << ")\n";
  os << std::left << std::setw(16) << "model" << std::right;
  for (const char* h : {"rank", "mean_rank", "sd_rank", "P(rank)", "P(top-k)"}) os << std::setw(13) << h;
  os << "\n";
  for (const auto& m : rk["models"]) {
    os << std::left << std::setw(16) << m["label"].get<std::string>() << std::right;
    for (const char* k : {"point_rank", "mean_rank", "sd_rank", "p_point_rank", "p_top_k"})
      os << std::setw(13) << fmt_num(m[k]);
    os << "\n";
  }
  if (!r["bayes_factors"].empty()) {
    os << "\nBayes factors\n";
    for (const auto& b : r["bayes_factors"]) {
      os << "  B(" << b["numerator"].get<std::string>() << ", " << b["denominator"].get<std::string>()
         << "): mean " << fmt_num(b["mean"]) << ", sd " << fmt_num(b["sd"]) << ", median "
         << fmt_num(b["median"]) << ", CI [" << fmt_num(b["lower"]) << ", " << fmt_num(b["upper"]) << "]";
      if (b["unstable"].get<bool>()) os << "  UNSTABLE";
      os << "\n";
    }
  }
  if (!r["subsets"].empty()) {
    os << "\nModel subsets\n";
    for (const auto& s : r["subsets"])
      os << "  " << s["name"].get<std::string>() << ": mean " << fmt_num(s["mean"]) << ", sd "
         << fmt_num(s["sd"]) << ", median " << fmt_num(s["median"]) << ", CI [" << fmt_num(s["lower"])
         << ", " << fmt_num(s["upper"]) << "]\n";
  }
  if (!r["warnings"].empty()) {
    os << "\nWarnings\n";
    for (const auto& w : r["warnings"])
      os << "  [" << w["code"].get<std::string>() << "] " << w["message"].get<std::string>() << "\n";
  }
}

inline void write_report(std::ostream& os, const json& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::Json: write_json(os, report); break;
    case OutputFormat::Csv: write_csv(os, report); break;
    case OutputFormat::Text: write_text(os, report); break;
  }
}

// ---------------------------------------------------------------------------
// Benchmark serialization

inline json coverage_json(const CoverageResult& res) {
  const auto& cfg = res.config;
  json cells = json::array();
  for (const auto& c : res.cells)
    cells.push_back(json{{"beta", c.beta},
                         {"method", std::string(to_string(c.method))},
                         {"mean_sd", c.mean_sd},
                         {"coverage", c.coverage},
                         {"joint_coverage", c.joint_coverage},
                         {"replications", c.replications}});
  json ess = json::array();
  for (const auto& e : res.ess)
    ess.push_back(json{{"beta", e.beta},
                       {"median_t_eff", detail::number_or_null(e.median_t_eff)},
                       {"mean_t_eff", detail::number_or_null(e.mean_t_eff)},
                       {"oracle_t_eff", e.oracle_t_eff},
                       {"defined_replications", e.defined}});
  return json{{"tool", "mcmcprec"},
              {"version", version},
              {"config", json{{"pi", cfg.pi_true},
                              {"betas", cfg.betas},
                              {"iterations", cfg.iterations},
                              {"replications", cfg.replications},
                              {"draws", cfg.draws},
                              {"seed", cfg.seed},
                              {"ci", json::array({cfg.levels.lower, cfg.levels.upper})},
                              {"prior", cfg.prior.describe(cfg.pi_true.size())},
                              {"compute_ess", cfg.compute_ess}}},
              {"coverage", cells},
              {"ess", ess}};
}

}  // namespace mcmcprec
