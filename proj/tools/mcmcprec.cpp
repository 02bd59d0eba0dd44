// mcmcprec command-line front end.
//
//   mcmcprec analyze --input chain.txt [--input more.csv ...] [options]
//   mcmcprec bench [--beta-grid 0,0.2,0.4,0.6,0.8] [options]
//
// Exit codes: 0 success, 1 input error, 2 numerical failure, 3 configuration error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mcmcprec/analysis.hpp"

namespace {

using namespace mcmcprec;

enum Exit : int { ok = 0, input_error = 1, numerical_error = 2, config_error = 3 };

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    auto t = std::string(detail::trim(cur));
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw Error(ErrorKind::InvalidArgument, "invalid number '" + s + "' for " + what);
  return v;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& f : split(s, ',')) out.push_back(parse_double(f, what));
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, what + " is empty");
  return out;
}

QuantileLevels parse_ci(const std::string& s) {
  const auto v = parse_doubles(s, "--ci");
  if (v.size() != 2) throw Error(ErrorKind::InvalidArgument, "--ci expects two levels, e.g. 0.05,0.95");
  QuantileLevels q{v[0], v[1]};
  validate_levels(q);
  return q;
}

ChainFormat parse_format(const std::string& s) {
  if (s == "auto") return ChainFormat::Auto;
  if (s == "lines") return ChainFormat::Lines;
  if (s == "csv") return ChainFormat::Csv;
  throw Error(ErrorKind::InvalidArgument, "unknown input format '" + s + "'");
}

OutputFormat parse_output_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "text") return OutputFormat::Text;
  throw Error(ErrorKind::InvalidArgument, "unknown output format '" + s + "'");
}

struct AnalyzeArgs {
  std::vector<std::string> inputs;
  std::string format = "auto";
  std::string label_column = "label";
  std::string epsilon = "default";
  std::size_t draws = default_draw_count;
  std::uint64_t seed = 1;
  std::string ci = "0.05,0.95";
  std::optional<std::size_t> top_k;
  std::vector<std::string> subsets;
  std::vector<std::string> bfs;
  std::vector<std::string> model_priors;
  std::vector<std::string> declared;
  std::string out;
  std::string out_format = "json";
  bool timing = false;
};

struct BenchArgs {
  std::string pi = "0.85,0.13,0.02";
  std::string betas = "0,0.2,0.4,0.6,0.8";
  std::size_t iterations = 1000;
  std::size_t replications = 200;
  std::size_t draws = 1000;
  std::uint64_t seed = 2024;
  std::string ci = "0.05,0.95";
  std::string out_dir = ".";
  bool no_ess = false;
  bool quiet = false;
};

RunConfig build_run_config(const AnalyzeArgs& a) {
  RunConfig cfg;
  for (const auto& p : a.inputs) cfg.inputs.emplace_back(p);
  cfg.format = parse_format(a.format);
  cfg.label_column = a.label_column;
  cfg.epsilon = EpsilonConfig::parse(a.epsilon);
  cfg.draws = a.draws;
  cfg.seed = a.seed;
  cfg.levels = parse_ci(a.ci);
  cfg.top_k = a.top_k;
  for (const auto& s : a.subsets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorKind::InvalidArgument, "--subset expects name=A,B,..., got '" + s + "'");
    cfg.subsets.push_back({s.substr(0, eq), split(s.substr(eq + 1), ',')});
  }
  for (const auto& s : a.bfs) {
    const auto colon = s.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == s.size())
      throw Error(ErrorKind::InvalidArgument, "--bf expects A:B, got '" + s + "'");
    cfg.bayes_factor_pairs.emplace_back(s.substr(0, colon), s.substr(colon + 1));
  }
  for (const auto& s : a.model_priors) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorKind::InvalidArgument, "--model-prior expects label=probability, got '" + s + "'");
    cfg.model_priors[s.substr(0, eq)] = parse_double(s.substr(eq + 1), "--model-prior");
  }
  for (const auto& d : a.declared)
    for (auto& label : split(d, ',')) cfg.declared_models.push_back(label);
  cfg.validate();
  return cfg;
}

class StageTimer {
 public:
  explicit StageTimer(bool enabled) : enabled_(enabled), start_(clock::now()) {}
  void mark(const char* stage) {
    if (!enabled_) return;
    const auto now = clock::now();
    std::cerr << "[timing] " << stage << ": "
              << std::chrono::duration<double, std::milli>(now - start_).count() << " ms\n";
    start_ = now;
  }

 private:
  using clock = std::chrono::steady_clock;
  bool enabled_;
  clock::time_point start_;
};

int run_analyze(const AnalyzeArgs& a) {
  const RunConfig cfg = build_run_config(a);
  const OutputFormat fmt = parse_output_format(a.out_format);
  StageTimer timer(a.timing);
  const auto counts = load_counts(cfg);
  timer.mark("load");
  const auto report = analyze_counts(counts, cfg);
  timer.mark("analysis");
  if (a.out.empty()) {
    write_report(std::cout, report, fmt);
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + a.out + "'");
    write_report(out, report, fmt);
  }
  for (const auto& w : report["warnings"])
    std::cerr << "warning [" << w["code"].get<std::string>() << "]: " << w["message"].get<std::string>() << "\n";
  return ok;
}

int run_bench(const BenchArgs& a) {
  CoverageConfig cfg;
  cfg.pi_true = parse_doubles(a.pi, "--pi");
  cfg.betas = parse_doubles(a.betas, "--beta-grid");
  cfg.iterations = a.iterations;
  cfg.replications = a.replications;
  cfg.draws = a.draws;
  cfg.seed = a.seed;
  cfg.levels = parse_ci(a.ci);
  cfg.compute_ess = !a.no_ess;

  const std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);
  std::mutex io;
  std::size_t last_pct = 0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = run_coverage_experiment(cfg, [&](std::size_t done, std::size_t total) {
    if (a.quiet) return;
    const std::size_t pct = 100 * done / total;
    std::lock_guard lock(io);
    if (pct >= last_pct + 5 || done == total) {
      last_pct = pct;
      std::cerr << "\rbench: " << done << "/" << total << " replications (" << pct << "%)" << std::flush;
    }
  });
  if (!a.quiet) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "\nbench: finished in " << secs << " s\n";
  }
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + (dir / name).string() + "'");
    return f;
  };
  {
    auto f = open("coverage.csv");
    write_coverage_csv(f, res);
  }
  {
    auto f = open("ess.csv");
    write_ess_csv(f, res);
  }
  {
    auto f = open("coverage.json");
    write_json(f, coverage_json(res));
  }
  return ok;
}

int exit_code_for(const Error& e) {
  switch (classify(e.kind())) {
    case ErrorClass::Input: return input_error;
    case ErrorClass::Numerical: return numerical_error;
    case ErrorClass::Config: return config_error;
  }
  return numerical_error;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posterior model probability precision for transdimensional MCMC output"};
  app.set_version_flag("--version", std::string(mcmcprec::version));
  app.require_subcommand(1);

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Analyze one or more model-index chains");
  analyze->add_option("-i,--input", aa.inputs, "Chain file (repeatable); chains are merged")->required();
  analyze->add_option("--format", aa.format, "Input format: auto, lines or csv")->capture_default_str();
  analyze->add_option("--label-column", aa.label_column, "CSV column holding model labels")->capture_default_str();
  analyze->add_option("--epsilon", aa.epsilon, "Prior: default, fixed:<value> or matrix:<path>")->capture_default_str();
  analyze->add_option("-R,--draws", aa.draws, "Number of posterior draws")->capture_default_str();
  analyze->add_option("--seed", aa.seed, "Random seed")->capture_default_str();
  analyze->add_option("--ci", aa.ci, "Credible interval quantile levels lower,upper")->capture_default_str();
  analyze->add_option("--top-k", aa.top_k, "Number of top models for rank stability (default: min(10, observed models))");
  analyze->add_option("--subset", aa.subsets, "Model subset name=A,B,... (repeatable)");
  analyze->add_option("--bf", aa.bfs, "Bayes factor pair A:B (repeatable)");
  analyze->add_option("--model-prior", aa.model_priors, "Prior model probability label=p (repeatable)");
  analyze->add_option("--declared-models", aa.declared, "Comma-separated models that may be absent from the chains");
  analyze->add_option("-o,--out", aa.out, "Output file (default: standard output)");
  analyze->add_option("--out-format", aa.out_format, "Output format: json, csv or text")->capture_default_str();
  analyze->add_flag("--timing", aa.timing, "Print stage timings to standard error");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run the synthetic coverage experiment");
  bench->add_option("--pi", ba.pi, "True stationary distribution")->capture_default_str();
  bench->add_option("--beta-grid", ba.betas, "Comma-separated copy probabilities")->capture_default_str();
  bench->add_option("-T,--iterations", ba.iterations, "Chain length")->capture_default_str();
  bench->add_option("--replications", ba.replications, "Replications per beta")->capture_default_str();
  bench->add_option("-R,--draws", ba.draws, "Posterior draws per replication")->capture_default_str();
  bench->add_option("--seed", ba.seed, "Master seed")->capture_default_str();
  bench->add_option("--ci", ba.ci, "Credible interval quantile levels lower,upper")->capture_default_str();
  bench->add_option("--out-dir", ba.out_dir, "Directory for coverage.csv, ess.csv and coverage.json")->capture_default_str();
  bench->add_flag("--no-ess", ba.no_ess, "Skip effective sample size estimation");
  bench->add_flag("-q,--quiet", ba.quiet, "Suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (analyze->parsed()) return run_analyze(aa);
    if (bench->parsed()) return run_bench(ba);
  } catch (const mcmcprec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return numerical_error;
  }
  return config_error;
}
