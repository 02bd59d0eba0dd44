#pragma once

// Synthetic beta-mixture chains and the coverage experiment comparing the
// Markov-model posterior with the i.i.d. posterior on identical chains.
//
// Mixture process: z_0 ~ pi; then with probability beta z_{t+1} = z_t,
// otherwise z_{t+1} ~ pi. The chain is stationary from the first iteration
// and occupancy indicators have lag-k autocorrelation beta^k, so the
// variance-based effective sample size is T (1 - beta) / (1 + beta).

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mcmcprec/chain_ingest.hpp"
#include "mcmcprec/errors.hpp"
#include "mcmcprec/ess.hpp"
#include "mcmcprec/markov_posterior.hpp"
#include "mcmcprec/parallel.hpp"
#include "mcmcprec/rng.hpp"
#include "mcmcprec/stats.hpp"
#include "mcmcprec/summaries.hpp"

namespace mcmcprec {

struct MixtureChainSpec {
  std::vector<double> pi_true;
  double beta = 0.0;
  std::size_t iterations = 1000;
  std::uint64_t seed = 1;

  void validate() const {
    if (pi_true.empty()) throw Error(ErrorKind::InvalidArgument, "pi_true is empty");
    double s = 0.0;
    for (double p : pi_true) {
      if (!(p >= 0.0)) throw Error(ErrorKind::InvalidArgument, "pi_true entries must be >= 0");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "pi_true must sum to 1");
    if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorKind::InvalidArgument, "beta must lie in [0, 1]");
    if (iterations < 1) throw Error(ErrorKind::InvalidArgument, "iterations must be >= 1");
  }
};

/// Label of mixture component k (0-based): "1", "2", ...
inline std::string component_label(std::size_t k) { return std::to_string(k + 1); }

inline LabeledChain generate_chain(const MixtureChainSpec& spec, StreamRng& rng) {
  spec.validate();
  std::vector<std::string> labels;
  labels.reserve(spec.iterations);
  std::size_t z = rng.categorical(spec.pi_true);
  labels.push_back(component_label(z));
  for (std::size_t t = 1; t < spec.iterations; ++t) {
    if (!(rng.uniform() < spec.beta)) z = rng.categorical(spec.pi_true);
    labels.push_back(component_label(z));
  }
  return index_chain(labels);
}

inline LabeledChain generate_chain(const MixtureChainSpec& spec) {
  StreamRng rng(spec.seed);
  return generate_chain(spec, rng);
}

inline double autocorrelation_ess(double T, double beta) { return T * (1.0 - beta) / (1.0 + beta); }

struct CoverageConfig {
  std::vector<double> pi_true{0.85, 0.13, 0.02};
  std::vector<double> betas{0.0, 0.2, 0.4, 0.6, 0.8};
  std::size_t iterations = 1000;
  std::size_t replications = 200;
  std::size_t draws = 1000;
  std::uint64_t seed = 2024;
  QuantileLevels levels{0.05, 0.95};
  PriorSpec prior = PriorSpec::default_reduced();
  bool compute_ess = true;
  std::size_t threads = default_thread_count();
};

enum class CoverageMethod { Markov, Iid };

inline std::string_view to_string(CoverageMethod m) { return m == CoverageMethod::Markov ? "markov" : "iid"; }

/// Outcome of one replication for one method.
struct MethodOutcome {
  std::vector<double> sd;
  std::vector<char> covered;
};

struct ReplicationRecord {
  std::size_t beta_index = 0;
  std::size_t replication = 0;
  /// Stream seeds used; the chain is shared by both methods.
  std::uint64_t chain_seed = 0;
  std::uint64_t markov_seed = 0;
  std::uint64_t iid_seed = 0;
  std::size_t observed_models = 0;
  MethodOutcome markov;
  MethodOutcome iid;
  double t_eff = std::numeric_limits<double>::quiet_NaN();
};

struct CoverageCell {
  double beta = 0.0;
  CoverageMethod method = CoverageMethod::Markov;
  std::vector<double> mean_sd;
  std::vector<double> coverage;
  double joint_coverage = 0.0;
  std::size_t replications = 0;
};

struct EssCell {
  double beta = 0.0;
  double median_t_eff = std::numeric_limits<double>::quiet_NaN();
  double mean_t_eff = std::numeric_limits<double>::quiet_NaN();
  double oracle_t_eff = 0.0;
  /// Replications with a defined ESS (more than one observed model).
  std::size_t defined = 0;
};

struct CoverageResult {
  CoverageConfig config;
  std::vector<CoverageCell> cells;  // (beta, method) in grid order, markov first
  std::vector<EssCell> ess;
  std::vector<ReplicationRecord> records;

  const CoverageCell& cell(std::size_t beta_index, CoverageMethod m) const {
    return cells.at(2 * beta_index + (m == CoverageMethod::Markov ? 0 : 1));
  }
};

namespace detail {

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t role, std::uint64_t b,
                                 std::uint64_t rep) {
  StreamRng rng(master, {role, b, rep});
  return rng();
}

template <class Draws>
MethodOutcome evaluate_method(const Draws& draws, const LabelDictionary& dict,
                              const std::vector<double>& pi_true, QuantileLevels levels) {
  MethodOutcome out;
  const std::size_t K = pi_true.size();
  out.sd.assign(K, 0.0);
  out.covered.assign(K, 0);
  std::vector<double> values(static_cast<std::size_t>(draws.rows()));
  for (std::size_t k = 0; k < K; ++k) {
    const auto idx = dict.find(component_label(k));
    if (!idx) {
      // never sampled: every draw puts zero mass here
      out.covered[k] = pi_true[k] == 0.0 ? 1 : 0;
      continue;
    }
    for (Eigen::Index r = 0; r < draws.rows(); ++r)
      values[static_cast<std::size_t>(r)] = draws(r, static_cast<Eigen::Index>(*idx));
    const auto m = stats::describe(values, levels.lower, levels.upper);
    out.sd[k] = m.sd;
    out.covered[k] = (m.lower <= pi_true[k] && pi_true[k] <= m.upper) ? 1 : 0;
  }
  return out;
}

}  // namespace detail

/// One replication: generate the chain, fit both posteriors to it.
inline ReplicationRecord run_replication(const CoverageConfig& cfg, std::size_t b, std::size_t rep) {
  ReplicationRecord rec;
  rec.beta_index = b;
  rec.replication = rep;
  rec.chain_seed = detail::derive_seed(cfg.seed, 1, b, rep);
  rec.markov_seed = detail::derive_seed(cfg.seed, 2, b, rep);
  rec.iid_seed = detail::derive_seed(cfg.seed, 3, b, rep);

  MixtureChainSpec spec{cfg.pi_true, cfg.betas[b], cfg.iterations, rec.chain_seed};
  const auto chain = generate_chain(spec);
  const auto counts = count_transitions(chain);
  rec.observed_models = counts.model_count();

  const auto markov = draw_posterior(counts, cfg.prior, cfg.draws, rec.markov_seed, 1);
  rec.markov = detail::evaluate_method(markov.draws, counts.dictionary, cfg.pi_true, cfg.levels);

  const auto iid = sample_iid_posterior(iid_posterior(counts.visits), cfg.draws, rec.iid_seed);
  rec.iid = detail::evaluate_method(iid, counts.dictionary, cfg.pi_true, cfg.levels);

  if (cfg.compute_ess && cfg.draws >= 2) {
    const auto ess = effective_sample_size(markov);
    if (!ess.trivial) rec.t_eff = ess.t_eff;
  }
  return rec;
}

template <class Progress>
CoverageResult run_coverage_experiment(const CoverageConfig& cfg, Progress&& progress) {
  MixtureChainSpec{cfg.pi_true, 0.0, cfg.iterations, 0}.validate();
  if (cfg.betas.empty()) throw Error(ErrorKind::InvalidArgument, "beta grid is empty");
  for (double b : cfg.betas) MixtureChainSpec{cfg.pi_true, b, cfg.iterations, 0}.validate();
  if (cfg.iterations < 2) throw Error(ErrorKind::InvalidArgument, "iterations must be >= 2");
  if (cfg.replications < 1 || cfg.draws < 2)
    throw Error(ErrorKind::InvalidArgument, "replications must be >= 1 and draws >= 2");
  validate_levels(cfg.levels);

  const std::size_t nb = cfg.betas.size();
  const std::size_t total = nb * cfg.replications;
  CoverageResult res;
  res.config = cfg;
  res.records.resize(total);
  std::atomic<std::size_t> done{0};
  parallel_for(
      total,
      [&](std::size_t job) {
        const std::size_t b = job / cfg.replications;
        const std::size_t rep = job % cfg.replications;
        try {
          res.records[job] = run_replication(cfg, b, rep);
        } catch (const Error& e) {
          throw Error(e.kind(), "beta " + std::to_string(cfg.betas[b]) + ", replication " +
                                    std::to_string(rep) + ": " + e.detail());
        }
        progress(done.fetch_add(1) + 1, total);
      },
      cfg.threads);

  const std::size_t K = cfg.pi_true.size();
  for (std::size_t b = 0; b < nb; ++b) {
    for (auto method : {CoverageMethod::Markov, CoverageMethod::Iid}) {
      CoverageCell cell;
      cell.beta = cfg.betas[b];
      cell.method = method;
      cell.mean_sd.assign(K, 0.0);
      cell.coverage.assign(K, 0.0);
      cell.replications = cfg.replications;
      std::size_t joint = 0;
      for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
        const auto& rec = res.records[b * cfg.replications + rep];
        const auto& o = method == CoverageMethod::Markov ? rec.markov : rec.iid;
        bool all = true;
        for (std::size_t k = 0; k < K; ++k) {
          cell.mean_sd[k] += o.sd[k];
          cell.coverage[k] += o.covered[k];
          all = all && o.covered[k];
        }
        joint += all ? 1 : 0;
      }
      const double n = static_cast<double>(cfg.replications);
      for (std::size_t k = 0; k < K; ++k) {
        cell.mean_sd[k] /= n;
        cell.coverage[k] /= n;
      }
      cell.joint_coverage = static_cast<double>(joint) / n;
      res.cells.push_back(std::move(cell));
    }
    EssCell e;
    e.beta = cfg.betas[b];
    e.oracle_t_eff = autocorrelation_ess(static_cast<double>(cfg.iterations), cfg.betas[b]);
    std::vector<double> vals;
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
      const double t = res.records[b * cfg.replications + rep].t_eff;
      if (std::isfinite(t)) vals.push_back(t);
    }
    e.defined = vals.size();
    if (!vals.empty()) {
      e.median_t_eff = stats::median(vals);
      e.mean_t_eff = stats::mean(vals);
    }
    res.ess.push_back(e);
  }
  return res;
}

inline CoverageResult run_coverage_experiment(const CoverageConfig& cfg) {
  return run_coverage_experiment(cfg, [](std::size_t, std::size_t) {});
}

/// Long-format CSV: one row per (beta, method, component), plus a "joint" row.
inline void write_coverage_csv(std::ostream& os, const CoverageResult& res) {
  os << std::setprecision(17);
  os << "beta,method,component,mean_sd,coverage,replications\n";
  for (const auto& c : res.cells) {
    for (std::size_t k = 0; k < c.mean_sd.size(); ++k)
      os << c.beta << ',' << to_string(c.method) << ',' << component_label(k) << ',' << c.mean_sd[k]
         << ',' << c.coverage[k] << ',' << c.replications << '\n';
    os << c.beta << ',' << to_string(c.method) << ",joint,," << c.joint_coverage << ','
       << c.replications << '\n';
  }
}

inline void write_ess_csv(std::ostream& os, const CoverageResult& res) {
  os << std::setprecision(17);
  os << "beta,median_t_eff,mean_t_eff,oracle_t_eff,defined_replications\n";
  for (const auto& e : res.ess)
    os << e.beta << ',' << e.median_t_eff << ',' << e.mean_t_eff << ',' << e.oracle_t_eff << ','
       << e.defined << '\n';
}

}  // namespace mcmcprec
