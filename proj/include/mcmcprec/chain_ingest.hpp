#pragma once

#include <Eigen/Core>

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "mcmcprec/errors.hpp"

namespace mcmcprec {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Bijection between opaque model labels and dense internal indices.
class LabelDictionary {
 public:
  LabelDictionary() = default;

  std::size_t intern(const std::string& label) {
    auto [it, inserted] = index_.try_emplace(label, labels_.size());
    if (inserted) labels_.push_back(label);
    return it->second;
  }

  std::optional<std::size_t> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t at(const std::string& label) const {
    auto idx = find(label);
    if (!idx) throw Error(ErrorKind::LabelError, "unknown model label '" + label + "'");
    return *idx;
  }

  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

  friend bool operator==(const LabelDictionary& a, const LabelDictionary& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// One MCMC run of the model-indexing variable, as internal indices.
struct LabeledChain {
  std::vector<std::size_t> states;
  LabelDictionary dictionary;

  std::size_t length() const { return states.size(); }
  std::size_t model_count() const { return dictionary.size(); }
};

/// One-step transition frequencies over the observed models.
struct TransitionCounts {
  CountMatrix counts;
  LabelDictionary dictionary;
  /// Visits per model over all iterations of all contributing chains.
  std::vector<std::int64_t> visits;
  std::int64_t total_transitions = 0;
  std::int64_t iterations = 0;
  std::int64_t chains = 0;

  std::size_t model_count() const { return dictionary.size(); }
};

/// Assigns internal indices in order of first appearance.
inline LabeledChain index_chain(std::span<const std::string> raw) {
  if (raw.empty()) throw Error(ErrorKind::EmptyChain, "chain has no iterations");
  LabeledChain chain;
  chain.states.reserve(raw.size());
  for (const auto& label : raw) chain.states.push_back(chain.dictionary.intern(label));
  return chain;
}

inline LabeledChain index_chain(const std::vector<std::string>& raw) {
  return index_chain(std::span<const std::string>(raw));
}

template <std::integral T>
LabeledChain index_chain(std::span<const T> raw) {
  std::vector<std::string> labels;
  labels.reserve(raw.size());
  for (T v : raw) labels.push_back(std::to_string(v));
  return index_chain(std::span<const std::string>(labels));
}

template <std::integral T>
LabeledChain index_chain(const std::vector<T>& raw) {
  return index_chain(std::span<const T>(raw));
}

inline TransitionCounts count_transitions(const LabeledChain& chain) {
  if (chain.length() < 2)
    throw Error(ErrorKind::InsufficientTransitions,
                "chain of length " + std::to_string(chain.length()) +
                    " has no transitions; at least 2 iterations are required");
  const auto n = static_cast<Eigen::Index>(chain.model_count());
  TransitionCounts out;
  out.counts = CountMatrix::Zero(n, n);
  out.dictionary = chain.dictionary;
  out.visits.assign(chain.model_count(), 0);
  for (std::size_t t = 0; t + 1 < chain.length(); ++t)
    ++out.counts(static_cast<Eigen::Index>(chain.states[t]),
                 static_cast<Eigen::Index>(chain.states[t + 1]));
  for (auto s : chain.states) ++out.visits[s];
  out.total_transitions = static_cast<std::int64_t>(chain.length()) - 1;
  out.iterations = static_cast<std::int64_t>(chain.length());
  out.chains = 1;
  return out;
}

/// Sums count matrices of independent chains over the union of their labels.
/// The union is ordered by first appearance across `parts`; results for
/// different part orders are equal up to that relabeling.
inline TransitionCounts merge_counts(std::span<const TransitionCounts> parts) {
  if (parts.empty()) throw Error(ErrorKind::EmptyMerge, "no transition counts to merge");
  TransitionCounts out;
  for (const auto& p : parts)
    for (const auto& label : p.dictionary.labels()) out.dictionary.intern(label);
  const auto n = static_cast<Eigen::Index>(out.dictionary.size());
  out.counts = CountMatrix::Zero(n, n);
  out.visits.assign(out.dictionary.size(), 0);
  for (const auto& p : parts) {
    std::vector<Eigen::Index> map(p.model_count());
    for (std::size_t i = 0; i < p.model_count(); ++i)
      map[i] = static_cast<Eigen::Index>(out.dictionary.at(p.dictionary.label(i)));
    for (Eigen::Index i = 0; i < p.counts.rows(); ++i) {
      out.visits[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])] +=
          p.visits[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < p.counts.cols(); ++j)
        out.counts(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) +=
            p.counts(i, j);
    }
    out.total_transitions += p.total_transitions;
    out.iterations += p.iterations;
    out.chains += p.chains;
  }
  return out;
}

inline TransitionCounts merge_counts(const std::vector<TransitionCounts>& parts) {
  return merge_counts(std::span<const TransitionCounts>(parts));
}

}  // namespace mcmcprec
