#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mcmcprec/chain_ingest.hpp"
#include "mcmcprec/chain_io.hpp"

using namespace mcmcprec;

namespace {

CountMatrix matrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  CountMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (auto v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

std::vector<std::string> random_chain(std::mt19937_64& gen, std::size_t length, int models) {
  std::uniform_int_distribution<int> pick(0, models - 1);
  std::vector<std::string> out;
  for (std::size_t t = 0; t < length; ++t) out.push_back("m" + std::to_string(pick(gen)));
  return out;
}

// Count of transitions i -> j by label, independent of internal indexing.
std::int64_t count_by_label(const std::vector<std::string>& chain, const std::string& a, const std::string& b) {
  std::int64_t n = 0;
  for (std::size_t t = 0; t + 1 < chain.size(); ++t) n += (chain[t] == a && chain[t + 1] == b);
  return n;
}

}  // namespace

TEST(IndexChain, FirstAppearanceOrder) {
  const auto c = index_chain(std::vector<std::string>{"B", "A", "B"});
  EXPECT_EQ(c.dictionary.labels(), (std::vector<std::string>{"B", "A"}));
  EXPECT_EQ(c.states, (std::vector<std::size_t>{0, 1, 0}));
}

TEST(IndexChain, IntegerLabelsAreOpaque) {
  const auto c = index_chain(std::vector<int>{7, 3, 7, 100});
  EXPECT_EQ(c.dictionary.labels(), (std::vector<std::string>{"7", "3", "100"}));
  EXPECT_EQ(c.dictionary.at("100"), 2u);
  EXPECT_THROW(c.dictionary.at("8"), Error);
}

TEST(IndexChain, EmptyChainRejected) {
  try {
    index_chain(std::vector<std::string>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyChain);
  }
}

TEST(CountTransitions, SmallExample) {
  const auto n = count_transitions(index_chain(std::vector<int>{1, 1, 2, 1}));
  EXPECT_EQ(n.counts, matrix({{1, 1}, {1, 0}}));
  EXPECT_EQ(n.total_transitions, 3);
  EXPECT_EQ(n.iterations, 4);
  EXPECT_EQ(n.visits, (std::vector<std::int64_t>{3, 1}));
}

TEST(CountTransitions, ConstantChain) {
  const auto n = count_transitions(index_chain(std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(n.counts, matrix({{3}}));
  EXPECT_EQ(n.model_count(), 1u);
}

TEST(CountTransitions, LengthMinusOne) {
  std::mt19937_64 gen(11);
  const auto n = count_transitions(index_chain(random_chain(gen, 1001, 5)));
  EXPECT_EQ(n.total_transitions, 1000);
  EXPECT_EQ(n.counts.sum(), 1000);
}

TEST(CountTransitions, TooShort) {
  try {
    count_transitions(index_chain(std::vector<int>{4}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientTransitions);
  }
}

TEST(CountTransitions, RowSumsAreVisitsExceptLast) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto raw = random_chain(gen, 2 + trial * 7, 1 + trial % 6);
    const auto c = index_chain(raw);
    const auto n = count_transitions(c);
    std::vector<std::int64_t> head(c.model_count(), 0);
    for (std::size_t t = 0; t + 1 < c.length(); ++t) ++head[c.states[t]];
    for (std::size_t i = 0; i < c.model_count(); ++i)
      EXPECT_EQ(n.counts.row(static_cast<Eigen::Index>(i)).sum(), head[i]);
  }
}

TEST(CountTransitions, RelabelingPermutesConsistently) {
  std::mt19937_64 gen(13);
  const auto raw = random_chain(gen, 400, 6);
  std::vector<std::string> names{"m0", "m1", "m2", "m3", "m4", "m5"};
  std::vector<std::string> shuffled = names;
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  std::vector<std::string> relabeled;
  for (const auto& s : raw) relabeled.push_back("x" + shuffled[static_cast<std::size_t>(s[1] - '0')]);

  const auto a = count_transitions(index_chain(raw));
  const auto b = count_transitions(index_chain(relabeled));
  auto renamed = [&](const std::string& s) { return "x" + shuffled[static_cast<std::size_t>(s[1] - '0')]; };
  for (const auto& i : a.dictionary.labels())
    for (const auto& j : a.dictionary.labels()) {
      const auto ai = static_cast<Eigen::Index>(a.dictionary.at(i));
      const auto aj = static_cast<Eigen::Index>(a.dictionary.at(j));
      const auto bi = static_cast<Eigen::Index>(b.dictionary.at(renamed(i)));
      const auto bj = static_cast<Eigen::Index>(b.dictionary.at(renamed(j)));
      EXPECT_EQ(a.counts(ai, aj), b.counts(bi, bj));
      EXPECT_EQ(a.counts(ai, aj), count_by_label(raw, i, j));
    }
}

TEST(MergeCounts, ElementwiseSumSameLabels) {
  TransitionCounts n1 = count_transitions(index_chain(std::vector<int>{1, 1, 2, 1}));
  TransitionCounts n2;
  n2.dictionary = n1.dictionary;
  n2.counts = matrix({{0, 2}, {2, 1}});
  n2.visits = {2, 3};
  n2.total_transitions = 5;
  n2.iterations = 6;
  n2.chains = 1;
  const auto m = merge_counts(std::vector<TransitionCounts>{n1, n2});
  EXPECT_EQ(m.counts, matrix({{1, 3}, {3, 1}}));
  EXPECT_EQ(m.total_transitions, 8);
  EXPECT_EQ(m.chains, 2);
}

TEST(MergeCounts, DisjointLabelsGiveBlockMatrix) {
  const auto ab = count_transitions(index_chain(std::vector<std::string>{"A", "B", "A", "A"}));
  const auto c = count_transitions(index_chain(std::vector<std::string>{"C", "C", "C"}));
  const auto m = merge_counts(std::vector<TransitionCounts>{ab, c});
  ASSERT_EQ(m.model_count(), 3u);
  EXPECT_EQ(m.counts, matrix({{1, 1, 0}, {1, 0, 0}, {0, 0, 2}}));
}

TEST(MergeCounts, SinglePartIsIdentity) {
  std::mt19937_64 gen(14);
  const auto n = count_transitions(index_chain(random_chain(gen, 300, 4)));
  const auto m = merge_counts(std::vector<TransitionCounts>{n});
  EXPECT_EQ(m.counts, n.counts);
  EXPECT_EQ(m.dictionary, n.dictionary);
  EXPECT_EQ(m.visits, n.visits);
}

TEST(MergeCounts, EmptyListRejected) {
  try {
    merge_counts(std::vector<TransitionCounts>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyMerge);
  }
}

TEST(MergeCounts, NoBridgeBetweenChains) {
  std::mt19937_64 gen(15);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c1 = random_chain(gen, 2 + trial * 13, 4);
    const auto c2 = random_chain(gen, 2 + trial * 5, 6);
    const auto m = merge_counts(std::vector<TransitionCounts>{count_transitions(index_chain(c1)),
                                                              count_transitions(index_chain(c2))});
    EXPECT_EQ(m.total_transitions, static_cast<std::int64_t>(c1.size() - 1 + c2.size() - 1));
    EXPECT_EQ(m.counts.sum(), m.total_transitions);
    for (const auto& i : m.dictionary.labels())
      for (const auto& j : m.dictionary.labels())
        EXPECT_EQ(m.counts(static_cast<Eigen::Index>(m.dictionary.at(i)), static_cast<Eigen::Index>(m.dictionary.at(j))),
                  count_by_label(c1, i, j) + count_by_label(c2, i, j));
  }
}

TEST(MergeCounts, CommutativeAndAssociativeByLabel) {
  std::mt19937_64 gen(16);
  std::vector<TransitionCounts> parts;
  for (int k = 0; k < 3; ++k) parts.push_back(count_transitions(index_chain(random_chain(gen, 200, 3 + k))));
  const auto abc = merge_counts(std::vector<TransitionCounts>{parts[0], parts[1], parts[2]});
  const auto cba = merge_counts(std::vector<TransitionCounts>{parts[2], parts[1], parts[0]});
  const auto nested = merge_counts(std::vector<TransitionCounts>{
      parts[0], merge_counts(std::vector<TransitionCounts>{parts[1], parts[2]})});
  for (const auto* other : {&cba, &nested}) {
    ASSERT_EQ(other->model_count(), abc.model_count());
    for (const auto& i : abc.dictionary.labels()) {
      EXPECT_EQ(abc.visits[abc.dictionary.at(i)], other->visits[other->dictionary.at(i)]);
      for (const auto& j : abc.dictionary.labels())
        EXPECT_EQ(abc.counts(static_cast<Eigen::Index>(abc.dictionary.at(i)), static_cast<Eigen::Index>(abc.dictionary.at(j))),
                  other->counts(static_cast<Eigen::Index>(other->dictionary.at(i)),
                                static_cast<Eigen::Index>(other->dictionary.at(j))));
    }
  }
}

TEST(ChainIo, LabelLinesSkipBlankAndBom) {
  std::istringstream in("\xEF\xBB\xBF" "A\n\n B \r\nA\n");
  EXPECT_EQ(read_label_lines(in), (std::vector<std::string>{"A", "B", "A"}));
}

TEST(ChainIo, CsvWithChainIdsAndIterations) {
  std::istringstream in(
      "chain_id,iteration,label\n"
      "c1,1,M1\n"
      "c2,10,\"M,2\"\n"
      "c1,2,M3\n"
      "c2,11,M1\n");
  const auto chains = read_chain_csv(in);
  ASSERT_EQ(chains.size(), 2u);
  EXPECT_EQ(chains[0].chain_id, "c1");
  EXPECT_EQ(chains[0].labels, (std::vector<std::string>{"M1", "M3"}));
  EXPECT_EQ(chains[1].labels, (std::vector<std::string>{"M,2", "M1"}));
}

TEST(ChainIo, CsvCustomLabelColumn) {
  std::istringstream in("k,model\n1,a\n2,b\n");
  const auto chains = read_chain_csv(in, "model");
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(chains[0].labels, (std::vector<std::string>{"a", "b"}));
}

TEST(ChainIo, NonContiguousIterationsRejected) {
  std::istringstream in("iteration,label\n1,A\n2,B\n4,A\n");
  try {
    read_chain_csv(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonContiguousIterations);
  }
}

TEST(ChainIo, MalformedCsvRejected) {
  std::istringstream missing("iteration,model\n1,A\n");
  EXPECT_THROW(read_chain_csv(missing), Error);
  std::istringstream ragged("iteration,label\n1,A,extra\n");
  EXPECT_THROW(read_chain_csv(ragged), Error);
  std::istringstream bad_iter("iteration,label\none,A\n");
  EXPECT_THROW(read_chain_csv(bad_iter), Error);
}

TEST(ChainIo, FormatFromExtension) {
  EXPECT_EQ(resolve_format("x/run.CSV", ChainFormat::Auto), ChainFormat::Csv);
  EXPECT_EQ(resolve_format("x/run.txt", ChainFormat::Auto), ChainFormat::Lines);
  EXPECT_EQ(resolve_format("x/run.txt", ChainFormat::Csv), ChainFormat::Csv);
}
