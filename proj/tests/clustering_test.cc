#include "refspect/clustering.h"

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "random_corpus.h"

namespace refspect {
namespace {

std::vector<ParsedReference> Parse(const std::vector<std::string>& raws) {
  std::vector<ParsedReference> refs;
  for (const auto& r : raws) refs.push_back(ParseCitedReference(r));
  return refs;
}

std::vector<std::vector<RecordId>> OneCiterEach(std::size_t n) {
  std::vector<std::vector<RecordId>> citers(n);
  for (std::size_t i = 0; i < n; ++i) citers[i] = {static_cast<RecordId>(i)};
  return citers;
}

// Components of the graph with an edge for every pair the linking rule
// accepts, found by checking all pairs.
std::set<std::set<std::string>> OracleGroups(const std::vector<ParsedReference>& refs,
                                             const ClusterConfig& config) {
  const std::size_t n = refs.size();
  auto edge = [&](const ParsedReference& a, const ParsedReference& b) {
    if (!a.doi_norm.empty() && a.doi_norm == b.doi_norm) return true;
    if (a.rpy.has_value() != b.rpy.has_value()) return false;
    if (a.rpy && std::abs(*a.rpy - *b.rpy) > config.year_tolerance) return false;
    if (config.require_vol_page_match) {
      if (a.volume && b.volume && a.volume != b.volume) return false;
      if (!a.start_page.empty() && !b.start_page.empty() && a.start_page != b.start_page) {
        return false;
      }
    }
    return Similarity(a, b, config.year_tolerance, config.weights) >= config.threshold;
  };
  std::vector<int> comp(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (comp[v] < 0 && edge(refs[u], refs[v])) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  std::vector<std::set<std::string>> groups(next);
  for (std::size_t i = 0; i < n; ++i) groups[comp[i]].insert(refs[i].raw_text);
  return {groups.begin(), groups.end()};
}

std::set<std::set<std::string>> Groups(const std::vector<ParsedReference>& refs,
                                       const std::vector<std::vector<RefId>>& linked) {
  std::set<std::set<std::string>> out;
  for (const auto& g : linked) {
    std::set<std::string> s;
    for (RefId id : g) s.insert(refs[id].raw_text);
    out.insert(s);
  }
  return out;
}

TEST(ClusterReferences, ArrheniusPairStaysApartAtDefaultThreshold) {
  const auto refs = Parse({testing::kArrheniusPhilMag, testing::kArrheniusLondon});
  const auto citers = OneCiterEach(2);
  EXPECT_EQ(ClusterReferences(refs, citers, {}).size(), 2u);
  ClusterConfig loose;
  loose.threshold = 0.74;
  const auto merged = ClusterReferences(refs, citers, loose);
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_EQ(merged[0].variants.size(), 2u);
}

TEST(ClusterReferences, CloseSpellingsLink) {
  const auto refs = Parse({"TYNDALL J, 1861, PHILOS T R SOC LOND, V151, P1",
                           "TYNDALL J, 1861, PHILOS T ROY SOC LOND, V151, P1"});
  const auto clusters = ClusterReferences(refs, OneCiterEach(2), {});
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].ncr, 2u);
}

TEST(ClusterReferences, YearConfusionKeptApart) {
  const auto refs = Parse({"FOURIER J, 1824, ANN CHIM PHYS, V27, P136",
                           "FOURIER J, 1924, ANN CHIM PHYS, V27, P136"});
  EXPECT_EQ(ClusterReferences(refs, OneCiterEach(2), {}).size(), 2u);
}

TEST(ClusterReferences, Singleton) {
  const auto refs = Parse({testing::kJenny});
  const auto clusters = ClusterReferences(refs, OneCiterEach(1), {});
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].canonical, 0u);
  EXPECT_EQ(clusters[0].effective_rpy, 1941);
  EXPECT_EQ(clusters[0].ncr, 1u);
}

TEST(ClusterReferences, VolumePageGate) {
  const auto refs = Parse({"SMITH J, 1950, PHYS REV, V10, P100", "SMITH J, 1950, PHYS REV, V11, P100"});
  EXPECT_EQ(ClusterReferences(refs, OneCiterEach(2), {}).size(), 2u);
  ClusterConfig no_gate;
  no_gate.require_vol_page_match = false;
  EXPECT_EQ(ClusterReferences(refs, OneCiterEach(2), no_gate).size(), 1u);
}

TEST(ClusterReferences, DoiLinksAcrossYears) {
  const auto refs = Parse({"A B, 1950, X, DOI 10.1/q", "A B, 1951, Y, DOI 10.1/Q"});
  EXPECT_EQ(ClusterReferences(refs, OneCiterEach(2), {}).size(), 1u);
}

TEST(ClusterReferences, CanonicalHasMostCitersThenSmallestText) {
  const auto refs = Parse({"TYNDALL J, 1861, PHILOS T ROY SOC LOND, V151, P1",
                           "TYNDALL J, 1861, PHILOS T R SOC LOND, V151, P1"});
  std::vector<std::vector<RecordId>> citers = {{1, 2, 3}, {3, 4}};
  auto c = ClusterReferences(refs, citers, {});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].canonical, 0u);
  EXPECT_EQ(c[0].ncr, 4u);
  citers = {{1, 2}, {3, 4}};
  c = ClusterReferences(refs, citers, {});
  EXPECT_EQ(refs[c[0].canonical].raw_text, "TYNDALL J, 1861, PHILOS T R SOC LOND, V151, P1");
}

TEST(ClusterIdFor, OrderIndependentAndDistinct) {
  EXPECT_EQ(ClusterIdFor({"a", "b"}), ClusterIdFor({"b", "a"}));
  EXPECT_NE(ClusterIdFor({"ab"}), ClusterIdFor({"a", "b"}));
  EXPECT_EQ(ClusterIdFor({"x"}).size(), 17u);
  EXPECT_EQ(ClusterIdFor({"x"})[0], 'C');
}

TEST(LinkReferences, MatchesAllPairsOracle) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 40; ++round) {
    std::vector<std::string> raws;
    for (const auto& w : testing::RandomWorks(rng, 40, 1900, 1905)) {
      raws.insert(raws.end(), w.variants.begin(), w.variants.end());
    }
    raws.push_back("ANON, ND");
    raws.push_back("ANON, NO DATE");
    raws.push_back("KAROVO A, 1901, PHILOS MAG, DOI 10.9/x");
    raws.push_back("KAROVO A, 1903, NATURE, 10.9/X");
    std::sort(raws.begin(), raws.end());
    raws.erase(std::unique(raws.begin(), raws.end()), raws.end());
    const auto refs = Parse(raws);
    for (ClusterConfig config : {ClusterConfig{}, ClusterConfig{0.6, 1, false, {}},
                                 ClusterConfig{0.9, 2, true, {}}}) {
      ASSERT_EQ(Groups(refs, LinkReferences(refs, config)), OracleGroups(refs, config))
          << "round " << round << " threshold " << config.threshold;
    }
  }
}

TEST(LinkReferences, ShuffleInvariant) {
  std::mt19937_64 rng(4);
  const auto pool = testing::VariantReferencePool(rng, 600);
  std::vector<std::string> raws = pool;
  const auto base = ClusterReferences(Parse(raws), OneCiterEach(raws.size()), {});
  std::vector<std::string> base_ids;
  for (const auto& c : base) base_ids.push_back(c.id);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(raws.begin(), raws.end(), rng);
    const auto refs = Parse(raws);
    const auto clusters = ClusterReferences(refs, OneCiterEach(raws.size()), {});
    std::vector<std::string> ids;
    for (const auto& c : clusters) ids.push_back(c.id);
    ASSERT_EQ(ids, base_ids);
    for (const auto& c : clusters) {
      ASSERT_TRUE(std::is_sorted(c.variants.begin(), c.variants.end(), [&](RefId a, RefId b) {
        return refs[a].raw_text < refs[b].raw_text;
      }));
    }
  }
}

TEST(CountDistinctCiters, UnionOfSortedLists) {
  const std::vector<std::vector<RecordId>> citers = {{1, 2, 3}, {2, 3, 9}, {}};
  const std::vector<RefId> all = {0, 1, 2};
  EXPECT_EQ(CountDistinctCiters(all, citers), 4u);
  const std::vector<RefId> one = {2};
  EXPECT_EQ(CountDistinctCiters(one, citers), 0u);
}

}  // namespace
}  // namespace refspect
