#include "refspect/clustering.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <unordered_map>

namespace refspect {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t Find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void Union(std::uint32_t a, std::uint32_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

// Cheap per-reference features for the pair pre-checks.
struct Features {
  int volume = -1;
  int page = -1;  // interned start_page
  std::uint32_t author_len = 0;
  std::uint32_t source_len = 0;
};

double LengthBound(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t longest = std::max(a, b);
  if (longest == 0) return 1.0;
  const std::uint32_t diff = a > b ? a - b : b - a;
  return 1.0 - static_cast<double>(diff) / static_cast<double>(longest);
}

// Never below Similarity(a, b) for references outside the DOI and year
// gates, since edit distance is at least the length difference.
double UpperBound(const ParsedReference& a, const ParsedReference& b, const Features& fa,
                  const Features& fb, const SimilarityWeights& w) {
  double score = 0.0;
  double total = 0.0;
  if (fa.author_len > 0 && fb.author_len > 0) {
    score += w.author * LengthBound(fa.author_len, fb.author_len);
    total += w.author;
  }
  if (fa.source_len > 0 && fb.source_len > 0) {
    score += w.source * LengthBound(fa.source_len, fb.source_len);
    total += w.source;
  }
  if (fa.volume >= 0 && fb.volume >= 0) {
    score += w.volume * (fa.volume == fb.volume ? 1.0 : 0.0);
    total += w.volume;
  }
  if (fa.page >= 0 && fb.page >= 0) {
    score += w.start_page * (fa.page == fb.page ? 1.0 : 0.0);
    total += w.start_page;
  }
  if (total == 0.0) return a.SameFields(b) ? 1.0 : 0.0;
  return score / total;
}

}  // namespace

std::string ClusterIdFor(std::vector<std::string_view> raw_texts) {
  std::sort(raw_texts.begin(), raw_texts.end());
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](unsigned char byte) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  };
  for (std::string_view text : raw_texts) {
    for (char c : text) mix(static_cast<unsigned char>(c));
    mix(0x1f);
  }
  char buf[18];
  std::snprintf(buf, sizeof(buf), "C%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::vector<std::vector<RefId>> LinkReferences(std::span<const ParsedReference> refs,
                                               const ClusterConfig& config) {
  const std::size_t n = refs.size();
  // Work in raw_text order so that every tie and traversal is input-order free.
  std::vector<RefId> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](RefId a, RefId b) { return refs[a].raw_text < refs[b].raw_text; });

  std::vector<Features> features(n);
  std::unordered_map<std::string_view, int> page_ids;
  for (std::size_t i = 0; i < n; ++i) {
    const ParsedReference& r = refs[i];
    Features& f = features[i];
    if (r.volume) f.volume = *r.volume;
    if (!r.start_page.empty()) {
      f.page = page_ids.try_emplace(r.start_page, static_cast<int>(page_ids.size()))
                   .first->second;
    }
    f.author_len = static_cast<std::uint32_t>(r.author_norm.size());
    f.source_len = static_cast<std::uint32_t>(r.source_norm.size());
  }

  DisjointSets sets(n);

  auto consider = [&](RefId a, RefId b) {
    const Features& fa = features[a];
    const Features& fb = features[b];
    if (config.require_vol_page_match) {
      if (fa.volume >= 0 && fb.volume >= 0 && fa.volume != fb.volume) return;
      if (fa.page >= 0 && fb.page >= 0 && fa.page != fb.page) return;
    }
    if (sets.Find(a) == sets.Find(b)) return;
    if (UpperBound(refs[a], refs[b], fa, fb, config.weights) < config.threshold) return;
    if (Similarity(refs[a], refs[b], config.year_tolerance, config.weights) >=
        config.threshold) {
      sets.Union(a, b);
    }
  };

  // Year blocks, plus one block for references without a year.
  std::map<int, std::vector<RefId>> by_year;
  std::vector<RefId> yearless;
  for (RefId id : order) {
    if (refs[id].rpy) {
      by_year[*refs[id].rpy].push_back(id);
    } else {
      yearless.push_back(id);
    }
  }
  for (auto it = by_year.begin(); it != by_year.end(); ++it) {
    const std::vector<RefId>& block = it->second;
    for (std::size_t i = 0; i < block.size(); ++i) {
      for (std::size_t j = i + 1; j < block.size(); ++j) consider(block[i], block[j]);
    }
    for (auto other = std::next(it);
         other != by_year.end() && other->first - it->first <= config.year_tolerance;
         ++other) {
      for (RefId a : block) {
        for (RefId b : other->second) consider(a, b);
      }
    }
  }
  for (std::size_t i = 0; i < yearless.size(); ++i) {
    for (std::size_t j = i + 1; j < yearless.size(); ++j) consider(yearless[i], yearless[j]);
  }

  // Equal DOIs link unconditionally.
  std::unordered_map<std::string_view, RefId> first_with_doi;
  for (RefId id : order) {
    if (refs[id].doi_norm.empty()) continue;
    auto [it, inserted] = first_with_doi.try_emplace(refs[id].doi_norm, id);
    if (!inserted) sets.Union(it->second, id);
  }

  std::unordered_map<std::uint32_t, std::size_t> group_of_root;
  std::vector<std::vector<RefId>> groups;
  for (RefId id : order) {
    auto [it, inserted] = group_of_root.try_emplace(sets.Find(id), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(id);
  }
  return groups;
}

std::uint32_t CountDistinctCiters(std::span<const RefId> variants,
                                  std::span<const std::vector<RecordId>> citers) {
  if (variants.size() == 1) return static_cast<std::uint32_t>(citers[variants[0]].size());
  std::vector<RecordId> all;
  for (RefId v : variants) all.insert(all.end(), citers[v].begin(), citers[v].end());
  std::sort(all.begin(), all.end());
  return static_cast<std::uint32_t>(std::unique(all.begin(), all.end()) - all.begin());
}

RefId ChooseCanonical(std::span<const ParsedReference> refs, std::span<const RefId> variants,
                      std::span<const std::vector<RecordId>> citers) {
  RefId best = variants.front();
  for (RefId v : variants.subspan(1)) {
    const std::size_t nv = citers[v].size();
    const std::size_t nb = citers[best].size();
    if (nv > nb || (nv == nb && refs[v].raw_text < refs[best].raw_text)) best = v;
  }
  return best;
}

std::vector<ReferenceCluster> ClusterReferences(std::span<const ParsedReference> refs,
                                                std::span<const std::vector<RecordId>> citers,
                                                const ClusterConfig& config) {
  std::vector<ReferenceCluster> clusters;
  for (std::vector<RefId>& group : LinkReferences(refs, config)) {
    ReferenceCluster cluster;
    std::vector<std::string_view> texts;
    texts.reserve(group.size());
    for (RefId v : group) texts.push_back(refs[v].raw_text);
    cluster.id = ClusterIdFor(std::move(texts));
    cluster.canonical = ChooseCanonical(refs, group, citers);
    cluster.effective_rpy = refs[cluster.canonical].rpy;
    cluster.ncr = CountDistinctCiters(group, citers);
    cluster.variants = std::move(group);
    clusters.push_back(std::move(cluster));
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const ReferenceCluster& a, const ReferenceCluster& b) { return a.id < b.id; });
  return clusters;
}

}  // namespace refspect
