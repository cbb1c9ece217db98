#include "refspect/cluster_table.h"

#include <algorithm>
#include <unordered_set>

#include "refspect/error.h"

namespace refspect {

std::vector<std::vector<RecordId>> CitersByReference(const CorpusIndex& corpus,
                                                     const ReferenceView& view) {
  std::vector<std::vector<RecordId>> citers(corpus.references().size());
  for (std::size_t slot = 0; slot < view.size(); ++slot) {
    const RecordId record = view.records[slot];
    for (RefId ref : view.refs_of(slot)) {
      auto& list = citers[ref];
      if (list.empty() || list.back() != record) list.push_back(record);
    }
  }
  return citers;
}

ClusterTable ClusterTable::Build(const CorpusIndex& corpus, const ReferenceView& view,
                                 const ClusterConfig& config) {
  ClusterTable table;
  table.corpus_ = &corpus;
  table.citers_ = std::make_shared<const std::vector<std::vector<RecordId>>>(
      CitersByReference(corpus, view));

  std::vector<RefId> present;
  std::vector<ParsedReference> compact;
  for (RefId id = 0; id < corpus.references().size(); ++id) {
    if ((*table.citers_)[id].empty()) continue;
    present.push_back(id);
    compact.push_back(corpus.reference(id));
  }
  for (std::vector<RefId>& group : LinkReferences(compact, config)) {
    for (RefId& v : group) v = present[v];
    table.clusters_.push_back(table.MakeCluster(std::move(group)));
  }
  table.Reindex();
  return table;
}

ReferenceCluster ClusterTable::MakeCluster(std::vector<RefId> variants) const {
  const auto& refs = corpus_->references();
  std::sort(variants.begin(), variants.end(),
            [&](RefId a, RefId b) { return refs[a].raw_text < refs[b].raw_text; });
  ReferenceCluster cluster;
  std::vector<std::string_view> texts;
  texts.reserve(variants.size());
  for (RefId v : variants) texts.push_back(refs[v].raw_text);
  cluster.id = ClusterIdFor(std::move(texts));
  cluster.canonical = ChooseCanonical(refs, variants, *citers_);
  cluster.effective_rpy = refs[cluster.canonical].rpy;
  cluster.ncr = CountDistinctCiters(variants, *citers_);
  cluster.variants = std::move(variants);
  return cluster;
}

void ClusterTable::Reindex() {
  std::sort(clusters_.begin(), clusters_.end(),
            [](const ReferenceCluster& a, const ReferenceCluster& b) { return a.id < b.id; });
  index_.clear();
  ref_cluster_.assign(corpus_ ? corpus_->references().size() : 0, -1);
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    index_.emplace(clusters_[i].id, i);
    for (RefId v : clusters_[i].variants) ref_cluster_[v] = static_cast<std::int32_t>(i);
  }
}

std::optional<std::string> ClusterTable::Resolve(std::string_view id) const {
  std::string current(id);
  for (std::size_t hops = 0; hops <= aliases_.size(); ++hops) {
    if (index_.contains(current)) return current;
    auto it = aliases_.find(current);
    if (it == aliases_.end()) return std::nullopt;
    current = it->second;
  }
  return std::nullopt;
}

const ReferenceCluster* ClusterTable::Find(std::string_view id) const {
  const auto live = Resolve(id);
  if (!live) return nullptr;
  return &clusters_[index_.at(*live)];
}

const ReferenceCluster& ClusterTable::Get(std::string_view id) const {
  const ReferenceCluster* cluster = Find(id);
  if (cluster == nullptr) throw UnknownClusterError(std::string(id));
  return *cluster;
}

void ClusterTable::Retire(const std::string& id) {
  auto it = index_.find(id);
  if (it == index_.end()) return;
  const std::size_t pos = it->second;
  index_.erase(it);
  if (pos != clusters_.size() - 1) {
    std::swap(clusters_[pos], clusters_.back());
    index_[clusters_[pos].id] = pos;
  }
  clusters_.pop_back();
  corrections_.erase(id);
}

void ClusterTable::AddLive(ReferenceCluster cluster, std::optional<int> correction) {
  if (correction) {
    corrections_[cluster.id] = *correction;
    cluster.effective_rpy = *correction;
  }
  aliases_.erase(cluster.id);
  index_[cluster.id] = clusters_.size();
  clusters_.push_back(std::move(cluster));
}

ClusterTable::MergeOutcome ClusterTable::Merge(std::span<const std::string> ids) {
  std::vector<std::string> live;
  for (const std::string& id : ids) {
    const auto resolved = Resolve(id);
    if (!resolved) throw UnknownClusterError(id);
    if (std::find(live.begin(), live.end(), *resolved) == live.end()) live.push_back(*resolved);
  }
  if (live.empty()) throw RejectionError("merge needs at least one cluster id");
  if (live.size() == 1) return {live.front(), false};

  std::vector<RefId> variants;
  for (const std::string& id : live) {
    const ReferenceCluster& c = clusters_[index_.at(id)];
    variants.insert(variants.end(), c.variants.begin(), c.variants.end());
  }
  ReferenceCluster merged = MakeCluster(std::move(variants));
  std::optional<int> correction;
  for (const std::string& id : live) {
    const ReferenceCluster& c = clusters_[index_.at(id)];
    if (std::find(c.variants.begin(), c.variants.end(), merged.canonical) != c.variants.end()) {
      if (auto it = corrections_.find(id); it != corrections_.end()) correction = it->second;
    }
  }
  for (const std::string& id : live) {
    Retire(id);
    if (id != merged.id) aliases_[id] = merged.id;
  }
  const std::string new_id = merged.id;
  AddLive(std::move(merged), correction);
  Reindex();
  return {new_id, true};
}

std::vector<std::string> ClusterTable::Split(
    std::string_view id, const std::vector<std::vector<std::string>>& partition) {
  const ReferenceCluster& parent = Get(id);
  std::unordered_map<std::string_view, RefId> by_text;
  for (RefId v : parent.variants) by_text.emplace(reference(v).raw_text, v);

  std::vector<std::vector<RefId>> blocks;
  std::unordered_set<RefId> seen;
  for (const auto& block : partition) {
    if (block.empty()) throw RejectionError("split partition has an empty block");
    std::vector<RefId> ids;
    for (const std::string& text : block) {
      auto it = by_text.find(text);
      if (it == by_text.end()) {
        throw RejectionError("'" + text + "' is not a variant of cluster " + parent.id);
      }
      if (!seen.insert(it->second).second) {
        throw RejectionError("'" + text + "' appears twice in the split partition");
      }
      ids.push_back(it->second);
    }
    blocks.push_back(std::move(ids));
  }
  if (seen.size() != parent.variants.size()) {
    throw RejectionError("split partition does not cover all " +
                         std::to_string(parent.variants.size()) + " variants of " + parent.id);
  }

  std::optional<int> correction;
  if (auto it = corrections_.find(parent.id); it != corrections_.end()) correction = it->second;
  const std::string parent_id = parent.id;
  Retire(parent_id);
  std::vector<std::string> new_ids;
  for (auto& block : blocks) {
    ReferenceCluster cluster = MakeCluster(std::move(block));
    new_ids.push_back(cluster.id);
    AddLive(std::move(cluster), correction);
  }
  Reindex();
  return new_ids;
}

const ReferenceCluster& ClusterTable::CorrectYear(std::string_view id, int year) {
  if (!IsValidYear(year)) {
    throw RejectionError("corrected year " + std::to_string(year) +
                         " is outside [1000, 2100]");
  }
  const std::string live = Get(id).id;
  ReferenceCluster& cluster = clusters_[index_.at(live)];
  corrections_[live] = year;
  cluster.effective_rpy = year;
  return cluster;
}

void ClusterTable::Apply(const OverrideEntry& entry) {
  if (entry.cluster_ids.empty()) throw RejectionError("ledger entry names no cluster");
  switch (entry.op) {
    case OverrideOp::kMerge:
      Merge(entry.cluster_ids);
      break;
    case OverrideOp::kSplit:
      Split(entry.cluster_ids.front(), entry.partition);
      break;
    case OverrideOp::kYearCorrection:
      CorrectYear(entry.cluster_ids.front(), entry.corrected_year);
      break;
  }
}

void ClusterTable::Replay(const OverrideLedger& ledger) {
  for (const OverrideEntry& entry : ledger.entries()) Apply(entry);
}

ClusterTable ClusterTable::Recounted(const ReferenceView& view) const {
  ClusterTable out = *this;
  out.citers_ = std::make_shared<const std::vector<std::vector<RecordId>>>(
      CitersByReference(*corpus_, view));
  for (ReferenceCluster& c : out.clusters_) c.ncr = CountDistinctCiters(c.variants, *out.citers_);
  std::erase_if(out.clusters_, [](const ReferenceCluster& c) { return c.ncr == 0; });
  out.Reindex();
  return out;
}

ClusterTable ClusterTable::Filtered(
    const std::function<bool(const ReferenceCluster&)>& keep) const {
  ClusterTable out = *this;
  std::erase_if(out.clusters_, [&](const ReferenceCluster& c) { return !keep(c); });
  out.Reindex();
  return out;
}

std::uint64_t ClusterTable::TotalIncidences() const {
  std::uint64_t total = 0;
  for (const ReferenceCluster& c : clusters_) total += c.ncr;
  return total;
}

}  // namespace refspect
