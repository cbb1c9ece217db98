#ifndef REFSPECT_CLUSTER_TABLE_H_
#define REFSPECT_CLUSTER_TABLE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "refspect/clustering.h"
#include "refspect/corpus.h"
#include "refspect/ledger.h"

namespace refspect {

// The live cluster set of one reference view: algorithmic clusters with
// the override ledger applied. Variants are CorpusIndex reference ids.
class ClusterTable {
 public:
  ClusterTable() = default;

  // Clusters every distinct reference that has an instance in `view`.
  static ClusterTable Build(const CorpusIndex& corpus, const ReferenceView& view,
                            const ClusterConfig& config);

  // Ordered by id.
  const std::vector<ReferenceCluster>& clusters() const { return clusters_; }
  const CorpusIndex& corpus() const { return *corpus_; }
  const ParsedReference& reference(RefId id) const { return corpus_->reference(id); }
  const ParsedReference& canonical(const ReferenceCluster& c) const {
    return reference(c.canonical);
  }

  // Citing records of a reference within the table's view.
  std::span<const RecordId> citers(RefId id) const { return (*citers_)[id]; }

  // Live id for `id`, following merges. Nullopt if unknown or split.
  std::optional<std::string> Resolve(std::string_view id) const;
  const ReferenceCluster* Find(std::string_view id) const;
  // Throws RejectionError naming the id.
  const ReferenceCluster& Get(std::string_view id) const;

  // Index into clusters() of the cluster holding `ref`, or -1.
  std::int32_t ClusterIndexOf(RefId ref) const { return ref_cluster_[ref]; }

  struct MergeOutcome {
    std::string cluster_id;
    bool changed = false;
  };
  // Unions the variants; retired ids resolve to the new one. Merging a
  // cluster with itself changes nothing.
  MergeOutcome Merge(std::span<const std::string> ids);

  // `partition` names variants by raw text and must cover the cluster.
  std::vector<std::string> Split(std::string_view id,
                                 const std::vector<std::vector<std::string>>& partition);

  const ReferenceCluster& CorrectYear(std::string_view id, int year);

  // Dispatches one ledger entry; throws RejectionError if it cannot apply.
  void Apply(const OverrideEntry& entry);
  void Replay(const OverrideLedger& ledger);

  // Same clusters with NCR recounted over `view` (normally a subset of the
  // view the table was built on). Clusters left without citers are dropped.
  ClusterTable Recounted(const ReferenceView& view) const;

  ClusterTable Filtered(const std::function<bool(const ReferenceCluster&)>& keep) const;

  // Total (record, cluster) incidences.
  std::uint64_t TotalIncidences() const;

 private:
  ReferenceCluster MakeCluster(std::vector<RefId> variants) const;
  void Reindex();
  void Retire(const std::string& id);
  void AddLive(ReferenceCluster cluster, std::optional<int> correction);

  const CorpusIndex* corpus_ = nullptr;
  std::shared_ptr<const std::vector<std::vector<RecordId>>> citers_;
  std::vector<ReferenceCluster> clusters_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<std::string, std::string> aliases_;
  std::map<std::string, int> corrections_;
  std::vector<std::int32_t> ref_cluster_;
};

// Per-reference citing records (sorted, unique) over `view`, indexed by
// CorpusIndex reference id.
std::vector<std::vector<RecordId>> CitersByReference(const CorpusIndex& corpus,
                                                     const ReferenceView& view);

}  // namespace refspect

#endif  // REFSPECT_CLUSTER_TABLE_H_
