#ifndef REFSPECT_CLUSTERING_H_
#define REFSPECT_CLUSTERING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "refspect/corpus.h"
#include "refspect/reference.h"

namespace refspect {

struct ClusterConfig {
  double threshold = 0.80;
  int year_tolerance = 0;
  bool require_vol_page_match = true;
  SimilarityWeights weights;

  friend bool operator==(const ClusterConfig& a, const ClusterConfig& b) {
    return a.threshold == b.threshold && a.year_tolerance == b.year_tolerance &&
           a.require_vol_page_match == b.require_vol_page_match;
  }
};

// One cited work. `variants` and `canonical` index a reference table that
// the owner of the cluster keeps (CorpusIndex::references() or the span
// given to ClusterReferences).
struct ReferenceCluster {
  std::string id;
  std::vector<RefId> variants;  // ordered by raw_text
  RefId canonical = 0;
  std::optional<int> effective_rpy;
  std::uint32_t ncr = 0;

  friend bool operator==(const ReferenceCluster&, const ReferenceCluster&) = default;
};

// Stable id derived from the variant strings, independent of their order.
std::string ClusterIdFor(std::vector<std::string_view> raw_texts);

// Union-find over candidate pairs. Candidates share an RPY (or lie within
// year_tolerance of each other) or share a DOI; a pair links when its
// similarity reaches the threshold and, with require_vol_page_match, its
// volumes and start pages agree wherever both sides carry them.
//
// `refs` must hold distinct raw_text values (RefId = position in `refs`).
// Returns groups of positions, each sorted by raw_text, groups sorted by
// their first member's raw_text. Output does not depend on input order.
std::vector<std::vector<RefId>> LinkReferences(std::span<const ParsedReference> refs,
                                               const ClusterConfig& config);

// Size of the union of sorted citer lists.
std::uint32_t CountDistinctCiters(std::span<const RefId> variants,
                                  std::span<const std::vector<RecordId>> citers);

// Variant with the most citers, ties to the smallest raw_text.
RefId ChooseCanonical(std::span<const ParsedReference> refs, std::span<const RefId> variants,
                      std::span<const std::vector<RecordId>> citers);

// Full clustering: links, then fills id, canonical, effective_rpy and ncr.
// `citers[i]` lists (sorted, unique) the citing records of refs[i].
// Clusters are returned ordered by id.
std::vector<ReferenceCluster> ClusterReferences(std::span<const ParsedReference> refs,
                                                std::span<const std::vector<RecordId>> citers,
                                                const ClusterConfig& config);

}  // namespace refspect

#endif  // REFSPECT_CLUSTERING_H_
