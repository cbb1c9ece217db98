#ifndef REFSPECT_PIPELINE_H_
#define REFSPECT_PIPELINE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "refspect/cluster_table.h"
#include "refspect/clustering.h"
#include "refspect/corpus.h"
#include "refspect/ledger.h"
#include "refspect/spectrum.h"

namespace refspect {

inline constexpr int kDefaultCutoffYear = 1971;

struct AnalysisFilters {
  int cutoff_year = kDefaultCutoffYear;
  std::vector<EraThresholdRule> era_rules;  // empty: stage skipped
  std::optional<YearRange> year_range;      // empty: observed range
  std::vector<std::string> document_types{"ARTICLE", "REVIEW"};  // empty: all

  friend bool operator==(const AnalysisFilters&, const AnalysisFilters&) = default;
};

struct MarkerSelection {
  std::vector<std::string> cluster_ids;
  MarkerMode mode = MarkerMode::kAny;

  bool active() const { return !cluster_ids.empty(); }
  friend bool operator==(const MarkerSelection&, const MarkerSelection&) = default;
};

struct PipelineConfig {
  AnalysisFilters filters;
  ClusterConfig clustering;
  OverrideLedger ledger;
  MarkerSelection markers;
  PeakParams peaks;
  std::size_t top_k = 3;
};

// Sizes after each stage, in the order the stages run.
struct StageCounts {
  std::size_t citing_records = 0;
  std::size_t records_in_scope = 0;
  std::size_t reference_instances = 0;
  std::size_t instances_below_cutoff = 0;
  std::size_t distinct_references = 0;
  std::size_t clusters_algorithmic = 0;
  std::size_t clusters_after_ledger = 0;
  std::size_t records_after_co = 0;
  std::size_t clusters_final = 0;
  std::size_t spectrum_years = 0;
  std::size_t peaks = 0;
};

// Document-type scope, RPY cutoff, clustering and ledger replay.
struct BaseStage {
  ReferenceView view;
  ClusterTable table;
  StageCounts counts;
};

BaseStage BuildBaseStage(const CorpusIndex& corpus, const PipelineConfig& config);

struct PipelineResult {
  ReferenceView view;    // reduced by RPYS-CO when markers are active
  ClusterTable clusters; // after era thresholds or CO recount
  Spectrum spectrum;
  std::vector<PeakReport> peaks;
  StageCounts counts;
  std::vector<std::string> markers_without_citers;
};

// RPYS-CO (markers) or era thresholds, then spectrum and peaks.
PipelineResult FinishPipeline(const BaseStage& base, const PipelineConfig& config);

PipelineResult RunStandardPipeline(const CorpusIndex& corpus, const PipelineConfig& config);

// Resolves a marker given either as a cluster id or as an
// `AUTHOR/RPY/SOURCE-PREFIX` matcher tested against every variant.
// Throws RejectionError when nothing matches or the match is ambiguous
// (the message lists the candidates).
std::string ResolveMarker(const ClusterTable& table, std::string_view marker);

}  // namespace refspect

#endif  // REFSPECT_PIPELINE_H_
