#include "refspect/pipeline.h"

#include <charconv>

#include "refspect/error.h"

namespace refspect {

BaseStage BuildBaseStage(const CorpusIndex& corpus, const PipelineConfig& config) {
  BaseStage base;
  StageCounts& counts = base.counts;
  counts.citing_records = corpus.records().size();

  const ReferenceView scoped =
      FilterDocumentTypes(corpus, FullView(corpus), config.filters.document_types);
  counts.records_in_scope = scoped.size();
  counts.reference_instances = scoped.instances.size();

  base.view = ApplyRpyCutoff(corpus, scoped, config.filters.cutoff_year);
  counts.instances_below_cutoff = base.view.instances.size();

  base.table = ClusterTable::Build(corpus, base.view, config.clustering);
  for (const ReferenceCluster& c : base.table.clusters()) {
    counts.distinct_references += c.variants.size();
  }
  counts.clusters_algorithmic = base.table.clusters().size();
  base.table.Replay(config.ledger);
  counts.clusters_after_ledger = base.table.clusters().size();
  return base;
}

PipelineResult FinishPipeline(const BaseStage& base, const PipelineConfig& config) {
  PipelineResult result;
  result.counts = base.counts;
  if (config.markers.active()) {
    CoResult co = RpysCo(base.view, base.table, config.markers.cluster_ids, config.markers.mode);
    result.clusters = base.table.Recounted(co.view);
    result.view = std::move(co.view);
    result.markers_without_citers = std::move(co.markers_without_citers);
  } else {
    result.view = base.view;
    result.clusters = config.filters.era_rules.empty()
                          ? base.table
                          : ApplyEraThresholds(base.table, config.filters.era_rules);
  }
  result.counts.records_after_co = result.view.size();
  result.counts.clusters_final = result.clusters.clusters().size();

  const auto range = config.filters.year_range ? config.filters.year_range
                                               : ObservedRange(result.clusters);
  if (range) result.spectrum = ComputeSpectrum(result.view, result.clusters, *range);
  result.counts.spectrum_years = result.spectrum.points.size();

  result.peaks = DetectPeaks(result.spectrum, config.peaks);
  AttachTopReferences(result.peaks, result.clusters, config.top_k);
  result.counts.peaks = result.peaks.size();
  return result;
}

PipelineResult RunStandardPipeline(const CorpusIndex& corpus, const PipelineConfig& config) {
  return FinishPipeline(BuildBaseStage(corpus, config), config);
}

std::string ResolveMarker(const ClusterTable& table, std::string_view marker) {
  if (const ReferenceCluster* c = table.Find(marker)) return c->id;

  const auto first = marker.find('/');
  if (first == std::string_view::npos) {
    throw RejectionError("marker '" + std::string(marker) +
                         "' is neither a cluster id nor AUTHOR/RPY/SOURCE-PREFIX");
  }
  const std::string author = NormalizeName(marker.substr(0, first));
  std::string_view rest = marker.substr(first + 1);
  const auto second = rest.find('/');
  const std::string_view year_text = Trim(rest.substr(0, second));
  const std::string source =
      second == std::string_view::npos ? std::string() : NormalizeName(rest.substr(second + 1));
  int year = 0;
  const auto [ptr, ec] = std::from_chars(year_text.data(), year_text.data() + year_text.size(), year);
  if (ec != std::errc() || ptr != year_text.data() + year_text.size() || author.empty()) {
    throw RejectionError("cannot parse marker matcher '" + std::string(marker) + "'");
  }

  std::vector<const ReferenceCluster*> matches;
  for (const ReferenceCluster& c : table.clusters()) {
    if (c.effective_rpy != year) continue;
    for (RefId v : c.variants) {
      const ParsedReference& ref = table.reference(v);
      if (ref.author_norm.starts_with(author) && ref.source_norm.starts_with(source)) {
        matches.push_back(&c);
        break;
      }
    }
  }
  if (matches.empty()) {
    throw RejectionError("marker '" + std::string(marker) + "' matches no cluster");
  }
  if (matches.size() > 1) {
    std::string list;
    for (const ReferenceCluster* c : matches) {
      list += "\n  " + c->id + "  " + table.canonical(*c).raw_text;
    }
    throw RejectionError("marker '" + std::string(marker) + "' is ambiguous; candidates:" + list);
  }
  return matches.front()->id;
}

}  // namespace refspect
