#ifndef REFSPECT_SPECTRUM_H_
#define REFSPECT_SPECTRUM_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "refspect/cluster_table.h"
#include "refspect/corpus.h"

namespace refspect {

// Inclusive year interval.
struct YearRange {
  int from = 0;
  int to = 0;

  bool contains(int year) const { return year >= from && year <= to; }
  friend bool operator==(const YearRange&, const YearRange&) = default;
};

struct SpectrumPoint {
  int rpy = 0;
  std::int64_t ncr_total = 0;
  std::int64_t median5 = 0;
  std::int64_t deviation = 0;

  friend bool operator==(const SpectrumPoint&, const SpectrumPoint&) = default;
};

// One point per year of `range`, ascending. Empty (no range) when there
// is nothing to show.
struct Spectrum {
  std::optional<YearRange> range;
  std::vector<SpectrumPoint> points;

  const SpectrumPoint* at(int year) const;
  friend bool operator==(const Spectrum&, const Spectrum&) = default;
};

using YearCounts = std::map<int, std::int64_t>;

std::int64_t MedianOfFive(std::array<std::int64_t, 5> values);

// (record, cluster) incidences per effective RPY: each record counts once
// per cluster however many variants of it the record cites. References
// whose cluster is not in `table` are ignored.
YearCounts TallyIncidences(const ReferenceView& view, const ClusterTable& table);

// Median over t-2..t+2 where years outside `range` count as zero.
// Throws RejectionError if range.from > range.to.
Spectrum SpectrumFromCounts(const YearCounts& counts, YearRange range);

Spectrum ComputeSpectrum(const ReferenceView& view, const ClusterTable& table,
                         YearRange range);

// [min, max] effective RPY over clusters with citers.
std::optional<YearRange> ObservedRange(const ClusterTable& table);

struct EraThresholdRule {
  YearRange range;
  std::uint32_t min_ncr = 0;

  friend bool operator==(const EraThresholdRule&, const EraThresholdRule&) = default;
};

// Throws RejectionError if two rules overlap or a range is inverted.
void ValidateEraRules(std::span<const EraThresholdRule> rules);

// Keeps clusters whose effective RPY lies in some rule with ncr >= its
// min_ncr. Clusters outside every rule are dropped.
std::vector<ReferenceCluster> ApplyEraThresholds(std::span<const ReferenceCluster> clusters,
                                                 std::span<const EraThresholdRule> rules);
ClusterTable ApplyEraThresholds(const ClusterTable& table,
                                std::span<const EraThresholdRule> rules);

struct PeakParams {
  std::int64_t min_deviation = 1;
  std::size_t max_peaks = 25;
};

struct RankedCluster {
  std::string cluster_id;
  std::uint32_t ncr = 0;

  friend bool operator==(const RankedCluster&, const RankedCluster&) = default;
};

struct PeakReport {
  int rpy = 0;
  std::int64_t deviation = 0;
  std::int64_t ncr_total = 0;
  std::vector<RankedCluster> top_clusters;

  friend bool operator==(const PeakReport&, const PeakReport&) = default;
};

// Local maxima of the deviation that are positive and reach
// min_deviation. Edges compare against -infinity; a plateau of equal
// values counts once, at its earliest year. Ranked by deviation
// descending, then by earlier year.
std::vector<PeakReport> DetectPeaks(const Spectrum& spectrum, const PeakParams& params);

// Clusters with effective RPY `rpy`, by ncr descending then canonical
// raw text ascending; at most k.
std::vector<const ReferenceCluster*> TopReferencesForYear(const ClusterTable& table, int rpy,
                                                          std::size_t k);

void AttachTopReferences(std::vector<PeakReport>& peaks, const ClusterTable& table,
                         std::size_t k);

enum class MarkerMode { kAny, kAll };

struct CoResult {
  ReferenceView view;
  // Markers that no record in the input view cites.
  std::vector<std::string> markers_without_citers;
};

// Retains the records citing at least one marker (kAny) or every marker
// (kAll), with all their references. Throws RejectionError for an empty
// marker set or an id that does not resolve.
CoResult RpysCo(const ReferenceView& view, const ClusterTable& table,
                std::span<const std::string> marker_ids, MarkerMode mode = MarkerMode::kAny);

}  // namespace refspect

#endif  // REFSPECT_SPECTRUM_H_
