#include "refspect/spectrum.h"

#include <algorithm>
#include <limits>

#include "refspect/error.h"

namespace refspect {

const SpectrumPoint* Spectrum::at(int year) const {
  if (!range || !range->contains(year)) return nullptr;
  return &points[static_cast<std::size_t>(year - range->from)];
}

std::int64_t MedianOfFive(std::array<std::int64_t, 5> values) {
  std::nth_element(values.begin(), values.begin() + 2, values.end());
  return values[2];
}

YearCounts TallyIncidences(const ReferenceView& view, const ClusterTable& table) {
  YearCounts counts;
  std::vector<std::int32_t> cited;
  for (std::size_t slot = 0; slot < view.size(); ++slot) {
    cited.clear();
    for (RefId ref : view.refs_of(slot)) {
      const std::int32_t c = table.ClusterIndexOf(ref);
      if (c >= 0) cited.push_back(c);
    }
    std::sort(cited.begin(), cited.end());
    cited.erase(std::unique(cited.begin(), cited.end()), cited.end());
    for (std::int32_t c : cited) {
      const auto& year = table.clusters()[static_cast<std::size_t>(c)].effective_rpy;
      if (year) ++counts[*year];
    }
  }
  return counts;
}

Spectrum SpectrumFromCounts(const YearCounts& counts, YearRange range) {
  if (range.from > range.to) {
    throw RejectionError("inverted year range " + std::to_string(range.from) + ":" +
                         std::to_string(range.to));
  }
  Spectrum spectrum;
  spectrum.range = range;
  const auto n = static_cast<std::size_t>(range.to - range.from + 1);
  std::vector<std::int64_t> ncr(n, 0);
  for (auto it = counts.lower_bound(range.from); it != counts.end() && it->first <= range.to;
       ++it) {
    ncr[static_cast<std::size_t>(it->first - range.from)] = it->second;
  }
  auto value = [&](std::ptrdiff_t i) -> std::int64_t {
    return (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) ? 0 : ncr[static_cast<std::size_t>(i)];
  };
  spectrum.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::ptrdiff_t>(i);
    SpectrumPoint point;
    point.rpy = range.from + static_cast<int>(i);
    point.ncr_total = ncr[i];
    point.median5 = MedianOfFive({value(c - 2), value(c - 1), value(c), value(c + 1), value(c + 2)});
    point.deviation = point.ncr_total - point.median5;
    spectrum.points.push_back(point);
  }
  return spectrum;
}

Spectrum ComputeSpectrum(const ReferenceView& view, const ClusterTable& table,
                         YearRange range) {
  return SpectrumFromCounts(TallyIncidences(view, table), range);
}

std::optional<YearRange> ObservedRange(const ClusterTable& table) {
  std::optional<YearRange> range;
  for (const ReferenceCluster& c : table.clusters()) {
    if (!c.effective_rpy || c.ncr == 0) continue;
    const int y = *c.effective_rpy;
    if (!range) {
      range = YearRange{y, y};
    } else {
      range->from = std::min(range->from, y);
      range->to = std::max(range->to, y);
    }
  }
  return range;
}

void ValidateEraRules(std::span<const EraThresholdRule> rules) {
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const YearRange& a = rules[i].range;
    if (a.from > a.to) {
      throw RejectionError("era rule range " + std::to_string(a.from) + ":" +
                           std::to_string(a.to) + " is inverted");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const YearRange& b = rules[j].range;
      if (a.from <= b.to && b.from <= a.to) {
        throw RejectionError("era rules " + std::to_string(b.from) + ":" + std::to_string(b.to) +
                             " and " + std::to_string(a.from) + ":" + std::to_string(a.to) +
                             " overlap");
      }
    }
  }
}

namespace {

bool PassesEraRules(const ReferenceCluster& c, std::span<const EraThresholdRule> rules) {
  if (!c.effective_rpy) return false;
  for (const EraThresholdRule& rule : rules) {
    if (rule.range.contains(*c.effective_rpy)) return c.ncr >= rule.min_ncr;
  }
  return false;
}

}  // namespace

std::vector<ReferenceCluster> ApplyEraThresholds(std::span<const ReferenceCluster> clusters,
                                                 std::span<const EraThresholdRule> rules) {
  ValidateEraRules(rules);
  std::vector<ReferenceCluster> kept;
  for (const ReferenceCluster& c : clusters) {
    if (PassesEraRules(c, rules)) kept.push_back(c);
  }
  return kept;
}

ClusterTable ApplyEraThresholds(const ClusterTable& table,
                                std::span<const EraThresholdRule> rules) {
  ValidateEraRules(rules);
  return table.Filtered([&](const ReferenceCluster& c) { return PassesEraRules(c, rules); });
}

std::vector<PeakReport> DetectPeaks(const Spectrum& spectrum, const PeakParams& params) {
  constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
  const auto& pts = spectrum.points;
  std::vector<PeakReport> peaks;
  // Walk runs of equal deviation; a run higher than both of its
  // neighbours is one peak, reported at its first year.
  for (std::size_t i = 0; i < pts.size();) {
    std::size_t end = i + 1;
    while (end < pts.size() && pts[end].deviation == pts[i].deviation) ++end;
    const std::int64_t dev = pts[i].deviation;
    const std::int64_t prev = i > 0 ? pts[i - 1].deviation : kNegInf;
    const std::int64_t next = end < pts.size() ? pts[end].deviation : kNegInf;
    if (dev > 0 && dev >= params.min_deviation && dev > prev && dev > next) {
      peaks.push_back({pts[i].rpy, dev, pts[i].ncr_total, {}});
    }
    i = end;
  }
  std::stable_sort(peaks.begin(), peaks.end(), [](const PeakReport& a, const PeakReport& b) {
    if (a.deviation != b.deviation) return a.deviation > b.deviation;
    return a.rpy < b.rpy;
  });
  if (peaks.size() > params.max_peaks) peaks.resize(params.max_peaks);
  return peaks;
}

std::vector<const ReferenceCluster*> TopReferencesForYear(const ClusterTable& table, int rpy,
                                                          std::size_t k) {
  std::vector<const ReferenceCluster*> hits;
  for (const ReferenceCluster& c : table.clusters()) {
    if (c.effective_rpy == rpy && c.ncr > 0) hits.push_back(&c);
  }
  std::sort(hits.begin(), hits.end(), [&](const ReferenceCluster* a, const ReferenceCluster* b) {
    if (a->ncr != b->ncr) return a->ncr > b->ncr;
    const std::string& ta = table.canonical(*a).raw_text;
    const std::string& tb = table.canonical(*b).raw_text;
    if (ta != tb) return ta < tb;
    return a->id < b->id;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

void AttachTopReferences(std::vector<PeakReport>& peaks, const ClusterTable& table,
                         std::size_t k) {
  for (PeakReport& peak : peaks) {
    peak.top_clusters.clear();
    for (const ReferenceCluster* c : TopReferencesForYear(table, peak.rpy, k)) {
      peak.top_clusters.push_back({c->id, c->ncr});
    }
  }
}

CoResult RpysCo(const ReferenceView& view, const ClusterTable& table,
                std::span<const std::string> marker_ids, MarkerMode mode) {
  if (marker_ids.empty()) throw RejectionError("RPYS-CO needs at least one marker");
  std::vector<std::int32_t> markers;
  std::vector<std::string> live_ids;
  for (const std::string& id : marker_ids) {
    const ReferenceCluster& c = table.Get(id);
    const auto index = static_cast<std::int32_t>(&c - table.clusters().data());
    if (std::find(markers.begin(), markers.end(), index) == markers.end()) {
      markers.push_back(index);
      live_ids.push_back(c.id);
    }
  }

  CoResult result;
  std::vector<std::size_t> citer_count(markers.size(), 0);
  std::vector<bool> hit(markers.size());
  for (std::size_t slot = 0; slot < view.size(); ++slot) {
    std::fill(hit.begin(), hit.end(), false);
    for (RefId ref : view.refs_of(slot)) {
      const std::int32_t c = table.ClusterIndexOf(ref);
      if (c < 0) continue;
      for (std::size_t m = 0; m < markers.size(); ++m) {
        if (markers[m] == c) hit[m] = true;
      }
    }
    std::size_t hits = 0;
    for (std::size_t m = 0; m < markers.size(); ++m) {
      if (hit[m]) {
        ++hits;
        ++citer_count[m];
      }
    }
    const bool keep = mode == MarkerMode::kAny ? hits > 0 : hits == markers.size();
    if (keep) result.view.Append(view.records[slot], view.refs_of(slot));
  }
  for (std::size_t m = 0; m < markers.size(); ++m) {
    if (citer_count[m] == 0) result.markers_without_citers.push_back(live_ids[m]);
  }
  return result;
}

}  // namespace refspect
