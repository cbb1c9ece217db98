#ifndef REFSPECT_TESTS_TESTING_ORACLE_H_
#define REFSPECT_TESTS_TESTING_ORACLE_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "refspect/cluster_table.h"
#include "refspect/corpus.h"
#include "refspect/spectrum.h"

// Slow, obviously-correct reference implementations. They share nothing
// with the engine beyond the cluster membership they are handed.
namespace refspect::testing {

// For every record, every cluster and every variant, scan the record's
// reference list. A record adds one to a cluster's year at most once.
std::map<int, std::int64_t> BruteForceTally(const ReferenceView& view, const ClusterTable& table);

// Distinct citing records per cluster id, by the same scan.
std::map<std::string, std::uint32_t> BruteForceNcr(const ReferenceView& view,
                                                   const ClusterTable& table);

// Sorts the five window values (zero outside `range`) and takes the middle.
std::int64_t BruteForceMedian(const std::map<int, std::int64_t>& counts, YearRange range,
                              int year);

// Record ids retained by RPYS-CO, by scanning every record for every marker.
std::set<RecordId> BruteForceCoRecords(const ReferenceView& view, const ClusterTable& table,
                                       const std::vector<std::string>& markers, bool require_all);

// Cluster ids an era-threshold pass must keep, using BruteForceNcr.
std::set<std::string> BruteForceEraSet(const ReferenceView& view, const ClusterTable& table,
                                       const std::vector<EraThresholdRule>& rules);

// Full spectrum over `range` rebuilt from the brute-force tally.
Spectrum BruteForceSpectrum(const ReferenceView& view, const ClusterTable& table,
                            YearRange range);

}  // namespace refspect::testing

#endif  // REFSPECT_TESTS_TESTING_ORACLE_H_
