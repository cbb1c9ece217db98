#ifndef REFSPECT_EXPORT_H_
#define REFSPECT_EXPORT_H_

#include <filesystem>
#include <functional>
#include <ostream>
#include <span>

#include "refspect/cluster_table.h"
#include "refspect/spectrum.h"

namespace refspect {

// RPY,NCR,MEDIAN5,DEV; one row per year, ascending.
void WriteSpectrumCsv(std::ostream& out, const Spectrum& spectrum);

// CLUSTER_ID,RPY,NCR,AUTHOR,SOURCE,VOLUME,PAGE,DOI,N_VARIANTS from each
// cluster's canonical variant, ordered by RPY, NCR descending, canonical
// raw text, id.
void WriteClustersCsv(std::ostream& out, const ClusterTable& table);

// Same columns for an explicit row order (for example a per-year top list).
void WriteClusterRows(std::ostream& out, const ClusterTable& table,
                      std::span<const ReferenceCluster* const> rows);

// RANK,RPY,NCR,DEV,TOP_REFERENCES where the last column is
// "id:ncr;id:ncr".
void WritePeaksCsv(std::ostream& out, std::span<const PeakReport> peaks);

// Writes through a sibling temp file and renames it over `path`.
// Throws IoError.
void WriteFileAtomically(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& write);

void ExportSpectrumCsv(const Spectrum& spectrum, const std::filesystem::path& path);
void ExportClustersCsv(const ClusterTable& table, const std::filesystem::path& path);

}  // namespace refspect

#endif  // REFSPECT_EXPORT_H_
