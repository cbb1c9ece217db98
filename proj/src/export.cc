#include "refspect/export.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <unistd.h>

#include "refspect/csv.h"
#include "refspect/error.h"

namespace refspect {

void WriteSpectrumCsv(std::ostream& out, const Spectrum& spectrum) {
  out << "RPY,NCR,MEDIAN5,DEV\n";
  for (const SpectrumPoint& p : spectrum.points) {
    out << p.rpy << ',' << p.ncr_total << ',' << p.median5 << ',' << p.deviation << '\n';
  }
}

void WriteClustersCsv(std::ostream& out, const ClusterTable& table) {
  std::vector<const ReferenceCluster*> rows;
  rows.reserve(table.clusters().size());
  for (const ReferenceCluster& c : table.clusters()) rows.push_back(&c);
  std::sort(rows.begin(), rows.end(), [&](const ReferenceCluster* a, const ReferenceCluster* b) {
    if (a->effective_rpy != b->effective_rpy) {
      if (!a->effective_rpy || !b->effective_rpy) return a->effective_rpy.has_value();
      return *a->effective_rpy < *b->effective_rpy;
    }
    if (a->ncr != b->ncr) return a->ncr > b->ncr;
    const std::string& ta = table.canonical(*a).raw_text;
    const std::string& tb = table.canonical(*b).raw_text;
    if (ta != tb) return ta < tb;
    return a->id < b->id;
  });

  WriteClusterRows(out, table, rows);
}

void WriteClusterRows(std::ostream& out, const ClusterTable& table,
                      std::span<const ReferenceCluster* const> rows) {
  out << "CLUSTER_ID,RPY,NCR,AUTHOR,SOURCE,VOLUME,PAGE,DOI,N_VARIANTS\n";
  for (const ReferenceCluster* c : rows) {
    const ParsedReference& ref = table.canonical(*c);
    out << c->id << ',';
    if (c->effective_rpy) out << *c->effective_rpy;
    out << ',' << c->ncr << ',';
    WriteCsvField(out, ref.author_norm);
    out << ',';
    WriteCsvField(out, ref.source_norm);
    out << ',';
    if (ref.volume) out << *ref.volume;
    out << ',';
    WriteCsvField(out, ref.start_page);
    out << ',';
    WriteCsvField(out, ref.doi_norm);
    out << ',' << c->variants.size() << '\n';
  }
}

void WritePeaksCsv(std::ostream& out, std::span<const PeakReport> peaks) {
  out << "RANK,RPY,NCR,DEV,TOP_REFERENCES\n";
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const PeakReport& p = peaks[i];
    std::string top;
    for (const RankedCluster& rc : p.top_clusters) {
      if (!top.empty()) top += ';';
      top += rc.cluster_id + ':' + std::to_string(rc.ncr);
    }
    out << (i + 1) << ',' << p.rpy << ',' << p.ncr_total << ',' << p.deviation << ',' << top
        << '\n';
  }
}

void WriteFileAtomically(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& write) {
  static std::atomic<unsigned> counter{0};
  std::filesystem::path temp = path;
  temp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    auto discard = [&] {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(temp, ignored);
    };
    try {
      write(out);
    } catch (...) {
      discard();
      throw;
    }
    out.flush();
    if (!out) {
      discard();
      throw IoError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw IoError("cannot replace " + path.string());
  }
}

void ExportSpectrumCsv(const Spectrum& spectrum, const std::filesystem::path& path) {
  WriteFileAtomically(path, [&](std::ostream& out) { WriteSpectrumCsv(out, spectrum); });
}

void ExportClustersCsv(const ClusterTable& table, const std::filesystem::path& path) {
  WriteFileAtomically(path, [&](std::ostream& out) { WriteClustersCsv(out, table); });
}

}  // namespace refspect
