#ifndef REFSPECT_CORPUS_H_
#define REFSPECT_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refspect/reference.h"

namespace refspect {

struct CitingRecord {
  std::string record_id;
  int publication_year = 0;
  std::string document_type;
  std::vector<std::string> cited_raw;

  friend bool operator==(const CitingRecord&, const CitingRecord&) = default;
};

enum class DiagnosticCode {
  kMissingPublicationYear,
  kInvalidPublicationYear,
  kMissingRecordId,
  kDuplicateRecordId,
  kTruncatedRecord,
  kUnexpectedLine,
  kBadHeader,
  kWrongFieldCount,
  kInconsistentYear,
  kUnterminatedQuote,
};

std::string_view DiagnosticCodeName(DiagnosticCode code);

struct Diagnostic {
  std::size_t byte_offset = 0;
  std::size_t line = 0;
  DiagnosticCode code;
  std::string message;
};

struct ParseResult {
  std::vector<CitingRecord> records;
  std::vector<Diagnostic> diagnostics;
};

// Field-tagged export ("PT", "PY", "UT", "CR", "ER", "EF"). Each CR line
// and each of its continuation lines is one cited reference. Unknown tags
// are skipped. Throws IoError if the stream goes bad mid-read.
ParseResult ParseFieldTaggedExport(std::istream& in);

// CSV with header `citing_id,citing_year,cited_raw` (an optional fourth
// `document_type` column is accepted). Rows are grouped by citing_id in
// order of first appearance.
ParseResult ParseCsvCorpus(std::istream& in);

// Canonical 3-column serialization. A record without references becomes a
// single row with an empty cited_raw.
void WriteCsvCorpus(std::ostream& out, std::span<const CitingRecord> records,
                    bool with_document_type = false);

// Opens `path` and dispatches on its first line (CSV header or tags).
ParseResult ReadCorpusFile(const std::filesystem::path& path);

using RecordId = std::uint32_t;
using RefId = std::uint32_t;

// Ingested corpus with every distinct raw reference string parsed once.
class CorpusIndex {
 public:
  CorpusIndex() = default;
  explicit CorpusIndex(std::vector<CitingRecord> records);

  const std::vector<CitingRecord>& records() const { return records_; }
  const std::vector<ParsedReference>& references() const { return references_; }
  const ParsedReference& reference(RefId id) const { return references_[id]; }

  // Reference ids of one record, in cited_raw order.
  std::span<const RefId> record_refs(RecordId record) const {
    return {instances_.data() + offsets_[record],
            offsets_[record + 1] - offsets_[record]};
  }

  std::size_t num_instances() const { return instances_.size(); }

 private:
  std::vector<CitingRecord> records_;
  std::vector<ParsedReference> references_;
  std::vector<std::size_t> offsets_{0};
  std::vector<RefId> instances_;
};

// A subset of citing records and, for each, the reference instances that
// take part in the analysis. Record ids ascend.
struct ReferenceView {
  std::vector<RecordId> records;
  std::vector<std::size_t> offsets{0};
  std::vector<RefId> instances;

  std::size_t size() const { return records.size(); }
  std::span<const RefId> refs_of(std::size_t slot) const {
    return {instances.data() + offsets[slot], offsets[slot + 1] - offsets[slot]};
  }
  void Append(RecordId record, std::span<const RefId> refs);

  friend bool operator==(const ReferenceView&, const ReferenceView&) = default;
};

// All records and all reference instances.
ReferenceView FullView(const CorpusIndex& corpus);

// Keeps records whose document type (case-insensitive) is in `types`.
// Records with an empty type always pass; an empty `types` keeps all.
ReferenceView FilterDocumentTypes(const CorpusIndex& corpus, const ReferenceView& view,
                                  std::span<const std::string> types);

// Keeps the instances whose parsed RPY is strictly earlier than
// `cutoff_year`; instances without an RPY are dropped. Records stay.
ReferenceView ApplyRpyCutoff(const CorpusIndex& corpus, const ReferenceView& view,
                             int cutoff_year);

struct CorpusStats {
  std::size_t num_citing_records = 0;
  std::size_t num_reference_instances = 0;
  std::size_t num_reference_instances_below_cutoff = 0;
  std::size_t num_unparseable_rpy = 0;
  std::size_t num_distinct_references = 0;
  std::size_t num_other_document_types = 0;  // not article/review
  std::optional<int> min_rpy;
  std::optional<int> max_rpy;
};

CorpusStats ComputeCorpusStats(const CorpusIndex& corpus, int cutoff_year);

}  // namespace refspect

#endif  // REFSPECT_CORPUS_H_
