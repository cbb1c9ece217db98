#include "refspect/corpus.h"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "refspect/csv.h"
#include "refspect/error.h"

namespace refspect {
namespace {

std::string Upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

std::optional<int> ParseYear(std::string_view text) {
  text = Trim(text);
  if (text.size() != 4) return std::nullopt;
  int year = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    year = year * 10 + (c - '0');
  }
  if (!IsValidYear(year)) return std::nullopt;
  return year;
}

void StripBom(std::string& line) {
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
}

// Accumulates one field-tagged record between its first tag and ER.
struct PendingRecord {
  std::size_t line = 0;
  std::size_t byte_offset = 0;
  std::string pt;
  std::string dt;
  std::optional<std::string> py;
  std::optional<std::string> ut;
  std::vector<std::string> cited;
};

class FieldTaggedParser {
 public:
  ParseResult Run(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t offset = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::size_t line_offset = offset;
      offset += line.size() + (in.eof() ? 0 : 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line_no == 1) StripBom(line);
      if (Trim(line).empty()) continue;
      if (!HandleLine(line, line_no, line_offset)) break;
    }
    if (in.bad()) throw IoError("read error after line " + std::to_string(line_no));
    if (pending_) {
      Report(pending_->byte_offset, pending_->line, DiagnosticCode::kTruncatedRecord,
             "record starting here has no ER before end of input");
      pending_.reset();
    }
    return std::move(result_);
  }

 private:
  // Returns false once EF is seen.
  bool HandleLine(const std::string& line, std::size_t line_no, std::size_t offset) {
    if (line.starts_with("   ")) {
      if (!pending_) return true;
      const std::string_view value = Trim(std::string_view(line).substr(3));
      if (value.empty()) return true;
      if (tag_ == "CR") {
        pending_->cited.emplace_back(value);
      } else if (tag_ == "PT" || tag_ == "DT") {
        std::string& field = tag_ == "PT" ? pending_->pt : pending_->dt;
        field += ' ';
        field += value;
      }
      return true;
    }
    if (line.size() < 2 || (line.size() > 2 && line[2] != ' ')) {
      Report(offset, line_no, DiagnosticCode::kUnexpectedLine,
             "line is neither a tagged field nor a continuation");
      return true;
    }
    tag_ = line.substr(0, 2);
    const std::string_view value =
        line.size() > 3 ? Trim(std::string_view(line).substr(3)) : std::string_view();

    if (tag_ == "EF") {
      if (pending_) {
        Report(pending_->byte_offset, pending_->line, DiagnosticCode::kTruncatedRecord,
               "record starting here has no ER before EF");
        pending_.reset();
      }
      return false;
    }
    if (!pending_) {
      if (tag_ == "FN" || tag_ == "VR") return true;
      if (tag_ == "ER") {
        Report(offset, line_no, DiagnosticCode::kUnexpectedLine, "ER outside a record");
        return true;
      }
      pending_.emplace();
      pending_->line = line_no;
      pending_->byte_offset = offset;
    }
    if (tag_ == "ER") {
      Finish();
    } else if (tag_ == "PT") {
      pending_->pt = value;
    } else if (tag_ == "DT") {
      pending_->dt = value;
    } else if (tag_ == "PY") {
      pending_->py = std::string(value);
    } else if (tag_ == "UT") {
      pending_->ut = std::string(value);
    } else if (tag_ == "CR") {
      if (!value.empty()) pending_->cited.emplace_back(value);
    }
    return true;
  }

  void Finish() {
    PendingRecord rec = std::move(*pending_);
    pending_.reset();
    if (!rec.py) {
      Report(rec.byte_offset, rec.line, DiagnosticCode::kMissingPublicationYear,
             "record has no PY field");
      return;
    }
    const auto year = ParseYear(*rec.py);
    if (!year) {
      Report(rec.byte_offset, rec.line, DiagnosticCode::kInvalidPublicationYear,
             "PY '" + *rec.py + "' is not a year in [1000, 2100]");
      return;
    }
    if (!rec.ut || rec.ut->empty()) {
      Report(rec.byte_offset, rec.line, DiagnosticCode::kMissingRecordId,
             "record has no UT field");
      return;
    }
    if (!seen_ids_.insert(*rec.ut).second) {
      Report(rec.byte_offset, rec.line, DiagnosticCode::kDuplicateRecordId,
             "UT '" + *rec.ut + "' already seen");
      return;
    }
    CitingRecord record;
    record.record_id = std::move(*rec.ut);
    record.publication_year = *year;
    record.document_type = rec.dt.empty() ? std::move(rec.pt) : std::move(rec.dt);
    record.cited_raw = std::move(rec.cited);
    result_.records.push_back(std::move(record));
  }

  void Report(std::size_t offset, std::size_t line, DiagnosticCode code,
              std::string message) {
    result_.diagnostics.push_back({offset, line, code, std::move(message)});
  }

  ParseResult result_;
  std::optional<PendingRecord> pending_;
  std::string tag_;
  std::unordered_set<std::string> seen_ids_;
};

}  // namespace

std::string_view DiagnosticCodeName(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::kMissingPublicationYear: return "missing_publication_year";
    case DiagnosticCode::kInvalidPublicationYear: return "invalid_publication_year";
    case DiagnosticCode::kMissingRecordId: return "missing_record_id";
    case DiagnosticCode::kDuplicateRecordId: return "duplicate_record_id";
    case DiagnosticCode::kTruncatedRecord: return "truncated_record";
    case DiagnosticCode::kUnexpectedLine: return "unexpected_line";
    case DiagnosticCode::kBadHeader: return "bad_header";
    case DiagnosticCode::kWrongFieldCount: return "wrong_field_count";
    case DiagnosticCode::kInconsistentYear: return "inconsistent_year";
    case DiagnosticCode::kUnterminatedQuote: return "unterminated_quote";
  }
  return "unknown";
}

ParseResult ParseFieldTaggedExport(std::istream& in) {
  return FieldTaggedParser().Run(in);
}

ParseResult ParseCsvCorpus(std::istream& in) {
  ParseResult result;
  CsvReader reader(in);
  auto header = reader.Next();
  if (!header) return result;
  if (!header->fields.empty()) StripBom(header->fields.front());
  const std::vector<std::string> kHeader3 = {"citing_id", "citing_year", "cited_raw"};
  const std::vector<std::string> kHeader4 = {"citing_id", "citing_year", "cited_raw",
                                             "document_type"};
  std::vector<std::string> names;
  for (const auto& f : header->fields) names.emplace_back(Trim(f));
  if (names != kHeader3 && names != kHeader4) {
    result.diagnostics.push_back({header->byte_offset, header->line,
                                  DiagnosticCode::kBadHeader,
                                  "expected header citing_id,citing_year,cited_raw"});
    return result;
  }
  const std::size_t width = names.size();

  std::unordered_map<std::string, std::size_t> slot_of;
  auto report = [&](const CsvReader::Row& row, DiagnosticCode code, std::string msg) {
    result.diagnostics.push_back({row.byte_offset, row.line, code, std::move(msg)});
  };
  while (auto row = reader.Next()) {
    if (reader.unterminated_quote()) {
      report(*row, DiagnosticCode::kUnterminatedQuote, "quoted field never closed");
      continue;
    }
    if (row->fields.size() == 1 && Trim(row->fields[0]).empty()) continue;
    if (row->fields.size() != width) {
      report(*row, DiagnosticCode::kWrongFieldCount,
             "expected " + std::to_string(width) + " fields, got " +
                 std::to_string(row->fields.size()));
      continue;
    }
    const std::string id(Trim(row->fields[0]));
    if (id.empty()) {
      report(*row, DiagnosticCode::kMissingRecordId, "empty citing_id");
      continue;
    }
    const auto year = ParseYear(row->fields[1]);
    if (!year) {
      report(*row, DiagnosticCode::kInvalidPublicationYear,
             "citing_year '" + row->fields[1] + "' is not a year in [1000, 2100]");
      continue;
    }
    auto [it, inserted] = slot_of.try_emplace(id, result.records.size());
    if (inserted) {
      CitingRecord record;
      record.record_id = id;
      record.publication_year = *year;
      if (width == 4) record.document_type = std::string(Trim(row->fields[3]));
      result.records.push_back(std::move(record));
    } else if (result.records[it->second].publication_year != *year) {
      report(*row, DiagnosticCode::kInconsistentYear,
             "citing_year differs from earlier rows of '" + id + "'");
      continue;
    }
    const std::string_view cited = Trim(row->fields[2]);
    if (!cited.empty()) result.records[it->second].cited_raw.emplace_back(cited);
  }
  return result;
}

void WriteCsvCorpus(std::ostream& out, std::span<const CitingRecord> records,
                    bool with_document_type) {
  out << (with_document_type ? "citing_id,citing_year,cited_raw,document_type\n"
                             : "citing_id,citing_year,cited_raw\n");
  auto row = [&](const CitingRecord& r, std::string_view cited) {
    WriteCsvField(out, r.record_id);
    out << ',' << r.publication_year << ',';
    WriteCsvField(out, cited);
    if (with_document_type) {
      out << ',';
      WriteCsvField(out, r.document_type);
    }
    out << '\n';
  };
  for (const CitingRecord& r : records) {
    if (r.cited_raw.empty()) row(r, "");
    for (const std::string& cited : r.cited_raw) row(r, cited);
  }
}

ParseResult ReadCorpusFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  std::string first;
  std::getline(in, first);
  StripBom(first);
  in.clear();
  in.seekg(0);
  if (first.starts_with("citing_id")) return ParseCsvCorpus(in);
  return ParseFieldTaggedExport(in);
}

CorpusIndex::CorpusIndex(std::vector<CitingRecord> records) : records_(std::move(records)) {
  std::unordered_map<std::string_view, RefId> interned;
  offsets_.reserve(records_.size() + 1);
  for (const CitingRecord& record : records_) {
    for (const std::string& raw : record.cited_raw) {
      const std::string_view key = Trim(raw);
      auto [it, inserted] = interned.try_emplace(key, static_cast<RefId>(references_.size()));
      if (inserted) references_.push_back(ParseCitedReference(key));
      instances_.push_back(it->second);
    }
    offsets_.push_back(instances_.size());
  }
}

void ReferenceView::Append(RecordId record, std::span<const RefId> refs) {
  records.push_back(record);
  instances.insert(instances.end(), refs.begin(), refs.end());
  offsets.push_back(instances.size());
}

ReferenceView FullView(const CorpusIndex& corpus) {
  ReferenceView view;
  view.records.reserve(corpus.records().size());
  view.instances.reserve(corpus.num_instances());
  for (RecordId r = 0; r < corpus.records().size(); ++r) view.Append(r, corpus.record_refs(r));
  return view;
}

ReferenceView FilterDocumentTypes(const CorpusIndex& corpus, const ReferenceView& view,
                                  std::span<const std::string> types) {
  if (types.empty()) return view;
  std::unordered_set<std::string> wanted;
  for (const auto& t : types) wanted.insert(Upper(Trim(t)));
  ReferenceView out;
  for (std::size_t slot = 0; slot < view.size(); ++slot) {
    const std::string& type = corpus.records()[view.records[slot]].document_type;
    if (type.empty() || wanted.contains(Upper(Trim(type)))) {
      out.Append(view.records[slot], view.refs_of(slot));
    }
  }
  return out;
}

ReferenceView ApplyRpyCutoff(const CorpusIndex& corpus, const ReferenceView& view,
                             int cutoff_year) {
  ReferenceView out;
  out.records.reserve(view.size());
  out.instances.reserve(view.instances.size());
  for (std::size_t slot = 0; slot < view.size(); ++slot) {
    for (RefId ref : view.refs_of(slot)) {
      const auto& rpy = corpus.reference(ref).rpy;
      if (rpy && *rpy < cutoff_year) out.instances.push_back(ref);
    }
    out.records.push_back(view.records[slot]);
    out.offsets.push_back(out.instances.size());
  }
  return out;
}

CorpusStats ComputeCorpusStats(const CorpusIndex& corpus, int cutoff_year) {
  CorpusStats stats;
  stats.num_citing_records = corpus.records().size();
  stats.num_reference_instances = corpus.num_instances();
  stats.num_distinct_references = corpus.references().size();
  for (RecordId r = 0; r < corpus.records().size(); ++r) {
    const std::string type = Upper(Trim(corpus.records()[r].document_type));
    if (!type.empty() && type != "ARTICLE" && type != "REVIEW") {
      ++stats.num_other_document_types;
    }
    for (RefId ref : corpus.record_refs(r)) {
      const auto& rpy = corpus.reference(ref).rpy;
      if (!rpy) {
        ++stats.num_unparseable_rpy;
        continue;
      }
      if (*rpy < cutoff_year) ++stats.num_reference_instances_below_cutoff;
      stats.min_rpy = stats.min_rpy ? std::min(*stats.min_rpy, *rpy) : *rpy;
      stats.max_rpy = stats.max_rpy ? std::max(*stats.max_rpy, *rpy) : *rpy;
    }
  }
  return stats;
}

}  // namespace refspect
