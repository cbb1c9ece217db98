#include "refspect/session.h"

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "refspect/export.h"

namespace refspect {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

}  // namespace

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < length; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
  return hex.str();
}

namespace {

std::string RandomSessionId() {
  std::random_device rd;
  std::ostringstream id;
  id << "s-" << std::hex << std::setfill('0') << std::setw(8) << rd() << std::setw(8) << rd();
  return id.str();
}

const char* ModeName(MarkerMode mode) { return mode == MarkerMode::kAll ? "and" : "or"; }

// Field access that reports the JSON path of whatever is wrong.
template <typename T>
T Field(const json& object, const std::string& key, const std::string& path) {
  const std::string where = path.empty() ? key : path + "." + key;
  if (!object.is_object() || !object.contains(key)) throw ParseError("missing key", where);
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(e.what(), where);
  }
}

const json& Object(const json& parent, const std::string& key) {
  if (!parent.contains(key) || !parent.at(key).is_object()) {
    throw ParseError("missing or not an object", key);
  }
  return parent.at(key);
}

}  // namespace

std::string CorpusFingerprint(std::span<const CitingRecord> records) {
  std::ostringstream canonical;
  WriteCsvCorpus(canonical, records);
  return "sha256:" + Sha256Hex(canonical.str());
}

std::string SessionToJson(const SessionDocument& doc) {
  ordered_json j;
  j["version"] = doc.version;
  j["session_id"] = doc.session_id;
  j["corpus_fingerprint"] = doc.corpus_fingerprint;

  ordered_json config;
  config["threshold"] = doc.clustering.threshold;
  config["year_tolerance"] = doc.clustering.year_tolerance;
  config["require_vol_page_match"] = doc.clustering.require_vol_page_match;
  config["peaks"] = {{"min_deviation", doc.peaks.min_deviation},
                     {"max_peaks", doc.peaks.max_peaks},
                     {"top_k", doc.top_k}};
  j["config"] = std::move(config);

  ordered_json ledger = ordered_json::array();
  for (const OverrideEntry& entry : doc.ledger.entries()) ledger.push_back(EntryToJson(entry));
  j["ledger"] = std::move(ledger);

  ordered_json filters;
  filters["cutoff_year"] = doc.filters.cutoff_year;
  ordered_json rules = ordered_json::array();
  for (const EraThresholdRule& rule : doc.filters.era_rules) {
    rules.push_back({{"from", rule.range.from}, {"to", rule.range.to}, {"min_ncr", rule.min_ncr}});
  }
  filters["era_rules"] = std::move(rules);
  if (doc.filters.year_range) {
    filters["year_range"] = {{"from", doc.filters.year_range->from},
                             {"to", doc.filters.year_range->to}};
  } else {
    filters["year_range"] = nullptr;
  }
  filters["document_types"] = doc.filters.document_types;
  j["filters"] = std::move(filters);

  j["markers"] = {{"cluster_ids", doc.markers.cluster_ids}, {"mode", ModeName(doc.markers.mode)}};
  return j.dump(2) + "\n";
}

SessionDocument SessionFromJson(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(
                                     std::count(text.begin(), text.begin() + upto, '\n'));
    throw ParseError(e.what(), line);
  }
  if (!j.is_object()) throw ParseError("session document is not an object", "$");

  SessionDocument doc;
  doc.version = Field<int>(j, "version", "");
  if (doc.version != kSessionFormatVersion) {
    throw ParseError("unsupported version " + std::to_string(doc.version), "version");
  }
  doc.session_id = j.value("session_id", std::string());
  doc.corpus_fingerprint = Field<std::string>(j, "corpus_fingerprint", "");

  const json& config = Object(j, "config");
  doc.clustering.threshold = Field<double>(config, "threshold", "config");
  doc.clustering.year_tolerance = Field<int>(config, "year_tolerance", "config");
  doc.clustering.require_vol_page_match =
      Field<bool>(config, "require_vol_page_match", "config");
  if (config.contains("peaks")) {
    const json& peaks = config.at("peaks");
    doc.peaks.min_deviation = Field<std::int64_t>(peaks, "min_deviation", "config.peaks");
    doc.peaks.max_peaks = Field<std::size_t>(peaks, "max_peaks", "config.peaks");
    doc.top_k = Field<std::size_t>(peaks, "top_k", "config.peaks");
  }

  if (!j.contains("ledger") || !j.at("ledger").is_array()) {
    throw ParseError("missing or not an array", "ledger");
  }
  const json& ledger = j.at("ledger");
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    try {
      doc.ledger.Append(EntryFromJson(ledger[i]));
    } catch (const std::exception& e) {
      throw ParseError(e.what(), "ledger[" + std::to_string(i) + "]");
    }
  }

  const json& filters = Object(j, "filters");
  doc.filters.cutoff_year = Field<int>(filters, "cutoff_year", "filters");
  const json rules = Field<json>(filters, "era_rules", "filters");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string path = "filters.era_rules[" + std::to_string(i) + "]";
    doc.filters.era_rules.push_back({{Field<int>(rules[i], "from", path),
                                      Field<int>(rules[i], "to", path)},
                                     Field<std::uint32_t>(rules[i], "min_ncr", path)});
  }
  if (filters.contains("year_range") && !filters.at("year_range").is_null()) {
    const json& range = filters.at("year_range");
    doc.filters.year_range = YearRange{Field<int>(range, "from", "filters.year_range"),
                                       Field<int>(range, "to", "filters.year_range")};
  }
  doc.filters.document_types =
      Field<std::vector<std::string>>(filters, "document_types", "filters");

  const json& markers = Object(j, "markers");
  doc.markers.cluster_ids = Field<std::vector<std::string>>(markers, "cluster_ids", "markers");
  const std::string mode = Field<std::string>(markers, "mode", "markers");
  if (mode != "or" && mode != "and") throw ParseError("mode must be or|and", "markers.mode");
  doc.markers.mode = mode == "and" ? MarkerMode::kAll : MarkerMode::kAny;
  return doc;
}

PipelineConfig ToPipelineConfig(const SessionDocument& doc) {
  PipelineConfig config;
  config.filters = doc.filters;
  config.clustering = doc.clustering;
  config.ledger = doc.ledger;
  config.markers = doc.markers;
  config.peaks = doc.peaks;
  config.top_k = doc.top_k;
  return config;
}

AnalysisSession::AnalysisSession(std::shared_ptr<const CorpusIndex> corpus, SessionDocument doc)
    : corpus_(std::move(corpus)), fingerprint_(CorpusFingerprint(corpus_->records())) {
  if (doc.session_id.empty()) doc.session_id = RandomSessionId();
  doc.corpus_fingerprint = fingerprint_;
  state_.doc = std::move(doc);
}

AnalysisSession::AnalysisSession(std::shared_ptr<const CorpusIndex> corpus)
    : AnalysisSession(std::move(corpus), SessionDocument{}) {}

std::unique_ptr<AnalysisSession> AnalysisSession::Load(
    const std::filesystem::path& path, std::shared_ptr<const CorpusIndex> corpus) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open session file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  SessionDocument doc = SessionFromJson(text.str());
  const std::string actual = CorpusFingerprint(corpus->records());
  if (doc.corpus_fingerprint != actual) throw IntegrityError(doc.corpus_fingerprint, actual);
  return std::make_unique<AnalysisSession>(std::move(corpus), std::move(doc));
}

void AnalysisSession::Save(const std::filesystem::path& path) const {
  const std::string text = SessionToJson(Document());
  WriteFileAtomically(path, [&](std::ostream& out) { out << text; });
}

SessionDocument AnalysisSession::Document() const {
  std::shared_lock lock(state_mu_);
  return state_.doc;
}

PipelineConfig AnalysisSession::Config() const { return ToPipelineConfig(Document()); }

std::uint64_t AnalysisSession::staleness() const {
  std::shared_lock lock(state_mu_);
  return state_.staleness;
}

void AnalysisSession::SetClock(Clock clock) {
  std::unique_lock lock(state_mu_);
  clock_ = std::move(clock);
}

AnalysisSession::State AnalysisSession::CopyState() const {
  std::shared_lock lock(state_mu_);
  return state_;
}

std::shared_ptr<const BaseStage> AnalysisSession::BaseFor(const State& state) const {
  {
    std::lock_guard lock(cache_mu_);
    if (cached_base_ && cached_staleness_ == state.staleness) return cached_base_;
  }
  auto base = std::make_shared<const BaseStage>(
      BuildBaseStage(*corpus_, ToPipelineConfig(state.doc)));
  std::lock_guard lock(cache_mu_);
  if (cached_staleness_ != state.staleness) {
    cached_staleness_ = state.staleness;
    cached_result_.reset();
  }
  cached_base_ = base;
  return base;
}

AnalysisSession::Snapshot AnalysisSession::Read() const {
  const State state = CopyState();
  {
    std::lock_guard lock(cache_mu_);
    if (cached_result_ && cached_staleness_ == state.staleness) {
      return {state.staleness, cached_result_, cached_base_};
    }
  }
  auto base = BaseFor(state);
  auto result = std::make_shared<const PipelineResult>(
      FinishPipeline(*base, ToPipelineConfig(state.doc)));
  std::lock_guard lock(cache_mu_);
  if (cached_staleness_ == state.staleness) cached_result_ = result;
  return {state.staleness, result, base};
}

void AnalysisSession::CheckExpected(std::optional<std::uint64_t> expected,
                                    std::uint64_t current) const {
  if (expected && *expected != current) throw ConflictError(*expected, current);
}

std::uint64_t AnalysisSession::LedgerEdit(
    OverrideEntry entry, std::optional<std::uint64_t> expected,
    const std::function<void(const SessionDocument&, ClusterTable&, OverrideEntry&)>& apply) {
  while (true) {
    const State state = CopyState();
    CheckExpected(expected, state.staleness);
    const auto base = BaseFor(state);
    ClusterTable table = base->table;
    OverrideEntry candidate = entry;
    apply(state.doc, table, candidate);

    std::unique_lock lock(state_mu_);
    if (state_.staleness != state.staleness) {
      if (expected) throw ConflictError(*expected, state_.staleness);
      continue;
    }
    candidate.timestamp = clock_();
    state_.doc.ledger.Append(std::move(candidate));
    const std::uint64_t next = ++state_.staleness;

    auto updated = std::make_shared<BaseStage>();
    updated->view = base->view;
    updated->counts = base->counts;
    updated->table = std::move(table);
    updated->counts.clusters_after_ledger = updated->table.clusters().size();
    std::lock_guard cache_lock(cache_mu_);
    cached_staleness_ = next;
    cached_base_ = std::move(updated);
    cached_result_.reset();
    return next;
  }
}

namespace {

// Cluster ids must exist; anything with a slash is a marker matcher.
std::string LiveId(const ClusterTable& table, const std::string& id) {
  if (id.find('/') != std::string::npos) return ResolveMarker(table, id);
  return table.Get(id).id;
}

}  // namespace

std::string AnalysisSession::Merge(std::span<const std::string> ids, std::string note,
                                   std::optional<std::uint64_t> expected_staleness) {
  // A merge that resolves to a single cluster is answered without a ledger
  // entry.
  {
    const State state = CopyState();
    CheckExpected(expected_staleness, state.staleness);
    ClusterTable probe = BaseFor(state)->table;
    std::vector<std::string> live;
    for (const std::string& id : ids) live.push_back(LiveId(probe, id));
    const auto outcome = probe.Merge(live);
    if (!outcome.changed) return outcome.cluster_id;
  }
  OverrideEntry entry;
  entry.op = OverrideOp::kMerge;
  entry.cluster_ids.assign(ids.begin(), ids.end());
  entry.note = std::move(note);
  std::string new_id;
  LedgerEdit(std::move(entry), expected_staleness,
             [&](const SessionDocument&, ClusterTable& table, OverrideEntry& e) {
    // Store live ids so that replay does not depend on alias history.
    std::vector<std::string> live;
    for (const std::string& id : e.cluster_ids) live.push_back(LiveId(table, id));
    e.cluster_ids = live;
    new_id = table.Merge(live).cluster_id;
  });
  return new_id;
}

std::vector<std::string> AnalysisSession::Split(
    std::string_view id, const std::vector<std::vector<std::string>>& partition,
    std::string note, std::optional<std::uint64_t> expected_staleness) {
  OverrideEntry entry;
  entry.op = OverrideOp::kSplit;
  entry.cluster_ids = {std::string(id)};
  entry.partition = partition;
  entry.note = std::move(note);
  std::vector<std::string> new_ids;
  LedgerEdit(std::move(entry), expected_staleness,
             [&](const SessionDocument& doc, ClusterTable& table, OverrideEntry& e) {
    e.cluster_ids = {table.Get(e.cluster_ids.front()).id};
    // The marker id would stop resolving after the split.
    for (const std::string& marker : doc.markers.cluster_ids) {
      if (table.Resolve(marker) == e.cluster_ids.front()) {
        throw RejectionError("cluster " + e.cluster_ids.front() +
                             " is an active marker; clear the markers before splitting it");
      }
    }
    new_ids = table.Split(e.cluster_ids.front(), e.partition);
  });
  return new_ids;
}

void AnalysisSession::CorrectYear(std::string_view id, int year, std::string note,
                                  std::optional<std::uint64_t> expected_staleness) {
  OverrideEntry entry;
  entry.op = OverrideOp::kYearCorrection;
  entry.cluster_ids = {std::string(id)};
  entry.corrected_year = year;
  entry.note = std::move(note);
  LedgerEdit(std::move(entry), expected_staleness,
             [&](const SessionDocument&, ClusterTable& table, OverrideEntry& e) {
    e.cluster_ids = {table.CorrectYear(e.cluster_ids.front(), year).id};
  });
}

void AnalysisSession::ReplaceSelection(const std::function<bool(SessionDocument&)>& edit,
                                       std::optional<std::uint64_t> expected) {
  std::unique_lock lock(state_mu_);
  CheckExpected(expected, state_.staleness);
  const bool base_changes = edit(state_.doc);
  const std::uint64_t previous = state_.staleness++;
  std::lock_guard cache_lock(cache_mu_);
  if (!base_changes && cached_base_ && cached_staleness_ == previous) {
    cached_staleness_ = state_.staleness;
  } else {
    cached_base_.reset();
  }
  cached_result_.reset();
}

void AnalysisSession::SetMarkers(MarkerSelection markers,
                                 std::optional<std::uint64_t> expected_staleness) {
  if (markers.cluster_ids.empty()) throw RejectionError("marker set is empty");
  while (true) {
    const State state = CopyState();
    CheckExpected(expected_staleness, state.staleness);
    const auto base = BaseFor(state);
    MarkerSelection resolved = markers;
    for (std::string& id : resolved.cluster_ids) id = ResolveMarker(base->table, id);
    try {
      // Pinned to the counter the ids were resolved against.
      ReplaceSelection(
          [&](SessionDocument& doc) {
            doc.markers = resolved;
            return false;
          },
          state.staleness);
      return;
    } catch (const ConflictError&) {
      if (expected_staleness) throw;
    }
  }
}

void AnalysisSession::ClearMarkers(std::optional<std::uint64_t> expected_staleness) {
  ReplaceSelection(
      [](SessionDocument& doc) {
        doc.markers = {};
        return false;
      },
      expected_staleness);
}

void AnalysisSession::SetFilters(AnalysisFilters filters,
                                 std::optional<std::uint64_t> expected_staleness) {
  ValidateEraRules(filters.era_rules);
  if (filters.year_range && filters.year_range->from > filters.year_range->to) {
    throw RejectionError("inverted year range");
  }
  ReplaceSelection(
      [&](SessionDocument& doc) {
        const bool base_changes = doc.filters.cutoff_year != filters.cutoff_year ||
                                  doc.filters.document_types != filters.document_types;
        doc.filters = std::move(filters);
        return base_changes;
      },
      expected_staleness);
}

}  // namespace refspect
