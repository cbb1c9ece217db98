#ifndef REFSPECT_SESSION_H_
#define REFSPECT_SESSION_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refspect/corpus.h"
#include "refspect/error.h"
#include "refspect/ledger.h"
#include "refspect/pipeline.h"

namespace refspect {

inline constexpr int kSessionFormatVersion = 1;

std::string Sha256Hex(std::string_view data);

// "sha256:<hex>" over the canonical 3-column CSV serialization.
std::string CorpusFingerprint(std::span<const CitingRecord> records);

// Everything a session file stores. The corpus itself is referenced by
// fingerprint only.
struct SessionDocument {
  int version = kSessionFormatVersion;
  std::string session_id;
  std::string corpus_fingerprint;
  ClusterConfig clustering;
  PeakParams peaks;
  std::size_t top_k = 3;
  OverrideLedger ledger;
  AnalysisFilters filters;
  MarkerSelection markers;
};

std::string SessionToJson(const SessionDocument& doc);
// Throws ParseError with a line or JSON-path location.
SessionDocument SessionFromJson(std::string_view text);

// Raised by a mutation issued against an outdated staleness counter.
class ConflictError : public Error {
 public:
  ConflictError(std::uint64_t expected, std::uint64_t current)
      : Error("session changed (client saw " + std::to_string(expected) + ", now " +
              std::to_string(current) + "); refetch and retry"),
        current_(current) {}
  std::uint64_t current() const { return current_; }

 private:
  std::uint64_t current_;
};

// Corpus + clustering config + override ledger + filters + markers, with
// derived results memoized per staleness counter. Mutations are
// serialized; readers get immutable snapshots.
class AnalysisSession {
 public:
  using Clock = std::function<std::string()>;

  AnalysisSession(std::shared_ptr<const CorpusIndex> corpus, SessionDocument doc);
  explicit AnalysisSession(std::shared_ptr<const CorpusIndex> corpus);

  // Throws IntegrityError if the fingerprints differ, ParseError for a
  // malformed document, IoError if unreadable.
  static std::unique_ptr<AnalysisSession> Load(const std::filesystem::path& path,
                                               std::shared_ptr<const CorpusIndex> corpus);
  void Save(const std::filesystem::path& path) const;

  SessionDocument Document() const;
  PipelineConfig Config() const;
  std::uint64_t staleness() const;
  const CorpusIndex& corpus() const { return *corpus_; }
  const std::string& fingerprint() const { return fingerprint_; }

  struct Snapshot {
    std::uint64_t staleness = 0;
    std::shared_ptr<const PipelineResult> result;
    std::shared_ptr<const BaseStage> base;
  };
  Snapshot Read() const;
  std::shared_ptr<const PipelineResult> Result() const { return Read().result; }

  // Mutations. Merge also accepts AUTHOR/RPY/SOURCE-PREFIX matchers.
  // `expected_staleness`, when given, must equal the current
  // counter or ConflictError is thrown. Each successful call bumps the
  // counter by one; no-op merges change nothing.
  std::string Merge(std::span<const std::string> ids, std::string note = {},
                    std::optional<std::uint64_t> expected_staleness = std::nullopt);
  std::vector<std::string> Split(std::string_view id,
                                 const std::vector<std::vector<std::string>>& partition,
                                 std::string note = {},
                                 std::optional<std::uint64_t> expected_staleness = std::nullopt);
  void CorrectYear(std::string_view id, int year, std::string note = {},
                   std::optional<std::uint64_t> expected_staleness = std::nullopt);
  void SetMarkers(MarkerSelection markers,
                  std::optional<std::uint64_t> expected_staleness = std::nullopt);
  void ClearMarkers(std::optional<std::uint64_t> expected_staleness = std::nullopt);
  void SetFilters(AnalysisFilters filters,
                  std::optional<std::uint64_t> expected_staleness = std::nullopt);

  void SetClock(Clock clock);

 private:
  struct State {
    SessionDocument doc;
    std::uint64_t staleness = 0;
  };

  State CopyState() const;
  std::shared_ptr<const BaseStage> BaseFor(const State& state) const;
  void CheckExpected(std::optional<std::uint64_t> expected, std::uint64_t current) const;
  std::uint64_t LedgerEdit(OverrideEntry entry, std::optional<std::uint64_t> expected,
                           const std::function<void(const SessionDocument&, ClusterTable&,
                                                    OverrideEntry&)>& apply);
  // `edit` returns true when the base stage (cutoff, scope) must be rebuilt.
  void ReplaceSelection(const std::function<bool(SessionDocument&)>& edit,
                        std::optional<std::uint64_t> expected);

  std::shared_ptr<const CorpusIndex> corpus_;
  std::string fingerprint_;

  mutable std::shared_mutex state_mu_;
  State state_;
  Clock clock_ = UtcTimestampNow;

  mutable std::mutex cache_mu_;
  mutable std::uint64_t cached_staleness_ = UINT64_MAX;
  mutable std::shared_ptr<const BaseStage> cached_base_;
  mutable std::shared_ptr<const PipelineResult> cached_result_;
};

PipelineConfig ToPipelineConfig(const SessionDocument& doc);

}  // namespace refspect

#endif  // REFSPECT_SESSION_H_
