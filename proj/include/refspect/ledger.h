#ifndef REFSPECT_LEDGER_H_
#define REFSPECT_LEDGER_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace refspect {

enum class OverrideOp { kMerge, kSplit, kYearCorrection };

// One analyst decision. Merge uses `cluster_ids`; split and year
// correction use `cluster_ids[0]`. Split blocks name variants by raw text.
struct OverrideEntry {
  OverrideOp op = OverrideOp::kMerge;
  std::vector<std::string> cluster_ids;
  std::vector<std::vector<std::string>> partition;
  int corrected_year = 0;
  std::string timestamp;
  std::string note;

  friend bool operator==(const OverrideEntry&, const OverrideEntry&) = default;
};

// Append-only log of overrides, replayed in order over the algorithmic
// clustering.
class OverrideLedger {
 public:
  void Append(OverrideEntry entry) { entries_.push_back(std::move(entry)); }
  const std::vector<OverrideEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // One JSON object per line: {"op", "args", "timestamp", "note"}.
  void WriteJsonLines(std::ostream& out) const;
  // Throws ParseError naming the offending line.
  static OverrideLedger ReadJsonLines(std::istream& in);

  friend bool operator==(const OverrideLedger&, const OverrideLedger&) = default;

 private:
  std::vector<OverrideEntry> entries_;
};

nlohmann::ordered_json EntryToJson(const OverrideEntry& entry);
// Throws std::invalid_argument on a malformed object.
OverrideEntry EntryFromJson(const nlohmann::json& j);

// UTC, second resolution: 2024-01-31T12:00:00Z.
std::string UtcTimestampNow();

}  // namespace refspect

#endif  // REFSPECT_LEDGER_H_
