#include "refspect/ledger.h"

#include <chrono>
#include <ctime>
#include <stdexcept>

#include "refspect/error.h"

namespace refspect {
namespace {

const char* OpName(OverrideOp op) {
  switch (op) {
    case OverrideOp::kMerge: return "merge";
    case OverrideOp::kSplit: return "split";
    case OverrideOp::kYearCorrection: return "year_correction";
  }
  return "merge";
}

}  // namespace

nlohmann::ordered_json EntryToJson(const OverrideEntry& entry) {
  nlohmann::ordered_json args = nlohmann::ordered_json::object();
  switch (entry.op) {
    case OverrideOp::kMerge:
      args["cluster_ids"] = entry.cluster_ids;
      break;
    case OverrideOp::kSplit:
      args["cluster_id"] = entry.cluster_ids.at(0);
      args["partition"] = entry.partition;
      break;
    case OverrideOp::kYearCorrection:
      args["cluster_id"] = entry.cluster_ids.at(0);
      args["year"] = entry.corrected_year;
      break;
  }
  nlohmann::ordered_json j;
  j["op"] = OpName(entry.op);
  j["args"] = std::move(args);
  j["timestamp"] = entry.timestamp;
  j["note"] = entry.note;
  return j;
}

OverrideEntry EntryFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("ledger entry is not an object");
  OverrideEntry entry;
  const std::string op = j.at("op").get<std::string>();
  const nlohmann::json& args = j.at("args");
  if (op == "merge") {
    entry.op = OverrideOp::kMerge;
    entry.cluster_ids = args.at("cluster_ids").get<std::vector<std::string>>();
  } else if (op == "split") {
    entry.op = OverrideOp::kSplit;
    entry.cluster_ids = {args.at("cluster_id").get<std::string>()};
    entry.partition = args.at("partition").get<std::vector<std::vector<std::string>>>();
  } else if (op == "year_correction") {
    entry.op = OverrideOp::kYearCorrection;
    entry.cluster_ids = {args.at("cluster_id").get<std::string>()};
    entry.corrected_year = args.at("year").get<int>();
  } else {
    throw std::invalid_argument("unknown ledger op '" + op + "'");
  }
  entry.timestamp = j.value("timestamp", std::string());
  entry.note = j.value("note", std::string());
  return entry;
}

void OverrideLedger::WriteJsonLines(std::ostream& out) const {
  for (const OverrideEntry& entry : entries_) out << EntryToJson(entry).dump() << '\n';
}

OverrideLedger OverrideLedger::ReadJsonLines(std::istream& in) {
  OverrideLedger ledger;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      ledger.Append(EntryFromJson(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return ledger;
}

std::string UtcTimestampNow() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

}  // namespace refspect
