#include "fixtures.h"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace refspect::testing {

std::filesystem::path DataPath(const std::string& name) {
  return std::filesystem::path(REFSPECT_TEST_DATA_DIR) / name;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("refspect-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

namespace {

void AddCiters(std::vector<CitingRecord>& records, const std::string& prefix, int count,
               const std::vector<std::string>& refs) {
  for (int i = 0; i < count; ++i) {
    records.push_back({prefix + std::to_string(i), 2000 + i % 14, "Article", refs});
  }
}

}  // namespace

std::vector<CitingRecord> ArrheniusCorpus() {
  std::vector<CitingRecord> records;
  AddCiters(records, "PM", 279, {kArrheniusPhilMag, "CALLENDAR GS, 1938, Q J ROY METEOR SOC, V64, P223"});
  AddCiters(records, "LE", 32, {kArrheniusLondon, "TYNDALL J, 1861, PHILOS T R SOC LOND, V151, P1"});
  return records;
}

std::vector<CitingRecord> Year1941Corpus() {
  std::vector<CitingRecord> records;
  AddCiters(records, "J", 354, {kJenny});
  AddCiters(records, "M", 352, {kMilankovitch});
  AddCiters(records, "O", 5, {"ODUM EP, 1940, ECOLOGY, V21, P1"});
  return records;
}

std::shared_ptr<const CorpusIndex> Index(std::vector<CitingRecord> records) {
  return std::make_shared<const CorpusIndex>(std::move(records));
}

std::shared_ptr<const CorpusIndex> GoldenCorpus() {
  static const std::shared_ptr<const CorpusIndex> corpus = [] {
    std::ifstream in(DataPath("golden_corpus.txt"), std::ios::binary);
    ParseResult parsed = ParseFieldTaggedExport(in);
    if (!parsed.diagnostics.empty()) throw std::runtime_error("golden corpus has diagnostics");
    return Index(std::move(parsed.records));
  }();
  return corpus;
}

}  // namespace refspect::testing
