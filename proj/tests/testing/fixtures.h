#ifndef REFSPECT_TESTS_TESTING_FIXTURES_H_
#define REFSPECT_TESTS_TESTING_FIXTURES_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "refspect/corpus.h"

namespace refspect::testing {

inline constexpr char kArrheniusPhilMag[] = "ARRHENIUS S, 1896, PHILOS MAG, V41, P237";
inline constexpr char kArrheniusLondon[] = "ARRHENIUS S, 1896, LONDON EDINBURGH DUBL, V41, P237";
inline constexpr char kJenny[] = "JENNY H, 1941, FACTORS SOIL FORMATION";
inline constexpr char kMilankovitch[] = "MILANKOVITCH M, 1941, KANON ERDBESTRAHLUNG";

// Golden corpus flags shared by the CLI, API and golden-file checks.
inline const std::vector<std::string> kGoldenFlags = {
    "--cutoff", "1971", "--range", "1686:1970", "--min-ncr", "1000:1900=10",
    "--min-ncr", "1901:1970=100"};

std::filesystem::path DataPath(const std::string& name);
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& text);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// 279 records cite the PHILOS MAG variant, 32 others the LONDON one.
std::vector<CitingRecord> ArrheniusCorpus();

// 354 and 352 citers of two 1941 works plus one 1940 work.
std::vector<CitingRecord> Year1941Corpus();

std::shared_ptr<const CorpusIndex> Index(std::vector<CitingRecord> records);

// Parsed golden corpus, loaded once.
std::shared_ptr<const CorpusIndex> GoldenCorpus();

}  // namespace refspect::testing

#endif  // REFSPECT_TESTS_TESTING_FIXTURES_H_
