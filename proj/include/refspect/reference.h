#ifndef REFSPECT_REFERENCE_H_
#define REFSPECT_REFERENCE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace refspect {

inline constexpr int kMinYear = 1000;
inline constexpr int kMaxYear = 2100;

constexpr bool IsValidYear(int year) {
  return year >= kMinYear && year <= kMaxYear;
}

// Structured view of one cited-reference string such as
// "ARRHENIUS S, 1896, PHILOS MAG, V41, P237".
struct ParsedReference {
  std::string raw_text;
  std::string author_norm;
  std::optional<int> rpy;
  std::string source_norm;  // empty when absent
  std::optional<int> volume;
  std::string start_page;   // empty when absent
  std::string doi_norm;     // empty when absent

  bool SameFields(const ParsedReference& other) const {
    return author_norm == other.author_norm && rpy == other.rpy &&
           source_norm == other.source_norm && volume == other.volume &&
           start_page == other.start_page && doi_norm == other.doi_norm;
  }
};

// Splits `raw` on commas and assigns segments by the cited-reference
// grammar: segment 1 is the author, the first 4-digit segment holding a
// valid year is the RPY, the next untagged segment after it is the source,
// `V<digits>` is the volume, `P<token with a digit>` the start page and
// `DOI <text>` / `10.<text>` the DOI. Never fails.
ParsedReference ParseCitedReference(std::string_view raw);

// Folds Latin diacritics to ASCII, uppercases, turns punctuation into
// spaces and collapses whitespace. Idempotent.
std::string NormalizeName(std::string_view text);

// Lowercases and trims; strips a leading "doi" label, brackets and a
// resolver prefix such as "https://doi.org/". Idempotent.
std::string NormalizeDoi(std::string_view text);

std::string_view Trim(std::string_view text);

// Plain Levenshtein distance over bytes.
std::size_t EditDistance(std::string_view a, std::string_view b);

// 1 - distance / max(len); 1 for two empty strings.
double EditSimilarity(std::string_view a, std::string_view b);

struct SimilarityWeights {
  double author = 0.4;
  double source = 0.3;
  double volume = 0.15;
  double start_page = 0.15;
};

// Score in [0, 1]. Equal DOIs score 1; otherwise two years further apart
// than `year_tolerance` score 0; otherwise the weighted mean over the
// fields present on both sides.
double Similarity(const ParsedReference& a, const ParsedReference& b,
                  int year_tolerance = 0,
                  const SimilarityWeights& weights = {});

}  // namespace refspect

#endif  // REFSPECT_REFERENCE_H_
