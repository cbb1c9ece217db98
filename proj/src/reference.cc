#include "refspect/reference.h"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace refspect {
namespace {

// Base letters for U+0100..U+017F; '#' marks the two-letter ligatures.
constexpr std::string_view kLatinExtendedA =
    "AaAaAaCcCcCcCcDdDdEeEeEeEeEeGgGgGgGgHhHhIiIiIiIiIi##"
    "JjKkkLlLlLlLlLlNnNnNnnNnOoOoOo##RrRrRrSsSsSsSsTtTtTt"
    "UuUuUuUuUuUuWwYyYZzZzZzs";
static_assert(kLatinExtendedA.size() == 0x80);

// Folding for U+00C0..U+00FF.
constexpr std::string_view kLatin1Fold[64] = {
    "A", "A", "A", "A", "A", "A", "AE", "C", "E",  "E", "E", "E", "I",
    "I", "I", "I", "D", "N", "O", "O",  "O", "O",  "O", " ", "O", "U",
    "U", "U", "U", "Y", "TH", "SS", "a", "a", "a", "a", "a", "a", "ae",
    "c", "e", "e", "e", "e", "i",  "i", "i", "i",  "d", "n", "o", "o",
    "o", "o", "o", " ", "o", "u",  "u", "u", "u",  "y", "th", "y"};

bool IsContinuation(unsigned char c) { return (c & 0xC0) == 0x80; }

// Replaces foldable two-byte Latin sequences with ASCII.
std::string FoldDiacritics(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto lead = static_cast<unsigned char>(text[i]);
    if (lead >= 0xC3 && lead <= 0xC5 && i + 1 < text.size() &&
        IsContinuation(static_cast<unsigned char>(text[i + 1]))) {
      const unsigned cp =
          ((lead & 0x1Fu) << 6) | (static_cast<unsigned char>(text[i + 1]) & 0x3Fu);
      if (cp >= 0xC0 && cp <= 0xFF) {
        out += kLatin1Fold[cp - 0xC0];
        ++i;
        continue;
      }
      if (cp >= 0x100 && cp <= 0x17F) {
        const char base = kLatinExtendedA[cp - 0x100];
        if (base != '#') {
          out.push_back(base);
        } else if (cp == 0x132 || cp == 0x133) {
          out += "IJ";
        } else {
          out += "OE";
        }
        ++i;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

bool IsAsciiDigit(char c) { return c >= '0' && c <= '9'; }
bool IsAsciiAlnum(char c) {
  return IsAsciiDigit(c) || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}
char ToUpper(char c) { return (c >= 'a' && c <= 'z') ? char(c - 'a' + 'A') : c; }
char ToLower(char c) { return (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c; }

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), IsAsciiDigit);
}

std::optional<int> ParseYearSegment(std::string_view seg) {
  if (seg.size() != 4 || !AllDigits(seg)) return std::nullopt;
  const int year = std::atoi(std::string(seg).c_str());
  if (!IsValidYear(year)) return std::nullopt;
  return year;
}

std::optional<int> ParseVolumeSegment(std::string_view seg) {
  if (seg.size() < 2 || seg.size() > 10 || (seg[0] != 'V' && seg[0] != 'v')) {
    return std::nullopt;
  }
  const std::string_view digits = seg.substr(1);
  if (!AllDigits(digits)) return std::nullopt;
  return std::atoi(std::string(digits).c_str());
}

std::optional<std::string> ParsePageSegment(std::string_view seg) {
  if (seg.size() < 2 || (seg[0] != 'P' && seg[0] != 'p')) return std::nullopt;
  const std::string_view token = seg.substr(1);
  if (!std::all_of(token.begin(), token.end(), IsAsciiAlnum)) return std::nullopt;
  if (std::none_of(token.begin(), token.end(), IsAsciiDigit)) return std::nullopt;
  std::string page(token);
  std::transform(page.begin(), page.end(), page.begin(), ToUpper);
  return page;
}

std::optional<std::string> ParseDoiSegment(std::string_view seg) {
  if (seg.size() > 4 && (seg.substr(0, 4) == "DOI " || seg.substr(0, 4) == "doi ")) {
    std::string doi = NormalizeDoi(seg.substr(4));
    if (!doi.empty()) return doi;
    return std::nullopt;
  }
  if (seg.size() > 3 && seg.substr(0, 3) == "10.") return NormalizeDoi(seg);
  return std::nullopt;
}

}  // namespace

std::string_view Trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kSpace);
  return text.substr(first, last - first + 1);
}

std::string NormalizeName(std::string_view text) {
  const std::string folded = FoldDiacritics(text);
  std::string out;
  out.reserve(folded.size());
  bool pending_space = false;
  for (char c : folded) {
    const bool keep = IsAsciiAlnum(c) || static_cast<unsigned char>(c) >= 0x80;
    if (!keep) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(ToUpper(c));
  }
  return out;
}

std::string NormalizeDoi(std::string_view text) {
  std::string_view s = Trim(text);
  for (bool changed = true; changed;) {
    changed = false;
    while (!s.empty() && (s.front() == '[' || s.front() == '(')) {
      s.remove_prefix(1);
      changed = true;
    }
    while (!s.empty() && (s.back() == ']' || s.back() == ')' || s.back() == '.')) {
      s.remove_suffix(1);
      changed = true;
    }
    s = Trim(s);
    std::string lower(s.substr(0, std::min<std::size_t>(s.size(), 16)));
    std::transform(lower.begin(), lower.end(), lower.begin(), ToLower);
    for (std::string_view prefix :
         {std::string_view("https://doi.org/"), std::string_view("http://doi.org/"),
          std::string_view("doi:"), std::string_view("doi ")}) {
      if (lower.starts_with(prefix)) {
        s.remove_prefix(prefix.size());
        s = Trim(s);
        changed = true;
        break;
      }
    }
  }
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), ToLower);
  return out;
}

ParsedReference ParseCitedReference(std::string_view raw) {
  ParsedReference ref;
  ref.raw_text = std::string(Trim(raw));

  std::vector<std::string_view> segments;
  std::string_view rest = ref.raw_text;
  while (true) {
    const auto comma = rest.find(',');
    segments.push_back(Trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }

  ref.author_norm = NormalizeName(segments.front());
  bool source_done = false;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    const std::string_view seg = segments[i];
    if (seg.empty()) continue;
    if (!ref.rpy) {
      if (auto year = ParseYearSegment(seg)) {
        ref.rpy = year;
        continue;
      }
    }
    if (auto volume = ParseVolumeSegment(seg)) {
      if (!ref.volume) ref.volume = volume;
      continue;
    }
    if (auto page = ParsePageSegment(seg)) {
      if (ref.start_page.empty()) ref.start_page = std::move(*page);
      continue;
    }
    if (auto doi = ParseDoiSegment(seg)) {
      if (ref.doi_norm.empty()) ref.doi_norm = std::move(*doi);
      continue;
    }
    if (ref.rpy && !source_done) {
      ref.source_norm = NormalizeName(seg);
      source_done = true;
    }
  }
  return ref;
}

std::size_t EditDistance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return a.size();
  std::vector<std::uint32_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::uint32_t diagonal = row[0];
    row[0] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::uint32_t above = row[j];
      const std::uint32_t substitution = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitution});
      diagonal = above;
    }
  }
  return row[b.size()];
}

double EditSimilarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(EditDistance(a, b)) / static_cast<double>(longest);
}

double Similarity(const ParsedReference& a, const ParsedReference& b,
                  int year_tolerance, const SimilarityWeights& weights) {
  if (!a.doi_norm.empty() && a.doi_norm == b.doi_norm) return 1.0;
  if (a.rpy && b.rpy && std::abs(*a.rpy - *b.rpy) > year_tolerance) return 0.0;
  if (a.SameFields(b)) return 1.0;

  double score = 0.0;
  double total = 0.0;
  if (!a.author_norm.empty() && !b.author_norm.empty()) {
    score += weights.author * EditSimilarity(a.author_norm, b.author_norm);
    total += weights.author;
  }
  if (!a.source_norm.empty() && !b.source_norm.empty()) {
    score += weights.source * EditSimilarity(a.source_norm, b.source_norm);
    total += weights.source;
  }
  if (a.volume && b.volume) {
    score += weights.volume * (*a.volume == *b.volume ? 1.0 : 0.0);
    total += weights.volume;
  }
  if (!a.start_page.empty() && !b.start_page.empty()) {
    score += weights.start_page * (a.start_page == b.start_page ? 1.0 : 0.0);
    total += weights.start_page;
  }
  if (total == 0.0) return 0.0;
  return score / total;
}

}  // namespace refspect
