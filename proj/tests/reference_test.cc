#include "refspect/reference.h"

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.h"

namespace refspect {
namespace {

// Full-matrix Levenshtein, independent of the engine's rolling row.
std::size_t MatrixDistance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

TEST(ParseCitedReference, FullReference) {
  const ParsedReference r = ParseCitedReference(testing::kArrheniusPhilMag);
  EXPECT_EQ(r.author_norm, "ARRHENIUS S");
  EXPECT_EQ(r.rpy, 1896);
  EXPECT_EQ(r.source_norm, "PHILOS MAG");
  EXPECT_EQ(r.volume, 41);
  EXPECT_EQ(r.start_page, "237");
  EXPECT_EQ(r.doi_norm, "");
  EXPECT_EQ(r.raw_text, testing::kArrheniusPhilMag);
}

TEST(ParseCitedReference, JournalVariantKeepsOtherFields) {
  const ParsedReference r = ParseCitedReference(testing::kArrheniusLondon);
  EXPECT_EQ(r.author_norm, "ARRHENIUS S");
  EXPECT_EQ(r.rpy, 1896);
  EXPECT_EQ(r.source_norm, "LONDON EDINBURGH DUBL");
  EXPECT_EQ(r.volume, 41);
  EXPECT_EQ(r.start_page, "237");
}

TEST(ParseCitedReference, DegenerateInput) {
  const ParsedReference r = ParseCitedReference("Anonymous, no date");
  EXPECT_EQ(r.author_norm, "ANONYMOUS");
  EXPECT_FALSE(r.rpy);
  EXPECT_EQ(r.source_norm, "");
  EXPECT_FALSE(r.volume);
  EXPECT_EQ(r.start_page, "");
  EXPECT_EQ(r.doi_norm, "");
}

TEST(ParseCitedReference, EmptyAndWhitespace) {
  EXPECT_EQ(ParseCitedReference("").author_norm, "");
  EXPECT_EQ(ParseCitedReference("   ").raw_text, "");
  EXPECT_EQ(ParseCitedReference(",,,").author_norm, "");
}

TEST(ParseCitedReference, DoiForms) {
  EXPECT_EQ(ParseCitedReference("KEELING CD, 1960, TELLUS, V12, P200, DOI 10.3402/TELLUSA.V12I2.9366")
                .doi_norm,
            "10.3402/tellusa.v12i2.9366");
  EXPECT_EQ(ParseCitedReference("KEELING CD, 1960, TELLUS, 10.3402/TELLUSA.V12I2.9366").doi_norm,
            "10.3402/tellusa.v12i2.9366");
  EXPECT_EQ(ParseCitedReference("X Y, 2001, J, DOI [10.1000/ABC]").doi_norm, "10.1000/abc");
}

TEST(ParseCitedReference, YearMustBeFourDigitsInRange) {
  EXPECT_FALSE(ParseCitedReference("SMITH J, 0999, J X").rpy);
  EXPECT_FALSE(ParseCitedReference("SMITH J, 19XX, J X").rpy);
  EXPECT_FALSE(ParseCitedReference("SMITH J, 196, J X").rpy);
  EXPECT_EQ(ParseCitedReference("SMITH J, 2100, J X").rpy, 2100);
  EXPECT_FALSE(ParseCitedReference("SMITH J, 2101, J X").rpy);
}

TEST(ParseCitedReference, AuthorSegmentIsNeverTheYear) {
  const ParsedReference r = ParseCitedReference("1984, 1949, SECKER WARBURG");
  EXPECT_EQ(r.author_norm, "1984");
  EXPECT_EQ(r.rpy, 1949);
  EXPECT_EQ(r.source_norm, "SECKER WARBURG");
}

TEST(ParseCitedReference, SourceIsFirstUntaggedSegmentAfterYear) {
  const ParsedReference r = ParseCitedReference("DOE J, 1950, V3, ANN PHYS, EXTRA, P12");
  EXPECT_EQ(r.volume, 3);
  EXPECT_EQ(r.source_norm, "ANN PHYS");
  EXPECT_EQ(r.start_page, "12");
}

TEST(ParseCitedReference, PageNeedsADigit) {
  EXPECT_EQ(ParseCitedReference("DOE J, 1950, ANN, PUBL").source_norm, "ANN");
  EXPECT_EQ(ParseCitedReference("DOE J, 1950, ANN, PUBL").start_page, "");
  EXPECT_EQ(ParseCitedReference("DOE J, 1950, ANN, PA12").start_page, "A12");
}

TEST(NormalizeName, FoldsDiacriticsAndPunctuation) {
  EXPECT_EQ(NormalizeName("Ångström, A.J."), "ANGSTROM A J");
  EXPECT_EQ(NormalizeName("Milanković  M"), "MILANKOVIC M");
  EXPECT_EQ(NormalizeName("Łukasiewicz-Żółw"), "LUKASIEWICZ ZOLW");
  EXPECT_EQ(NormalizeName("  "), "");
}

TEST(NormalizeName, Idempotent) {
  for (const char* s : {"Ångström, A.J.", "d'Alembert", "PHILOS. MAG.", "Œuvres", "x--y"}) {
    const std::string once = NormalizeName(s);
    EXPECT_EQ(NormalizeName(once), once) << s;
  }
}

TEST(NormalizeDoi, StripsPrefixesAndIsIdempotent) {
  EXPECT_EQ(NormalizeDoi("https://doi.org/10.1000/XYZ"), "10.1000/xyz");
  EXPECT_EQ(NormalizeDoi("doi:10.1000/XYZ."), "10.1000/xyz");
  EXPECT_EQ(NormalizeDoi(" [10.1000/XYZ] "), "10.1000/xyz");
  EXPECT_EQ(NormalizeDoi(NormalizeDoi("DOI 10.1/A")), NormalizeDoi("DOI 10.1/A"));
}

TEST(EditDistance, MatchesMatrixOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(0, 12), letter(0, 3);
  for (int i = 0; i < 500; ++i) {
    std::string a, b;
    for (int k = len(rng); k > 0; --k) a.push_back(static_cast<char>('a' + letter(rng)));
    for (int k = len(rng); k > 0; --k) b.push_back(static_cast<char>('a' + letter(rng)));
    ASSERT_EQ(EditDistance(a, b), MatrixDistance(a, b)) << a << " / " << b;
  }
}

TEST(Similarity, IdenticalIsOne) {
  const ParsedReference a = ParseCitedReference(testing::kArrheniusPhilMag);
  EXPECT_DOUBLE_EQ(Similarity(a, a), 1.0);
}

TEST(Similarity, EqualDoiIsOneEvenAcrossYears) {
  const auto a = ParseCitedReference("A B, 1900, J ONE, DOI 10.5/x");
  const auto b = ParseCitedReference("Q R, 1950, OTHER, 10.5/X");
  EXPECT_DOUBLE_EQ(Similarity(a, b), 1.0);
}

TEST(Similarity, YearGate) {
  const auto a = ParseCitedReference("FOURIER J, 1824, ANN CHIM PHYS, V27, P136");
  const auto b = ParseCitedReference("FOURIER J, 1924, ANN CHIM PHYS, V27, P136");
  EXPECT_DOUBLE_EQ(Similarity(a, b, 0), 0.0);
  EXPECT_DOUBLE_EQ(Similarity(a, b, 99), 0.0);
  EXPECT_DOUBLE_EQ(Similarity(a, b, 100), 1.0);
}

TEST(Similarity, ArrheniusPairScoresBelowDefaultThreshold) {
  const auto a = ParseCitedReference(testing::kArrheniusPhilMag);
  const auto b = ParseCitedReference(testing::kArrheniusLondon);
  // Weighted by hand: author 0.4 * 1, source 0.3 * (1 - d / 21), volume and
  // page 0.15 each; every field is present on both sides.
  const double d = static_cast<double>(MatrixDistance("PHILOS MAG", "LONDON EDINBURGH DUBL"));
  const double expected = 0.4 + 0.3 * (1.0 - d / 21.0) + 0.15 + 0.15;
  EXPECT_DOUBLE_EQ(Similarity(a, b), expected);
  EXPECT_NEAR(expected, 0.7429, 1e-4);
  EXPECT_LT(expected, 0.8);
}

TEST(Similarity, MissingFieldsRedistributeWeight) {
  const auto a = ParseCitedReference("JENNY H, 1941, FACTORS SOIL FORMATION");
  const auto b = ParseCitedReference("JENNY H, 1941, FACTORS SOIL FORMATON");
  const double src = 1.0 - 1.0 / 22.0;
  EXPECT_DOUBLE_EQ(Similarity(a, b), (0.4 + 0.3 * src) / 0.7);
}

TEST(Similarity, NoSharedFieldsScoresZero) {
  const auto a = ParseCitedReference(", 1941");
  const auto b = ParseCitedReference(", 1941, V3");
  EXPECT_DOUBLE_EQ(Similarity(a, b), 0.0);
}

TEST(Similarity, SymmetricReflexiveAndBounded) {
  std::mt19937_64 rng(11);
  const char* authors[] = {"SMITH J", "SMYTH J", "SMITH JA", "JONES K"};
  const char* sources[] = {"PHYS REV", "PHYS REV A", "PHYS RE", "NATURE", ""};
  std::uniform_int_distribution<int> pa(0, 3), ps(0, 4), py(1900, 1902), pv(0, 2), pd(0, 4);
  auto random_ref = [&] {
    std::string s = std::string(authors[pa(rng)]) + ", " + std::to_string(py(rng));
    if (const char* src = sources[ps(rng)]; *src) s += std::string(", ") + src;
    if (int v = pv(rng)) s += ", V" + std::to_string(v);
    if (int p = pv(rng)) s += ", P" + std::to_string(p);
    if (pd(rng) == 0) s += ", DOI 10.1/" + std::to_string(pv(rng));
    return ParseCitedReference(s);
  };
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_ref();
    const auto b = random_ref();
    for (int tol : {0, 1, 2}) {
      const double ab = Similarity(a, b, tol);
      ASSERT_DOUBLE_EQ(ab, Similarity(b, a, tol)) << a.raw_text << " | " << b.raw_text;
      ASSERT_GE(ab, 0.0);
      ASSERT_LE(ab, 1.0);
      ASSERT_DOUBLE_EQ(Similarity(a, a, tol), 1.0) << a.raw_text;
      if (!a.doi_norm.empty() && a.doi_norm == b.doi_norm) ASSERT_DOUBLE_EQ(ab, 1.0);
      if (a.doi_norm != b.doi_norm || a.doi_norm.empty()) {
        if (std::abs(*a.rpy - *b.rpy) > tol) ASSERT_DOUBLE_EQ(ab, 0.0);
      }
    }
  }
}

}  // namespace
}  // namespace refspect
