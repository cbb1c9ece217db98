#include "refspect/corpus.h"

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "random_corpus.h"
#include "refspect/error.h"

namespace refspect {
namespace {

ParseResult Tagged(const std::string& text) {
  std::istringstream in(text);
  return ParseFieldTaggedExport(in);
}

ParseResult Csv(const std::string& text) {
  std::istringstream in(text);
  return ParseCsvCorpus(in);
}

constexpr char kTwoRecords[] =
    "FN Clarivate Analytics Web of Science\n"
    "VR 1.0\n"
    "PT J\n"
    "DT Article\n"
    "CR ARRHENIUS S, 1896, PHILOS MAG, V41, P237\n"
    "   TYNDALL J, 1861, PHILOS T R SOC LOND, V151, P1\n"
    "   CALLENDAR GS, 1938, Q J ROY METEOR SOC, V64, P223\n"
    "PY 2001\n"
    "UT WOS:1\n"
    "ER\n"
    "\n"
    "PT J\n"
    "CR JENNY H, 1941, FACTORS SOIL FORMATION\n"
    "CR KEELING CD, 1960, TELLUS, V12, P200\n"
    "PY 1999\n"
    "UT WOS:2\n"
    "ER\n"
    "EF\n";

TEST(FieldTagged, TwoRecords) {
  const ParseResult r = Tagged(kTwoRecords);
  ASSERT_TRUE(r.diagnostics.empty());
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].record_id, "WOS:1");
  EXPECT_EQ(r.records[0].publication_year, 2001);
  EXPECT_EQ(r.records[0].document_type, "Article");
  EXPECT_EQ(r.records[0].cited_raw.size(), 3u);
  EXPECT_EQ(r.records[0].cited_raw[1], "TYNDALL J, 1861, PHILOS T R SOC LOND, V151, P1");
  EXPECT_EQ(r.records[1].cited_raw.size(), 2u);
  EXPECT_EQ(r.records[1].document_type, "J");
}

TEST(FieldTagged, EmptyStream) {
  const ParseResult r = Tagged("");
  EXPECT_TRUE(r.records.empty());
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(FieldTagged, MissingPublicationYear) {
  const ParseResult r = Tagged("PT J\nCR A B, 1900, J\nUT X\nER\nEF\n");
  EXPECT_TRUE(r.records.empty());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, DiagnosticCode::kMissingPublicationYear);
  EXPECT_EQ(r.diagnostics[0].line, 1u);
  EXPECT_EQ(r.diagnostics[0].byte_offset, 0u);
}

TEST(FieldTagged, BadRecordIsSkippedOthersKept) {
  const ParseResult r = Tagged(
      "PT J\nPY 2000\nUT A\nER\n"
      "PT J\nPY 20X0\nUT B\nER\n"
      "PT J\nPY 2001\nER\n"
      "PT J\nPY 2002\nUT A\nER\n"
      "PT J\nPY 2003\nUT C\nER\nEF\n");
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[1].record_id, "C");
  ASSERT_EQ(r.diagnostics.size(), 3u);
  EXPECT_EQ(r.diagnostics[0].code, DiagnosticCode::kInvalidPublicationYear);
  EXPECT_EQ(r.diagnostics[0].line, 5u);
  EXPECT_EQ(r.diagnostics[1].code, DiagnosticCode::kMissingRecordId);
  EXPECT_EQ(r.diagnostics[2].code, DiagnosticCode::kDuplicateRecordId);
}

TEST(FieldTagged, TruncatedFinalRecord) {
  const ParseResult r = Tagged("PT J\nPY 2000\nUT A\nER\nPT J\nPY 2001\nUT B\nCR X, 1900, Y\n");
  ASSERT_EQ(r.records.size(), 1u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, DiagnosticCode::kTruncatedRecord);
  EXPECT_EQ(r.diagnostics[0].line, 5u);
  EXPECT_EQ(r.diagnostics[0].byte_offset, 21u);
}

TEST(FieldTagged, CrlfAndBom) {
  const ParseResult r = Tagged("\xEF\xBB\xBFPT J\r\nPY 2000\r\nUT A\r\nCR X Y, 1900, Z\r\nER\r\nEF\r\n");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].cited_raw.at(0), "X Y, 1900, Z");
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(FieldTagged, StopsAtEf) {
  const ParseResult r = Tagged("PT J\nPY 2000\nUT A\nER\nEF\nPT J\nPY 2001\nUT B\nER\n");
  EXPECT_EQ(r.records.size(), 1u);
}

TEST(FieldTagged, StrayLinesAreReported) {
  const ParseResult r = Tagged("garbage line\nPT J\nPY 2000\nUT A\nER\nER\nEF\n");
  EXPECT_EQ(r.records.size(), 1u);
  ASSERT_EQ(r.diagnostics.size(), 2u);
  EXPECT_EQ(r.diagnostics[0].code, DiagnosticCode::kUnexpectedLine);
  EXPECT_EQ(r.diagnostics[1].line, 6u);
}

TEST(Csv, GroupsRowsById) {
  const ParseResult r = Csv(
      "citing_id,citing_year,cited_raw\n"
      "A,2001,\"X, 1900, J\"\n"
      "B,2002,\"Y, 1901, K\"\n"
      "A,2001,\"Z, 1902, L\"\n"
      "A,2001,\"X, 1900, J\"\n");
  ASSERT_TRUE(r.diagnostics.empty());
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].record_id, "A");
  EXPECT_EQ(r.records[0].cited_raw,
            (std::vector<std::string>{"X, 1900, J", "Z, 1902, L", "X, 1900, J"}));
  EXPECT_EQ(r.records[1].cited_raw.size(), 1u);
}

TEST(Csv, HeaderOnlyAndEmpty) {
  for (const char* text : {"citing_id,citing_year,cited_raw\n", ""}) {
    const ParseResult r = Csv(text);
    EXPECT_TRUE(r.records.empty());
    EXPECT_TRUE(r.diagnostics.empty());
  }
}

TEST(Csv, BadYearRowSkipped) {
  const ParseResult r = Csv("citing_id,citing_year,cited_raw\nA,18XX,\"X, 1900, J\"\nB,1990,Y\n");
  ASSERT_EQ(r.records.size(), 1u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, DiagnosticCode::kInvalidPublicationYear);
  EXPECT_EQ(r.diagnostics[0].line, 2u);
}

TEST(Csv, BadHeaderAndFieldCount) {
  EXPECT_EQ(Csv("id,year,ref\nA,1,2\n").diagnostics.at(0).code, DiagnosticCode::kBadHeader);
  const ParseResult r = Csv("citing_id,citing_year,cited_raw\nA,2000\nB,2000,X\n");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.diagnostics.at(0).code, DiagnosticCode::kWrongFieldCount);
}

TEST(Csv, QuotedNewlinesAndQuotes) {
  const ParseResult r = Csv("citing_id,citing_year,cited_raw\nA,2000,\"say \"\"hi\"\",\nthere\"\n");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].cited_raw[0], "say \"hi\",\nthere");
}

TEST(Csv, UnterminatedQuote) {
  const ParseResult r = Csv("citing_id,citing_year,cited_raw\nA,2000,\"open\n");
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.diagnostics.at(0).code, DiagnosticCode::kUnterminatedQuote);
}

TEST(Csv, OptionalDocumentTypeColumn) {
  const ParseResult r =
      Csv("citing_id,citing_year,cited_raw,document_type\nA,2000,X,Review\nB,2000,,Letter\n");
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].document_type, "Review");
  EXPECT_TRUE(r.records[1].cited_raw.empty());
}

TEST(Csv, RoundTripIsLossless) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    auto records = testing::RandomCorpus(rng, {.max_records = 40, .max_refs_per_record = 8});
    if (!records.empty()) records[0].cited_raw.clear();
    for (auto& rec : records) rec.document_type = i % 2 ? "Review" : "";
    if (!records.empty()) records.back().cited_raw.push_back("Q, 1900, \"quoted\", \nline");
    for (bool with_type : {false, true}) {
      std::ostringstream out;
      WriteCsvCorpus(out, records, with_type);
      const ParseResult back = Csv(out.str());
      ASSERT_TRUE(back.diagnostics.empty());
      auto expected = records;
      if (!with_type) {
        for (auto& rec : expected) rec.document_type.clear();
      }
      ASSERT_EQ(back.records, expected);
    }
  }
}

TEST(Csv, FieldTaggedToCsvRoundTrip) {
  const ParseResult tagged = Tagged(kTwoRecords);
  std::ostringstream out;
  WriteCsvCorpus(out, tagged.records, true);
  EXPECT_EQ(Csv(out.str()).records, tagged.records);
}

TEST(ReadCorpusFile, DetectsFormat) {
  testing::TempDir dir;
  testing::WriteFile(dir / "a.csv", "citing_id,citing_year,cited_raw\nA,2000,X\n");
  testing::WriteFile(dir / "a.txt", kTwoRecords);
  EXPECT_EQ(ReadCorpusFile(dir / "a.csv").records.size(), 1u);
  EXPECT_EQ(ReadCorpusFile(dir / "a.txt").records.size(), 2u);
  EXPECT_THROW(ReadCorpusFile(dir / "missing"), IoError);
}

CorpusIndex TenInstances() {
  // RPYs 1896, 1900, 1950, 1970 (below 1971), 1971, 1985, 2001, none x3.
  return CorpusIndex({
      {"A", 2000, "Article", {"P, 1896, J", "Q, 1900, J", "R, 1971, J", "ANON, ND"}},
      {"B", 2000, "Article", {"S, 1950, J", "T, 1985, J", "U, NO YEAR"}},
      {"C", 2000, "Letter", {"V, 1970, J", "W, 2001, J", "X"}},
  });
}

TEST(Stats, CountsAndCutoff) {
  const CorpusStats s = ComputeCorpusStats(TenInstances(), 1971);
  EXPECT_EQ(s.num_citing_records, 3u);
  EXPECT_EQ(s.num_reference_instances, 10u);
  EXPECT_EQ(s.num_reference_instances_below_cutoff, 4u);
  EXPECT_EQ(s.num_unparseable_rpy, 3u);
  EXPECT_EQ(s.num_other_document_types, 1u);
  EXPECT_EQ(s.min_rpy, 1896);
  EXPECT_EQ(s.max_rpy, 2001);
}

TEST(Stats, EmptyCorpus) {
  const CorpusStats s = ComputeCorpusStats(CorpusIndex(), 1971);
  EXPECT_EQ(s.num_citing_records, 0u);
  EXPECT_EQ(s.num_reference_instances, 0u);
  EXPECT_FALSE(s.min_rpy);
  EXPECT_FALSE(s.max_rpy);
}

TEST(Stats, InstancesEqualSumOfListLengths) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const CorpusIndex corpus(testing::RandomCorpus(rng, {}));
    std::size_t sum = 0;
    for (const auto& r : corpus.records()) sum += r.cited_raw.size();
    const CorpusStats s = ComputeCorpusStats(corpus, 1800);
    EXPECT_EQ(s.num_reference_instances, sum);
    EXPECT_LE(s.num_reference_instances_below_cutoff, s.num_reference_instances);
    if (s.min_rpy) {
      EXPECT_LE(*s.min_rpy, *s.max_rpy);
    }
  }
}

std::vector<int> Years(const CorpusIndex& corpus, const ReferenceView& view) {
  std::vector<int> years;
  for (RefId ref : view.instances) years.push_back(corpus.reference(ref).rpy.value());
  return years;
}

TEST(Cutoff, StrictlyEarlier) {
  const CorpusIndex corpus({{"A", 2000, "", {"A, 1896, J", "B, 1970, J", "C, 1971, J", "D, 1985, J"}}});
  const ReferenceView v = ApplyRpyCutoff(corpus, FullView(corpus), 1971);
  EXPECT_EQ(Years(corpus, v), (std::vector<int>{1896, 1970}));
  EXPECT_EQ(v.records.size(), 1u);
}

TEST(Cutoff, AboveMaxIsIdentityOnParseable) {
  const CorpusIndex corpus = TenInstances();
  const ReferenceView v = ApplyRpyCutoff(corpus, FullView(corpus), 3000);
  EXPECT_EQ(v.instances.size(), 7u);
}

TEST(Cutoff, KeepsRecordsEvenWhenEmpty) {
  const CorpusIndex corpus = TenInstances();
  const ReferenceView v = ApplyRpyCutoff(corpus, FullView(corpus), 1000);
  EXPECT_TRUE(v.instances.empty());
  EXPECT_EQ(v.records.size(), 3u);
}

TEST(Cutoff, IdempotentAndMonotone) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> year(1650, 2000);
  for (int i = 0; i < 50; ++i) {
    const CorpusIndex corpus(testing::RandomCorpus(rng, {.max_records = 60}));
    const ReferenceView full = FullView(corpus);
    const int y1 = year(rng), y2 = year(rng);
    const ReferenceView once = ApplyRpyCutoff(corpus, full, y1);
    EXPECT_EQ(ApplyRpyCutoff(corpus, once, y1), once);
    EXPECT_EQ(ApplyRpyCutoff(corpus, once, y2), ApplyRpyCutoff(corpus, full, std::min(y1, y2)));
  }
}

TEST(DocumentTypes, CaseInsensitiveAndEmptyPasses) {
  const CorpusIndex corpus({{"A", 2000, "Article", {}},
                            {"B", 2000, "Editorial Material", {}},
                            {"C", 2000, "", {}},
                            {"D", 2000, "review", {}}});
  const std::vector<std::string> types = {"ARTICLE", "REVIEW"};
  EXPECT_EQ(FilterDocumentTypes(corpus, FullView(corpus), types).records,
            (std::vector<RecordId>{0, 2, 3}));
  EXPECT_EQ(FilterDocumentTypes(corpus, FullView(corpus), {}).size(), 4u);
}

TEST(CorpusIndex, InternsDistinctStrings) {
  const CorpusIndex corpus({{"A", 2000, "", {"X, 1900, J", "Y, 1901, J", "X, 1900, J"}},
                            {"B", 2000, "", {"Y, 1901, J"}}});
  EXPECT_EQ(corpus.references().size(), 2u);
  EXPECT_EQ(corpus.num_instances(), 4u);
  const auto refs = corpus.record_refs(0);
  EXPECT_EQ(std::vector<RefId>(refs.begin(), refs.end()), (std::vector<RefId>{0, 1, 0}));
}

}  // namespace
}  // namespace refspect
