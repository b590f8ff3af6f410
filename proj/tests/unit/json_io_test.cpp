#include <gtest/gtest.h>

#include "quotekg/errors.hpp"
#include "quotekg/extraction.hpp"
#include "quotekg/json_io.hpp"
#include "quotekg/rules.hpp"
#include "quotekg/wikitext.hpp"
#include "test_util.hpp"

namespace quotekg {
namespace {

template <typename T>
T round_trip(const T& value) {
  return json(value).get<T>();
}

QuoteMention full_mention() {
  QuoteMention m;
  m.mention_id = "abc";
  m.person_key = "https://www.wikidata.org/entity/Q567";
  m.text = "Wir schaffen das.";
  m.language = "de";
  m.contexts = {{"Sommerpressekonferenz", {"https://example.org/x"}, "Pressekonferenz"},
                {std::nullopt, {}, std::nullopt}};
  m.date = PartialDate::of_day(2015, 8, 31);
  m.misattributed = true;
  m.sentiment = Sentiment{SentimentCategory::kPositive, 0.5};
  m.entity_links = {{"Berlin", "Berlin", "https://www.wikidata.org/entity/Q64"}, {"x", "X", std::nullopt}};
  m.provenance = NlpProvenance::kDegraded;
  m.edition = "de";
  m.is_original = true;
  return m;
}

TEST(JsonIo, DatesKeepPrecision) {
  for (auto d : {PartialDate::of_year(1933), PartialDate::of_month(2020, 5), PartialDate::of_day(2015, 8, 31)}) {
    EXPECT_EQ(round_trip(d), d);
  }
  EXPECT_THROW(json("2015-13").get<PartialDate>(), DataError);
}

TEST(JsonIo, MentionRoundTrips) {
  auto m = full_mention();
  EXPECT_EQ(round_trip(m), m);
  QuoteMention bare;
  bare.mention_id = "m";
  bare.text = "t";
  EXPECT_EQ(round_trip(bare), bare);
}

TEST(JsonIo, PersonRoundTrips) {
  PersonRecord p;
  p.canonical_label = "Angela Merkel";
  p.labels = {{"de", "Angela Merkel"}};
  p.wikidata_iri = "https://www.wikidata.org/entity/Q567";
  p.dbpedia_iris = {"http://dbpedia.org/resource/Angela_Merkel"};
  p.wikiquote_iris = {"https://de.wikiquote.org/wiki/Angela_Merkel"};
  p.type_labels = {"human", "politician"};
  EXPECT_EQ(round_trip(p), p);
}

TEST(JsonIo, AlignedPersonRoundTrips) {
  QuoteCluster c;
  c.quote_id = "q";
  c.person_key = "k";
  c.members = {full_mention()};
  c.aggregated_sentiment = Sentiment{SentimentCategory::kNegative, 0.25};
  c.aggregated_date = PartialDate::of_year(2015);
  c.misattributed = true;
  AlignedPerson ap{{}, {c}, "fallback-trigram-512", true};
  ap.person.canonical_label = "P";
  auto back = round_trip(ap);
  EXPECT_EQ(json(back), json(ap));
  ASSERT_EQ(back.clusters.size(), 1u);
  EXPECT_EQ(back.clusters[0].members, c.members);
  EXPECT_EQ(back.clusters[0].aggregated_date, c.aggregated_date);
  EXPECT_TRUE(back.degraded);
}

TEST(JsonIo, RawQuotesFromFixtureRoundTrip) {
  auto rules = load_rules_file(testing::source_path("data/rules.yaml"));
  auto tree = parse_wikitext(testing::read_file(testing::fixture("wikitext/citation_fr.wiki")),
                             "Albert Einstein", "fr");
  auto quotes = extract_quotes(tree, rules.at("fr"), nullptr);
  ASSERT_FALSE(quotes.empty());
  for (const auto& q : quotes) {
    json j = q;
    EXPECT_EQ(json(j.get<RawQuote>()), j);
  }
}

TEST(JsonIo, NdjsonWritesHeaderFirst) {
  testing::TempDir dir;
  {
    NdjsonWriter w(dir / "m.ndjson", kMentionsKind);
    w.write(json{{"a", 1}});
    w.close();
  }
  auto content = testing::read_file(dir / "m.ndjson");
  EXPECT_EQ(content,
            "{\"format\":\"quotekg-intermediate\",\"kind\":\"mentions\",\"version\":1}\n{\"a\":1}\n");
  EXPECT_TRUE(has_intermediate_header(dir / "m.ndjson", kMentionsKind));
  EXPECT_FALSE(has_intermediate_header(dir / "m.ndjson", kClustersKind));

  NdjsonReader r(dir / "m.ndjson", kMentionsKind, "enrich");
  auto first = r.next();
  ASSERT_TRUE(first);
  EXPECT_EQ((*first)["a"], 1);
  EXPECT_FALSE(r.next());
}

TEST(JsonIo, ReaderNamesProducingStageForMissingFile) {
  testing::TempDir dir;
  try {
    NdjsonReader r(dir / "mentions.ndjson", kMentionsKind, "enrich");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("run the 'enrich' stage first"), std::string::npos);
  }
}

TEST(JsonIo, ReaderRejectsWrongKindAndBadLines) {
  testing::TempDir dir;
  {
    NdjsonWriter w(dir / "c.ndjson", kClustersKind);
    w.close();
  }
  EXPECT_THROW(NdjsonReader(dir / "c.ndjson", kMentionsKind, "enrich"), DataError);

  testing::write_file(dir / "bad.ndjson",
                      "{\"format\":\"quotekg-intermediate\",\"kind\":\"mentions\",\"version\":1}\n{}\n{oops\n");
  NdjsonReader r(dir / "bad.ndjson", kMentionsKind, "enrich");
  EXPECT_TRUE(r.next());
  try {
    r.next();
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace quotekg
