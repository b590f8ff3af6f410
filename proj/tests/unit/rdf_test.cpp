#include <gtest/gtest.h>

#include <random>
#include <set>

#include "quotekg/errors.hpp"
#include "quotekg/rdf.hpp"
#include "rdf_shapes.hpp"

namespace quotekg::rdf {
namespace {

const std::string kXsd(ns::kXsd);

PersonRecord merkel() {
  PersonRecord p;
  p.canonical_label = "Angela Merkel";
  p.labels = {{"de", "Angela Merkel"}, {"en", "Angela Merkel"}};
  p.wikidata_iri = std::string(ns::kWd) + "Q567";
  return p;
}

QuoteMention mention(std::string id, std::string text, std::string lang) {
  QuoteMention m;
  m.mention_id = std::move(id);
  m.person_key = merkel().key();
  m.text = std::move(text);
  m.language = std::move(lang);
  return m;
}

QuoteCluster schaffen_cluster() {
  QuoteCluster c;
  c.quote_id = "q1";
  c.person_key = merkel().key();
  c.members = {mention("m1", "Wir schaffen das.", "de"), mention("m2", "We can do this.", "en")};
  c.aggregated_date = PartialDate::of_day(2015, 8, 31);
  return c;
}

std::set<Term> objects(const TripleGraph& g, const Term& s, const Iri& p) {
  std::set<Term> out;
  for (const auto& t : g.triples())
    if (t.subject == s && t.predicate == p) out.insert(t.object);
  return out;
}

template <typename... T>
std::set<Term> terms(T... t) {
  return {Term(std::move(t))...};
}

IriPolicy registered(std::vector<PersonRecord> persons) {
  IriPolicy policy;
  policy.register_persons(persons);
  return policy;
}

TEST(Rdf, PersonCarriesWikidataSameAsAndTaggedLabels) {
  auto policy = registered({merkel()});
  TripleGraph g;
  emit_person(g, merkel(), policy);
  Iri person = policy.person(merkel());
  EXPECT_EQ(person.value, std::string(kDefaultBaseIri) + "person/angela_merkel");
  EXPECT_EQ(objects(g, person, vocab::same_as()),
            terms(Iri{"https://www.wikidata.org/entity/Q567"}));
  EXPECT_EQ(objects(g, person, vocab::pref_label()),
            terms(Literal{"Angela Merkel", "", "de"}, Literal{"Angela Merkel", "", "en"}));
  EXPECT_EQ(objects(g, person, vocab::type()), terms(vocab::person()));
}

TEST(Rdf, PersonWithoutIrisHasNoSameAs) {
  PersonRecord p;
  p.canonical_label = "Nobody";
  p.labels = {{"en", "Nobody"}};
  auto policy = registered({p});
  TripleGraph g;
  emit_person(g, p, policy);
  EXPECT_TRUE(objects(g, policy.person(p), vocab::same_as()).empty());
}

TEST(Rdf, BilingualClusterIsOneQuotationWithTwoTaggedMentions) {
  auto policy = registered({merkel()});
  TripleGraph g;
  emit_quote(g, schaffen_cluster(), merkel(), policy);
  Iri quote = policy.quote("q1");
  auto mentions = objects(g, quote, vocab::has_mention());
  ASSERT_EQ(mentions.size(), 2u);
  std::set<Term> texts;
  for (const auto& m : mentions) {
    for (const auto& t : objects(g, m, vocab::text())) texts.insert(t);
  }
  EXPECT_EQ(texts, terms(Literal{"Wir schaffen das.", "", "de"},
                                   Literal{"We can do this.", "", "en"}));
  EXPECT_EQ(objects(g, quote, vocab::date_created()),
            terms(Literal{"2015-08-31", kXsd + "date", ""}));
  EXPECT_EQ(objects(g, quote, vocab::spoken_by()), terms(policy.person(merkel())));
  EXPECT_EQ(objects(g, quote, vocab::is_misattributed()),
            terms(Literal{"false", kXsd + "boolean", ""}));
}

TEST(Rdf, MisattributedFlagIsTypedTrue) {
  auto policy = registered({merkel()});
  auto c = schaffen_cluster();
  c.misattributed = true;
  TripleGraph g;
  emit_quote(g, c, merkel(), policy);
  EXPECT_EQ(objects(g, policy.quote("q1"), vocab::is_misattributed()),
            terms(Literal{"true", kXsd + "boolean", ""}));
}

TEST(Rdf, DatelessQuoteHasNoDateCreated) {
  auto policy = registered({merkel()});
  auto c = schaffen_cluster();
  c.aggregated_date.reset();
  TripleGraph g;
  emit_quote(g, c, merkel(), policy);
  EXPECT_TRUE(objects(g, policy.quote("q1"), vocab::date_created()).empty());
}

TEST(Rdf, DateLiteralsFollowPrecision) {
  EXPECT_EQ(date_literal(PartialDate::of_year(1933)), (Literal{"1933", kXsd + "gYear", ""}));
  EXPECT_EQ(date_literal(PartialDate::of_month(1929, 10)), (Literal{"1929-10", kXsd + "gYearMonth", ""}));
  EXPECT_EQ(date_literal(PartialDate::of_day(1929, 10, 26)), (Literal{"1929-10-26", kXsd + "date", ""}));
}

TEST(Rdf, SentimentBecomesEmotionSet) {
  auto policy = registered({merkel()});
  auto c = schaffen_cluster();
  c.aggregated_sentiment = Sentiment{SentimentCategory::kPositive, 0.75};
  TripleGraph g;
  emit_quote(g, c, merkel(), policy);
  auto sets = objects(g, policy.quote("q1"), vocab::has_emotion_set());
  ASSERT_EQ(sets.size(), 1u);
  const Term set = *sets.begin();
  EXPECT_EQ(objects(g, set, vocab::type()), terms(vocab::emotion_set()));
  auto emotions = objects(g, set, vocab::has_emotion());
  ASSERT_EQ(emotions.size(), 1u);
  const Term emotion = *emotions.begin();
  EXPECT_EQ(objects(g, emotion, vocab::type()), terms(vocab::emotion()));
  EXPECT_EQ(objects(g, emotion, vocab::has_emotion_category()),
            terms(vocab::category(SentimentCategory::kPositive)));
  EXPECT_EQ(objects(g, emotion, vocab::has_emotion_intensity()),
            terms(Literal{"0.75", kXsd + "decimal", ""}));
}

TEST(Rdf, ContextsCarryTextOriginAndSources) {
  auto policy = registered({merkel()});
  auto c = schaffen_cluster();
  c.members[0].contexts = {{"Sommerpressekonferenz in Berlin", {"https://example.org/a b"}, "Pressekonferenz"}};
  TripleGraph g;
  emit_quote(g, c, merkel(), policy);
  Iri ctx = policy.context("m1", 0);
  EXPECT_EQ(objects(g, policy.mention("m1"), vocab::has_context()), terms(ctx));
  EXPECT_EQ(objects(g, ctx, vocab::context_text()),
            terms(Literal{"Sommerpressekonferenz in Berlin", "", ""}));
  EXPECT_EQ(objects(g, ctx, vocab::origin_label()), terms(Literal{"Pressekonferenz", "", ""}));
  EXPECT_EQ(objects(g, ctx, vocab::source()), terms(Iri{"https://example.org/a%20b"}));
}

TEST(Rdf, ResolvedEntityLinksBecomeMentions) {
  auto policy = registered({merkel()});
  auto c = schaffen_cluster();
  c.members[1].entity_links = {{"Berlin", "Berlin", std::string(ns::kWd) + "Q64"},
                               {"nowhere", "Nowhere", std::nullopt}};
  TripleGraph g;
  emit_quote(g, c, merkel(), policy);
  EXPECT_EQ(objects(g, policy.quote("q1"), vocab::mentions()),
            terms(Iri{std::string(ns::kWd) + "Q64"}));
}

TEST(Rdf, EmittedPersonPassesShapeChecks) {
  AlignedPerson ap{merkel(), {schaffen_cluster()}, "test", false};
  auto second = schaffen_cluster();
  second.quote_id = "q2";
  second.members = {mention("m3", "Multikulti ist gescheitert.", "de")};
  ap.clusters.push_back(second);
  auto policy = registered({merkel()});
  auto g = emit_aligned_person(ap, policy);
  EXPECT_TRUE(testing::shape_violations(g).empty());
}

TEST(Rdf, ShapeCheckCatchesDanglingMention) {
  TripleGraph g;
  g.add(Iri{"x:m"}, vocab::type(), vocab::mention());
  auto v = testing::shape_violations(g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("Mention not reachable"), std::string::npos);
}

TEST(Rdf, MentionLanguageTagIsTheMentionLanguage) {
  auto policy = registered({merkel()});
  auto c = schaffen_cluster();
  c.members[1].language = "";  // unknown language stays untagged
  TripleGraph g;
  emit_quote(g, c, merkel(), policy);
  EXPECT_EQ(objects(g, policy.mention("m2"), vocab::text()),
            terms(Literal{"We can do this.", "", ""}));
  EXPECT_EQ(objects(g, policy.mention("m1"), vocab::text()),
            terms(Literal{"Wir schaffen das.", "", "de"}));
}

TEST(Rdf, SlugCollisionsAreSuffixedIndependentOfOrder) {
  PersonRecord a;
  a.canonical_label = "John Smith";
  a.wikidata_iri = "https://www.wikidata.org/entity/Q1";
  PersonRecord b = a;
  b.wikidata_iri = "https://www.wikidata.org/entity/Q2";
  auto p1 = registered({a, b});
  auto p2 = registered({b, a});
  EXPECT_NE(p1.person(a), p1.person(b));
  EXPECT_EQ(p1.person(a), p2.person(a));
  EXPECT_EQ(p1.person(b), p2.person(b));
  EXPECT_EQ(p1.person(a).value.rfind(std::string(kDefaultBaseIri) + "person/john_smith_", 0), 0u);
}

TEST(Rdf, MentionIrisAreInjective) {
  IriPolicy policy;
  std::set<std::string> ids;
  std::set<Iri> iris;
  std::mt19937 rng(7);
  const std::string alphabet = "ab<>% _/\"";
  for (int i = 0; i < 2000; ++i) {
    std::string id;
    for (int k = rng() % 6; k >= 0; --k) id += alphabet[rng() % alphabet.size()];
    if (ids.insert(id).second) iris.insert(policy.mention(id));
  }
  // '%' itself is kept, so "%20" and " " would collide; the alphabet has no digits.
  EXPECT_EQ(ids.size(), iris.size());
}

TEST(Rdf, EmptyGraphSerializesToNothing) {
  TripleGraph g;
  EXPECT_EQ(to_ntriples(g), "");
  EXPECT_TRUE(parse_ntriples(std::string_view("")).empty());
}

TEST(Rdf, NTriplesEscapesRoundTrip) {
  TripleGraph g;
  const std::vector<std::string> tricky = {"quote \" inside", "back\\slash", "new\nline", "tab\there",
                                           "cr\rhere", "Ünïcödé ≠ ascii", "emoji 😀", ""};
  int i = 0;
  for (const auto& s : tricky) {
    g.add(Iri{"http://x/" + std::to_string(i++)}, vocab::text(), Literal{s, "", i % 2 ? "en" : ""});
  }
  g.add(Iri{"http://x/n"}, vocab::date_created(), Literal{"2015", kXsd + "gYear", ""});
  g.add(BlankNode{"b0"}, vocab::source(), Iri{"http://x/n"});
  EXPECT_EQ(parse_ntriples(to_ntriples(g)).triples(), g.triples());
}

TEST(Rdf, NTriplesRandomLiteralsRoundTrip) {
  std::mt19937 rng(11);
  const std::vector<std::string> pieces = {"a", "\"", "\\", "\n", "\r", "\t", "é", "€", "𝄞", " ", "\x01", "\x7f"};
  for (int round = 0; round < 200; ++round) {
    TripleGraph g;
    for (int k = 0; k < 5; ++k) {
      std::string s;
      for (int n = rng() % 12; n > 0; --n) s += pieces[rng() % pieces.size()];
      g.add(Iri{"http://x/s" + std::to_string(k)}, vocab::text(), Literal{s, "", ""});
    }
    ASSERT_EQ(parse_ntriples(to_ntriples(g)).triples(), g.triples()) << to_ntriples(g);
  }
}

TEST(Rdf, NTriplesOutputIsSortedLines) {
  auto policy = registered({merkel()});
  auto g = emit_aligned_person({merkel(), {schaffen_cluster()}, "test", false}, policy);
  auto nt = to_ntriples(g);
  std::vector<std::string> lines;
  std::istringstream in(nt);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  EXPECT_EQ(lines.size(), g.size());
  EXPECT_TRUE(std::is_sorted(lines.begin(), lines.end()));
}

TEST(Rdf, ParseErrorNamesTheLine) {
  try {
    parse_ntriples(std::string_view("<http://a> <http://b> <http://c> .\n<http://a> <http://b> .\n"));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Rdf, VoidReportsTripleCount) {
  CorpusStats stats;
  stats.triples = 100;
  TripleGraph g;
  IriPolicy policy;
  emit_void(g, stats, policy);
  EXPECT_EQ(objects(g, policy.dataset(), iri(ns::kVoid, "triples")),
            terms(Literal{"100", kXsd + "integer", ""}));
}

TEST(Rdf, VoidHasOnePartitionPerLanguage) {
  CorpusStats stats;
  stats.per_language["de"] = {1, 2, 2, 1};
  stats.per_language["en"] = {1, 3, 4, 0};
  stats.totals = {1, 4, 6, 1};
  TripleGraph g;
  IriPolicy policy;
  emit_void(g, stats, policy);
  auto parts = objects(g, policy.dataset(), iri(ns::kVoid, "classPartition"));
  EXPECT_EQ(parts, terms(policy.language_partition("de"), policy.language_partition("en")));
  EXPECT_EQ(objects(g, policy.language_partition("en"), iri(ns::kQkg, "mentionCount")),
            terms(Literal{"4", kXsd + "integer", ""}));
}

TEST(Rdf, VoidOfEmptyCorpusHasZeroCounts) {
  TripleGraph g;
  IriPolicy policy;
  emit_void(g, CorpusStats{}, policy);
  EXPECT_EQ(objects(g, policy.dataset(), iri(ns::kVoid, "triples")),
            terms(Literal{"0", kXsd + "integer", ""}));
  EXPECT_EQ(objects(g, policy.dataset(), iri(ns::kQkg, "quoteCount")),
            terms(Literal{"0", kXsd + "integer", ""}));
  EXPECT_TRUE(objects(g, policy.dataset(), iri(ns::kVoid, "classPartition")).empty());
}

TEST(Rdf, TurtleUsesPrefixes) {
  auto policy = registered({merkel()});
  auto ttl = to_turtle(emit_aligned_person({merkel(), {schaffen_cluster()}, "test", false}, policy));
  EXPECT_NE(ttl.find("@prefix so: <https://schema.org/> ."), std::string::npos);
  EXPECT_NE(ttl.find("a so:Quotation"), std::string::npos);
}

TEST(Rdf, BaseIriGetsTrailingSlash) {
  IriPolicy policy("http://example.org/kg");
  EXPECT_EQ(policy.dataset().value, "http://example.org/kg/dataset");
}

}  // namespace
}  // namespace quotekg::rdf
