#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "fake_backends.hpp"
#include "quotekg/alignment.hpp"
#include "quotekg/text.hpp"

namespace quotekg {
namespace {

QuoteMention mention(const std::string& text, const std::string& lang = "en",
                     const std::string& person = "P") {
  QuoteMention m;
  m.text = text;
  m.language = lang;
  m.person_key = person;
  m.mention_id = text::hex64(text::fnv1a64(lang + "\x1f" + text));
  return m;
}

EmbeddingVector unit(std::initializer_list<double> xs) {
  EmbeddingVector v{DenseVector<double>(static_cast<Eigen::Index>(xs.size())), "test"};
  Eigen::Index i = 0;
  for (double x : xs) v.values[i++] = x;
  normalize_in_place(v.values);
  return v;
}

// Unit vector at angle acos(c) from e1 in the e1/e2 plane.
EmbeddingVector at_cosine(double c) { return unit({c, std::sqrt(1 - c * c), 0}); }

std::set<std::set<std::string>> memberships(const std::vector<QuoteCluster>& clusters) {
  std::set<std::set<std::string>> out;
  for (const auto& c : clusters) {
    std::set<std::string> ids;
    for (const auto& m : c.members) ids.insert(m.mention_id);
    out.insert(ids);
  }
  return out;
}

TEST(ClusterMentions, ThreeMutuallySimilar) {
  std::vector<QuoteMention> ms{mention("a"), mention("b"), mention("c")};
  std::vector<EmbeddingVector> vs{unit({1, 0.1, 0}), unit({1, 0, 0.1}), unit({1, 0.05, 0.05})};
  auto clusters = cluster_mentions(ms, vs, 0.8);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].members.size(), 3u);
}

TEST(ClusterMentions, IdenticalStringsAlwaysTogether) {
  const std::string en =
      "Falling in love is not at all the most stupid thing that people do — but gravitation "
      "cannot be held responsible for it.";
  auto a = mention(en, "en");
  auto b = mention(en, "en");
  b.mention_id = "other";
  std::vector<QuoteMention> ms{a, b};
  std::vector<EmbeddingVector> vs{fallback_embed(en), fallback_embed(en)};
  for (double t : {0.05, 0.5, 0.8, 0.95, 1.0}) {
    auto clusters = cluster_mentions(ms, vs, t);
    ASSERT_EQ(clusters.size(), 1u) << t;
  }
}

TEST(ClusterMentions, BoundaryBelowThreshold) {
  std::vector<QuoteMention> ms{mention("a"), mention("b")};
  std::vector<EmbeddingVector> vs{unit({1, 0, 0}), at_cosine(0.79)};
  EXPECT_EQ(cluster_mentions(ms, vs, 0.8).size(), 2u);
  std::vector<EmbeddingVector> exact{unit({1, 0, 0}), at_cosine(0.8)};
  EXPECT_EQ(cluster_mentions(ms, exact, 0.8).size(), 1u);
}

TEST(ClusterMentions, RejectsBadInput) {
  std::vector<QuoteMention> ms{mention("a"), mention("b", "en", "Q")};
  std::vector<EmbeddingVector> vs{unit({1, 0}), unit({0, 1})};
  EXPECT_THROW(cluster_mentions(ms, vs, 0.8), std::invalid_argument);
  ms[1].person_key = "P";
  EXPECT_THROW(cluster_mentions(ms, vs, 0.0), std::invalid_argument);
  EXPECT_THROW(cluster_mentions(ms, vs, 1.5), std::invalid_argument);
  std::vector<EmbeddingVector> one{unit({1, 0})};
  EXPECT_THROW(cluster_mentions(ms, one, 0.8), std::invalid_argument);
  vs[1].values *= 2;
  EXPECT_THROW(cluster_mentions(ms, vs, 0.8), std::invalid_argument);
}

TEST(ClusterMentions, TranslatedPairWithScriptedVectors) {
  testing::ScriptedBackend nlp;
  nlp.vectors["Wir schaffen das."] = unit({0.9, 0.1, 0.0});
  nlp.vectors["We can do this"] = unit({0.88, 0.12, 0.01});
  nlp.vectors["Sie ist die Kanzlerin."] = unit({0, 0, 1});
  for (auto& [k, v] : nlp.vectors) v.model_tag = "scripted";
  PersonRecord merkel;
  merkel.canonical_label = "Angela Merkel";
  merkel.labels["de"] = "Angela Merkel";
  merkel.wikidata_iri = "https://www.wikidata.org/entity/Q567";
  auto de = mention("Wir schaffen das.", "de");
  de.date = PartialDate::of_day(2015, 8, 31);
  auto en = mention("We can do this", "en");
  en.date = PartialDate::of_year(2015);
  auto other = mention("Sie ist die Kanzlerin.", "de");
  auto aligned = align_person(merkel, {de, en, other}, nlp);
  EXPECT_FALSE(aligned.degraded);
  EXPECT_EQ(aligned.model_tag, "scripted");
  ASSERT_EQ(aligned.clusters.size(), 2u);
  const auto& pair = aligned.clusters[0].members.size() == 2 ? aligned.clusters[0] : aligned.clusters[1];
  ASSERT_EQ(pair.members.size(), 2u);
  EXPECT_EQ(pair.aggregated_date, PartialDate::of_day(2015, 8, 31));
  EXPECT_EQ(pair.person_key, "https://www.wikidata.org/entity/Q567");
}

TEST(EmbedBatch, FailureFallsBackForWholeBatch) {
  testing::FailingBackend nlp;
  bool degraded = false;
  std::vector<std::string> texts{"a b c", "d e f"};
  auto v = embed_batch(texts, nlp, &degraded);
  EXPECT_TRUE(degraded);
  ASSERT_EQ(v.size(), 2u);
  for (const auto& e : v) EXPECT_EQ(e.model_tag, kFallbackModelTag);
}

TEST(AggregateSentiment, Examples) {
  auto with = [](SentimentCategory c, double s) {
    QuoteMention m;
    m.sentiment = Sentiment{c, s};
    return m;
  };
  std::vector<QuoteMention> ms{with(SentimentCategory::kPositive, 0.9),
                               with(SentimentCategory::kPositive, 0.7),
                               with(SentimentCategory::kNegative, 0.99)};
  auto s = aggregate_sentiment(ms);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->category, SentimentCategory::kPositive);
  EXPECT_NEAR(s->score, 0.8, 1e-12);

  std::vector<QuoteMention> one{with(SentimentCategory::kNeutral, 0.5)};
  EXPECT_EQ(aggregate_sentiment(one)->category, SentimentCategory::kNeutral);
  EXPECT_DOUBLE_EQ(aggregate_sentiment(one)->score, 0.5);
  EXPECT_FALSE(aggregate_sentiment({}).has_value());

  std::vector<QuoteMention> tie{with(SentimentCategory::kNegative, 0.4),
                                with(SentimentCategory::kPositive, 0.6)};
  EXPECT_EQ(aggregate_sentiment(tie)->category, SentimentCategory::kPositive);
}

TEST(AggregateDate, Examples) {
  QuoteMention a, b;
  a.date = PartialDate::of_day(2015, 8, 31);
  b.date = PartialDate::of_year(2015);
  std::vector<QuoteMention> ms{a, b};
  EXPECT_EQ(aggregate_date(ms), PartialDate::of_day(2015, 8, 31));
  a.date = PartialDate::of_year(1930);
  b.date = PartialDate::of_year(1933);
  std::vector<QuoteMention> conflict{a, b};
  EXPECT_EQ(aggregate_date(conflict), std::nullopt);
  std::vector<QuoteMention> none{QuoteMention{}, QuoteMention{}};
  EXPECT_EQ(aggregate_date(none), std::nullopt);
}

// Random unit vectors around a few shared directions, so clusters form.
std::vector<EmbeddingVector> random_vectors(std::mt19937_64& rng, int n, int dim, int centres,
                                            double noise) {
  std::normal_distribution<double> gauss;
  std::vector<DenseVector<double>> base;
  for (int c = 0; c < centres; ++c) {
    DenseVector<double> v(dim);
    for (int k = 0; k < dim; ++k) v[k] = gauss(rng);
    base.push_back(v.normalized());
  }
  std::vector<EmbeddingVector> out;
  for (int i = 0; i < n; ++i) {
    DenseVector<double> v = base[rng() % base.size()];
    for (int k = 0; k < dim; ++k) v[k] += noise * gauss(rng);
    out.push_back({v.normalized(), "random"});
  }
  return out;
}

std::vector<QuoteMention> numbered(int n) {
  std::vector<QuoteMention> out;
  for (int i = 0; i < n; ++i) out.push_back(mention("m" + std::to_string(1000 + i)));
  return out;
}

TEST(ClusterMentionsProperty, PartitionAndCentreSimilarity) {
  std::mt19937_64 rng(1);
  for (int round = 0; round < 300; ++round) {
    int n = 1 + static_cast<int>(rng() % 40);
    auto vs = random_vectors(rng, n, 8, 1 + static_cast<int>(rng() % 5), 0.3);
    auto ms = numbered(n);
    double t = 0.3 + 0.7 * static_cast<double>(rng() % 1000) / 1000.0;
    auto clusters = cluster_mentions(ms, vs, t);
    std::multiset<std::string> seen;
    for (const auto& c : clusters) {
      ASSERT_FALSE(c.members.empty());
      for (const auto& m : c.members) seen.insert(m.mention_id);
    }
    std::multiset<std::string> all;
    for (const auto& m : ms) all.insert(m.mention_id);
    EXPECT_EQ(seen, all);
    auto rows = stack_rows<double>(vs);
    for (const auto& group : community_detection<double>(rows, t))
      for (auto j : group) EXPECT_GE(rows.row(group[0]).dot(rows.row(j)), t - 1e-9);
  }
}

TEST(ClusterMentionsProperty, DeterministicAndPermutationInvariant) {
  std::mt19937_64 rng(2);
  for (int round = 0; round < 200; ++round) {
    int n = 2 + static_cast<int>(rng() % 30);
    auto vs = random_vectors(rng, n, 16, 3, 0.15);
    auto ms = numbered(n);
    auto first = cluster_mentions(ms, vs, 0.8);
    auto second = cluster_mentions(ms, vs, 0.8);
    ASSERT_EQ(memberships(first), memberships(second));
    ASSERT_EQ(first.size(), second.size());
    for (size_t i = 0; i < first.size(); ++i) EXPECT_EQ(first[i].quote_id, second[i].quote_id);

    std::vector<size_t> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<QuoteMention> pm;
    std::vector<EmbeddingVector> pv;
    for (size_t i : perm) {
      pm.push_back(ms[i]);
      pv.push_back(vs[i]);
    }
    EXPECT_EQ(memberships(cluster_mentions(pm, pv, 0.8)), memberships(first));
  }
}

TEST(ClusterMentionsProperty, ThresholdOneGroupsExactDuplicates) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 200; ++round) {
    int distinct = 1 + static_cast<int>(rng() % 8);
    auto base = random_vectors(rng, distinct, 12, distinct, 1.0);
    std::vector<EmbeddingVector> vs;
    std::vector<int> source;
    int n = distinct + static_cast<int>(rng() % 10);
    for (int i = 0; i < n; ++i) {
      int s = i < distinct ? i : static_cast<int>(rng() % distinct);
      vs.push_back(base[static_cast<size_t>(s)]);
      source.push_back(s);
    }
    auto ms = numbered(n);
    std::map<std::string, int> src_of;
    for (int i = 0; i < n; ++i) src_of[ms[static_cast<size_t>(i)].mention_id] = source[static_cast<size_t>(i)];
    auto clusters = cluster_mentions(ms, vs, 1.0);
    EXPECT_EQ(clusters.size(), static_cast<size_t>(distinct));
    for (const auto& c : clusters)
      for (const auto& m : c.members) EXPECT_EQ(src_of[m.mention_id], src_of[c.members[0].mention_id]);
  }
}

TEST(ClusterMentionsProperty, ClusterCountNonDecreasingInThresholdOnRandomSets) {
  std::mt19937_64 rng(4);
  int checked = 0;
  int violations = 0;
  for (int round = 0; round < 500; ++round) {
    int n = 2 + static_cast<int>(rng() % 40);
    auto vs = random_vectors(rng, n, 8, 1 + static_cast<int>(rng() % 6), 0.35);
    auto ms = numbered(n);
    size_t previous = 0;
    for (double t = 0.30; t <= 1.0 + 1e-12; t += 0.05) {
      size_t count = cluster_mentions(ms, vs, std::min(t, 1.0)).size();
      if (count < previous) ++violations;
      previous = count;
      ++checked;
    }
  }
  EXPECT_EQ(violations, 0) << "of " << checked << " threshold steps";
}

// The greedy centre choice is not monotone in general: dropping two edges of
// a hub lets its neighbours become centres and absorb their pendants.
TEST(CommunityDetection, RaisingThresholdCanReduceClusterCount) {
  const int n = 13;  // hub 0, spokes 1..4, two pendants per spoke
  Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(n, n);
  auto link = [&](int a, int b, double s) { gram(a, b) = gram(b, a) = s; };
  link(0, 1, 0.26);
  link(0, 2, 0.26);
  link(0, 3, 0.30);
  link(0, 4, 0.30);
  for (int s = 1; s <= 4; ++s) {
    link(s, 3 + 2 * s, 0.30);
    link(s, 4 + 2 * s, 0.30);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  ASSERT_EQ(llt.info(), Eigen::Success);
  EmbeddingMatrix<double> rows = llt.matrixL();
  auto low = community_detection<double>(rows, 0.25);
  auto high = community_detection<double>(rows, 0.28);
  EXPECT_EQ(low.size(), 9u);
  EXPECT_EQ(high.size(), 4u);
}

TEST(CommunityDetection, FloatRowsMatchDouble) {
  std::mt19937_64 rng(8);
  auto vs = random_vectors(rng, 30, 8, 4, 0.2);
  auto rows = stack_rows<double>(vs);
  EmbeddingMatrix<float> frows = rows.cast<float>();
  EXPECT_EQ(community_detection<double>(rows, 0.7), community_detection<float>(frows, 0.7f));
}

TEST(CommunityDetection, BlocksBeyondOneChunk) {
  std::mt19937_64 rng(9);
  auto vs = random_vectors(rng, 700, 6, 5, 0.05);
  auto rows = stack_rows<double>(vs);
  auto groups = community_detection<double>(rows, 0.9);
  size_t total = 0;
  for (const auto& g : groups) total += g.size();
  EXPECT_EQ(total, 700u);
  EXPECT_LE(groups.size(), 30u);
}

TEST(MakeQuoteId, IndependentOfMemberOrder) {
  std::vector<QuoteMention> a{mention("x"), mention("y")};
  std::vector<QuoteMention> b{mention("y"), mention("x")};
  EXPECT_EQ(make_quote_id("P", a), make_quote_id("P", b));
  EXPECT_NE(make_quote_id("P", a), make_quote_id("Q", a));
}

}  // namespace
}  // namespace quotekg
