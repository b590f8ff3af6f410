#include "quotekg/alignment.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "quotekg/errors.hpp"
#include "quotekg/text.hpp"

namespace quotekg {

namespace {

bool mention_less(const QuoteMention& a, const QuoteMention& b) {
  return std::tie(a.language, a.text, a.mention_id) < std::tie(b.language, b.text, b.mention_id);
}

std::vector<EmbeddingVector> fallback_all(std::span<const std::string> texts) {
  OfflineNlpBackend offline;
  return offline.embed(texts);
}

bool consistent(std::span<const EmbeddingVector> vectors, size_t expected) {
  if (vectors.size() != expected) return false;
  for (const auto& v : vectors) {
    if (v.dim() != vectors.front().dim() || v.model_tag != vectors.front().model_tag) return false;
  }
  return true;
}

}  // namespace

std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts, NlpBackend& backend,
                                         bool* degraded) {
  if (texts.empty()) return {};
  if (backend.offline()) return fallback_all(texts);
  try {
    auto vectors = backend.embed(texts);
    if (consistent(vectors, texts.size())) return vectors;
  } catch (const BackendError&) {
  }
  if (degraded != nullptr) *degraded = true;
  return fallback_all(texts);
}

std::string make_quote_id(const std::string& person_key, std::span<const QuoteMention> members) {
  std::vector<std::string> ids;
  ids.reserve(members.size());
  for (const auto& m : members) ids.push_back(m.mention_id);
  std::sort(ids.begin(), ids.end());
  return text::hex64(text::fnv1a64(person_key + "\x1f" + text::join(ids, ",")));
}

std::vector<QuoteCluster> cluster_mentions(std::span<const QuoteMention> mentions,
                                           std::span<const EmbeddingVector> vectors,
                                           double threshold) {
  if (mentions.size() != vectors.size()) {
    throw std::invalid_argument("cluster_mentions: " + std::to_string(mentions.size()) +
                                " mentions but " + std::to_string(vectors.size()) + " vectors");
  }
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("cluster_mentions: threshold must lie in (0, 1]");
  }
  if (mentions.empty()) return {};
  for (const auto& m : mentions) {
    if (m.person_key != mentions.front().person_key) {
      throw std::invalid_argument("cluster_mentions: mentions of different persons");
    }
  }
  for (const auto& v : vectors) {
    if (std::abs(v.values.norm() - 1.0) > 1e-6) {
      throw std::invalid_argument("cluster_mentions: embedding is not unit-norm");
    }
  }

  std::vector<size_t> order(mentions.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return mention_less(mentions[a], mentions[b]); });
  std::vector<EmbeddingVector> sorted_vectors;
  sorted_vectors.reserve(order.size());
  for (size_t i : order) sorted_vectors.push_back(vectors[i]);
  const auto rows = stack_rows<double>(sorted_vectors);

  std::vector<QuoteCluster> clusters;
  for (const auto& community : community_detection<double>(rows, threshold)) {
    QuoteCluster c;
    c.person_key = mentions.front().person_key;
    for (auto row : community) c.members.push_back(mentions[order[static_cast<size_t>(row)]]);
    std::sort(c.members.begin(), c.members.end(), mention_less);
    c.quote_id = make_quote_id(c.person_key, c.members);
    c.aggregated_sentiment = aggregate_sentiment(c.members);
    c.aggregated_date = aggregate_date(c.members);
    c.misattributed = std::any_of(c.members.begin(), c.members.end(),
                                  [](const QuoteMention& m) { return m.misattributed; });
    clusters.push_back(std::move(c));
  }
  std::sort(clusters.begin(), clusters.end(), [](const QuoteCluster& a, const QuoteCluster& b) {
    return mention_less(a.members.front(), b.members.front());
  });
  return clusters;
}

std::optional<Sentiment> aggregate_sentiment(std::span<const QuoteMention> members) {
  // Index order doubles as the tie-break priority.
  constexpr SentimentCategory kPriority[] = {SentimentCategory::kNeutral,
                                             SentimentCategory::kPositive,
                                             SentimentCategory::kNegative};
  int counts[3] = {0, 0, 0};
  double sums[3] = {0, 0, 0};
  for (const auto& m : members) {
    if (!m.sentiment) continue;
    for (int k = 0; k < 3; ++k) {
      if (m.sentiment->category == kPriority[k]) {
        ++counts[k];
        sums[k] += m.sentiment->score;
      }
    }
  }
  int best = 0;
  for (int k = 1; k < 3; ++k) {
    if (counts[k] > counts[best]) best = k;
  }
  if (counts[best] == 0) return std::nullopt;
  return Sentiment{kPriority[best], std::clamp(sums[best] / counts[best], 0.0, 1.0)};
}

std::optional<PartialDate> aggregate_date(std::span<const QuoteMention> members) {
  std::vector<PartialDate> dates;
  for (const auto& m : members) {
    if (m.date) dates.push_back(*m.date);
  }
  return resolve_dates(dates);
}

AlignedPerson align_person(PersonRecord person, std::vector<QuoteMention> mentions,
                           NlpBackend& backend, double threshold) {
  AlignedPerson out;
  out.person = std::move(person);
  for (auto& m : mentions) m.person_key = out.person.key();
  std::vector<std::string> texts;
  texts.reserve(mentions.size());
  for (const auto& m : mentions) texts.push_back(m.text);
  auto vectors = embed_batch(texts, backend, &out.degraded);
  if (!vectors.empty()) out.model_tag = vectors.front().model_tag;
  out.clusters = cluster_mentions(mentions, vectors, threshold);
  return out;
}

}  // namespace quotekg
