#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quotekg/embedding.hpp"
#include "quotekg/enrichment.hpp"
#include "quotekg/nlp.hpp"

namespace quotekg {

inline constexpr double kDefaultThreshold = 0.8;

// Tolerance on the threshold comparison.
inline constexpr double kSimilarityEpsilon = 1e-9;

/// One quote: the mentions of a single utterance by one person.
struct QuoteCluster {
  std::string quote_id;
  std::string person_key;
  std::vector<QuoteMention> members;  // sorted by (language, text, mention_id)
  std::optional<Sentiment> aggregated_sentiment;
  std::optional<PartialDate> aggregated_date;
  bool misattributed = false;
};

/// Greedy community detection over unit-norm rows.
///
/// Repeatedly takes the unassigned row with the most unassigned neighbours
/// (cosine >= threshold) as a centre and absorbs those neighbours; ties go to
/// the lowest row index. Returns row-index groups, each led by its centre,
/// remaining members ascending. Similarities are computed in row blocks so
/// memory grows with the number of neighbour pairs, not n^2.
template <typename Scalar>
std::vector<std::vector<Eigen::Index>> community_detection(const EmbeddingMatrix<Scalar>& rows,
                                                           Scalar threshold) {
  const Eigen::Index n = rows.rows();
  std::vector<std::vector<Eigen::Index>> neighbours(static_cast<size_t>(n));
  constexpr Eigen::Index kBlock = 256;
  const Scalar cut = threshold - static_cast<Scalar>(kSimilarityEpsilon);
  for (Eigen::Index start = 0; start < n; start += kBlock) {
    const Eigen::Index len = std::min(kBlock, n - start);
    EmbeddingMatrix<Scalar> sims = rows.middleRows(start, len) * rows.transpose();
    for (Eigen::Index r = 0; r < len; ++r) {
      auto& list = neighbours[static_cast<size_t>(start + r)];
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c != start + r && sims(r, c) >= cut) list.push_back(c);
      }
    }
  }

  std::vector<Eigen::Index> degree(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    degree[static_cast<size_t>(i)] = static_cast<Eigen::Index>(neighbours[static_cast<size_t>(i)].size());
  }
  std::vector<bool> assigned(static_cast<size_t>(n), false);
  std::vector<std::vector<Eigen::Index>> communities;
  Eigen::Index remaining = n;
  while (remaining > 0) {
    Eigen::Index centre = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (assigned[static_cast<size_t>(i)]) continue;
      if (centre < 0 || degree[static_cast<size_t>(i)] > degree[static_cast<size_t>(centre)]) {
        centre = i;
      }
    }
    std::vector<Eigen::Index> members{centre};
    for (Eigen::Index j : neighbours[static_cast<size_t>(centre)]) {
      if (!assigned[static_cast<size_t>(j)]) members.push_back(j);
    }
    std::sort(members.begin() + 1, members.end());
    for (Eigen::Index m : members) assigned[static_cast<size_t>(m)] = true;
    for (Eigen::Index m : members) {
      for (Eigen::Index k : neighbours[static_cast<size_t>(m)]) {
        if (!assigned[static_cast<size_t>(k)]) --degree[static_cast<size_t>(k)];
      }
    }
    remaining -= static_cast<Eigen::Index>(members.size());
    communities.push_back(std::move(members));
  }
  return communities;
}

/// Embeds all texts with `backend`. When the backend fails, or returns
/// vectors of mixed models or dimensions, every text is embedded with the
/// fallback embedder instead and `*degraded` is set.
std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts, NlpBackend& backend,
                                         bool* degraded = nullptr);

/// Clusters one person's mentions. Throws std::invalid_argument when sizes
/// differ, the threshold is outside (0, 1], mentions belong to several
/// persons, vectors are not unit-norm, or vectors mix models.
/// Clusters come out ordered by their first member.
std::vector<QuoteCluster> cluster_mentions(std::span<const QuoteMention> mentions,
                                           std::span<const EmbeddingVector> vectors,
                                           double threshold = kDefaultThreshold);

/// Most frequent category among members with a sentiment (ties: neutral,
/// then positive, then negative) and the mean score within it.
std::optional<Sentiment> aggregate_sentiment(std::span<const QuoteMention> members);

/// Members' dates combined by the extract_date precision and conflict rule.
std::optional<PartialDate> aggregate_date(std::span<const QuoteMention> members);

/// Stable quote identifier from the person key and member mention ids.
std::string make_quote_id(const std::string& person_key, std::span<const QuoteMention> members);

struct AlignedPerson {
  PersonRecord person;
  std::vector<QuoteCluster> clusters;
  std::string model_tag;
  bool degraded = false;
};

/// Embeds and clusters the mentions of one person.
AlignedPerson align_person(PersonRecord person, std::vector<QuoteMention> mentions,
                           NlpBackend& backend, double threshold = kDefaultThreshold);

}  // namespace quotekg
