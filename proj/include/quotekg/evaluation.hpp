#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quotekg/alignment.hpp"
#include "quotekg/corpus_stats.hpp"
#include "quotekg/errors.hpp"
#include "quotekg/rdf.hpp"

namespace quotekg {

/// (language, exact text)
using MentionKey = std::pair<std::string, std::string>;
using Clustering = std::vector<std::vector<MentionKey>>;

struct GoldClustering {
  std::string person;
  Clustering clusters;
};

struct PairCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  PairCounts& operator+=(const PairCounts& o);
  bool operator==(const PairCounts&) const = default;
};

struct Metrics {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  bool operator==(const Metrics&) const = default;
};

/// Predicted and gold cover different mention keys, or a key repeats.
class EvaluationError : public DataError {
 public:
  EvaluationError(std::string what, std::vector<MentionKey> missing, std::vector<MentionKey> extra);
  const std::vector<MentionKey>& missing() const { return missing_; }  // in gold only
  const std::vector<MentionKey>& extra() const { return extra_; }      // in predicted only

 private:
  std::vector<MentionKey> missing_;
  std::vector<MentionKey> extra_;
};

/// Classifies every unordered mention pair as tp/tn/fp/fn. A predicted key
/// repeated within one cluster (the same text reached from two editions)
/// counts once; repeats across clusters, or any repeat in gold, raise
/// EvaluationError.
PairCounts pairwise_counts(const Clustering& predicted, const Clustering& gold);

/// Unordered pairs of keys whose languages differ: the candidate pairs a
/// cross-lingual ground truth has to decide.
std::uint64_t cross_language_pairs(std::span<const MentionKey> keys);

/// Precision and recall are 1 when their denominator is 0; F1 is 0 when
/// precision + recall is 0.
Metrics prf(const PairCounts& counts);

/// Component-wise mean. Throws std::invalid_argument on an empty list.
Metrics macro_average(std::span<const Metrics> per_person);

/// Keeps only keys present in `keep`; clusters left empty are dropped.
Clustering restrict_to(const Clustering& clustering, std::span<const MentionKey> keep);

struct EvaluationRow {
  std::string person;
  PairCounts counts;
  Metrics metrics;
};

struct EvaluationReport {
  std::vector<EvaluationRow> rows;  // gold order
  PairCounts total;
  Metrics micro;
  Metrics macro;
};

/// Evaluates each gold person against the predicted clustering of the same
/// label. With `restrict_predicted`, predicted mentions outside the gold
/// set are ignored first.
EvaluationReport evaluate(const std::map<std::string, Clustering>& predicted,
                          std::span<const GoldClustering> gold, bool restrict_predicted = false);

/// Gold files: one JSON object, a JSON array of objects, or one object per
/// line; each object is {"person": str, "clusters": [[{"language","text"}..]..]}.
std::vector<GoldClustering> load_gold(const std::filesystem::path& path);

/// Predicted files: a clusters intermediate (each person reachable by its
/// key and every label) or a file in the gold format.
std::map<std::string, Clustering> load_predicted(const std::filesystem::path& path);

Clustering clustering_of(const AlignedPerson& person);

void print_evaluation(const EvaluationReport& report, std::ostream& out);

/// Counts from an emitted graph: quotes are so:Quotation nodes, mention
/// languages come from so:text language tags (untagged text counts as
/// "und").
CorpusStats corpus_stats(const rdf::TripleGraph& graph);

/// Graph (.nt) or clusters intermediate, detected by the file header.
CorpusStats load_corpus_stats(const std::filesystem::path& path);

void print_stats(const CorpusStats& stats, std::ostream& out);

}  // namespace quotekg
