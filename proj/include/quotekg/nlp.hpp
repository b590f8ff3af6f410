#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quotekg/embedding.hpp"

namespace quotekg {

enum class SentimentCategory { kPositive, kNegative, kNeutral };

std::string_view to_string(SentimentCategory c);
std::optional<SentimentCategory> sentiment_category_from(std::string_view s);

struct Sentiment {
  SentimentCategory category = SentimentCategory::kNeutral;
  double score = 0.0;  // [0, 1]
  bool operator==(const Sentiment&) const = default;
};

struct LanguageGuess {
  std::string language_code;  // empty when unknown
  double confidence = 0.0;
};

/// Multilingual NLP services used by enrichment and alignment. Results are
/// index-aligned with the input texts. Implementations throw BackendError
/// when the service cannot answer; callers then fall back to the offline
/// behaviour for the whole batch.
class NlpBackend {
 public:
  virtual ~NlpBackend() = default;

  virtual bool offline() const = 0;
  virtual std::vector<LanguageGuess> detect_languages(std::span<const std::string> texts) = 0;
  virtual std::vector<std::optional<Sentiment>> classify_sentiment(
      std::span<const std::string> texts) = 0;
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) = 0;
};

/// Stopword-profile language guess for en, de, fr, it, es, hr, pt and nl.
/// Returns an empty code unless at least two stopwords of one language occur
/// and that language scores at least twice the runner-up.
LanguageGuess guess_language(std::string_view text);

/// Built-in stand-in: stopword language guesses, no sentiment, trigram
/// embeddings.
class OfflineNlpBackend final : public NlpBackend {
 public:
  bool offline() const override { return true; }
  std::vector<LanguageGuess> detect_languages(std::span<const std::string> texts) override;
  std::vector<std::optional<Sentiment>> classify_sentiment(std::span<const std::string> texts) override;
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
};

struct BackendHealth {
  std::string status;
  std::string model_tag;
  int dim = 0;
};

/// JSON-over-HTTP client for the NLP sidecar:
///   POST /embed      {"texts":[..]} -> {"model_tag","dim","vectors":[[..],..]}
///   POST /sentiment  {"texts":[..]} -> [{"category","score"},..]
///   POST /langdetect {"texts":[..]} -> [{"language_code","confidence"},..]
///   GET  /health                     -> {"status","model_tag","dim"}
/// List responses may also be wrapped as {"results":[..]}. Batches larger
/// than `batch_limit` are split. The first embedding model tag seen is pinned
/// (or the expected one if given); a different tag later is a BackendError.
/// Safe to share between threads.
class HttpNlpBackend final : public NlpBackend {
 public:
  explicit HttpNlpBackend(std::string base_url, std::optional<std::string> expected_model_tag = {},
                          std::size_t batch_limit = 256, double timeout_seconds = 30.0);

  bool offline() const override { return false; }
  std::vector<LanguageGuess> detect_languages(std::span<const std::string> texts) override;
  std::vector<std::optional<Sentiment>> classify_sentiment(std::span<const std::string> texts) override;
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;

  BackendHealth health();
  const std::string& base_url() const { return base_url_; }

 private:
  std::string post(std::string_view path, std::span<const std::string> texts);

  std::string base_url_;
  std::size_t batch_limit_;
  double timeout_seconds_;
  std::mutex mutex_;
  std::optional<std::string> pinned_model_tag_;
};

/// Environment variable consulted for the sidecar URL when no flag is given.
inline constexpr const char* kNlpEndpointEnv = "QUOTEKG_NLP_URL";

/// Models the sidecar is expected to serve.
inline constexpr std::string_view kExpectedEmbeddingModel =
    "sentence-transformers/paraphrase-xlm-r-multilingual-v1";
inline constexpr int kExpectedEmbeddingDim = 768;
inline constexpr std::string_view kExpectedSentimentModel =
    "cardiffnlp/twitter-xlm-roberta-base-sentiment";

/// HttpNlpBackend for a non-empty URL, OfflineNlpBackend otherwise.
std::unique_ptr<NlpBackend> make_backend(const std::optional<std::string>& url,
                                         std::optional<std::string> expected_model_tag = {});

}  // namespace quotekg
