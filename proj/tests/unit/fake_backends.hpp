#pragma once

#include <functional>
#include <map>

#include "quotekg/embedding.hpp"
#include "quotekg/errors.hpp"
#include "quotekg/nlp.hpp"

namespace quotekg::testing {

/// Answers from lookup tables; unknown texts get the offline results.
class ScriptedBackend : public NlpBackend {
 public:
  std::map<std::string, LanguageGuess> languages;
  std::map<std::string, Sentiment> sentiments;
  std::map<std::string, EmbeddingVector> vectors;
  int calls = 0;

  bool offline() const override { return false; }
  std::vector<LanguageGuess> detect_languages(std::span<const std::string> texts) override {
    ++calls;
    std::vector<LanguageGuess> out;
    for (const auto& t : texts) {
      auto it = languages.find(t);
      out.push_back(it != languages.end() ? it->second : guess_language(t));
    }
    return out;
  }
  std::vector<std::optional<Sentiment>> classify_sentiment(std::span<const std::string> texts) override {
    ++calls;
    std::vector<std::optional<Sentiment>> out;
    for (const auto& t : texts) {
      auto it = sentiments.find(t);
      out.push_back(it != sentiments.end() ? std::optional(it->second) : std::nullopt);
    }
    return out;
  }
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override {
    ++calls;
    std::vector<EmbeddingVector> out;
    for (const auto& t : texts) {
      auto it = vectors.find(t);
      out.push_back(it != vectors.end() ? it->second : fallback_embed(t));
    }
    return out;
  }
};

/// Fails every call.
class FailingBackend : public NlpBackend {
 public:
  int calls = 0;
  bool offline() const override { return false; }
  std::vector<LanguageGuess> detect_languages(std::span<const std::string>) override { fail(); }
  std::vector<std::optional<Sentiment>> classify_sentiment(std::span<const std::string>) override {
    fail();
  }
  std::vector<EmbeddingVector> embed(std::span<const std::string>) override { fail(); }

 private:
  [[noreturn]] void fail() {
    ++calls;
    throw BackendError("connection refused");
  }
};

}  // namespace quotekg::testing
