#include "quotekg/nlp.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_set>

#include "quotekg/errors.hpp"
#include "quotekg/text.hpp"

namespace quotekg {

using nlohmann::json;

std::string_view to_string(SentimentCategory c) {
  switch (c) {
    case SentimentCategory::kPositive: return "positive";
    case SentimentCategory::kNegative: return "negative";
    case SentimentCategory::kNeutral: return "neutral";
  }
  return "neutral";
}

std::optional<SentimentCategory> sentiment_category_from(std::string_view s) {
  if (s == "positive") return SentimentCategory::kPositive;
  if (s == "negative") return SentimentCategory::kNegative;
  if (s == "neutral") return SentimentCategory::kNeutral;
  return std::nullopt;
}

namespace {

struct StopwordProfile {
  std::string_view language_code;
  std::unordered_set<std::string_view> words;
};

const std::vector<StopwordProfile>& stopword_profiles() {
  static const std::vector<StopwordProfile> profiles = {
      {"en", {"the", "and", "is", "are", "was", "not", "of", "to", "we", "you", "it", "that", "this",
              "can", "do", "be", "have", "with", "for", "but", "what", "my", "they", "in"}},
      {"de", {"der", "die", "das", "und", "ist", "nicht", "ich", "wir", "sie", "es", "ein", "eine",
              "zu", "mit", "auf", "auch", "sich", "den", "dem", "wenn", "aber", "mein", "sind"}},
      {"fr", {"le", "la", "les", "et", "est", "pas", "je", "nous", "vous", "il", "une", "des",
              "du", "que", "qui", "ne", "pour", "mais", "dans", "sont", "au", "ce", "en"}},
      {"it", {"il", "lo", "gli", "e", "è", "non", "che", "di", "un", "una", "per", "sono", "ma",
              "della", "nel", "con", "io", "noi", "si", "mi", "anche", "questo"}},
      {"es", {"el", "los", "las", "y", "es", "no", "que", "un", "una", "por", "para", "pero",
              "del", "con", "yo", "nosotros", "se", "su", "como", "está", "muy"}},
      {"hr", {"je", "i", "u", "na", "da", "se", "su", "ne", "što", "to", "ali", "sam", "smo",
              "od", "za", "koji", "kao", "biti", "nije", "ja", "mi"}},
      {"pt", {"o", "os", "as", "e", "é", "não", "que", "um", "uma", "por", "para", "mas", "do",
              "da", "com", "eu", "nós", "se", "seu", "como", "está", "muito"}},
      {"nl", {"de", "het", "een", "en", "is", "niet", "ik", "wij", "we", "je", "dat", "van",
              "op", "te", "met", "maar", "zijn", "voor", "ook", "er"}},
  };
  return profiles;
}

}  // namespace

LanguageGuess guess_language(std::string_view input) {
  std::unordered_set<std::string> tokens;
  std::string current;
  for (char32_t cp : text::decode_utf8(input)) {
    if (text::is_alnum(cp)) {
      text::append_utf8(current, text::to_lower(cp));
    } else if (!current.empty()) {
      tokens.insert(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.insert(std::move(current));

  std::string_view best;
  int best_hits = 0;
  int second_hits = 0;
  for (const auto& profile : stopword_profiles()) {
    int hits = 0;
    for (const auto& t : tokens) hits += profile.words.count(t) ? 1 : 0;
    if (hits > best_hits) {
      second_hits = best_hits;
      best_hits = hits;
      best = profile.language_code;
    } else if (hits > second_hits) {
      second_hits = hits;
    }
  }
  if (best_hits < 2 || best_hits < 2 * second_hits) return {};
  double confidence = static_cast<double>(best_hits) / static_cast<double>(best_hits + second_hits);
  return {std::string(best), confidence};
}

std::vector<LanguageGuess> OfflineNlpBackend::detect_languages(std::span<const std::string> texts) {
  std::vector<LanguageGuess> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(guess_language(t));
  return out;
}

std::vector<std::optional<Sentiment>> OfflineNlpBackend::classify_sentiment(
    std::span<const std::string> texts) {
  return std::vector<std::optional<Sentiment>>(texts.size());
}

std::vector<EmbeddingVector> OfflineNlpBackend::embed(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(fallback_embed(t));
  return out;
}

HttpNlpBackend::HttpNlpBackend(std::string base_url, std::optional<std::string> expected_model_tag,
                               std::size_t batch_limit, double timeout_seconds)
    : base_url_(std::move(base_url)),
      batch_limit_(std::max<std::size_t>(1, batch_limit)),
      timeout_seconds_(timeout_seconds),
      pinned_model_tag_(std::move(expected_model_tag)) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

namespace {

const json& unwrap_results(const json& body) {
  if (body.is_object() && body.contains("results")) return body.at("results");
  return body;
}

template <typename Fn>
auto for_each_batch(std::span<const std::string> texts, std::size_t limit, Fn&& fn) {
  for (std::size_t start = 0; start < texts.size(); start += limit) {
    fn(texts.subspan(start, std::min(limit, texts.size() - start)));
  }
}

}  // namespace

std::string HttpNlpBackend::post(std::string_view path, std::span<const std::string> texts) {
  httplib::Client client(base_url_);
  const std::chrono::milliseconds timeout(static_cast<long long>(timeout_seconds_ * 1000.0));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  json request = {{"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  auto res = client.Post(std::string(path), request.dump(), "application/json");
  if (!res) {
    throw BackendError("NLP backend " + base_url_ + std::string(path) +
                       " unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw BackendError("NLP backend " + base_url_ + std::string(path) + " returned HTTP " +
                       std::to_string(res->status));
  }
  return res->body;
}

std::vector<LanguageGuess> HttpNlpBackend::detect_languages(std::span<const std::string> texts) {
  std::vector<LanguageGuess> out;
  for_each_batch(texts, batch_limit_, [&](std::span<const std::string> batch) {
    try {
      auto body = json::parse(post("/langdetect", batch));
      const auto& results = unwrap_results(body);
      if (!results.is_array() || results.size() != batch.size()) {
        throw BackendError("langdetect response size mismatch");
      }
      for (const auto& r : results) {
        out.push_back({r.at("language_code").get<std::string>(), r.value("confidence", 0.0)});
      }
    } catch (const json::exception& e) {
      throw BackendError(std::string("malformed langdetect response: ") + e.what());
    }
  });
  return out;
}

std::vector<std::optional<Sentiment>> HttpNlpBackend::classify_sentiment(
    std::span<const std::string> texts) {
  std::vector<std::optional<Sentiment>> out;
  for_each_batch(texts, batch_limit_, [&](std::span<const std::string> batch) {
    try {
      auto body = json::parse(post("/sentiment", batch));
      const auto& results = unwrap_results(body);
      if (!results.is_array() || results.size() != batch.size()) {
        throw BackendError("sentiment response size mismatch");
      }
      for (const auto& r : results) {
        auto category = sentiment_category_from(r.at("category").get<std::string>());
        if (!category) throw BackendError("unknown sentiment category " + r.at("category").dump());
        double score = std::clamp(r.at("score").get<double>(), 0.0, 1.0);
        out.push_back(Sentiment{*category, score});
      }
    } catch (const json::exception& e) {
      throw BackendError(std::string("malformed sentiment response: ") + e.what());
    }
  });
  return out;
}

std::vector<EmbeddingVector> HttpNlpBackend::embed(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  for_each_batch(texts, batch_limit_, [&](std::span<const std::string> batch) {
    try {
      auto body = json::parse(post("/embed", batch));
      auto tag = body.at("model_tag").get<std::string>();
      auto dim = body.at("dim").get<int>();
      const auto& vectors = body.at("vectors");
      {
        std::lock_guard lock(mutex_);
        if (!pinned_model_tag_) pinned_model_tag_ = tag;
        if (*pinned_model_tag_ != tag) {
          throw BackendError("embedding model changed from " + *pinned_model_tag_ + " to " + tag);
        }
      }
      if (!vectors.is_array() || vectors.size() != batch.size() || dim <= 0) {
        throw BackendError("embed response size mismatch");
      }
      for (const auto& v : vectors) {
        if (!v.is_array() || static_cast<int>(v.size()) != dim) {
          throw BackendError("embed vector has wrong dimension");
        }
        EmbeddingVector e{DenseVector<double>(dim), tag};
        for (int k = 0; k < dim; ++k) e.values[k] = v[static_cast<size_t>(k)].get<double>();
        if (!std::isfinite(e.values.norm()) || e.values.norm() == 0.0) {
          throw BackendError("embed vector is zero or non-finite");
        }
        normalize_in_place(e.values);
        out.push_back(std::move(e));
      }
    } catch (const json::exception& e) {
      throw BackendError(std::string("malformed embed response: ") + e.what());
    }
  });
  return out;
}

BackendHealth HttpNlpBackend::health() {
  httplib::Client client(base_url_);
  const std::chrono::milliseconds timeout(static_cast<long long>(timeout_seconds_ * 1000.0));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  auto res = client.Get("/health");
  if (!res || res->status != 200) throw BackendError("NLP backend health check failed");
  try {
    auto body = json::parse(res->body);
    return {body.value("status", ""), body.value("model_tag", ""), body.value("dim", 0)};
  } catch (const json::exception& e) {
    throw BackendError(std::string("malformed health response: ") + e.what());
  }
}

std::unique_ptr<NlpBackend> make_backend(const std::optional<std::string>& url,
                                         std::optional<std::string> expected_model_tag) {
  if (url && !url->empty())
    return std::make_unique<HttpNlpBackend>(*url, std::move(expected_model_tag));
  return std::make_unique<OfflineNlpBackend>();
}

}  // namespace quotekg
