#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "quotekg/alignment.hpp"
#include "quotekg/nlp.hpp"
#include "quotekg/rdf.hpp"

namespace quotekg {

enum class Stage { kExtract, kEnrich, kAlign, kEmit, kAll };

std::string_view to_string(Stage s);
std::optional<Stage> stage_from(std::string_view s);

struct PipelineConfig {
  std::filesystem::path dumps_dir;
  std::vector<std::string> languages;  // empty: every edition found
  std::uint64_t min_pages = 50;
  std::filesystem::path rules_path;
  std::filesystem::path sitelinks_path;
  std::optional<std::string> nlp_url;
  std::optional<std::string> expected_model_tag;
  double threshold = kDefaultThreshold;
  std::filesystem::path out_dir;
  rdf::Format format = rdf::Format::kNTriples;
  std::string base_iri = std::string(rdf::kDefaultBaseIri);
  unsigned jobs = 1;
  std::optional<std::filesystem::path> emit_raw;       // RawQuote debug dump
  std::optional<std::filesystem::path> dump_clusters;  // gold-format clusters

  /// Throws ConfigError for settings `stage` needs that are missing or out of
  /// range.
  void validate(Stage stage) const;
};

inline constexpr std::string_view kRawQuotesFile = "raw_quotes.ndjson";
inline constexpr std::string_view kMentionsFile = "mentions.ndjson";
inline constexpr std::string_view kClustersFile = "clusters.ndjson";
inline constexpr std::string_view kReportFile = "report.json";
inline constexpr std::string_view kVoidFile = "void.ttl";

std::string graph_file_name(rdf::Format format);

struct PipelineReport {
  std::vector<std::string> stages;
  std::map<std::string, std::uint64_t> counters;
  std::map<std::string, std::uint64_t> edition_pages;  // selected editions
  std::vector<std::string> editions_without_rules;
  std::string nlp_mode = "offline";  // offline | backend | degraded
  std::string model_tag;
  bool degraded = false;

  int exit_code() const { return degraded ? 4 : 0; }
  nlohmann::json to_json() const;
};

/// Runs `stage` (or all four in order) with artifacts in config.out_dir.
/// Throws ConfigError or DataError; backend failures only degrade.
PipelineReport run_pipeline(Stage stage, const PipelineConfig& config);

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. The first exception
/// thrown by any call is rethrown after all threads finish.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

/// Forwards to a backend until its first BackendError; from then on every
/// call fails fast, so a dead service costs one timeout, not one per page.
class FailoverBackend final : public NlpBackend {
 public:
  explicit FailoverBackend(std::unique_ptr<NlpBackend> inner) : inner_(std::move(inner)) {}

  bool offline() const override { return inner_->offline(); }
  bool failed() const { return failed_.load(); }
  std::vector<LanguageGuess> detect_languages(std::span<const std::string> texts) override;
  std::vector<std::optional<Sentiment>> classify_sentiment(std::span<const std::string> texts) override;
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;

 private:
  template <typename Fn>
  auto guarded(Fn&& fn) -> decltype(fn());

  std::unique_ptr<NlpBackend> inner_;
  std::atomic<bool> failed_{false};
};

}  // namespace quotekg
