#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "quotekg/alignment.hpp"
#include "quotekg/corpus_stats.hpp"
#include "quotekg/enrichment.hpp"
#include "quotekg/extraction.hpp"
#include "quotekg/wikitext.hpp"

namespace quotekg {

using json = nlohmann::json;

void to_json(json& j, const PartialDate& d);
void from_json(const json& j, PartialDate& d);
void to_json(json& j, const Sentiment& s);
void from_json(const json& j, Sentiment& s);
void to_json(json& j, const Inline& in);
void from_json(const json& j, Inline& in);
void to_json(json& j, const TemplateParam& p);
void from_json(const json& j, TemplateParam& p);
void to_json(json& j, const Node& n);
void from_json(const json& j, Node& n);
void to_json(json& j, const PageTree& t);
void to_json(json& j, const RawQuote& q);
void from_json(const json& j, RawQuote& q);
void to_json(json& j, const ContextRecord& c);
void from_json(const json& j, ContextRecord& c);
void to_json(json& j, const PersonRecord& p);
void from_json(const json& j, PersonRecord& p);
void to_json(json& j, const EntityLink& e);
void from_json(const json& j, EntityLink& e);
void to_json(json& j, const QuoteMention& m);
void from_json(const json& j, QuoteMention& m);
void to_json(json& j, const QuoteCluster& c);
void from_json(const json& j, QuoteCluster& c);
void to_json(json& j, const AlignedPerson& p);
void from_json(const json& j, AlignedPerson& p);
void to_json(json& j, const LanguageStats& s);
void to_json(json& j, const CorpusStats& s);

/// Newline-delimited JSON intermediates. The first line of every file is a
/// header {"format":"quotekg-intermediate","kind":<kind>,"version":N}.
inline constexpr int kIntermediateVersion = 1;
inline constexpr std::string_view kRawQuotesKind = "raw_quotes";
inline constexpr std::string_view kMentionsKind = "mentions";
inline constexpr std::string_view kClustersKind = "clusters";

class NdjsonWriter {
 public:
  NdjsonWriter(const std::filesystem::path& path, std::string_view kind);
  void write(const json& record);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Reads an intermediate file. A missing file raises DataError naming the
/// path and the stage that produces it; a wrong header or malformed line
/// raises DataError with the line number.
class NdjsonReader {
 public:
  NdjsonReader(const std::filesystem::path& path, std::string_view kind,
               std::string_view producing_stage);
  std::optional<json> next();

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 1;
};

/// True when the first line of `path` is an intermediate header of `kind`.
bool has_intermediate_header(const std::filesystem::path& path, std::string_view kind);

}  // namespace quotekg
