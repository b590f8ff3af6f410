#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quotekg/dates.hpp"
#include "quotekg/dump_ingest.hpp"
#include "quotekg/extraction.hpp"
#include "quotekg/nlp.hpp"
#include "quotekg/rules.hpp"

namespace quotekg {

/// Provenance of one mention's language and sentiment fields.
enum class NlpProvenance { kBackend, kOffline, kDegraded };

std::string_view to_string(NlpProvenance p);
std::optional<NlpProvenance> nlp_provenance_from(std::string_view s);

struct ContextRecord {
  std::optional<std::string> context_text;
  std::vector<std::string> source_urls;
  std::optional<std::string> origin_label;
  bool operator==(const ContextRecord&) const = default;
};

struct PersonRecord {
  std::string canonical_label;
  std::map<std::string, std::string> labels;  // language code -> label
  std::optional<std::string> wikidata_iri;
  std::vector<std::string> dbpedia_iris;
  std::vector<std::string> wikiquote_iris;
  std::vector<std::string> type_labels;
  bool operator==(const PersonRecord&) const = default;

  /// Grouping key: the Wikidata IRI, else "<lang>:<label>" of the first label.
  std::string key() const;
};

/// Folds `other` (the same person seen in another edition) into `into`.
/// Lists stay sorted and unique; the canonical label prefers English, then
/// the smallest language code.
void merge_person(PersonRecord& into, const PersonRecord& other);

struct EntityLink {
  std::string surface;
  std::string target_title;
  std::optional<std::string> resolved_iri;
  bool operator==(const EntityLink&) const = default;
};

struct QuoteMention {
  std::string mention_id;
  std::string person_key;
  std::string text;
  std::string language;
  std::vector<ContextRecord> contexts;
  std::optional<PartialDate> date;
  bool misattributed = false;
  std::optional<Sentiment> sentiment;
  std::vector<EntityLink> entity_links;
  NlpProvenance provenance = NlpProvenance::kOffline;
  std::string edition;        // language code of the page it came from
  bool is_original = false;   // built from a template's original-text field
  bool operator==(const QuoteMention&) const = default;
};

/// All mentions found on one person page.
struct EnrichedPage {
  PersonRecord person;
  std::vector<QuoteMention> mentions;
};

struct EnrichmentCounters {
  std::uint64_t mentions = 0;
  std::uint64_t original_mentions = 0;
  std::uint64_t invalid_urls_skipped = 0;
  std::uint64_t dated_mentions = 0;
  std::uint64_t degraded_batches = 0;

  EnrichmentCounters& operator+=(const EnrichmentCounters& o);
};

/// Dates from the template's date keys win when they yield anything;
/// otherwise candidates come from the section titles above the quote and its
/// context texts. The result follows resolve_dates.
std::optional<PartialDate> extract_date(
    const std::optional<std::vector<TemplateParam>>& template_params,
    std::span<const std::string> section_path, std::span<const std::string> context_texts,
    const LanguageRuleSet& rules);

/// True for http(s)/ftp URLs with a non-empty host and no whitespace.
bool is_absolute_url(std::string_view url);

struct SourceList {
  std::vector<std::string> urls;
  std::uint64_t skipped = 0;
};

/// External links in context markup (including <ref> bodies and templates)
/// and in the quote template's parameters, plus source-key values that are
/// URLs. Deduplicated, document order.
SourceList extract_sources(std::span<const Node> context_nodes,
                           const std::optional<std::vector<TemplateParam>>& template_params,
                           const LanguageRuleSet& rules);

/// One record per context node (nested list items become records of their
/// own), plus one for the quote template's source parameters. A URL is kept
/// only on the first record that carries it.
std::vector<ContextRecord> build_contexts(
    std::span<const Node> context_nodes,
    const std::optional<std::vector<TemplateParam>>& template_params,
    const LanguageRuleSet& rules, std::uint64_t* invalid_urls = nullptr);

/// Internal links of the quote markup. File/category links are dropped and
/// targets resolve through the sitelink index of `language_code`.
std::vector<EntityLink> extract_entity_links(std::span<const Inline> inlines,
                                             std::string_view language_code,
                                             const SitelinkIndex& sitelinks);

/// Identity record for a person page. IRIs are set only when the index
/// resolves the page.
PersonRecord resolve_identity(std::string_view person_title, std::string_view language_edition,
                              const SitelinkIndex& sitelinks);

/// "https://<lang>.wikiquote.org/wiki/<Title>" with spaces as underscores and
/// IRI-illegal ASCII percent-encoded.
std::string wikiquote_iri(std::string_view language_code, std::string_view title);

/// Enriches all quotes of one page with one batched language and sentiment
/// request each. Backend failures never propagate: the page is then enriched
/// offline and its mentions are marked degraded.
EnrichedPage enrich_page(std::string_view person_title, std::string_view language_edition,
                         std::span<const RawQuote> quotes, const LanguageRuleSet& rules,
                         const SitelinkIndex& sitelinks, NlpBackend& nlp,
                         EnrichmentCounters* counters = nullptr);

/// Single-quote form: one mention for the text, a second for the original
/// text when present.
std::vector<QuoteMention> enrich(const RawQuote& raw, const LanguageRuleSet& rules,
                                 const SitelinkIndex& sitelinks, NlpBackend& nlp);

}  // namespace quotekg
