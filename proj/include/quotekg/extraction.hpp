#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quotekg/rules.hpp"
#include "quotekg/wikitext.hpp"

namespace quotekg {

/// One quotation as found on a page, before enrichment.
struct RawQuote {
  std::string person_title;
  std::string language_edition;
  std::string text;
  std::optional<std::string> original_text;
  std::optional<std::string> original_language_hint;
  std::vector<std::string> section_path;
  bool misattributed = false;
  std::vector<Node> context_nodes;
  std::optional<std::vector<TemplateParam>> template_params;
  // Markup of the quote body itself; source of entity links.
  InlineList quote_inlines;
};

struct ExtractionCounters {
  std::uint64_t empty_skipped = 0;
  std::uint64_t outside_sections = 0;  // list items not under a quote section
  std::uint64_t about_skipped = 0;
  std::uint64_t context_attached = 0;  // items from CONTEXT sections
};

/// Turns a person's page tree into raw quotes.
///
/// Under QUOTES or MISATTRIBUTED sections (sub-sections with unclassified
/// titles inherit their parent's kind) each depth-1 list item is a quote and
/// its deeper items are context. Quote templates yield one quote each,
/// anywhere outside ABOUT and CONTEXT sections; non-quote templates that
/// directly follow a block-level quote template are its context. Items in a
/// CONTEXT section nested in a quote region are attached to the preceding
/// quote.
std::vector<RawQuote> extract_quotes(const PageTree& tree, const LanguageRuleSet& rules,
                                     ExtractionCounters* counters = nullptr);

}  // namespace quotekg
