#pragma once

#include <filesystem>
#include <map>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace quotekg {

enum class SectionKind { kQuotes, kContext, kMisattributed, kAbout, kOther };

std::string_view to_string(SectionKind kind);

struct Pattern {
  std::string source;
  std::regex regex;
};

/// Extraction vocabulary for one Wikiquote edition.
struct LanguageRuleSet {
  std::string language_code;
  std::vector<std::string> quote_section_titles;
  std::vector<std::string> context_section_titles;
  std::vector<Pattern> misattributed_section_patterns;
  std::vector<Pattern> about_section_patterns;
  std::vector<std::string> quote_template_names;
  std::vector<std::string> date_template_keys;
  std::vector<std::string> source_template_keys;
  std::vector<std::string> original_text_keys;
  std::vector<std::string> original_language_keys;

  bool is_quote_template(std::string_view name) const;
};

using RuleBook = std::map<std::string, LanguageRuleSet, std::less<>>;

/// Compiles a pattern. A leading "(?i)" switches on case-insensitive matching
/// (std::regex has no inline flags). Throws ConfigError on bad syntax.
Pattern compile_pattern(std::string_view language_code, std::string_view source);

/// Parses a multi-document YAML stream, one document per language.
/// Unknown keys, missing `language`/`quote_section_titles`, duplicate entries
/// and invalid regexes raise ConfigError naming the language and the culprit.
RuleBook load_rules(std::string_view yaml_source);
RuleBook load_rules_file(const std::filesystem::path& path);

/// Precedence: MISATTRIBUTED > ABOUT > QUOTES > CONTEXT > OTHER.
/// Title sets match trimmed and case-insensitively; patterns use regex search.
SectionKind classify_section(std::string_view title, const LanguageRuleSet& rules);

}  // namespace quotekg
