#include "quotekg/rules.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "quotekg/errors.hpp"
#include "quotekg/text.hpp"

namespace quotekg {

std::string_view to_string(SectionKind kind) {
  switch (kind) {
    case SectionKind::kQuotes: return "QUOTES";
    case SectionKind::kContext: return "CONTEXT";
    case SectionKind::kMisattributed: return "MISATTRIBUTED";
    case SectionKind::kAbout: return "ABOUT";
    case SectionKind::kOther: return "OTHER";
  }
  return "OTHER";
}

namespace {

bool contains_icase(const std::vector<std::string>& values, std::string_view needle) {
  auto wanted = text::to_lower(text::trim(needle));
  return std::any_of(values.begin(), values.end(),
                     [&](const std::string& v) { return text::to_lower(text::trim(v)) == wanted; });
}

bool any_match(const std::vector<Pattern>& patterns, const std::string& title) {
  return std::any_of(patterns.begin(), patterns.end(),
                     [&](const Pattern& p) { return std::regex_search(title, p.regex); });
}

const std::set<std::string, std::less<>> kKnownKeys = {
    "language",
    "quote_section_titles",
    "context_section_titles",
    "misattributed_section_patterns",
    "about_section_patterns",
    "quote_template_names",
    "date_template_keys",
    "source_template_keys",
    "original_text_keys",
    "original_language_keys",
};

std::vector<std::string> read_list(const YAML::Node& doc, const std::string& lang,
                                   const std::string& key, bool unique_icase) {
  std::vector<std::string> out;
  const YAML::Node node = doc[key];
  if (!node) return out;
  if (!node.IsSequence()) {
    throw ConfigError("rules for '" + lang + "': field '" + key + "' must be a list");
  }
  for (const auto& item : node) {
    if (!item.IsScalar()) {
      throw ConfigError("rules for '" + lang + "': field '" + key + "' must hold strings");
    }
    auto value = item.as<std::string>();
    if (unique_icase && contains_icase(out, value)) {
      throw ConfigError("rules for '" + lang + "': duplicate entry '" + value + "' in '" + key + "'");
    }
    out.push_back(std::move(value));
  }
  return out;
}

std::vector<Pattern> read_patterns(const YAML::Node& doc, const std::string& lang,
                                   const std::string& key) {
  std::vector<Pattern> out;
  for (auto& src : read_list(doc, lang, key, false)) out.push_back(compile_pattern(lang, src));
  return out;
}

}  // namespace

bool LanguageRuleSet::is_quote_template(std::string_view name) const {
  return contains_icase(quote_template_names, name);
}

Pattern compile_pattern(std::string_view language_code, std::string_view source) {
  auto flags = std::regex::ECMAScript;
  std::string_view body = source;
  if (body.starts_with("(?i)")) {
    flags |= std::regex::icase;
    body.remove_prefix(4);
  }
  try {
    return Pattern{std::string(source), std::regex(std::string(body), flags)};
  } catch (const std::regex_error& e) {
    throw ConfigError("rules for '" + std::string(language_code) + "': invalid pattern '" +
                      std::string(source) + "': " + e.what());
  }
}

RuleBook load_rules(std::string_view yaml_source) {
  std::vector<YAML::Node> docs;
  try {
    docs = YAML::LoadAll(std::string(yaml_source));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("rules file is not valid YAML: ") + e.what());
  }
  RuleBook book;
  int index = 0;
  for (const auto& doc : docs) {
    ++index;
    if (doc.IsNull()) continue;
    if (!doc.IsMap()) {
      throw ConfigError("rules document " + std::to_string(index) + " is not a mapping");
    }
    if (!doc["language"] || !doc["language"].IsScalar()) {
      throw ConfigError("rules document " + std::to_string(index) +
                        ": missing mandatory field 'language'");
    }
    LanguageRuleSet rules;
    rules.language_code = doc["language"].as<std::string>();
    const auto& lang = rules.language_code;
    if (lang.empty() || text::to_lower(lang) != lang) {
      throw ConfigError("rules document " + std::to_string(index) +
                        ": language code must be non-empty lowercase");
    }
    for (const auto& kv : doc) {
      auto key = kv.first.as<std::string>();
      if (!kKnownKeys.contains(key)) {
        throw ConfigError("rules for '" + lang + "': unknown field '" + key + "'");
      }
    }
    rules.quote_section_titles = read_list(doc, lang, "quote_section_titles", true);
    if (rules.quote_section_titles.empty()) {
      throw ConfigError("rules for '" + lang +
                        "': missing mandatory field 'quote_section_titles' (must be non-empty)");
    }
    rules.context_section_titles = read_list(doc, lang, "context_section_titles", true);
    rules.misattributed_section_patterns = read_patterns(doc, lang, "misattributed_section_patterns");
    rules.about_section_patterns = read_patterns(doc, lang, "about_section_patterns");
    rules.quote_template_names = read_list(doc, lang, "quote_template_names", true);
    rules.date_template_keys = read_list(doc, lang, "date_template_keys", true);
    rules.source_template_keys = read_list(doc, lang, "source_template_keys", true);
    rules.original_text_keys = read_list(doc, lang, "original_text_keys", true);
    rules.original_language_keys = read_list(doc, lang, "original_language_keys", true);
    if (book.contains(lang)) {
      throw ConfigError("rules for '" + lang + "' defined twice");
    }
    book.emplace(lang, std::move(rules));
  }
  return book;
}

RuleBook load_rules_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read rules file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_rules(ss.str());
}

SectionKind classify_section(std::string_view title, const LanguageRuleSet& rules) {
  const std::string t(text::trim(title));
  if (any_match(rules.misattributed_section_patterns, t)) return SectionKind::kMisattributed;
  if (any_match(rules.about_section_patterns, t)) return SectionKind::kAbout;
  if (contains_icase(rules.quote_section_titles, t)) return SectionKind::kQuotes;
  if (contains_icase(rules.context_section_titles, t)) return SectionKind::kContext;
  return SectionKind::kOther;
}

}  // namespace quotekg
