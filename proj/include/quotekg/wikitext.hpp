#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "quotekg/dump_ingest.hpp"

namespace quotekg {

// Inline content.

struct Text {
  std::string value;
  bool bold = false;
  bool italic = false;
  bool operator==(const Text&) const = default;
};

struct InternalLink {
  std::string target;
  std::string anchor;  // equals target for [[Target]]
  bool operator==(const InternalLink&) const = default;
};

struct ExternalLink {
  std::string url;  // always absolute
  std::string anchor;
  bool operator==(const ExternalLink&) const = default;
};

struct Reference {
  std::string content;  // raw wikitext between <ref> and </ref>
  bool operator==(const Reference&) const = default;
};

using Inline = std::variant<Text, InternalLink, ExternalLink, Reference>;
using InlineList = std::vector<Inline>;

// Block nodes of the page tree.

struct Node;

struct Section {
  std::string title;
  int level = 2;  // 2..6
  std::vector<Node> children;
  bool operator==(const Section&) const;
};

struct ListItem {
  int depth = 1;
  InlineList content;
  // Deeper list items, plus templates that appeared inline on the item's line.
  std::vector<Node> children;
  bool operator==(const ListItem&) const;
};

struct TemplateParam {
  std::string key;  // trimmed name, or "1", "2", ... for positional params
  InlineList value;
  bool operator==(const TemplateParam&) const = default;
};

struct Template {
  std::string name;
  std::vector<TemplateParam> params;
  bool operator==(const Template&) const = default;

  const TemplateParam* find(std::string_view key) const;
};

// Plain text lines outside lists; unrecognized constructs end up here.
struct Paragraph {
  InlineList content;
  bool operator==(const Paragraph&) const = default;
};

struct Node {
  std::variant<Section, ListItem, Template, Paragraph> value;
  bool operator==(const Node&) const = default;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&value);
  }
};

struct ParseWarning {
  int line = 0;
  std::string message;
};

struct PageTree {
  std::string page_title;
  std::string language_code;
  std::vector<Node> root;
  std::vector<ParseWarning> warnings;
};

/// Parses wikitext into sections, list items, templates and paragraphs.
///
/// Total: any input yields a tree. Supported: headings, `*#:;` lists,
/// bold/italic, `{{templates}}` (nested ones are rendered to text with a
/// warning), `[[internal]]` and `[external]` links, bare URLs and `<ref>`.
/// HTML comments are removed first; other tags are dropped, keeping their text.
PageTree parse_page(const RawPage& page);
PageTree parse_wikitext(std::string_view wikitext, std::string page_title = {},
                        std::string language_code = {});

/// Parses a single run of inline markup (no block structure).
InlineList parse_inline(std::string_view markup);

/// Renders inline content as plain text: markup removed, links shown by their
/// anchors, references dropped, whitespace collapsed and trimmed.
std::string strip_markup(std::span<const Inline> inlines);

/// Stripped value of the first of `keys` the template carries with a
/// non-empty value. Key comparison ignores case and surrounding spaces.
std::optional<std::string> template_value(const Template& tmpl,
                                          std::span<const std::string> keys);

}  // namespace quotekg
