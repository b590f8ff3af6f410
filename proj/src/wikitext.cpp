#include "quotekg/wikitext.hpp"

#include <algorithm>
#include <cctype>

#include "quotekg/text.hpp"

namespace quotekg {

bool Section::operator==(const Section&) const = default;
bool ListItem::operator==(const ListItem&) const = default;

const TemplateParam* Template::find(std::string_view key) const {
  auto wanted = text::to_lower(text::trim(key));
  for (const auto& p : params) {
    if (text::to_lower(p.key) == wanted) return &p;
  }
  return nullptr;
}

namespace {

constexpr std::string_view kUrlSchemes[] = {"https://", "http://", "ftp://", "ftps://"};

bool starts_with(std::string_view s, size_t pos, std::string_view prefix) {
  return s.substr(pos, prefix.size()) == prefix;
}

size_t url_scheme_length(std::string_view s, size_t pos) {
  for (auto scheme : kUrlSchemes) {
    if (s.size() - pos >= scheme.size() &&
        text::iequals(s.substr(pos, scheme.size()), scheme)) {
      return scheme.size();
    }
  }
  return 0;
}

// Returns the index just past the `}}` closing the template opened at `pos`,
// or npos when unbalanced.
size_t match_braces(std::string_view s, size_t pos) {
  int depth = 0;
  size_t i = pos;
  while (i < s.size()) {
    if (starts_with(s, i, "{{")) {
      ++depth;
      i += 2;
    } else if (starts_with(s, i, "}}")) {
      --depth;
      i += 2;
      if (depth == 0) return i;
    } else {
      ++i;
    }
  }
  return std::string_view::npos;
}

size_t match_links(std::string_view s, size_t pos) {
  int depth = 0;
  size_t i = pos;
  while (i < s.size()) {
    if (starts_with(s, i, "[[")) {
      ++depth;
      i += 2;
    } else if (starts_with(s, i, "]]")) {
      --depth;
      i += 2;
      if (depth == 0) return i;
    } else {
      ++i;
    }
  }
  return std::string_view::npos;
}

// Splits template contents on top-level pipes.
std::vector<std::string_view> split_params(std::string_view s) {
  std::vector<std::string_view> parts;
  int braces = 0;
  int brackets = 0;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (starts_with(s, i, "{{")) {
      ++braces;
      ++i;
    } else if (starts_with(s, i, "}}") && braces > 0) {
      --braces;
      ++i;
    } else if (s[i] == '[') {
      ++brackets;
    } else if (s[i] == ']' && brackets > 0) {
      --brackets;
    } else if (s[i] == '|' && braces == 0 && brackets == 0) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

size_t find_top_level_equals(std::string_view s) {
  int braces = 0;
  int brackets = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (starts_with(s, i, "{{")) {
      ++braces;
      ++i;
    } else if (starts_with(s, i, "}}") && braces > 0) {
      --braces;
      ++i;
    } else if (s[i] == '[') {
      ++brackets;
    } else if (s[i] == ']' && brackets > 0) {
      --brackets;
    } else if (s[i] == '<') {
      return std::string_view::npos;  // `=` inside markup such as <ref name=..>
    } else if (s[i] == '=' && braces == 0 && brackets == 0) {
      return i;
    }
  }
  return std::string_view::npos;
}

Template parse_template_body(std::string_view whole, std::vector<ParseWarning>* warnings,
                             int line);

class InlineParser {
 public:
  InlineParser(std::vector<ParseWarning>* warnings, int line, std::vector<Template>* templates)
      : warnings_(warnings), line_(line), templates_(templates) {}

  InlineList parse(std::string_view s) {
    size_t i = 0;
    while (i < s.size()) {
      char c = s[i];
      if (c == '\'' && starts_with(s, i, "''")) {
        size_t run = 0;
        while (i + run < s.size() && s[i + run] == '\'') ++run;
        i += apply_quotes(run);
        continue;
      }
      if (c == '[' && starts_with(s, i, "[[")) {
        size_t end = match_links(s, i);
        if (end != std::string_view::npos) {
          emit_internal_link(s.substr(i + 2, end - i - 4));
          i = end;
          continue;
        }
      }
      if (c == '[' && !starts_with(s, i, "[[") && url_scheme_length(s, i + 1) > 0) {
        size_t close = s.find(']', i + 1);
        if (close != std::string_view::npos) {
          emit_external_link(s.substr(i + 1, close - i - 1));
          i = close + 1;
          continue;
        }
      }
      if (size_t n = url_scheme_length(s, i); n > 0 && (i == 0 || !std::isalnum(static_cast<unsigned char>(s[i - 1])))) {
        size_t end = i + n;
        while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end])) &&
               s[end] != ']' && s[end] != '[' && s[end] != '<' && s[end] != '|' && s[end] != '"') {
          ++end;
        }
        // Trailing sentence punctuation is not part of a bare URL.
        while (end > i + n && std::string_view(".,;:!?)").find(s[end - 1]) != std::string_view::npos) --end;
        if (end > i + n) {
          flush();
          std::string url(s.substr(i, end - i));
          out_.push_back(ExternalLink{url, url});
          i = end;
          continue;
        }
      }
      if (c == '{' && starts_with(s, i, "{{")) {
        size_t end = match_braces(s, i);
        if (end != std::string_view::npos) {
          handle_template(s.substr(i, end - i));
          i = end;
          continue;
        }
      }
      if (c == '<') {
        size_t consumed = handle_tag(s, i);
        if (consumed > 0) {
          i += consumed;
          continue;
        }
      }
      buffer_.push_back(c);
      ++i;
    }
    flush();
    return std::move(out_);
  }

 private:
  void warn(std::string message) {
    if (warnings_ != nullptr) warnings_->push_back({line_, std::move(message)});
  }

  void flush() {
    if (buffer_.empty()) return;
    if (!out_.empty()) {
      if (auto* prev = std::get_if<Text>(&out_.back());
          prev != nullptr && prev->bold == bold_ && prev->italic == italic_) {
        prev->value += buffer_;
        buffer_.clear();
        return;
      }
    }
    out_.push_back(Text{std::move(buffer_), bold_, italic_});
    buffer_.clear();
  }

  size_t apply_quotes(size_t run) {
    flush();
    if (run >= 5) {
      bold_ = !bold_;
      italic_ = !italic_;
      return 5;
    }
    if (run >= 3) {
      bold_ = !bold_;
      return 3;
    }
    italic_ = !italic_;
    return 2;
  }

  void emit_internal_link(std::string_view inner) {
    flush();
    auto pipe = inner.find('|');
    std::string target(text::trim(inner.substr(0, pipe)));
    std::string anchor = target;
    if (pipe != std::string_view::npos) {
      InlineParser sub(warnings_, line_, nullptr);
      anchor = strip_markup(sub.parse(inner.substr(pipe + 1)));
      if (anchor.empty()) anchor = target;
    }
    if (target.empty()) {
      buffer_ += anchor;
      return;
    }
    out_.push_back(InternalLink{std::move(target), std::move(anchor)});
  }

  void emit_external_link(std::string_view inner) {
    flush();
    size_t sp = 0;
    while (sp < inner.size() && !std::isspace(static_cast<unsigned char>(inner[sp]))) ++sp;
    std::string url(inner.substr(0, sp));
    InlineParser sub(warnings_, line_, nullptr);
    std::string anchor = strip_markup(sub.parse(inner.substr(std::min(sp, inner.size()))));
    if (anchor.empty()) anchor = url;
    out_.push_back(ExternalLink{std::move(url), std::move(anchor)});
  }

  void handle_template(std::string_view whole);

  size_t handle_tag(std::string_view s, size_t i) {
    auto lower_at = [&](std::string_view tag) {
      return s.size() - i >= tag.size() && text::iequals(s.substr(i, tag.size()), tag);
    };
    if (lower_at("<ref") && i + 4 < s.size() &&
        (s[i + 4] == '>' || s[i + 4] == '/' || std::isspace(static_cast<unsigned char>(s[i + 4])))) {
      size_t gt = s.find('>', i);
      if (gt == std::string_view::npos) return 0;
      flush();
      if (s[gt - 1] == '/') {
        out_.push_back(Reference{});
        return gt + 1 - i;
      }
      size_t close = std::string_view::npos;
      for (size_t k = gt + 1; k < s.size(); ++k) {
        if (s.size() - k >= 6 && text::iequals(s.substr(k, 6), "</ref>")) {
          close = k;
          break;
        }
      }
      if (close == std::string_view::npos) {
        warn("unterminated <ref>");
        out_.push_back(Reference{std::string(s.substr(gt + 1))});
        return s.size() - i;
      }
      out_.push_back(Reference{std::string(s.substr(gt + 1, close - gt - 1))});
      return close + 6 - i;
    }
    if (lower_at("<nowiki>")) {
      size_t start = i + 8;
      size_t close = s.find("</nowiki>", start);
      if (close == std::string_view::npos) close = s.size();
      buffer_ += s.substr(start, close - start);
      return std::min(close + 9, s.size()) - i;
    }
    if (lower_at("<br")) {
      size_t gt = s.find('>', i);
      if (gt == std::string_view::npos) return 0;
      buffer_.push_back(' ');
      return gt + 1 - i;
    }
    // Generic open/close tag: drop the tag, keep content.
    size_t j = i + 1;
    if (j < s.size() && s[j] == '/') ++j;
    size_t name_start = j;
    while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
    if (j == name_start) return 0;
    size_t gt = s.find('>', j);
    size_t next_lt = s.find('<', j);
    if (gt == std::string_view::npos || (next_lt != std::string_view::npos && next_lt < gt)) {
      return 0;
    }
    return gt + 1 - i;
  }

  std::vector<ParseWarning>* warnings_;
  int line_;
  std::vector<Template>* templates_;
  InlineList out_;
  std::string buffer_;
  bool bold_ = false;
  bool italic_ = false;
};

// `whole` includes the outer braces.
Template parse_template_body(std::string_view whole, std::vector<ParseWarning>* warnings,
                             int line) {
  Template tmpl;
  auto inner = whole.substr(2, whole.size() - 4);
  auto parts = split_params(inner);
  tmpl.name = text::collapse_whitespace(parts.front());
  int positional = 0;
  for (size_t k = 1; k < parts.size(); ++k) {
    std::string_view part = parts[k];
    std::string key;
    std::string_view raw_value;
    size_t eq = find_top_level_equals(part);
    if (eq != std::string_view::npos) {
      key = std::string(text::trim(part.substr(0, eq)));
      raw_value = part.substr(eq + 1);
    } else {
      key = std::to_string(++positional);
      raw_value = part;
    }
    InlineParser sub(warnings, line, nullptr);
    TemplateParam param{key, sub.parse(raw_value)};
    auto dup = std::find_if(tmpl.params.begin(), tmpl.params.end(),
                            [&](const TemplateParam& p) { return p.key == key; });
    if (dup != tmpl.params.end()) {
      if (warnings != nullptr) {
        warnings->push_back({line, "duplicate template parameter '" + key + "' in {{" +
                                       tmpl.name + "}}; last value kept"});
      }
      dup->value = std::move(param.value);
    } else {
      tmpl.params.push_back(std::move(param));
    }
  }
  return tmpl;
}

// A template nested inside another construct renders as the text of its last
// positional parameter ({{lang|de|Text}} -> "Text").
std::string render_nested_template(const Template& t) {
  for (auto it = t.params.rbegin(); it != t.params.rend(); ++it) {
    if (!it->key.empty() && std::all_of(it->key.begin(), it->key.end(),
                                        [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      return strip_markup(it->value);
    }
  }
  return {};
}

void InlineParser::handle_template(std::string_view whole) {
  Template tmpl = parse_template_body(whole, warnings_, line_);
  if (templates_ != nullptr) {
    flush();
    templates_->push_back(std::move(tmpl));
    return;
  }
  warn("nested template {{" + tmpl.name + "}} rendered as text");
  buffer_ += render_nested_template(tmpl);
}

std::string remove_comments(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    size_t open = s.find("<!--", i);
    if (open == std::string_view::npos) {
      out.append(s.substr(i));
      break;
    }
    out.append(s.substr(i, open - i));
    size_t close = s.find("-->", open + 4);
    if (close == std::string_view::npos) break;
    // Keep line structure so warnings report source line numbers.
    out.append(static_cast<size_t>(std::count(s.begin() + open, s.begin() + close, '\n')), '\n');
    i = close + 3;
  }
  return out;
}

int brace_balance(std::string_view s) {
  int depth = 0;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == '{' && s[i + 1] == '{') {
      ++depth;
      ++i;
    } else if (s[i] == '}' && s[i + 1] == '}') {
      --depth;
      ++i;
    }
  }
  return depth;
}

int count_bold_markers(std::string_view s) {
  int n = 0;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '\'') {
      size_t run = 0;
      while (i + run < s.size() && s[i + run] == '\'') ++run;
      if (run >= 3) ++n;
      i += run;
    } else {
      ++i;
    }
  }
  return n;
}

bool is_list_marker(char c) { return c == '*' || c == '#' || c == ':' || c == ';'; }

bool is_structural_line(std::string_view line) {
  auto t = text::trim(line);
  return t.empty() || is_list_marker(line.empty() ? ' ' : line[0]) || t.front() == '=' ||
         t.starts_with("{{");
}

struct LogicalLine {
  int line_no;
  std::string text;
};

std::vector<LogicalLine> logical_lines(std::string_view source) {
  std::vector<std::string> physical;
  for (auto& l : text::split(source, '\n')) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    physical.push_back(std::move(l));
  }
  std::vector<LogicalLine> out;
  size_t i = 0;
  while (i < physical.size()) {
    LogicalLine ll{static_cast<int>(i) + 1, physical[i]};
    ++i;
    // Templates spanning lines.
    int depth = brace_balance(ll.text);
    while (depth > 0 && i < physical.size()) {
      ll.text += '\n';
      ll.text += physical[i];
      depth = brace_balance(ll.text);
      ++i;
    }
    // A list item whose bold run is left open continues on following plain lines.
    if (!ll.text.empty() && is_list_marker(ll.text[0])) {
      while (count_bold_markers(ll.text) % 2 == 1 && i < physical.size() &&
             !is_structural_line(physical[i])) {
        ll.text += '\n';
        ll.text += physical[i];
        ++i;
      }
    }
    out.push_back(std::move(ll));
  }
  return out;
}

class TreeBuilder {
 public:
  explicit TreeBuilder(PageTree& tree) : tree_(tree) {}

  void heading(int level, std::string title) {
    while (!section_path_.empty() && section_at_path()->level >= level) section_path_.pop_back();
    auto& container = current_children();
    container.push_back(Node{Section{std::move(title), level, {}}});
    section_path_.push_back(container.size() - 1);
  }

  void list_item(int line_no, int depth, InlineList content, std::vector<Template> templates) {
    auto* parent_children = &current_children();
    int parent_depth = 0;
    while (parent_depth + 1 < depth) {
      ListItem* last = last_list_item(*parent_children);
      if (last == nullptr) break;
      parent_children = &last->children;
      parent_depth = last->depth;
    }
    // When the chain is shorter we land on the container itself; list items
    // directly under a section always start at depth 1.
    if (parent_children == &current_children()) parent_depth = 0;
    int effective = parent_depth + 1;
    if (effective != depth) {
      tree_.warnings.push_back({line_no, "list depth " + std::to_string(depth) +
                                             " normalized to " + std::to_string(effective)});
    }
    ListItem item{effective, std::move(content), {}};
    for (auto& t : templates) item.children.push_back(Node{std::move(t)});
    parent_children->push_back(Node{std::move(item)});
  }

  void block(Node node) { current_children().push_back(std::move(node)); }

 private:
  static ListItem* last_list_item(std::vector<Node>& nodes) {
    for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
      if (auto* li = std::get_if<ListItem>(&it->value)) return li;
      return nullptr;
    }
    return nullptr;
  }

  Section* section_at_path() {
    std::vector<Node>* level = &tree_.root;
    Section* sec = nullptr;
    for (size_t idx : section_path_) {
      sec = &std::get<Section>((*level)[idx].value);
      level = &sec->children;
    }
    return sec;
  }

  std::vector<Node>& current_children() {
    if (section_path_.empty()) return tree_.root;
    return section_at_path()->children;
  }

  PageTree& tree_;
  std::vector<size_t> section_path_;
};

}  // namespace

InlineList parse_inline(std::string_view markup) {
  InlineParser parser(nullptr, 0, nullptr);
  return parser.parse(markup);
}

PageTree parse_wikitext(std::string_view wikitext, std::string page_title,
                        std::string language_code) {
  PageTree tree;
  tree.page_title = std::move(page_title);
  tree.language_code = std::move(language_code);
  const std::string source = remove_comments(wikitext);
  TreeBuilder builder(tree);

  for (auto& ll : logical_lines(source)) {
    std::string_view line = ll.text;
    auto trimmed = text::trim(line);
    if (trimmed.empty()) continue;

    if (trimmed.front() == '=' && trimmed.size() > 2 && trimmed.back() == '=') {
      size_t lead = 0;
      while (lead < trimmed.size() && trimmed[lead] == '=') ++lead;
      size_t trail = 0;
      while (trail < trimmed.size() - lead && trimmed[trimmed.size() - 1 - trail] == '=') ++trail;
      int level = static_cast<int>(std::min(lead, trail));
      auto inner = trimmed.substr(static_cast<size_t>(level), trimmed.size() - 2 * static_cast<size_t>(level));
      if (level >= 2 && !text::trim(inner).empty()) {
        if (level > 6) level = 6;
        InlineParser p(&tree.warnings, ll.line_no, nullptr);
        builder.heading(level, strip_markup(p.parse(inner)));
        continue;
      }
    }

    if (is_list_marker(line.front())) {
      size_t run = 0;
      while (run < line.size() && is_list_marker(line[run])) ++run;
      std::vector<Template> templates;
      InlineParser p(&tree.warnings, ll.line_no, &templates);
      size_t body = run;
      while (body < line.size() && (line[body] == ' ' || line[body] == '\t')) ++body;
      InlineList content = p.parse(line.substr(body));
      builder.list_item(ll.line_no, static_cast<int>(run), std::move(content), std::move(templates));
      continue;
    }

    if (trimmed.starts_with("{{")) {
      // A line made only of templates becomes block-level Template nodes.
      std::vector<Template> templates;
      size_t pos = 0;
      bool only_templates = true;
      while (pos < trimmed.size()) {
        while (pos < trimmed.size() && std::isspace(static_cast<unsigned char>(trimmed[pos]))) ++pos;
        if (pos >= trimmed.size()) break;
        if (!starts_with(trimmed, pos, "{{")) {
          only_templates = false;
          break;
        }
        size_t end = match_braces(trimmed, pos);
        if (end == std::string_view::npos) {
          only_templates = false;
          tree.warnings.push_back({ll.line_no, "unbalanced template braces"});
          break;
        }
        templates.push_back(parse_template_body(trimmed.substr(pos, end - pos), &tree.warnings, ll.line_no));
        pos = end;
      }
      if (only_templates && !templates.empty()) {
        for (auto& t : templates) builder.block(Node{std::move(t)});
        continue;
      }
    }

    InlineParser p(&tree.warnings, ll.line_no, nullptr);
    builder.block(Node{Paragraph{p.parse(line)}});
  }
  return tree;
}

PageTree parse_page(const RawPage& page) {
  return parse_wikitext(page.wikitext, page.title, page.language_code);
}

std::string strip_markup(std::span<const Inline> inlines) {
  std::string raw;
  for (const auto& in : inlines) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Text>) {
            raw += v.value;
          } else if constexpr (std::is_same_v<T, InternalLink> || std::is_same_v<T, ExternalLink>) {
            raw += v.anchor;
          }
        },
        in);
  }
  return text::collapse_whitespace(raw);
}

std::optional<std::string> template_value(const Template& tmpl,
                                          std::span<const std::string> keys) {
  for (const auto& key : keys) {
    if (const auto* p = tmpl.find(key)) {
      auto value = strip_markup(p->value);
      if (!value.empty()) return value;
    }
  }
  return std::nullopt;
}

}  // namespace quotekg
