#include "quotekg/extraction.hpp"

#include <algorithm>
#include <cctype>

#include "quotekg/text.hpp"

namespace quotekg {

namespace {

enum class Region { kNone, kQuotes, kMisattributed, kAbout, kContext };

bool harvests_list_items(Region r) { return r == Region::kQuotes || r == Region::kMisattributed; }
bool harvests_templates(Region r) { return r != Region::kAbout && r != Region::kContext; }

Region child_region(Region parent, SectionKind kind) {
  if (parent == Region::kAbout || kind == SectionKind::kAbout) return Region::kAbout;
  if (parent == Region::kMisattributed || kind == SectionKind::kMisattributed) {
    return Region::kMisattributed;
  }
  if (kind == SectionKind::kQuotes) return Region::kQuotes;
  if (kind == SectionKind::kContext) return Region::kContext;
  return parent;
}

const TemplateParam* primary_text_param(const Template& t) {
  if (const auto* p = t.find("1")) return p;
  return t.find(t.name);
}

class Extractor {
 public:
  Extractor(const PageTree& tree, const LanguageRuleSet& rules, ExtractionCounters& counters)
      : tree_(tree), rules_(rules), counters_(counters) {}

  std::vector<RawQuote> run() {
    walk(tree_.root, Region::kNone, Region::kNone);
    return std::move(quotes_);
  }

 private:
  void walk(const std::vector<Node>& nodes, Region region, Region parent_region) {
    for (size_t i = 0; i < nodes.size(); ++i) {
      const Node& node = nodes[i];
      if (const auto* sec = node.as<Section>()) {
        auto kind = classify_section(sec->title, rules_);
        path_.push_back(sec->title);
        walk(sec->children, child_region(region, kind), region);
        path_.pop_back();
      } else if (const auto* item = node.as<ListItem>()) {
        list_item(*item, region, parent_region);
      } else if (const auto* tmpl = node.as<Template>()) {
        if (!rules_.is_quote_template(tmpl->name) || !harvests_templates(region)) continue;
        std::vector<Node> context;
        size_t j = i + 1;
        for (; j < nodes.size(); ++j) {
          const auto* next = nodes[j].as<Template>();
          if (next == nullptr || rules_.is_quote_template(next->name)) break;
          context.push_back(nodes[j]);
        }
        template_quote(*tmpl, region, std::move(context));
        i = j - 1;
      }
    }
  }

  void list_item(const ListItem& item, Region region, Region parent_region) {
    if (region == Region::kAbout) {
      ++counters_.about_skipped;
      return;
    }
    if (region == Region::kContext) {
      if (harvests_list_items(parent_region) && !quotes_.empty()) {
        quotes_.back().context_nodes.push_back(Node{item});
        ++counters_.context_attached;
      }
      return;
    }

    std::vector<Node> context;
    std::vector<const Template*> quote_templates;
    for (const auto& child : item.children) {
      const auto* t = child.as<Template>();
      if (t != nullptr && rules_.is_quote_template(t->name)) {
        quote_templates.push_back(t);
      } else {
        context.push_back(child);
      }
    }

    for (const auto* t : quote_templates) template_quote(*t, region, context);

    std::string body = strip_markup(item.content);
    if (!harvests_list_items(region)) {
      if (!body.empty()) ++counters_.outside_sections;
      return;
    }
    if (body.empty()) {
      if (quote_templates.empty()) ++counters_.empty_skipped;
      return;
    }
    RawQuote q = base_quote(region);
    q.text = std::move(body);
    q.quote_inlines = item.content;
    q.context_nodes = std::move(context);
    quotes_.push_back(std::move(q));
  }

  void template_quote(const Template& t, Region region, std::vector<Node> context) {
    const auto* primary = primary_text_param(t);
    std::string body = primary ? strip_markup(primary->value) : std::string{};
    if (body.empty()) {
      ++counters_.empty_skipped;
      return;
    }
    RawQuote q = base_quote(region);
    q.text = std::move(body);
    q.quote_inlines = primary->value;
    q.original_text = template_value(t, rules_.original_text_keys);
    if (auto hint = template_value(t, rules_.original_language_keys)) {
      q.original_language_hint = text::to_lower(*hint);
    }
    q.template_params = t.params;
    q.context_nodes = std::move(context);
    quotes_.push_back(std::move(q));
  }

  RawQuote base_quote(Region region) const {
    RawQuote q;
    q.person_title = tree_.page_title;
    q.language_edition = tree_.language_code;
    q.section_path = path_;
    q.misattributed = region == Region::kMisattributed;
    return q;
  }

  const PageTree& tree_;
  const LanguageRuleSet& rules_;
  ExtractionCounters& counters_;
  std::vector<std::string> path_;
  std::vector<RawQuote> quotes_;
};

}  // namespace

std::vector<RawQuote> extract_quotes(const PageTree& tree, const LanguageRuleSet& rules,
                                     ExtractionCounters* counters) {
  ExtractionCounters local;
  Extractor extractor(tree, rules, counters ? *counters : local);
  return extractor.run();
}

}  // namespace quotekg
