#include "quotekg/enrichment.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <unordered_map>

#include "quotekg/errors.hpp"
#include "quotekg/text.hpp"

namespace quotekg {

std::string_view to_string(NlpProvenance p) {
  switch (p) {
    case NlpProvenance::kBackend: return "backend";
    case NlpProvenance::kOffline: return "offline";
    case NlpProvenance::kDegraded: return "degraded";
  }
  return "offline";
}

std::optional<NlpProvenance> nlp_provenance_from(std::string_view s) {
  if (s == "backend") return NlpProvenance::kBackend;
  if (s == "offline") return NlpProvenance::kOffline;
  if (s == "degraded") return NlpProvenance::kDegraded;
  return std::nullopt;
}

std::string PersonRecord::key() const {
  if (wikidata_iri) return *wikidata_iri;
  if (labels.empty()) return canonical_label;
  return labels.begin()->first + ":" + labels.begin()->second;
}

namespace {

void merge_sorted(std::vector<std::string>& into, const std::vector<std::string>& other) {
  std::set<std::string> all(into.begin(), into.end());
  all.insert(other.begin(), other.end());
  into.assign(all.begin(), all.end());
}

}  // namespace

void merge_person(PersonRecord& into, const PersonRecord& other) {
  for (const auto& [lang, label] : other.labels) into.labels.emplace(lang, label);
  if (!into.wikidata_iri) into.wikidata_iri = other.wikidata_iri;
  merge_sorted(into.dbpedia_iris, other.dbpedia_iris);
  merge_sorted(into.wikiquote_iris, other.wikiquote_iris);
  merge_sorted(into.type_labels, other.type_labels);
  if (auto en = into.labels.find("en"); en != into.labels.end()) {
    into.canonical_label = en->second;
  } else if (!into.labels.empty()) {
    into.canonical_label = into.labels.begin()->second;
  }
}

EnrichmentCounters& EnrichmentCounters::operator+=(const EnrichmentCounters& o) {
  mentions += o.mentions;
  original_mentions += o.original_mentions;
  invalid_urls_skipped += o.invalid_urls_skipped;
  dated_mentions += o.dated_mentions;
  degraded_batches += o.degraded_batches;
  return *this;
}

std::optional<PartialDate> extract_date(
    const std::optional<std::vector<TemplateParam>>& template_params,
    std::span<const std::string> section_path, std::span<const std::string> context_texts,
    const LanguageRuleSet& rules) {
  std::vector<PartialDate> candidates;
  if (template_params) {
    Template holder{"", *template_params};
    for (const auto& key : rules.date_template_keys) {
      const auto* p = holder.find(key);
      if (p == nullptr) continue;
      auto found = find_dates(strip_markup(p->value), rules.language_code);
      candidates.insert(candidates.end(), found.begin(), found.end());
    }
    if (!candidates.empty()) return resolve_dates(candidates);
  }
  for (const auto& title : section_path) {
    auto found = find_dates(title, rules.language_code);
    candidates.insert(candidates.end(), found.begin(), found.end());
  }
  for (const auto& context : context_texts) {
    auto found = find_dates(context, rules.language_code);
    candidates.insert(candidates.end(), found.begin(), found.end());
  }
  return resolve_dates(candidates);
}

bool is_absolute_url(std::string_view url) {
  static const std::regex kUrl(R"(^(https?|ftps?)://[^\s/?#:@]+(:[0-9]+)?([/?#]\S*)?$)",
                               std::regex::icase);
  return std::regex_match(url.begin(), url.end(), kUrl);
}

namespace {

// Raw URL scan, for links inside citation templates in <ref> bodies.
std::vector<std::string> scan_raw_urls(std::string_view raw) {
  static const std::regex kUrl(R"((https?|ftps?)://[^\s|\]\[}{<>"]+)", std::regex::icase);
  std::vector<std::string> out;
  for (std::cregex_iterator it(raw.begin(), raw.end(), kUrl), end; it != end; ++it) {
    std::string url = it->str();
    while (!url.empty() && std::string_view(".,;:!?)'").find(url.back()) != std::string_view::npos) {
      url.pop_back();
    }
    out.push_back(std::move(url));
  }
  return out;
}

class SourceCollector {
 public:
  explicit SourceCollector(std::set<std::string>* seen) : seen_(seen) {}

  void url(std::string_view candidate) {
    std::string u(text::trim(candidate));
    if (!is_absolute_url(u)) {
      ++skipped;
      return;
    }
    if (seen_->insert(u).second) urls.push_back(std::move(u));
  }

  void inlines(std::span<const Inline> content) {
    for (const auto& in : content) {
      if (const auto* link = std::get_if<ExternalLink>(&in)) {
        url(link->url);
      } else if (const auto* ref = std::get_if<Reference>(&in)) {
        inlines(parse_inline(ref->content));
        for (const auto& u : scan_raw_urls(ref->content)) url(u);
      }
    }
  }

  // Values of source keys that look like a lone URL-ish token count as URLs;
  // anything else is descriptive text handled by the caller.
  void params(const std::vector<TemplateParam>& params, const LanguageRuleSet& rules) {
    for (const auto& p : params) {
      inlines(p.value);
      if (!is_source_key(p.key, rules)) continue;
      bool has_link = std::any_of(p.value.begin(), p.value.end(), [](const Inline& in) {
        return std::holds_alternative<ExternalLink>(in);
      });
      auto value = strip_markup(p.value);
      if (!has_link && looks_like_url(value)) url(value);
    }
  }

  static bool is_source_key(std::string_view key, const LanguageRuleSet& rules) {
    return std::any_of(rules.source_template_keys.begin(), rules.source_template_keys.end(),
                       [&](const std::string& k) { return text::iequals(text::trim(k), key); });
  }

  static bool looks_like_url(std::string_view value) {
    if (value.empty() || value.find(' ') != std::string_view::npos) return false;
    return value.find("://") != std::string_view::npos || value.starts_with("www.") ||
           value.starts_with("/");
  }

  std::vector<std::string> urls;
  std::uint64_t skipped = 0;

 private:
  std::set<std::string>* seen_;
};

void collect_node(SourceCollector& c, const Node& node) {
  if (const auto* item = node.as<ListItem>()) {
    c.inlines(item->content);
    for (const auto& child : item->children) collect_node(c, child);
  } else if (const auto* para = node.as<Paragraph>()) {
    c.inlines(para->content);
  } else if (const auto* tmpl = node.as<Template>()) {
    for (const auto& p : tmpl->params) c.inlines(p.value);
  }
}

// Plain text of inline content with external links and references removed.
std::string without_urls(std::span<const Inline> content) {
  InlineList kept;
  for (const auto& in : content) {
    if (!std::holds_alternative<ExternalLink>(in)) kept.push_back(in);
  }
  return strip_markup(kept);
}

std::optional<std::string> non_empty(std::string s) {
  if (s.empty()) return std::nullopt;
  return s;
}

class ContextBuilder {
 public:
  ContextBuilder(const LanguageRuleSet& rules) : rules_(rules), collector_(&seen_) {}

  void node(const Node& n) {
    if (const auto* item = n.as<ListItem>()) {
      add(item->content);
      for (const auto& child : item->children) node(child);
    } else if (const auto* para = n.as<Paragraph>()) {
      add(para->content);
    } else if (const auto* tmpl = n.as<Template>()) {
      InlineList joined;
      for (const auto& p : tmpl->params) {
        if (!joined.empty()) joined.push_back(Text{" ", false, false});
        joined.insert(joined.end(), p.value.begin(), p.value.end());
      }
      size_t before = collector_.urls.size();
      for (const auto& p : tmpl->params) collector_.inlines(p.value);
      push(joined, before);
    }
  }

  void template_sources(const std::vector<TemplateParam>& params) {
    size_t before = collector_.urls.size();
    collector_.params(params, rules_);
    InlineList described;
    for (const auto& p : params) {
      if (!SourceCollector::is_source_key(p.key, rules_)) continue;
      if (!described.empty()) described.push_back(Text{" ", false, false});
      described.insert(described.end(), p.value.begin(), p.value.end());
    }
    push(described, before);
  }

  std::vector<ContextRecord> records;
  std::uint64_t skipped() const { return collector_.skipped; }

 private:
  void add(const InlineList& content) {
    size_t before = collector_.urls.size();
    collector_.inlines(content);
    push(content, before);
  }

  void push(const InlineList& content, size_t first_new_url) {
    ContextRecord r;
    r.context_text = non_empty(strip_markup(content));
    r.origin_label = non_empty(without_urls(content));
    r.source_urls.assign(collector_.urls.begin() + static_cast<std::ptrdiff_t>(first_new_url),
                         collector_.urls.end());
    if (r.context_text || r.origin_label || !r.source_urls.empty()) {
      records.push_back(std::move(r));
    }
  }

  const LanguageRuleSet& rules_;
  std::set<std::string> seen_;
  SourceCollector collector_;
};

}  // namespace

SourceList extract_sources(std::span<const Node> context_nodes,
                           const std::optional<std::vector<TemplateParam>>& template_params,
                           const LanguageRuleSet& rules) {
  std::set<std::string> seen;
  SourceCollector c(&seen);
  for (const auto& n : context_nodes) collect_node(c, n);
  if (template_params) c.params(*template_params, rules);
  return {std::move(c.urls), c.skipped};
}

std::vector<ContextRecord> build_contexts(
    std::span<const Node> context_nodes,
    const std::optional<std::vector<TemplateParam>>& template_params,
    const LanguageRuleSet& rules, std::uint64_t* invalid_urls) {
  ContextBuilder b(rules);
  for (const auto& n : context_nodes) b.node(n);
  if (template_params) b.template_sources(*template_params);
  if (invalid_urls != nullptr) *invalid_urls += b.skipped();
  return std::move(b.records);
}

namespace {

constexpr std::string_view kSkippedNamespaces[] = {
    "file", "image", "media", "category", "datei", "bild", "kategorie", "fichier", "catégorie",
    "categoria", "imagen", "immagine", "kategorija", "slika", "talk", "template", "help",
    "wikiquote", "portal", "special"};

// Interwiki prefixes pointing at the same person namespace on sister projects.
constexpr std::string_view kPassThroughPrefixes[] = {"w", "wikipedia", "wikt"};

std::optional<std::string> link_title(std::string_view target) {
  std::string t(text::trim(target));
  if (!t.empty() && t.front() == ':') t.erase(0, 1);
  if (auto hash = t.find('#'); hash != std::string::npos) t.resize(hash);
  if (auto colon = t.find(':'); colon != std::string::npos) {
    auto prefix = text::to_lower(text::trim(std::string_view(t).substr(0, colon)));
    if (std::find(std::begin(kSkippedNamespaces), std::end(kSkippedNamespaces), prefix) !=
        std::end(kSkippedNamespaces)) {
      return std::nullopt;
    }
    if (std::find(std::begin(kPassThroughPrefixes), std::end(kPassThroughPrefixes), prefix) !=
        std::end(kPassThroughPrefixes)) {
      t = std::string(text::trim(std::string_view(t).substr(colon + 1)));
    }
  }
  t = normalize_title(t);
  if (t.empty()) return std::nullopt;
  return t;
}

}  // namespace

std::vector<EntityLink> extract_entity_links(std::span<const Inline> inlines,
                                             std::string_view language_code,
                                             const SitelinkIndex& sitelinks) {
  std::vector<EntityLink> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& in : inlines) {
    const auto* link = std::get_if<InternalLink>(&in);
    if (link == nullptr) continue;
    auto title = link_title(link->target);
    std::string surface = text::collapse_whitespace(link->anchor);
    if (!title || surface.empty()) continue;
    if (!seen.emplace(surface, *title).second) continue;
    EntityLink e{surface, *title, std::nullopt};
    if (const auto* rec = sitelinks.lookup(language_code, *title);
        rec != nullptr && !rec->wikidata_iri.empty()) {
      e.resolved_iri = rec->wikidata_iri;
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string wikiquote_iri(std::string_view language_code, std::string_view title) {
  static constexpr std::string_view kEscaped = " \"<>\\^`{|}%";
  std::string out = "https://" + std::string(language_code) + ".wikiquote.org/wiki/";
  for (char ch : normalize_title(title)) {
    auto uc = static_cast<unsigned char>(ch);
    if (ch == ' ') {
      out += '_';
    } else if (uc < 0x20 || uc == 0x7F || kEscaped.find(ch) != std::string_view::npos) {
      static constexpr char kHex[] = "0123456789ABCDEF";
      out += '%';
      out += kHex[uc >> 4];
      out += kHex[uc & 0xF];
    } else {
      out += ch;
    }
  }
  return out;
}

PersonRecord resolve_identity(std::string_view person_title, std::string_view language_edition,
                              const SitelinkIndex& sitelinks) {
  PersonRecord p;
  p.canonical_label = normalize_title(person_title);
  p.labels.emplace(std::string(language_edition), p.canonical_label);
  if (const auto* rec = sitelinks.lookup(language_edition, person_title)) {
    if (!rec->wikidata_iri.empty()) p.wikidata_iri = rec->wikidata_iri;
    p.dbpedia_iris = rec->dbpedia_iris;
    std::sort(p.dbpedia_iris.begin(), p.dbpedia_iris.end());
    p.type_labels = rec->type_labels;
    std::sort(p.type_labels.begin(), p.type_labels.end());
    p.wikiquote_iris.push_back(wikiquote_iri(language_edition, person_title));
  }
  return p;
}

namespace {

struct PendingMention {
  const RawQuote* raw;
  bool is_original;
  std::string text;
};

std::string mention_id(std::string_view edition, std::string_view title, bool is_original,
                       std::string_view text, int occurrence) {
  std::string key;
  key.append(edition).append("\x1f").append(title).append("\x1f");
  key.append(is_original ? "original" : "text").append("\x1f").append(text);
  if (occurrence > 0) key.append("\x1f").append(std::to_string(occurrence));
  return text::hex64(text::fnv1a64(key));
}

std::string fallback_language(const PendingMention& m) {
  if (m.is_original && m.raw->original_language_hint &&
      text::is_language_tag(*m.raw->original_language_hint)) {
    return *m.raw->original_language_hint;
  }
  return m.raw->language_edition;
}

}  // namespace

EnrichedPage enrich_page(std::string_view person_title, std::string_view language_edition,
                         std::span<const RawQuote> quotes, const LanguageRuleSet& rules,
                         const SitelinkIndex& sitelinks, NlpBackend& nlp,
                         EnrichmentCounters* counters) {
  EnrichmentCounters local;
  EnrichmentCounters& count = counters ? *counters : local;

  EnrichedPage page;
  page.person = resolve_identity(person_title, language_edition, sitelinks);
  const std::string person_key = page.person.key();

  std::vector<PendingMention> pending;
  for (const auto& raw : quotes) {
    if (raw.text.empty()) continue;
    pending.push_back({&raw, false, raw.text});
    if (raw.original_text && !raw.original_text->empty()) {
      pending.push_back({&raw, true, *raw.original_text});
    }
  }
  std::vector<std::string> texts;
  texts.reserve(pending.size());
  for (const auto& m : pending) texts.push_back(m.text);

  NlpProvenance provenance = nlp.offline() ? NlpProvenance::kOffline : NlpProvenance::kBackend;
  std::vector<LanguageGuess> languages;
  std::vector<std::optional<Sentiment>> sentiments;
  if (!texts.empty()) {
    try {
      languages = nlp.detect_languages(texts);
      sentiments = nlp.classify_sentiment(texts);
      if (languages.size() != texts.size() || sentiments.size() != texts.size()) {
        throw BackendError("NLP backend returned a result count different from the request");
      }
    } catch (const BackendError&) {
      OfflineNlpBackend offline;
      languages = offline.detect_languages(texts);
      sentiments = offline.classify_sentiment(texts);
      provenance = NlpProvenance::kDegraded;
      ++count.degraded_batches;
    }
  }

  // Contexts and dates are shared by both mentions of one raw quote.
  struct Shared {
    std::vector<ContextRecord> contexts;
    std::optional<PartialDate> date;
  };
  std::unordered_map<const RawQuote*, Shared> shared;
  std::map<std::string, int> occurrences;

  for (size_t i = 0; i < pending.size(); ++i) {
    const auto& m = pending[i];
    auto [it, fresh] = shared.try_emplace(m.raw);
    if (fresh) {
      it->second.contexts = build_contexts(m.raw->context_nodes, m.raw->template_params, rules,
                                           &count.invalid_urls_skipped);
      std::vector<std::string> context_texts;
      for (const auto& c : it->second.contexts) {
        if (c.context_text) context_texts.push_back(*c.context_text);
      }
      it->second.date =
          extract_date(m.raw->template_params, m.raw->section_path, context_texts, rules);
    }

    QuoteMention q;
    std::string id_seed = std::string(m.is_original ? "o" : "t") + "\x1f" + m.text;
    q.mention_id = mention_id(language_edition, person_title, m.is_original, m.text,
                              occurrences[id_seed]++);
    q.person_key = person_key;
    q.text = m.text;
    q.language = text::is_language_tag(languages[i].language_code)
                     ? text::to_lower(languages[i].language_code)
                     : fallback_language(m);
    q.contexts = it->second.contexts;
    q.date = it->second.date;
    q.misattributed = m.raw->misattributed;
    q.sentiment = sentiments[i];
    if (q.sentiment) q.sentiment->score = std::clamp(q.sentiment->score, 0.0, 1.0);
    if (m.is_original) {
      if (m.raw->template_params) {
        Template holder{"", *m.raw->template_params};
        for (const auto& key : rules.original_text_keys) {
          if (const auto* p = holder.find(key)) {
            q.entity_links = extract_entity_links(p->value, language_edition, sitelinks);
            break;
          }
        }
      }
    } else {
      q.entity_links = extract_entity_links(m.raw->quote_inlines, language_edition, sitelinks);
    }
    q.provenance = provenance;
    q.edition = std::string(language_edition);
    q.is_original = m.is_original;

    ++count.mentions;
    if (q.is_original) ++count.original_mentions;
    if (q.date) ++count.dated_mentions;
    page.mentions.push_back(std::move(q));
  }
  return page;
}

std::vector<QuoteMention> enrich(const RawQuote& raw, const LanguageRuleSet& rules,
                                 const SitelinkIndex& sitelinks, NlpBackend& nlp) {
  return enrich_page(raw.person_title, raw.language_edition, std::span(&raw, 1), rules, sitelinks,
                     nlp)
      .mentions;
}

}  // namespace quotekg
