#include "quotekg/json_io.hpp"

#include "quotekg/errors.hpp"

namespace quotekg {

namespace {

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) {
    v = it->get<T>();
  } else {
    v.reset();
  }
}

template <typename T>
void get_or(const json& j, const char* key, T& v) {
  if (auto it = j.find(key); it != j.end()) v = it->get<T>();
}

}  // namespace

void to_json(json& j, const PartialDate& d) { j = d.iso(); }

void from_json(const json& j, PartialDate& d) {
  auto parsed = PartialDate::from_iso(j.get<std::string>());
  if (!parsed) throw DataError("invalid date " + j.dump());
  d = *parsed;
}

void to_json(json& j, const Sentiment& s) {
  j = {{"category", to_string(s.category)}, {"score", s.score}};
}

void from_json(const json& j, Sentiment& s) {
  auto category = sentiment_category_from(j.at("category").get<std::string>());
  if (!category) throw DataError("invalid sentiment category " + j.at("category").dump());
  s.category = *category;
  s.score = j.at("score").get<double>();
}

void to_json(json& j, const Inline& in) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Text>) {
          j = {{"text", v.value}};
          if (v.bold) j["bold"] = true;
          if (v.italic) j["italic"] = true;
        } else if constexpr (std::is_same_v<T, InternalLink>) {
          j = {{"link", v.target}, {"anchor", v.anchor}};
        } else if constexpr (std::is_same_v<T, ExternalLink>) {
          j = {{"url", v.url}, {"anchor", v.anchor}};
        } else {
          j = {{"ref", v.content}};
        }
      },
      in);
}

void from_json(const json& j, Inline& in) {
  if (j.contains("text")) {
    in = Text{j.at("text").get<std::string>(), j.value("bold", false), j.value("italic", false)};
  } else if (j.contains("link")) {
    in = InternalLink{j.at("link").get<std::string>(), j.at("anchor").get<std::string>()};
  } else if (j.contains("url")) {
    in = ExternalLink{j.at("url").get<std::string>(), j.at("anchor").get<std::string>()};
  } else if (j.contains("ref")) {
    in = Reference{j.at("ref").get<std::string>()};
  } else {
    throw DataError("unknown inline record " + j.dump());
  }
}

void to_json(json& j, const TemplateParam& p) { j = {{"key", p.key}, {"value", p.value}}; }

void from_json(const json& j, TemplateParam& p) {
  p.key = j.at("key").get<std::string>();
  p.value = j.at("value").get<InlineList>();
}

void to_json(json& j, const Node& n) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Section>) {
          j = {{"section", {{"title", v.title}, {"level", v.level}, {"children", v.children}}}};
        } else if constexpr (std::is_same_v<T, ListItem>) {
          j = {{"item", {{"depth", v.depth}, {"content", v.content}, {"children", v.children}}}};
        } else if constexpr (std::is_same_v<T, Template>) {
          j = {{"template", {{"name", v.name}, {"params", v.params}}}};
        } else {
          j = {{"paragraph", {{"content", v.content}}}};
        }
      },
      n.value);
}

void from_json(const json& j, Node& n) {
  if (auto it = j.find("section"); it != j.end()) {
    n.value = Section{it->at("title").get<std::string>(), it->at("level").get<int>(),
                      it->at("children").get<std::vector<Node>>()};
  } else if (auto it = j.find("item"); it != j.end()) {
    n.value = ListItem{it->at("depth").get<int>(), it->at("content").get<InlineList>(),
                       it->at("children").get<std::vector<Node>>()};
  } else if (auto it = j.find("template"); it != j.end()) {
    n.value = Template{it->at("name").get<std::string>(),
                       it->at("params").get<std::vector<TemplateParam>>()};
  } else if (auto it = j.find("paragraph"); it != j.end()) {
    n.value = Paragraph{it->at("content").get<InlineList>()};
  } else {
    throw DataError("unknown node record " + j.dump());
  }
}

void to_json(json& j, const PageTree& t) {
  j = {{"page_title", t.page_title}, {"language_code", t.language_code}, {"root", t.root}};
  json warnings = json::array();
  for (const auto& w : t.warnings) warnings.push_back({{"line", w.line}, {"message", w.message}});
  j["warnings"] = std::move(warnings);
}

void to_json(json& j, const RawQuote& q) {
  j = {{"person_title", q.person_title},
       {"language_edition", q.language_edition},
       {"text", q.text},
       {"section_path", q.section_path},
       {"misattributed", q.misattributed},
       {"context_nodes", q.context_nodes},
       {"quote_inlines", q.quote_inlines}};
  put_optional(j, "original_text", q.original_text);
  put_optional(j, "original_language_hint", q.original_language_hint);
  put_optional(j, "template_params", q.template_params);
}

void from_json(const json& j, RawQuote& q) {
  q.person_title = j.at("person_title").get<std::string>();
  q.language_edition = j.at("language_edition").get<std::string>();
  q.text = j.at("text").get<std::string>();
  q.section_path = j.at("section_path").get<std::vector<std::string>>();
  q.misattributed = j.at("misattributed").get<bool>();
  q.context_nodes = j.at("context_nodes").get<std::vector<Node>>();
  q.quote_inlines = j.at("quote_inlines").get<InlineList>();
  get_optional(j, "original_text", q.original_text);
  get_optional(j, "original_language_hint", q.original_language_hint);
  get_optional(j, "template_params", q.template_params);
}

void to_json(json& j, const ContextRecord& c) {
  j = {{"source_urls", c.source_urls}};
  put_optional(j, "context_text", c.context_text);
  put_optional(j, "origin_label", c.origin_label);
}

void from_json(const json& j, ContextRecord& c) {
  c.source_urls = j.at("source_urls").get<std::vector<std::string>>();
  get_optional(j, "context_text", c.context_text);
  get_optional(j, "origin_label", c.origin_label);
}

void to_json(json& j, const PersonRecord& p) {
  j = {{"canonical_label", p.canonical_label},
       {"labels", p.labels},
       {"dbpedia_iris", p.dbpedia_iris},
       {"wikiquote_iris", p.wikiquote_iris},
       {"type_labels", p.type_labels}};
  put_optional(j, "wikidata_iri", p.wikidata_iri);
}

void from_json(const json& j, PersonRecord& p) {
  p.canonical_label = j.at("canonical_label").get<std::string>();
  p.labels = j.at("labels").get<std::map<std::string, std::string>>();
  get_or(j, "dbpedia_iris", p.dbpedia_iris);
  get_or(j, "wikiquote_iris", p.wikiquote_iris);
  get_or(j, "type_labels", p.type_labels);
  get_optional(j, "wikidata_iri", p.wikidata_iri);
}

void to_json(json& j, const EntityLink& e) {
  j = {{"surface", e.surface}, {"target_title", e.target_title}};
  put_optional(j, "resolved_iri", e.resolved_iri);
}

void from_json(const json& j, EntityLink& e) {
  e.surface = j.at("surface").get<std::string>();
  e.target_title = j.at("target_title").get<std::string>();
  get_optional(j, "resolved_iri", e.resolved_iri);
}

void to_json(json& j, const QuoteMention& m) {
  j = {{"mention_id", m.mention_id},
       {"person_key", m.person_key},
       {"text", m.text},
       {"language", m.language},
       {"contexts", m.contexts},
       {"misattributed", m.misattributed},
       {"entity_links", m.entity_links},
       {"provenance", to_string(m.provenance)},
       {"edition", m.edition},
       {"is_original", m.is_original}};
  put_optional(j, "date", m.date);
  put_optional(j, "sentiment", m.sentiment);
}

void from_json(const json& j, QuoteMention& m) {
  m.mention_id = j.at("mention_id").get<std::string>();
  m.person_key = j.at("person_key").get<std::string>();
  m.text = j.at("text").get<std::string>();
  m.language = j.at("language").get<std::string>();
  m.contexts = j.at("contexts").get<std::vector<ContextRecord>>();
  m.misattributed = j.at("misattributed").get<bool>();
  m.entity_links = j.at("entity_links").get<std::vector<EntityLink>>();
  auto provenance = nlp_provenance_from(j.at("provenance").get<std::string>());
  if (!provenance) throw DataError("invalid provenance " + j.at("provenance").dump());
  m.provenance = *provenance;
  m.edition = j.at("edition").get<std::string>();
  m.is_original = j.at("is_original").get<bool>();
  get_optional(j, "date", m.date);
  get_optional(j, "sentiment", m.sentiment);
}

void to_json(json& j, const QuoteCluster& c) {
  j = {{"quote_id", c.quote_id},
       {"person_key", c.person_key},
       {"members", c.members},
       {"misattributed", c.misattributed}};
  put_optional(j, "aggregated_sentiment", c.aggregated_sentiment);
  put_optional(j, "aggregated_date", c.aggregated_date);
}

void from_json(const json& j, QuoteCluster& c) {
  c.quote_id = j.at("quote_id").get<std::string>();
  c.person_key = j.at("person_key").get<std::string>();
  c.members = j.at("members").get<std::vector<QuoteMention>>();
  c.misattributed = j.at("misattributed").get<bool>();
  get_optional(j, "aggregated_sentiment", c.aggregated_sentiment);
  get_optional(j, "aggregated_date", c.aggregated_date);
}

void to_json(json& j, const AlignedPerson& p) {
  j = {{"person", p.person},
       {"clusters", p.clusters},
       {"model_tag", p.model_tag},
       {"degraded", p.degraded}};
}

void from_json(const json& j, AlignedPerson& p) {
  p.person = j.at("person").get<PersonRecord>();
  p.clusters = j.at("clusters").get<std::vector<QuoteCluster>>();
  p.model_tag = j.value("model_tag", "");
  p.degraded = j.value("degraded", false);
}

void to_json(json& j, const LanguageStats& s) {
  j = {{"persons", s.persons},
       {"quotes", s.quotes},
       {"mentions", s.mentions},
       {"mentions_with_context", s.mentions_with_context}};
}

void to_json(json& j, const CorpusStats& s) {
  j = {{"per_language", s.per_language},
       {"totals", s.totals},
       {"misattributed_quotes", s.misattributed_quotes},
       {"multilingual_quotes", s.multilingual_quotes},
       {"triples", s.triples}};
}

namespace {

json header(std::string_view kind) {
  return {{"format", "quotekg-intermediate"}, {"kind", kind}, {"version", kIntermediateVersion}};
}

}  // namespace

NdjsonWriter::NdjsonWriter(const std::filesystem::path& path, std::string_view kind)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot write " + path.string());
  write(header(kind));
}

void NdjsonWriter::write(const json& record) {
  out_ << record.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  if (!out_) throw IoError("write failed on " + path_.string());
}

void NdjsonWriter::close() {
  out_.close();
  if (out_.fail()) throw IoError("cannot finish " + path_.string());
}

NdjsonReader::NdjsonReader(const std::filesystem::path& path, std::string_view kind,
                           std::string_view producing_stage)
    : path_(path) {
  if (!std::filesystem::exists(path)) {
    throw DataError("missing " + path.string() + "; run the '" + std::string(producing_stage) +
                    "' stage first");
  }
  in_.open(path, std::ios::binary);
  if (!in_) throw IoError("cannot read " + path.string());
  std::string line;
  json head;
  try {
    if (!std::getline(in_, line)) throw DataError("empty");
    head = json::parse(line);
  } catch (const std::exception&) {
    throw DataError(path.string() + ": missing intermediate header");
  }
  if (head.value("format", "") != "quotekg-intermediate" || head.value("kind", "") != kind) {
    throw DataError(path.string() + ": expected a '" + std::string(kind) + "' intermediate");
  }
  if (head.value("version", 0) != kIntermediateVersion) {
    throw DataError(path.string() + ": unsupported intermediate version " +
                    head.value("version", json(0)).dump());
  }
}

std::optional<json> NdjsonReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (line.empty()) continue;
    try {
      return json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(path_.string() + ":" + std::to_string(line_no_) + ": " + e.what());
    }
  }
  return std::nullopt;
}

bool has_intermediate_header(const std::filesystem::path& path, std::string_view kind) {
  std::ifstream in(path, std::ios::binary);
  std::string line;
  if (!in || !std::getline(in, line)) return false;
  try {
    auto head = json::parse(line);
    return head.is_object() && head.value("format", "") == "quotekg-intermediate" &&
           head.value("kind", "") == kind;
  } catch (const json::exception&) {
    return false;
  }
}

}  // namespace quotekg
