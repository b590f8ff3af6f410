#include "quotekg/rdf.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "quotekg/errors.hpp"
#include "quotekg/text.hpp"

namespace quotekg::rdf {

void TripleGraph::add(Term s, Iri p, Term o) {
  triples_.insert(Triple{std::move(s), std::move(p), std::move(o)});
}

void TripleGraph::merge(const TripleGraph& other) {
  triples_.insert(other.triples_.begin(), other.triples_.end());
}

const std::vector<std::pair<std::string, std::string>>& prefixes() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"qkg", std::string(ns::kQkg)},   {"so", std::string(ns::kSo)},
      {"onyx", std::string(ns::kOnyx)}, {"skos", std::string(ns::kSkos)},
      {"owl", std::string(ns::kOwl)},   {"rdf", std::string(ns::kRdf)},
      {"rdfs", std::string(ns::kRdfs)}, {"xsd", std::string(ns::kXsd)},
      {"wd", std::string(ns::kWd)},     {"void", std::string(ns::kVoid)},
      {"dcterms", std::string(ns::kDcterms)},
  };
  return table;
}

Iri iri(std::string_view ns, std::string_view local) {
  return Iri{std::string(ns) + std::string(local)};
}

namespace vocab {
Iri type() { return iri(ns::kRdf, "type"); }
Iri same_as() { return iri(ns::kOwl, "sameAs"); }
Iri pref_label() { return iri(ns::kSkos, "prefLabel"); }
Iri person() { return iri(ns::kSo, "Person"); }
Iri quotation() { return iri(ns::kSo, "Quotation"); }
Iri mention() { return iri(ns::kQkg, "Mention"); }
Iri context() { return iri(ns::kQkg, "Context"); }
Iri spoken_by() { return iri(ns::kSo, "spokenByCharacter"); }
Iri date_created() { return iri(ns::kSo, "dateCreated"); }
Iri mentions() { return iri(ns::kSo, "mentions"); }
Iri text() { return iri(ns::kSo, "text"); }
Iri source() { return iri(ns::kSo, "source"); }
Iri additional_type() { return iri(ns::kSo, "additionalType"); }
Iri has_mention() { return iri(ns::kQkg, "hasMention"); }
Iri has_context() { return iri(ns::kQkg, "hasContext"); }
Iri context_text() { return iri(ns::kQkg, "contextText"); }
Iri origin_label() { return iri(ns::kQkg, "originLabel"); }
Iri is_misattributed() { return iri(ns::kQkg, "isMisattributed"); }
Iri has_emotion_set() { return iri(ns::kOnyx, "hasEmotionSet"); }
Iri has_emotion() { return iri(ns::kOnyx, "hasEmotion"); }
Iri has_emotion_category() { return iri(ns::kOnyx, "hasEmotionCategory"); }
Iri has_emotion_intensity() { return iri(ns::kOnyx, "hasEmotionIntensity"); }
Iri emotion_set() { return iri(ns::kOnyx, "EmotionSet"); }
Iri emotion() { return iri(ns::kOnyx, "Emotion"); }
Iri category(SentimentCategory c) { return iri(ns::kQkg, to_string(c)); }
}  // namespace vocab

std::string person_slug(std::string_view label) {
  std::string slug;
  bool pending = false;
  for (char32_t cp : text::decode_utf8(label)) {
    if (text::is_alnum(cp)) {
      if (pending && !slug.empty()) slug += '_';
      pending = false;
      text::append_utf8(slug, text::to_lower(cp));
    } else {
      pending = true;
    }
  }
  return slug.empty() ? "person" : slug;
}

std::string escape_iri(std::string_view iri) {
  static constexpr std::string_view kForbidden = "<>\"{}|^`\\";
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(iri.size());
  for (char ch : iri) {
    auto uc = static_cast<unsigned char>(ch);
    if (uc <= 0x20 || uc == 0x7F || kForbidden.find(ch) != std::string_view::npos) {
      out += '%';
      out += kHex[uc >> 4];
      out += kHex[uc & 0xF];
    } else {
      out += ch;
    }
  }
  return out;
}

IriPolicy::IriPolicy(std::string base_iri) : base_(std::move(base_iri)) {
  if (!base_.empty() && base_.back() != '/' && base_.back() != '#') base_ += '/';
  base_ = escape_iri(base_);
}

void IriPolicy::register_persons(std::span<const PersonRecord> persons) {
  for (const auto& p : persons) base_slugs_[p.key()] = person_slug(p.canonical_label);
  std::map<std::string, int> uses;
  for (const auto& [key, slug] : base_slugs_) ++uses[slug];
  slugs_.clear();
  for (const auto& [key, slug] : base_slugs_) {
    slugs_[key] = uses[slug] == 1 ? slug : slug + "_" + text::hex64(text::fnv1a64(key)).substr(0, 8);
  }
}

Iri IriPolicy::person(const PersonRecord& p) const {
  auto it = slugs_.find(p.key());
  const std::string slug = it != slugs_.end() ? it->second : person_slug(p.canonical_label);
  return Iri{base_ + "person/" + slug};
}

Iri IriPolicy::quote(std::string_view quote_id) const {
  return Iri{base_ + "quote/" + escape_iri(quote_id)};
}

Iri IriPolicy::mention(std::string_view mention_id) const {
  return Iri{base_ + "mention/" + escape_iri(mention_id)};
}

Iri IriPolicy::context(std::string_view mention_id, std::size_t index) const {
  return Iri{base_ + "context/" + escape_iri(mention_id) + "_" + std::to_string(index)};
}

Iri IriPolicy::emotion_set(char owner, std::string_view id) const {
  return Iri{base_ + "emotionset/" + owner + "_" + escape_iri(id)};
}

Iri IriPolicy::emotion(char owner, std::string_view id) const {
  return Iri{base_ + "emotion/" + owner + "_" + escape_iri(id)};
}

Iri IriPolicy::dataset() const { return Iri{base_ + "dataset"}; }

Iri IriPolicy::language_partition(std::string_view language_code) const {
  return Iri{base_ + "dataset/" + escape_iri(language_code)};
}

Literal date_literal(const PartialDate& d) {
  switch (d.precision()) {
    case DatePrecision::kYear:
      return {d.iso(), std::string(ns::kXsd) + "gYear", ""};
    case DatePrecision::kMonth:
      return {d.iso(), std::string(ns::kXsd) + "gYearMonth", ""};
    case DatePrecision::kDay:
      return {d.iso(), std::string(ns::kXsd) + "date", ""};
  }
  return {d.iso(), "", ""};
}

Literal decimal_literal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  if (s == "-0.0") s = "0.0";
  return {s, std::string(ns::kXsd) + "decimal", ""};
}

namespace {

Literal integer_literal(std::uint64_t v) {
  return {std::to_string(v), std::string(ns::kXsd) + "integer", ""};
}

Literal boolean_literal(bool v) {
  return {v ? "true" : "false", std::string(ns::kXsd) + "boolean", ""};
}

Literal plain(std::string s) { return {std::move(s), "", ""}; }

Literal text_literal(std::string s, std::string_view language) {
  if (text::is_language_tag(language)) return {std::move(s), "", text::to_lower(language)};
  return plain(std::move(s));
}

void emit_sentiment(TripleGraph& g, const Iri& owner_iri, char owner, std::string_view id,
                    const Sentiment& s, const IriPolicy& policy) {
  Iri set = policy.emotion_set(owner, id);
  Iri emotion = policy.emotion(owner, id);
  g.add(owner_iri, vocab::has_emotion_set(), set);
  g.add(set, vocab::type(), vocab::emotion_set());
  g.add(set, vocab::has_emotion(), emotion);
  g.add(emotion, vocab::type(), vocab::emotion());
  g.add(emotion, vocab::has_emotion_category(), vocab::category(s.category));
  g.add(emotion, vocab::has_emotion_intensity(), decimal_literal(std::clamp(s.score, 0.0, 1.0)));
}

}  // namespace

void emit_person(TripleGraph& g, const PersonRecord& p, const IriPolicy& policy) {
  Iri subject = policy.person(p);
  g.add(subject, vocab::type(), vocab::person());
  for (const auto& [lang, label] : p.labels) {
    g.add(subject, vocab::pref_label(), text_literal(label, lang));
  }
  if (p.labels.empty()) g.add(subject, vocab::pref_label(), plain(p.canonical_label));
  if (p.wikidata_iri) g.add(subject, vocab::same_as(), Iri{escape_iri(*p.wikidata_iri)});
  for (const auto& i : p.dbpedia_iris) g.add(subject, vocab::same_as(), Iri{escape_iri(i)});
  for (const auto& i : p.wikiquote_iris) g.add(subject, vocab::same_as(), Iri{escape_iri(i)});
  for (const auto& t : p.type_labels) g.add(subject, vocab::additional_type(), plain(t));
}

void emit_quote(TripleGraph& g, const QuoteCluster& cluster, const PersonRecord& person,
                const IriPolicy& policy) {
  Iri quote = policy.quote(cluster.quote_id);
  g.add(quote, vocab::type(), vocab::quotation());
  g.add(quote, vocab::spoken_by(), policy.person(person));
  if (cluster.aggregated_date) g.add(quote, vocab::date_created(), date_literal(*cluster.aggregated_date));
  g.add(quote, vocab::is_misattributed(), boolean_literal(cluster.misattributed));
  if (cluster.aggregated_sentiment) {
    emit_sentiment(g, quote, 'q', cluster.quote_id, *cluster.aggregated_sentiment, policy);
  }
  for (const auto& m : cluster.members) {
    for (const auto& link : m.entity_links) {
      if (link.resolved_iri) g.add(quote, vocab::mentions(), Iri{escape_iri(*link.resolved_iri)});
    }
    Iri mention = policy.mention(m.mention_id);
    g.add(quote, vocab::has_mention(), mention);
    g.add(mention, vocab::type(), vocab::mention());
    g.add(mention, vocab::text(), text_literal(m.text, m.language));
    if (m.sentiment) emit_sentiment(g, mention, 'm', m.mention_id, *m.sentiment, policy);
    for (size_t i = 0; i < m.contexts.size(); ++i) {
      const auto& c = m.contexts[i];
      Iri ctx = policy.context(m.mention_id, i);
      g.add(mention, vocab::has_context(), ctx);
      g.add(ctx, vocab::type(), vocab::context());
      if (c.context_text) g.add(ctx, vocab::context_text(), plain(*c.context_text));
      if (c.origin_label) g.add(ctx, vocab::origin_label(), plain(*c.origin_label));
      for (const auto& url : c.source_urls) g.add(ctx, vocab::source(), Iri{escape_iri(url)});
    }
  }
}

void emit_void(TripleGraph& g, const CorpusStats& stats, const IriPolicy& policy) {
  Iri dataset = policy.dataset();
  auto count = [&](const Iri& node, const LanguageStats& s) {
    g.add(node, iri(ns::kQkg, "personCount"), integer_literal(s.persons));
    g.add(node, iri(ns::kQkg, "quoteCount"), integer_literal(s.quotes));
    g.add(node, iri(ns::kQkg, "mentionCount"), integer_literal(s.mentions));
    g.add(node, iri(ns::kQkg, "contextMentionCount"), integer_literal(s.mentions_with_context));
  };
  g.add(dataset, vocab::type(), iri(ns::kVoid, "Dataset"));
  g.add(dataset, iri(ns::kDcterms, "license"), Iri{std::string(kLicenseIri)});
  g.add(dataset, iri(ns::kVoid, "uriSpace"), plain(policy.base()));
  g.add(dataset, iri(ns::kVoid, "triples"), integer_literal(stats.triples));
  g.add(dataset, iri(ns::kVoid, "entities"), integer_literal(stats.totals.quotes));
  for (auto v : {ns::kSo, ns::kQkg, ns::kOnyx, ns::kSkos}) {
    g.add(dataset, iri(ns::kVoid, "vocabulary"), Iri{std::string(v)});
  }
  g.add(dataset, iri(ns::kQkg, "misattributedQuoteCount"), integer_literal(stats.misattributed_quotes));
  g.add(dataset, iri(ns::kQkg, "multilingualQuoteCount"), integer_literal(stats.multilingual_quotes));
  count(dataset, stats.totals);
  for (const auto& [lang, s] : stats.per_language) {
    Iri part = policy.language_partition(lang);
    g.add(dataset, iri(ns::kVoid, "classPartition"), part);
    g.add(part, iri(ns::kVoid, "class"), vocab::mention());
    g.add(part, iri(ns::kVoid, "entities"), integer_literal(s.mentions));
    g.add(part, iri(ns::kDcterms, "language"), plain(lang));
    count(part, s);
  }
}

TripleGraph emit_aligned_person(const AlignedPerson& person, const IriPolicy& policy) {
  TripleGraph g;
  emit_person(g, person.person, policy);
  for (const auto& c : person.clusters) emit_quote(g, c, person.person, policy);
  return g;
}

namespace {

std::string escape_literal(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    auto uc = static_cast<unsigned char>(ch);
    switch (ch) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (uc < 0x20 || uc == 0x7F) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", uc);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

std::string term_nt(const Term& t) {
  if (const auto* i = std::get_if<Iri>(&t)) return "<" + i->value + ">";
  if (const auto* b = std::get_if<BlankNode>(&t)) return "_:" + b->id;
  const auto& l = std::get<Literal>(t);
  std::string out = "\"" + escape_literal(l.lexical) + "\"";
  if (!l.language.empty()) {
    out += "@" + l.language;
  } else if (!l.datatype.empty()) {
    out += "^^<" + l.datatype + ">";
  }
  return out;
}

bool is_pn_local(std::string_view s) {
  if (s.empty()) return false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || (i > 0 && c == '-');
    if (!ok) return false;
  }
  return true;
}

std::string iri_ttl(const std::string& value) {
  for (const auto& [prefix, ns] : prefixes()) {
    if (value.size() > ns.size() && value.compare(0, ns.size(), ns) == 0 &&
        is_pn_local(std::string_view(value).substr(ns.size()))) {
      return prefix + ":" + value.substr(ns.size());
    }
  }
  return "<" + value + ">";
}

std::string term_ttl(const Term& t) {
  if (const auto* i = std::get_if<Iri>(&t)) return iri_ttl(i->value);
  if (const auto* b = std::get_if<BlankNode>(&t)) return "_:" + b->id;
  const auto& l = std::get<Literal>(t);
  std::string out = "\"" + escape_literal(l.lexical) + "\"";
  if (!l.language.empty()) {
    out += "@" + l.language;
  } else if (!l.datatype.empty()) {
    out += "^^" + iri_ttl(l.datatype);
  }
  return out;
}

}  // namespace

std::string to_ntriples(const Triple& t) {
  return term_nt(t.subject) + " " + term_nt(t.predicate) + " " + term_nt(t.object) + " .";
}

void write_ntriples(const TripleGraph& g, std::ostream& out) {
  std::vector<std::string> lines;
  lines.reserve(g.size());
  for (const auto& t : g.triples()) lines.push_back(to_ntriples(t));
  std::sort(lines.begin(), lines.end());
  for (const auto& line : lines) out << line << '\n';
}

std::string to_ntriples(const TripleGraph& g) {
  std::ostringstream out;
  write_ntriples(g, out);
  return out.str();
}

void write_turtle(const TripleGraph& g, std::ostream& out) {
  for (const auto& [prefix, ns] : prefixes()) out << "@prefix " << prefix << ": <" << ns << "> .\n";

  // subject -> predicate -> objects, all keyed by their rendered form.
  std::map<std::string, std::map<std::string, std::set<std::string>>> grouped;
  const std::string type = vocab::type().value;
  for (const auto& t : g.triples()) {
    std::string predicate = t.predicate.value == type ? "a" : iri_ttl(t.predicate.value);
    grouped[term_ttl(t.subject)][predicate].insert(term_ttl(t.object));
  }
  for (const auto& [subject, predicates] : grouped) {
    out << '\n' << subject;
    bool first = true;
    auto write_predicate = [&](const std::string& p, const std::set<std::string>& objects) {
      out << (first ? " " : " ;\n    ") << p << ' ';
      first = false;
      bool first_object = true;
      for (const auto& o : objects) {
        out << (first_object ? "" : ", ") << o;
        first_object = false;
      }
    };
    if (auto it = predicates.find("a"); it != predicates.end()) write_predicate("a", it->second);
    for (const auto& [p, objects] : predicates) {
      if (p != "a") write_predicate(p, objects);
    }
    out << " .\n";
  }
}

std::string to_turtle(const TripleGraph& g) {
  std::ostringstream out;
  write_turtle(g, out);
  return out.str();
}

void write(const TripleGraph& g, Format format, std::ostream& out) {
  if (format == Format::kTurtle) {
    write_turtle(g, out);
  } else {
    write_ntriples(g, out);
  }
}

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, size_t line_no) : s_(line), line_no_(line_no) {}

  std::optional<Triple> parse() {
    skip_ws();
    if (at_end() || s_[pos_] == '#') return std::nullopt;
    Triple t;
    t.subject = subject();
    skip_ws();
    t.predicate = iriref();
    skip_ws();
    t.object = object();
    skip_ws();
    expect('.');
    skip_ws();
    if (!at_end() && s_[pos_] != '#') fail("trailing content");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw DataError("N-Triples line " + std::to_string(line_no_) + ": " + why);
  }
  bool at_end() const { return pos_ >= s_.size(); }
  void skip_ws() {
    while (!at_end() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  void expect(char c) {
    if (at_end() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Term subject() {
    if (!at_end() && s_[pos_] == '_') return blank();
    return iriref();
  }

  Term object() {
    if (at_end()) fail("missing object");
    if (s_[pos_] == '<') return iriref();
    if (s_[pos_] == '_') return blank();
    if (s_[pos_] == '"') return literal();
    fail("bad object");
  }

  Iri iriref() {
    expect('<');
    std::string out;
    while (!at_end() && s_[pos_] != '>') {
      if (s_[pos_] == '\\') {
        ++pos_;
        text::append_utf8(out, uchar());
      } else {
        char c = s_[pos_++];
        if (static_cast<unsigned char>(c) <= 0x20 || std::string_view("<\"{}|^`").find(c) != std::string_view::npos) {
          fail("illegal character in IRI");
        }
        out += c;
      }
    }
    expect('>');
    return Iri{std::move(out)};
  }

  BlankNode blank() {
    expect('_');
    expect(':');
    size_t start = pos_;
    while (!at_end() && s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != '.') ++pos_;
    if (pos_ == start) fail("empty blank node label");
    return BlankNode{std::string(s_.substr(start, pos_ - start))};
  }

  char32_t uchar() {
    if (at_end()) fail("dangling escape");
    char kind = s_[pos_++];
    size_t len = kind == 'u' ? 4 : kind == 'U' ? 8 : 0;
    if (len == 0 || pos_ + len > s_.size()) fail("bad \\u escape");
    char32_t cp = 0;
    for (size_t i = 0; i < len; ++i) {
      char c = s_[pos_++];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<char32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<char32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<char32_t>(c - 'A' + 10);
      else fail("bad hex digit");
    }
    return cp;
  }

  Literal literal() {
    expect('"');
    Literal l;
    while (true) {
      if (at_end()) fail("unterminated literal");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        l.lexical += c;
        continue;
      }
      if (at_end()) fail("dangling escape");
      char e = s_[pos_];
      switch (e) {
        case 't': l.lexical += '\t'; ++pos_; break;
        case 'b': l.lexical += '\b'; ++pos_; break;
        case 'n': l.lexical += '\n'; ++pos_; break;
        case 'r': l.lexical += '\r'; ++pos_; break;
        case 'f': l.lexical += '\f'; ++pos_; break;
        case '"': l.lexical += '"'; ++pos_; break;
        case '\'': l.lexical += '\''; ++pos_; break;
        case '\\': l.lexical += '\\'; ++pos_; break;
        default: text::append_utf8(l.lexical, uchar());
      }
    }
    if (!at_end() && s_[pos_] == '@') {
      ++pos_;
      size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) ++pos_;
      if (pos_ == start) fail("empty language tag");
      l.language = text::to_lower(s_.substr(start, pos_ - start));
    } else if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      l.datatype = iriref().value;
      if (l.datatype == std::string(ns::kXsd) + "string") l.datatype.clear();
    }
    return l;
  }

  std::string_view s_;
  size_t line_no_;
  size_t pos_ = 0;
};

}  // namespace

TripleGraph parse_ntriples(std::istream& in) {
  TripleGraph g;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto t = LineParser(line, line_no).parse()) g.add(std::move(*t));
  }
  return g;
}

TripleGraph parse_ntriples(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_ntriples(in);
}

}  // namespace quotekg::rdf
