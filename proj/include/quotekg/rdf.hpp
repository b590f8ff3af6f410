#pragma once

#include <compare>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "quotekg/alignment.hpp"
#include "quotekg/corpus_stats.hpp"
#include "quotekg/enrichment.hpp"

namespace quotekg::rdf {

struct Iri {
  std::string value;
  auto operator<=>(const Iri&) const = default;
};

struct BlankNode {
  std::string id;
  auto operator<=>(const BlankNode&) const = default;
};

/// Datatype empty means xsd:string, unless `language` is set.
struct Literal {
  std::string lexical;
  std::string datatype;
  std::string language;
  auto operator<=>(const Literal&) const = default;
};

using Term = std::variant<Iri, BlankNode, Literal>;

struct Triple {
  Term subject;
  Iri predicate;
  Term object;
  auto operator<=>(const Triple&) const = default;
};

/// A set of triples; duplicates collapse.
class TripleGraph {
 public:
  void add(Term s, Iri p, Term o);
  void add(Triple t) { triples_.insert(std::move(t)); }
  void merge(const TripleGraph& other);

  const std::set<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

 private:
  std::set<Triple> triples_;
};

namespace ns {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kSkos = "http://www.w3.org/2004/02/skos/core#";
inline constexpr std::string_view kSo = "https://schema.org/";
inline constexpr std::string_view kQkg = "https://quotekg.example.org/schema/";
inline constexpr std::string_view kOnyx = "http://www.gsi.dit.upm.es/ontologies/onyx/ns#";
inline constexpr std::string_view kWd = "https://www.wikidata.org/entity/";
inline constexpr std::string_view kVoid = "http://rdfs.org/ns/void#";
inline constexpr std::string_view kDcterms = "http://purl.org/dc/terms/";
}  // namespace ns

/// Turtle prefix table, in output order.
const std::vector<std::pair<std::string, std::string>>& prefixes();

Iri iri(std::string_view ns, std::string_view local);

namespace vocab {
Iri type();
Iri same_as();
Iri pref_label();
Iri person();
Iri quotation();
Iri mention();
Iri context();
Iri spoken_by();
Iri date_created();
Iri mentions();
Iri text();
Iri source();
Iri additional_type();
Iri has_mention();
Iri has_context();
Iri context_text();
Iri origin_label();
Iri is_misattributed();
Iri has_emotion_set();
Iri has_emotion();
Iri has_emotion_category();
Iri has_emotion_intensity();
Iri emotion_set();
Iri emotion();
Iri category(SentimentCategory c);
}  // namespace vocab

inline constexpr std::string_view kDefaultBaseIri = "https://quotekg.example.org/resource/";
inline constexpr std::string_view kLicenseIri = "https://creativecommons.org/licenses/by-sa/4.0/";

/// Mints resource IRIs under a base:
///   person/<slug>, quote/<id>, mention/<id>, context/<mention id>_<n>,
///   emotionset/<q|m>_<id>, emotion/<q|m>_<id>, dataset, dataset/<lang>.
/// Person slugs are the lowercased label with non-alphanumerics folded to
/// '_'. Slugs shared by several registered persons get a key-hash suffix
/// for all of them, so the result does not depend on registration order.
class IriPolicy {
 public:
  explicit IriPolicy(std::string base_iri = std::string(kDefaultBaseIri));

  void register_persons(std::span<const PersonRecord> persons);

  const std::string& base() const { return base_; }
  Iri person(const PersonRecord& p) const;
  Iri quote(std::string_view quote_id) const;
  Iri mention(std::string_view mention_id) const;
  Iri context(std::string_view mention_id, std::size_t index) const;
  Iri emotion_set(char owner, std::string_view id) const;
  Iri emotion(char owner, std::string_view id) const;
  Iri dataset() const;
  Iri language_partition(std::string_view language_code) const;

 private:
  std::string base_;
  std::map<std::string, std::string> base_slugs_;  // person key -> unsuffixed slug
  std::map<std::string, std::string> slugs_;       // person key -> slug
};

std::string person_slug(std::string_view label);

/// Percent-encodes characters not allowed in an N-Triples IRI reference.
std::string escape_iri(std::string_view iri);

Literal date_literal(const PartialDate& d);
Literal decimal_literal(double v);

void emit_person(TripleGraph& g, const PersonRecord& p, const IriPolicy& policy);
void emit_quote(TripleGraph& g, const QuoteCluster& cluster, const PersonRecord& person,
                const IriPolicy& policy);
void emit_void(TripleGraph& g, const CorpusStats& stats, const IriPolicy& policy);

/// Person plus all its quotes.
TripleGraph emit_aligned_person(const AlignedPerson& person, const IriPolicy& policy);

enum class Format { kNTriples, kTurtle };

std::string to_ntriples(const Triple& t);
/// Canonical N-Triples: one line per triple, lines sorted bytewise.
void write_ntriples(const TripleGraph& g, std::ostream& out);
std::string to_ntriples(const TripleGraph& g);
void write_turtle(const TripleGraph& g, std::ostream& out);
std::string to_turtle(const TripleGraph& g);
void write(const TripleGraph& g, Format format, std::ostream& out);

/// Reads N-Triples. Throws DataError naming the line on syntax errors.
TripleGraph parse_ntriples(std::istream& in);
TripleGraph parse_ntriples(std::string_view text);

}  // namespace quotekg::rdf
