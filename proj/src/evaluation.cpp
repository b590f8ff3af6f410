#include "quotekg/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "quotekg/json_io.hpp"

namespace quotekg {

PairCounts& PairCounts::operator+=(const PairCounts& o) {
  tp += o.tp;
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

namespace {

std::string describe(const std::vector<MentionKey>& keys) {
  std::string out;
  for (size_t i = 0; i < keys.size() && i < 10; ++i) {
    out += (i ? "; " : "") + std::string("(") + keys[i].first + ") " + keys[i].second;
  }
  if (keys.size() > 10) out += "; ... " + std::to_string(keys.size() - 10) + " more";
  return out;
}

std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

// With `merge_repeats`, a key repeated inside one cluster counts once.
std::map<MentionKey, size_t> index_clusters(const Clustering& c, const char* which,
                                            bool merge_repeats) {
  std::map<MentionKey, size_t> index;
  std::vector<MentionKey> repeated;
  for (size_t i = 0; i < c.size(); ++i) {
    for (const auto& key : c[i]) {
      auto [it, inserted] = index.emplace(key, i);
      if (!inserted && !(merge_repeats && it->second == i)) repeated.push_back(key);
    }
  }
  if (!repeated.empty()) {
    throw EvaluationError(std::string("repeated mention keys in ") + which + " clustering: " +
                              describe(repeated),
                          {}, {});
  }
  return index;
}

}  // namespace

EvaluationError::EvaluationError(std::string what, std::vector<MentionKey> missing,
                                 std::vector<MentionKey> extra)
    : DataError(std::move(what)), missing_(std::move(missing)), extra_(std::move(extra)) {}

PairCounts pairwise_counts(const Clustering& predicted, const Clustering& gold) {
  auto gold_index = index_clusters(gold, "gold", false);
  auto predicted_index = index_clusters(predicted, "predicted", true);

  std::vector<MentionKey> missing;
  std::vector<MentionKey> extra;
  for (const auto& [key, _] : gold_index) {
    if (!predicted_index.count(key)) missing.push_back(key);
  }
  for (const auto& [key, _] : predicted_index) {
    if (!gold_index.count(key)) extra.push_back(key);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string what = "predicted and gold mention keys differ";
    if (!missing.empty()) what += "; missing from predicted: " + describe(missing);
    if (!extra.empty()) what += "; not in gold: " + describe(extra);
    throw EvaluationError(what, std::move(missing), std::move(extra));
  }

  // Pair counts from the contingency table of (gold cluster, predicted cluster).
  std::map<std::pair<size_t, size_t>, std::uint64_t> cells;
  std::map<size_t, std::uint64_t> gold_sizes;
  std::map<size_t, std::uint64_t> predicted_sizes;
  for (const auto& [key, g] : gold_index) {
    size_t p = predicted_index.at(key);
    ++cells[{g, p}];
    ++gold_sizes[g];
    ++predicted_sizes[p];
  }
  std::uint64_t together_both = 0;
  for (const auto& [_, n] : cells) together_both += choose2(n);
  std::uint64_t together_gold = 0;
  for (const auto& [_, n] : gold_sizes) together_gold += choose2(n);
  std::uint64_t together_predicted = 0;
  for (const auto& [_, n] : predicted_sizes) together_predicted += choose2(n);

  PairCounts c;
  c.tp = together_both;
  c.fp = together_predicted - together_both;
  c.fn = together_gold - together_both;
  c.tn = choose2(gold_index.size()) - c.tp - c.fp - c.fn;
  return c;
}

std::uint64_t cross_language_pairs(std::span<const MentionKey> keys) {
  std::map<std::string, std::uint64_t> per_language;
  for (const auto& key : keys) ++per_language[key.first];
  std::uint64_t same = 0;
  for (const auto& [_, n] : per_language) same += choose2(n);
  return choose2(keys.size()) - same;
}

Metrics prf(const PairCounts& counts) {
  Metrics m;
  m.precision = counts.tp + counts.fp == 0
                    ? 1.0
                    : static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fp);
  m.recall = counts.tp + counts.fn == 0
                 ? 1.0
                 : static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
  m.f1 = m.precision + m.recall == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

Metrics macro_average(std::span<const Metrics> per_person) {
  if (per_person.empty()) throw std::invalid_argument("macro_average of an empty list");
  Metrics sum{0.0, 0.0, 0.0};
  for (const auto& m : per_person) {
    sum.precision += m.precision;
    sum.recall += m.recall;
    sum.f1 += m.f1;
  }
  const auto n = static_cast<double>(per_person.size());
  return {sum.precision / n, sum.recall / n, sum.f1 / n};
}

Clustering restrict_to(const Clustering& clustering, std::span<const MentionKey> keep) {
  std::set<MentionKey> wanted(keep.begin(), keep.end());
  Clustering out;
  for (const auto& cluster : clustering) {
    std::vector<MentionKey> kept;
    for (const auto& key : cluster) {
      if (wanted.count(key)) kept.push_back(key);
    }
    if (!kept.empty()) out.push_back(std::move(kept));
  }
  return out;
}

EvaluationReport evaluate(const std::map<std::string, Clustering>& predicted,
                          std::span<const GoldClustering> gold, bool restrict_predicted) {
  EvaluationReport report;
  std::vector<Metrics> per_person;
  for (const auto& g : gold) {
    auto it = predicted.find(g.person);
    if (it == predicted.end()) throw DataError("no predicted clusters for person '" + g.person + "'");
    Clustering p = it->second;
    if (restrict_predicted) {
      std::vector<MentionKey> keys;
      for (const auto& c : g.clusters) keys.insert(keys.end(), c.begin(), c.end());
      p = restrict_to(p, keys);
    }
    EvaluationRow row;
    row.person = g.person;
    try {
      row.counts = pairwise_counts(p, g.clusters);
    } catch (const EvaluationError& e) {
      throw EvaluationError(g.person + ": " + e.what(), e.missing(), e.extra());
    }
    row.metrics = prf(row.counts);
    report.total += row.counts;
    per_person.push_back(row.metrics);
    report.rows.push_back(std::move(row));
  }
  report.micro = prf(report.total);
  if (!per_person.empty()) report.macro = macro_average(per_person);
  return report;
}

namespace {

Clustering clusters_from_json(const json& j) {
  Clustering out;
  for (const auto& cluster : j) {
    std::vector<MentionKey> keys;
    for (const auto& m : cluster) {
      keys.emplace_back(m.at("language").get<std::string>(), m.at("text").get<std::string>());
    }
    out.push_back(std::move(keys));
  }
  return out;
}

std::vector<json> read_json_documents(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  std::vector<json> docs;
  try {
    auto whole = json::parse(content);
    if (whole.is_array()) {
      for (auto& d : whole) docs.push_back(std::move(d));
    } else {
      docs.push_back(std::move(whole));
    }
    return docs;
  } catch (const json::parse_error&) {
  }
  std::istringstream lines(content);
  std::string line;
  size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      docs.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

}  // namespace

std::vector<GoldClustering> load_gold(const std::filesystem::path& path) {
  std::vector<GoldClustering> out;
  try {
    for (const auto& doc : read_json_documents(path)) {
      out.push_back({doc.at("person").get<std::string>(), clusters_from_json(doc.at("clusters"))});
    }
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": not a gold clustering file: " + e.what());
  }
  return out;
}

Clustering clustering_of(const AlignedPerson& person) {
  Clustering out;
  for (const auto& c : person.clusters) {
    std::vector<MentionKey> keys;
    for (const auto& m : c.members) keys.emplace_back(m.language, m.text);
    out.push_back(std::move(keys));
  }
  return out;
}

std::map<std::string, Clustering> load_predicted(const std::filesystem::path& path) {
  std::map<std::string, Clustering> out;
  if (has_intermediate_header(path, kClustersKind)) {
    NdjsonReader reader(path, kClustersKind, "align");
    while (auto record = reader.next()) {
      auto person = record->get<AlignedPerson>();
      auto clusters = clustering_of(person);
      std::set<std::string> names{person.person.canonical_label, person.person.key()};
      for (const auto& [lang, label] : person.person.labels) names.insert(label);
      for (const auto& name : names) {
        auto& target = out[name];
        target.insert(target.end(), clusters.begin(), clusters.end());
      }
    }
    return out;
  }
  for (const auto& g : load_gold(path)) {
    auto& target = out[g.person];
    target.insert(target.end(), g.clusters.begin(), g.clusters.end());
  }
  return out;
}

void print_evaluation(const EvaluationReport& report, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-28s %6s %8s %6s %6s %6s %6s %6s\n", "Person", "TP", "TN", "FP",
                "FN", "P", "R", "F1");
  out << buf;
  auto line = [&](const std::string& label, const PairCounts& c, const Metrics& m) {
    std::snprintf(buf, sizeof buf, "%-28s %6llu %8llu %6llu %6llu %6.2f %6.2f %6.2f\n",
                  label.c_str(), static_cast<unsigned long long>(c.tp),
                  static_cast<unsigned long long>(c.tn), static_cast<unsigned long long>(c.fp),
                  static_cast<unsigned long long>(c.fn), m.precision, m.recall, m.f1);
    out << buf;
  };
  for (const auto& row : report.rows) line(row.person, row.counts, row.metrics);
  line("Total (macro)", report.total, report.macro);
  line("Total (micro)", report.total, report.micro);
}

CorpusStats corpus_stats(const rdf::TripleGraph& graph) {
  using rdf::Iri;
  using rdf::Literal;
  const auto type = rdf::vocab::type();
  const auto quotation = rdf::vocab::quotation();

  std::set<std::string> quotes;
  std::map<std::string, std::string> speaker;                 // quote -> person
  std::map<std::string, std::vector<std::string>> mentions;   // quote -> mentions
  std::map<std::string, std::string> language;                // mention -> lang
  std::set<std::string> with_context;
  std::set<std::string> misattributed;
  for (const auto& t : graph.triples()) {
    const auto* s = std::get_if<Iri>(&t.subject);
    if (s == nullptr) continue;
    const auto* o_iri = std::get_if<Iri>(&t.object);
    const auto* o_lit = std::get_if<Literal>(&t.object);
    if (t.predicate == type && o_iri && *o_iri == quotation) {
      quotes.insert(s->value);
    } else if (t.predicate == rdf::vocab::spoken_by() && o_iri) {
      speaker[s->value] = o_iri->value;
    } else if (t.predicate == rdf::vocab::has_mention() && o_iri) {
      mentions[s->value].push_back(o_iri->value);
    } else if (t.predicate == rdf::vocab::text() && o_lit) {
      language[s->value] = o_lit->language.empty() ? "und" : o_lit->language;
    } else if (t.predicate == rdf::vocab::has_context()) {
      with_context.insert(s->value);
    } else if (t.predicate == rdf::vocab::is_misattributed() && o_lit && o_lit->lexical == "true") {
      misattributed.insert(s->value);
    }
  }

  CorpusStats stats;
  std::map<std::string, std::set<std::string>> persons_by_language;
  std::set<std::string> persons;
  for (const auto& q : quotes) {
    std::set<std::string> quote_languages;
    for (const auto& m : mentions[q]) {
      auto lang = language.count(m) ? language[m] : "und";
      auto& s = stats.per_language[lang];
      ++s.mentions;
      ++stats.totals.mentions;
      if (with_context.count(m)) {
        ++s.mentions_with_context;
        ++stats.totals.mentions_with_context;
      }
      quote_languages.insert(lang);
    }
    for (const auto& lang : quote_languages) {
      ++stats.per_language[lang].quotes;
      if (speaker.count(q)) persons_by_language[lang].insert(speaker[q]);
    }
    if (speaker.count(q)) persons.insert(speaker[q]);
    ++stats.totals.quotes;
    if (misattributed.count(q)) ++stats.misattributed_quotes;
    if (quote_languages.size() > 1) ++stats.multilingual_quotes;
  }
  for (const auto& [lang, ps] : persons_by_language) stats.per_language[lang].persons = ps.size();
  stats.totals.persons = persons.size();
  stats.triples = graph.size();
  return stats;
}

CorpusStats load_corpus_stats(const std::filesystem::path& path) {
  if (has_intermediate_header(path, kClustersKind)) {
    NdjsonReader reader(path, kClustersKind, "align");
    std::vector<AlignedPerson> persons;
    while (auto record = reader.next()) persons.push_back(record->get<AlignedPerson>());
    return corpus_stats(persons);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return corpus_stats(rdf::parse_ntriples(in));
}

void print_stats(const CorpusStats& stats, std::ostream& out) {
  out << "# Quotes per language count quotes with at least one mention in that language;\n"
         "# the total counts each quote once.\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s %10s %10s %10s %22s\n", "Language", "Persons", "Quotes",
                "Mentions", "Mentions with Contexts");
  out << buf;
  auto line = [&](const std::string& label, const LanguageStats& s) {
    std::snprintf(buf, sizeof buf, "%-10s %10llu %10llu %10llu %22llu\n", label.c_str(),
                  static_cast<unsigned long long>(s.persons),
                  static_cast<unsigned long long>(s.quotes),
                  static_cast<unsigned long long>(s.mentions),
                  static_cast<unsigned long long>(s.mentions_with_context));
    out << buf;
  };
  for (const auto& [lang, s] : stats.per_language) line(lang, s);
  line("all", stats.totals);
  out << "misattributed quotes: " << stats.misattributed_quotes << '\n'
      << "multilingual quotes: " << stats.multilingual_quotes << '\n';
}

}  // namespace quotekg
