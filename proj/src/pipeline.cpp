#include "quotekg/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "quotekg/corpus_stats.hpp"
#include "quotekg/dump_ingest.hpp"
#include "quotekg/enrichment.hpp"
#include "quotekg/errors.hpp"
#include "quotekg/extraction.hpp"
#include "quotekg/json_io.hpp"
#include "quotekg/rules.hpp"
#include "quotekg/wikitext.hpp"

namespace quotekg {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kBatchPerJob = 32;

std::size_t batch_size(unsigned jobs) { return kBatchPerJob * std::max(1u, jobs); }

const LanguageRuleSet& rules_for(const RuleBook& book, const std::string& edition) {
  auto it = book.find(edition);
  if (it == book.end()) throw ConfigError("no extraction rules for edition '" + edition + "'");
  return it->second;
}

void require_file(const fs::path& p, std::string_view what) {
  if (p.empty()) throw ConfigError(std::string(what) + " is required");
  if (!fs::is_regular_file(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
}

struct Run {
  const PipelineConfig& config;
  PipelineReport& report;
  FailoverBackend& backend;

  std::uint64_t& count(const std::string& key) { return report.counters[key]; }
  fs::path out(std::string_view name) const { return config.out_dir / name; }

  void extract();
  void enrich();
  void align();
  void emit();
};

struct ExtractedPage {
  bool person = false;
  std::uint64_t warnings = 0;
  ExtractionCounters counters;
  json line;  // null when nothing to write
};

void Run::extract() {
  RuleBook rules = load_rules_file(config.rules_path);
  SitelinkIndex sitelinks = SitelinkIndex::load(config.sitelinks_path);
  auto found = discover_dumps(config.dumps_dir, config.languages);
  if (found.empty()) throw ConfigError("no dumps found in " + config.dumps_dir.string());
  auto editions = select_editions(found, config.min_pages);

  NdjsonWriter writer(out(kRawQuotesFile), kRawQuotesKind);
  std::optional<std::ofstream> raw_dump;
  if (config.emit_raw) {
    raw_dump.emplace(*config.emit_raw, std::ios::binary);
    if (!*raw_dump) throw ConfigError("cannot write " + config.emit_raw->string());
  }
  for (const auto& name : {"pages_seen", "non_main_skipped", "redirects_dropped", "pages_yielded",
                           "peak_buffered", "person_pages", "non_person_pages", "parse_warnings",
                           "raw_quotes", "empty_skipped", "outside_sections", "about_skipped",
                           "context_attached"})
    count(name);

  for (const auto& d : editions) {
    auto rs = rules.find(d.language_code);
    if (rs == rules.end()) {
      report.editions_without_rules.push_back(d.language_code);
      continue;
    }
    report.edition_pages[d.language_code] = d.page_count_estimate;
    const LanguageRuleSet& ruleset = rs->second;

    PageStream stream(d);
    std::vector<RawPage> batch;
    std::vector<ExtractedPage> results;
    bool more = true;
    while (more) {
      batch.clear();
      while (batch.size() < batch_size(config.jobs)) {
        auto page = stream.next();
        if (!page) {
          more = false;
          break;
        }
        batch.push_back(std::move(*page));
      }
      results.assign(batch.size(), {});
      parallel_for(batch.size(), config.jobs, [&](std::size_t i) {
        const RawPage& page = batch[i];
        ExtractedPage& r = results[i];
        if (!is_person_page(page, sitelinks)) return;
        r.person = true;
        PageTree tree = parse_page(page);
        r.warnings = tree.warnings.size();
        auto quotes = extract_quotes(tree, ruleset, &r.counters);
        if (quotes.empty()) return;
        r.line = json{{"page", page.title}, {"edition", page.language_code}, {"quotes", quotes}};
      });
      for (auto& r : results) {
        ++count(r.person ? "person_pages" : "non_person_pages");
        count("parse_warnings") += r.warnings;
        count("empty_skipped") += r.counters.empty_skipped;
        count("outside_sections") += r.counters.outside_sections;
        count("about_skipped") += r.counters.about_skipped;
        count("context_attached") += r.counters.context_attached;
        if (r.line.is_null()) continue;
        count("raw_quotes") += r.line["quotes"].size();
        if (raw_dump)
          for (const auto& q : r.line["quotes"]) *raw_dump << q.dump() << '\n';
        writer.write(r.line);
      }
    }
    const auto& c = stream.counters();
    count("pages_seen") += c.pages_seen;
    count("non_main_skipped") += c.non_main_skipped;
    count("redirects_dropped") += c.redirects_dropped;
    count("pages_yielded") += c.pages_yielded;
    count("peak_buffered") = std::max<std::uint64_t>(count("peak_buffered"), c.peak_buffered);
  }
  writer.close();
}

void Run::enrich() {
  RuleBook rules = load_rules_file(config.rules_path);
  SitelinkIndex sitelinks = SitelinkIndex::load(config.sitelinks_path);
  NdjsonReader reader(out(kRawQuotesFile), kRawQuotesKind, "extract");
  NdjsonWriter writer(out(kMentionsFile), kMentionsKind);
  for (const auto& name : {"mentions", "original_mentions", "invalid_urls_skipped",
                           "dated_mentions", "degraded_batches"})
    count(name);

  struct Item {
    std::string page;
    std::string edition;
    std::vector<RawQuote> quotes;
    EnrichmentCounters counters;
    json line;
  };
  std::vector<Item> batch;
  bool more = true;
  while (more) {
    batch.clear();
    while (batch.size() < batch_size(config.jobs)) {
      auto rec = reader.next();
      if (!rec) {
        more = false;
        break;
      }
      try {
        Item item;
        item.page = rec->at("page").get<std::string>();
        item.edition = rec->at("edition").get<std::string>();
        item.quotes = rec->at("quotes").get<std::vector<RawQuote>>();
        batch.push_back(std::move(item));
      } catch (const json::exception& e) {
        throw DataError(std::string(kRawQuotesFile) + ": bad record: " + e.what());
      }
    }
    for (const auto& item : batch) rules_for(rules, item.edition);
    parallel_for(batch.size(), config.jobs, [&](std::size_t i) {
      Item& item = batch[i];
      auto page = enrich_page(item.page, item.edition, item.quotes, rules_for(rules, item.edition),
                              sitelinks, backend, &item.counters);
      item.line = json{{"person", page.person}, {"mentions", page.mentions}};
    });
    for (const auto& item : batch) {
      count("mentions") += item.counters.mentions;
      count("original_mentions") += item.counters.original_mentions;
      count("invalid_urls_skipped") += item.counters.invalid_urls_skipped;
      count("dated_mentions") += item.counters.dated_mentions;
      count("degraded_batches") += item.counters.degraded_batches;
      writer.write(item.line);
    }
  }
  writer.close();
  if (count("degraded_batches") > 0) report.degraded = true;
}

json gold_view(const AlignedPerson& p) {
  json clusters = json::array();
  for (const auto& c : p.clusters) {
    json members = json::array();
    for (const auto& m : c.members) members.push_back({{"language", m.language}, {"text", m.text}});
    clusters.push_back(std::move(members));
  }
  return {{"person", p.person.canonical_label}, {"clusters", std::move(clusters)}};
}

void Run::align() {
  NdjsonReader reader(out(kMentionsFile), kMentionsKind, "enrich");
  std::map<std::string, std::pair<PersonRecord, std::vector<QuoteMention>>> by_person;
  while (auto rec = reader.next()) {
    PersonRecord person;
    std::vector<QuoteMention> mentions;
    try {
      person = rec->at("person").get<PersonRecord>();
      mentions = rec->at("mentions").get<std::vector<QuoteMention>>();
    } catch (const json::exception& e) {
      throw DataError(std::string(kMentionsFile) + ": bad record: " + e.what());
    }
    if (mentions.empty()) continue;
    auto [it, fresh] = by_person.try_emplace(person.key(), person, std::vector<QuoteMention>{});
    if (!fresh) merge_person(it->second.first, person);
    auto& dst = it->second.second;
    dst.insert(dst.end(), std::make_move_iterator(mentions.begin()),
               std::make_move_iterator(mentions.end()));
  }

  std::vector<std::pair<PersonRecord, std::vector<QuoteMention>>> work;
  work.reserve(by_person.size());
  for (auto& [key, v] : by_person) work.push_back(std::move(v));
  by_person.clear();

  std::vector<AlignedPerson> aligned(work.size());
  parallel_for(work.size(), config.jobs, [&](std::size_t i) {
    aligned[i] = align_person(std::move(work[i].first), std::move(work[i].second), backend,
                              config.threshold);
  });

  NdjsonWriter writer(out(kClustersFile), kClustersKind);
  std::optional<std::ofstream> dump;
  if (config.dump_clusters) {
    dump.emplace(*config.dump_clusters, std::ios::binary);
    if (!*dump) throw ConfigError("cannot write " + config.dump_clusters->string());
  }
  std::set<std::string> tags;
  count("persons") = aligned.size();
  count("quotes");
  count("degraded_persons");
  for (const auto& p : aligned) {
    writer.write(p);
    if (dump) *dump << gold_view(p).dump() << '\n';
    count("quotes") += p.clusters.size();
    if (p.degraded) ++count("degraded_persons");
    if (!p.model_tag.empty()) tags.insert(p.model_tag);
  }
  writer.close();
  report.model_tag.clear();
  for (const auto& t : tags) report.model_tag += (report.model_tag.empty() ? "" : ",") + t;
  if (count("degraded_persons") > 0) report.degraded = true;
}

void Run::emit() {
  NdjsonReader reader(out(kClustersFile), kClustersKind, "align");
  std::vector<AlignedPerson> persons;
  while (auto rec = reader.next()) {
    try {
      persons.push_back(rec->get<AlignedPerson>());
    } catch (const json::exception& e) {
      throw DataError(std::string(kClustersFile) + ": bad record: " + e.what());
    }
  }
  std::sort(persons.begin(), persons.end(),
            [](const auto& a, const auto& b) { return a.person.key() < b.person.key(); });

  rdf::IriPolicy policy(config.base_iri);
  std::vector<PersonRecord> records;
  records.reserve(persons.size());
  for (const auto& p : persons) records.push_back(p.person);
  policy.register_persons(records);

  std::vector<rdf::TripleGraph> parts(persons.size());
  parallel_for(persons.size(), config.jobs,
               [&](std::size_t i) { parts[i] = rdf::emit_aligned_person(persons[i], policy); });
  rdf::TripleGraph graph;
  for (auto& part : parts) graph.merge(part);

  CorpusStats stats = corpus_stats(persons);
  stats.triples = graph.size();
  rdf::TripleGraph void_graph;
  rdf::emit_void(void_graph, stats, policy);

  auto write_file = [](const fs::path& path, const rdf::TripleGraph& g, rdf::Format f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    rdf::write(g, f, os);
    if (!os) throw DataError("write failed: " + path.string());
  };
  write_file(out(graph_file_name(config.format)), graph, config.format);
  write_file(out(kVoidFile), void_graph, rdf::Format::kTurtle);

  count("triples") = stats.triples;
  count("void_triples") = void_graph.size();
  count("emitted_persons") = persons.size();
  count("emitted_quotes") = 0;
  for (const auto& p : persons) count("emitted_quotes") += p.clusters.size();
  count("misattributed_quotes") = stats.misattributed_quotes;
  count("multilingual_quotes") = stats.multilingual_quotes;
}

}  // namespace

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kExtract: return "extract";
    case Stage::kEnrich: return "enrich";
    case Stage::kAlign: return "align";
    case Stage::kEmit: return "emit";
    case Stage::kAll: return "all";
  }
  return "all";
}

std::optional<Stage> stage_from(std::string_view s) {
  for (Stage st : {Stage::kExtract, Stage::kEnrich, Stage::kAlign, Stage::kEmit, Stage::kAll})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

std::string graph_file_name(rdf::Format format) {
  return format == rdf::Format::kTurtle ? "quotekg.ttl" : "quotekg.nt";
}

void PipelineConfig::validate(Stage stage) const {
  bool all = stage == Stage::kAll;
  if (out_dir.empty()) throw ConfigError("--out is required");
  if (jobs == 0) throw ConfigError("--jobs must be at least 1");
  if (all || stage == Stage::kExtract) {
    if (dumps_dir.empty()) throw ConfigError("--dumps-dir is required");
    if (!fs::is_directory(dumps_dir))
      throw ConfigError("dump directory not found: " + dumps_dir.string());
  }
  if (all || stage == Stage::kExtract || stage == Stage::kEnrich) {
    require_file(rules_path, "--rules");
    require_file(sitelinks_path, "--sitelinks");
  }
  if (all || stage == Stage::kAlign) {
    if (!(threshold > 0.0 && threshold <= 1.0))
      throw ConfigError("--threshold must be in (0, 1]");
  }
  if (all || stage == Stage::kEmit) {
    if (base_iri.empty() || (base_iri.back() != '/' && base_iri.back() != '#'))
      throw ConfigError("--base-iri must end with '/' or '#'");
  }
}

nlohmann::json PipelineReport::to_json() const {
  return {{"stages", stages},
          {"counters", counters},
          {"editions", edition_pages},
          {"editions_without_rules", editions_without_rules},
          {"nlp_mode", nlp_mode},
          {"model_tag", model_tag},
          {"degraded", degraded},
          {"exit_code", exit_code()}};
}

PipelineReport run_pipeline(Stage stage, const PipelineConfig& config) {
  config.validate(stage);
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw ConfigError("cannot create " + config.out_dir.string() + ": " + ec.message());

  FailoverBackend backend(make_backend(config.nlp_url, config.expected_model_tag));
  PipelineReport report;
  Run run{config, report, backend};

  std::vector<Stage> stages;
  if (stage == Stage::kAll)
    stages = {Stage::kExtract, Stage::kEnrich, Stage::kAlign, Stage::kEmit};
  else
    stages = {stage};
  for (Stage s : stages) {
    report.stages.emplace_back(to_string(s));
    switch (s) {
      case Stage::kExtract: run.extract(); break;
      case Stage::kEnrich: run.enrich(); break;
      case Stage::kAlign: run.align(); break;
      case Stage::kEmit: run.emit(); break;
      case Stage::kAll: break;
    }
  }
  if (backend.offline())
    report.nlp_mode = "offline";
  else
    report.nlp_mode = backend.failed() ? "degraded" : "backend";
  if (backend.failed()) report.degraded = true;

  std::ofstream os(config.out_dir / kReportFile, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + (config.out_dir / kReportFile).string());
  os << report.to_json().dump(2) << '\n';
  return report;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!first) first = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  if (first) std::rethrow_exception(first);
}

template <typename Fn>
auto FailoverBackend::guarded(Fn&& fn) -> decltype(fn()) {
  if (failed_.load()) throw BackendError("NLP backend disabled after an earlier failure");
  try {
    return fn();
  } catch (const BackendError&) {
    failed_.store(true);
    throw;
  }
}

std::vector<LanguageGuess> FailoverBackend::detect_languages(std::span<const std::string> texts) {
  return guarded([&] { return inner_->detect_languages(texts); });
}

std::vector<std::optional<Sentiment>> FailoverBackend::classify_sentiment(
    std::span<const std::string> texts) {
  return guarded([&] { return inner_->classify_sentiment(texts); });
}

std::vector<EmbeddingVector> FailoverBackend::embed(std::span<const std::string> texts) {
  return guarded([&] { return inner_->embed(texts); });
}

}  // namespace quotekg
