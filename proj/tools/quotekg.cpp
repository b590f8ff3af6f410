#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quotekg/embedding.hpp"
#include "quotekg/errors.hpp"
#include "quotekg/evaluation.hpp"
#include "quotekg/json_io.hpp"
#include "quotekg/nlp.hpp"
#include "quotekg/pipeline.hpp"

namespace {

using quotekg::json;

constexpr const char* kVersion = "0.1.0";

void print_version() {
  std::cout << "quotekg " << kVersion << '\n'
            << "embedding model (sidecar): " << quotekg::kExpectedEmbeddingModel << " dim "
            << quotekg::kExpectedEmbeddingDim << '\n'
            << "sentiment model (sidecar): " << quotekg::kExpectedSentimentModel << '\n'
            << "offline embedding: " << quotekg::kFallbackModelTag << " dim "
            << quotekg::kFallbackDim << '\n'
            << "sidecar URL: --nlp-url or $" << quotekg::kNlpEndpointEnv << '\n';
}

json metrics_json(const quotekg::Metrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

json counts_json(const quotekg::PairCounts& c) {
  return {{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}};
}

json report_json(const quotekg::EvaluationReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"person", row.person},
                    {"counts", counts_json(row.counts)},
                    {"metrics", metrics_json(row.metrics)}});
  return {{"rows", rows},
          {"total", counts_json(r.total)},
          {"macro", metrics_json(r.macro)},
          {"micro", metrics_json(r.micro)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Builds a multilingual quote knowledge graph from Wikiquote dumps."};
  app.require_subcommand(1);
  app.add_flag_callback(
      "--version",
      [] {
        print_version();
        throw CLI::Success();
      },
      "Print version and expected model tags");

  quotekg::PipelineConfig config;
  std::string stage_name;
  std::string format = "nt";
  std::string nlp_url;
  std::string model_tag;
  std::string emit_raw;
  std::string dump_clusters;

  auto* run = app.add_subcommand("run", "Run one pipeline stage or all of them");
  run->add_option("stage", stage_name, "extract | enrich | align | emit | all")
      ->required()
      ->check(CLI::IsMember({"extract", "enrich", "align", "emit", "all"}));
  run->add_option("--dumps-dir", config.dumps_dir, "Directory with <lang>wikiquote-*.xml[.gz]");
  run->add_option("--languages", config.languages, "Editions to read (default: all found)")
      ->delimiter(',');
  run->add_option("--min-pages", config.min_pages, "Skip editions with fewer pages")
      ->capture_default_str();
  run->add_option("--rules", config.rules_path, "Per-language extraction rules (YAML)");
  run->add_option("--sitelinks", config.sitelinks_path, "Sitelink index (TSV)");
  run->add_option("--nlp-url", nlp_url,
                  std::string("NLP sidecar base URL (default: $") + quotekg::kNlpEndpointEnv +
                      ", else offline)");
  run->add_option("--model-tag", model_tag, "Refuse embeddings from any other model");
  run->add_option("--threshold", config.threshold, "Cosine threshold for clustering")
      ->capture_default_str();
  run->add_option("--out", config.out_dir, "Output directory")->required();
  run->add_option("--format", format, "RDF serialization")
      ->check(CLI::IsMember({"nt", "ttl"}))
      ->capture_default_str();
  run->add_option("--base-iri", config.base_iri, "Base for minted resource IRIs")
      ->capture_default_str();
  run->add_option("--jobs", config.jobs, "Worker threads")->capture_default_str();
  run->add_option("--emit-raw", emit_raw, "Also write raw quotes as NDJSON here (extract)");
  run->add_option("--dump-clusters", dump_clusters,
                  "Also write clusters in the gold format here (align)");

  std::string gold_path;
  std::string predicted_path;
  bool restrict_to_gold = false;
  bool eval_json = false;
  auto* eval = app.add_subcommand("eval", "Pairwise clustering evaluation against a gold file");
  eval->add_option("--gold", gold_path, "Gold clusters")->required();
  eval->add_option("--predicted", predicted_path, "clusters.ndjson or a gold-format file")
      ->required();
  eval->add_flag("--restrict-to-gold", restrict_to_gold,
                 "Ignore predicted mentions absent from the gold file");
  eval->add_flag("--json", eval_json, "Machine-readable output");

  std::string graph_path;
  bool stats_json = false;
  auto* stats = app.add_subcommand("stats", "Per-language corpus statistics");
  stats->add_option("--graph", graph_path, "quotekg.nt or clusters.ndjson")->required();
  stats->add_flag("--json", stats_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) {
      if (!nlp_url.empty())
        config.nlp_url = nlp_url;
      else if (const char* env = std::getenv(quotekg::kNlpEndpointEnv); env && *env)
        config.nlp_url = env;
      if (!model_tag.empty()) config.expected_model_tag = model_tag;
      if (!emit_raw.empty()) config.emit_raw = emit_raw;
      if (!dump_clusters.empty()) config.dump_clusters = dump_clusters;
      config.format = format == "ttl" ? quotekg::rdf::Format::kTurtle : quotekg::rdf::Format::kNTriples;
      auto report = quotekg::run_pipeline(*quotekg::stage_from(stage_name), config);
      std::cout << report.to_json().dump(2) << '\n';
      if (report.degraded)
        std::cerr << "warning: NLP backend degraded; affected mentions used offline detectors\n";
      return report.exit_code();
    }
    if (*eval) {
      auto gold = quotekg::load_gold(gold_path);
      auto predicted = quotekg::load_predicted(predicted_path);
      auto report = quotekg::evaluate(predicted, gold, restrict_to_gold);
      if (eval_json)
        std::cout << report_json(report).dump(2) << '\n';
      else
        quotekg::print_evaluation(report, std::cout);
      return 0;
    }
    if (*stats) {
      auto s = quotekg::load_corpus_stats(graph_path);
      if (stats_json)
        std::cout << json(s).dump(2) << '\n';
      else
        quotekg::print_stats(s, std::cout);
      return 0;
    }
  } catch (const quotekg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const quotekg::EvaluationError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    for (const auto& [lang, text] : e.missing())
      std::cerr << "  only in gold: [" << lang << "] " << text << '\n';
    for (const auto& [lang, text] : e.extra())
      std::cerr << "  only in predicted: [" << lang << "] " << text << '\n';
    return 3;
  } catch (const quotekg::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
