#include "quotekg/corpus_stats.hpp"

#include <set>

namespace quotekg {

CorpusStats corpus_stats(std::span<const AlignedPerson> persons) {
  CorpusStats stats;
  for (const auto& person : persons) {
    std::set<std::string> person_languages;
    for (const auto& cluster : person.clusters) {
      std::set<std::string> quote_languages;
      for (const auto& m : cluster.members) {
        auto& s = stats.per_language[m.language];
        ++s.mentions;
        ++stats.totals.mentions;
        if (!m.contexts.empty()) {
          ++s.mentions_with_context;
          ++stats.totals.mentions_with_context;
        }
        quote_languages.insert(m.language);
      }
      for (const auto& lang : quote_languages) ++stats.per_language[lang].quotes;
      person_languages.insert(quote_languages.begin(), quote_languages.end());
      ++stats.totals.quotes;
      if (cluster.misattributed) ++stats.misattributed_quotes;
      if (quote_languages.size() > 1) ++stats.multilingual_quotes;
    }
    for (const auto& lang : person_languages) ++stats.per_language[lang].persons;
    if (!person.clusters.empty()) ++stats.totals.persons;
  }
  return stats;
}

}  // namespace quotekg
