#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "quotekg/alignment.hpp"

namespace quotekg {

struct LanguageStats {
  std::uint64_t persons = 0;
  std::uint64_t quotes = 0;  // quotes with at least one mention in the language
  std::uint64_t mentions = 0;
  std::uint64_t mentions_with_context = 0;
  bool operator==(const LanguageStats&) const = default;
};

/// Corpus counts. Per-language quote counts are participation counts, so a
/// quote with de and en mentions counts once under each; `totals` counts it
/// once.
struct CorpusStats {
  std::map<std::string, LanguageStats> per_language;
  LanguageStats totals;
  std::uint64_t misattributed_quotes = 0;
  std::uint64_t multilingual_quotes = 0;  // mentions in two or more languages
  std::uint64_t triples = 0;
  bool operator==(const CorpusStats&) const = default;
};

CorpusStats corpus_stats(std::span<const AlignedPerson> persons);

}  // namespace quotekg
