#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "quotekg/evaluation.hpp"

namespace quotekg::testing {

/// Published per-person alignment results: pair counts and the metrics as
/// printed (two decimals).
struct ReportedRow {
  std::string_view person;
  PairCounts counts;
  Metrics printed;
};

inline constexpr std::array<ReportedRow, 8> kReportedRows = {{
    {"Alan Turing", {10, 935, 0, 1}, {1.0, 0.91, 0.95}},
    {"Alexander the Great", {5, 491, 0, 0}, {1.0, 1.0, 1.0}},
    {"Edward Snowden", {6, 697, 0, 0}, {1.0, 1.0, 1.0}},
    {"Gustav Mahler", {1, 44, 0, 0}, {1.0, 1.0, 1.0}},
    {"Jean-Claude Juncker", {4, 776, 0, 0}, {1.0, 1.0, 1.0}},
    {"Marie Antoinette", {4, 347, 0, 0}, {1.0, 1.0, 1.0}},
    {"Marie Curie", {2, 251, 0, 0}, {1.0, 1.0, 1.0}},
    {"Tom Clancy", {1, 2849, 0, 0}, {1.0, 1.0, 1.0}},
}};

inline constexpr PairCounts kReportedTotal{33, 6390, 0, 1};
inline constexpr Metrics kReportedTotalPrinted{1.0, 0.99, 0.99};

/// Gold and predicted clusterings over synthetic mentions whose pair counts
/// equal `target` (fp must be 0). Gold positives are packed greedily into
/// the largest clusters that fit; fn pairs come from two-mention gold
/// clusters that the prediction splits.
inline std::pair<Clustering, Clustering> clusterings_with_counts(const PairCounts& target) {
  auto choose2 = [](std::uint64_t k) { return k * (k - 1) / 2; };
  std::uint64_t n = 0;
  while (choose2(n) < target.total()) ++n;
  if (choose2(n) != target.total() || target.fp != 0) return {};

  int next = 0;
  auto key = [&] { return MentionKey{"en", "mention " + std::to_string(next++)}; };
  Clustering gold;
  Clustering predicted;
  std::uint64_t left = target.tp;
  while (left > 0) {
    std::uint64_t k = 2;
    while (choose2(k + 1) <= left) ++k;
    std::vector<MentionKey> c;
    for (std::uint64_t i = 0; i < k; ++i) c.push_back(key());
    gold.push_back(c);
    predicted.push_back(c);
    left -= choose2(k);
  }
  for (std::uint64_t i = 0; i < target.fn; ++i) {
    auto a = key();
    auto b = key();
    gold.push_back({a, b});
    predicted.push_back({a});
    predicted.push_back({b});
  }
  while (static_cast<std::uint64_t>(next) < n) {
    auto k = key();
    gold.push_back({k});
    predicted.push_back({k});
  }
  if (static_cast<std::uint64_t>(next) != n) return {};
  return {predicted, gold};
}

}  // namespace quotekg::testing
