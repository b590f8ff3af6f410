#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace quotekg {

enum class DatePrecision { kYear, kMonth, kDay };

/// A calendar date known to year, month or day precision.
/// Invariant: day set implies month set.
struct PartialDate {
  int year = 0;
  std::optional<int> month;
  std::optional<int> day;

  static PartialDate of_year(int y) { return {y, std::nullopt, std::nullopt}; }
  static PartialDate of_month(int y, int m) { return {y, m, std::nullopt}; }
  static PartialDate of_day(int y, int m, int d) { return {y, m, d}; }

  DatePrecision precision() const {
    return day ? DatePrecision::kDay : (month ? DatePrecision::kMonth : DatePrecision::kYear);
  }
  bool valid() const;
  // "2015", "2015-08", "2015-08-31"
  std::string iso() const;
  static std::optional<PartialDate> from_iso(std::string_view s);

  bool operator==(const PartialDate&) const = default;
};

/// True unless both dates populate some field with different values.
bool compatible(const PartialDate& a, const PartialDate& b);

/// The most precise candidate when all candidates are pairwise compatible;
/// nullopt for an empty set or any conflict.
std::optional<PartialDate> resolve_dates(std::span<const PartialDate> candidates);

/// Finds date expressions in free text. Recognized forms: ISO YYYY-MM-DD,
/// "D Month YYYY", "Month D, YYYY", "YYYY, Mon D", "Month YYYY" and bare
/// four-digit years in 1000..2999. Month names come from the table for
/// `language_code` plus English.
std::vector<PartialDate> find_dates(std::string_view text, std::string_view language_code);

}  // namespace quotekg
