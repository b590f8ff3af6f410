#include <gtest/gtest.h>

#include <random>

#include "quotekg/dates.hpp"

namespace quotekg {
namespace {

TEST(ResolveDates, PrefersMorePreciseCompatible) {
  std::vector<PartialDate> c{PartialDate::of_year(2020), PartialDate::of_month(2020, 5)};
  EXPECT_EQ(resolve_dates(c), PartialDate::of_month(2020, 5));
}

TEST(ResolveDates, ConflictYieldsNone) {
  std::vector<PartialDate> c{PartialDate::of_year(1930), PartialDate::of_year(1933)};
  EXPECT_EQ(resolve_dates(c), std::nullopt);
}

TEST(ResolveDates, EmptyYieldsNone) { EXPECT_EQ(resolve_dates({}), std::nullopt); }

TEST(FindDates, Forms) {
  EXPECT_EQ(find_dates("Sommerpressekonferenz in Berlin, 31. August 2015.", "de"),
            std::vector<PartialDate>{PartialDate::of_day(2015, 8, 31)});
  EXPECT_EQ(find_dates("letter to him (1933), p. 56", "en"),
            std::vector<PartialDate>{PartialDate::of_year(1933)});
  EXPECT_EQ(find_dates("May 2020", "en"), std::vector<PartialDate>{PartialDate::of_month(2020, 5)});
  EXPECT_EQ(find_dates("2015-08-31", "en"),
            std::vector<PartialDate>{PartialDate::of_day(2015, 8, 31)});
  EXPECT_EQ(find_dates("2015, Aug 31", "en"),
            std::vector<PartialDate>{PartialDate::of_day(2015, 8, 31)});
  EXPECT_EQ(find_dates("October 26, 1929", "en"),
            std::vector<PartialDate>{PartialDate::of_day(1929, 10, 26)});
  EXPECT_EQ(find_dates("31 février 2015", "fr").size(), 0u);
  EXPECT_TRUE(find_dates("page 56 of 300", "en").empty());
}

TEST(PartialDate, IsoRoundTrip) {
  for (auto d : {PartialDate::of_year(1933), PartialDate::of_month(2020, 5),
                 PartialDate::of_day(2015, 8, 31)}) {
    EXPECT_EQ(PartialDate::from_iso(d.iso()), d);
  }
  EXPECT_EQ(PartialDate::of_day(2015, 8, 31).iso(), "2015-08-31");
  EXPECT_EQ(PartialDate::from_iso("2015-02-30"), std::nullopt);
}

PartialDate random_date(std::mt19937_64& rng) {
  int y = 2000 + static_cast<int>(rng() % 3);
  switch (rng() % 3) {
    case 0: return PartialDate::of_year(y);
    case 1: return PartialDate::of_month(y, 1 + static_cast<int>(rng() % 2));
    default: return PartialDate::of_day(y, 1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 2));
  }
}

// The result refines every candidate and is at least as precise as each.
TEST(ResolveDatesProperty, RefinementMaximum) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 5000; ++round) {
    std::vector<PartialDate> c;
    int n = static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) c.push_back(random_date(rng));
    auto r = resolve_dates(c);
    bool all_compatible = true;
    for (const auto& a : c)
      for (const auto& b : c) all_compatible = all_compatible && compatible(a, b);
    if (c.empty() || !all_compatible) {
      EXPECT_FALSE(r.has_value());
      continue;
    }
    ASSERT_TRUE(r.has_value());
    for (const auto& a : c) {
      EXPECT_TRUE(compatible(*r, a));
      EXPECT_GE(static_cast<int>(r->precision()), static_cast<int>(a.precision()));
    }
    EXPECT_NE(std::find(c.begin(), c.end(), *r), c.end());
  }
}

}  // namespace
}  // namespace quotekg
