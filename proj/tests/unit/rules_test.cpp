#include <gtest/gtest.h>

#include "quotekg/errors.hpp"
#include "quotekg/rules.hpp"
#include "test_util.hpp"

namespace quotekg {
namespace {

LanguageRuleSet en_rules() {
  return load_rules(R"(
language: en
quote_section_titles: [Quotes, Sourced]
misattributed_section_patterns: ["(?i)misattributed"]
about_section_patterns: ["Quotes about .*"]
)").at("en");
}

TEST(LoadRules, EnglishRuleset) {
  auto r = en_rules();
  EXPECT_EQ(r.language_code, "en");
  EXPECT_EQ(r.quote_section_titles, (std::vector<std::string>{"Quotes", "Sourced"}));
  ASSERT_EQ(r.misattributed_section_patterns.size(), 1u);
}

TEST(LoadRules, GermanAboutPattern) {
  auto book = load_rules("language: de\nquote_section_titles: [Zitate]\n"
                         "about_section_patterns: [\"Zitate mit Bezug auf.*\"]\n");
  EXPECT_EQ(classify_section("Zitate mit Bezug auf Albert Einstein", book.at("de")),
            SectionKind::kAbout);
}

TEST(LoadRules, BadRegexNamesPattern) {
  try {
    load_rules("language: en\nquote_section_titles: [Quotes]\nmisattributed_section_patterns: [\"(\"]\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'('"), std::string::npos) << e.what();
  }
}

TEST(LoadRules, UnknownKeyAndMissingLanguage) {
  EXPECT_THROW(load_rules("language: en\nquote_section_titles: [Q]\nbogus: 1\n"), ConfigError);
  EXPECT_THROW(load_rules("quote_section_titles: [Q]\n"), ConfigError);
  EXPECT_THROW(load_rules("language: en\n"), ConfigError);
}

TEST(LoadRules, DuplicateLanguageRejected) {
  EXPECT_THROW(load_rules("language: en\nquote_section_titles: [Q]\n---\n"
                          "language: en\nquote_section_titles: [R]\n"),
               ConfigError);
}

TEST(ClassifySection, Examples) {
  auto r = en_rules();
  EXPECT_EQ(classify_section("Misattributed", r), SectionKind::kMisattributed);
  EXPECT_EQ(classify_section("Quotes about Albert Einstein", r), SectionKind::kAbout);
  EXPECT_EQ(classify_section("Weblinks", r), SectionKind::kOther);
  EXPECT_EQ(classify_section("  quotes ", r), SectionKind::kQuotes);
}

TEST(ClassifySection, PrecedenceOnDoubleMatch) {
  auto r = load_rules(R"(
language: en
quote_section_titles: [Misattributed quotes, Notes]
context_section_titles: [Notes, Quotes about you]
misattributed_section_patterns: ["(?i)misattributed"]
about_section_patterns: ["(?i)^quotes about"]
)").at("en");
  EXPECT_EQ(classify_section("Misattributed quotes", r), SectionKind::kMisattributed);
  EXPECT_EQ(classify_section("Quotes about you", r), SectionKind::kAbout);
  EXPECT_EQ(classify_section("Notes", r), SectionKind::kQuotes);
}

TEST(ShippedRules, CoverRequiredEditions) {
  auto book = load_rules_file(testing::source_path("data/rules.yaml"));
  for (const char* lang : {"en", "de", "fr", "it", "hr"}) {
    ASSERT_TRUE(book.contains(lang)) << lang;
    EXPECT_FALSE(book.at(lang).quote_section_titles.empty()) << lang;
  }
  EXPECT_EQ(classify_section("Zitate", book.at("de")), SectionKind::kQuotes);
  EXPECT_EQ(classify_section("Citations", book.at("fr")), SectionKind::kQuotes);
  EXPECT_EQ(classify_section("Citazioni", book.at("it")), SectionKind::kQuotes);
  EXPECT_EQ(classify_section("Fälschlich zugeschrieben", book.at("de")),
            SectionKind::kMisattributed);
  EXPECT_EQ(classify_section("Zitate mit Bezug auf Albert Einstein", book.at("de")),
            SectionKind::kAbout);
  EXPECT_EQ(classify_section("útskýring", book.at("is")), SectionKind::kContext);
  EXPECT_EQ(classify_section("Viitattu", book.at("fi")), SectionKind::kContext);
  EXPECT_EQ(classify_section("vydavatel", book.at("cs")), SectionKind::kContext);
  EXPECT_TRUE(book.at("fr").is_quote_template("citation"));
}

TEST(ClassifySection, TotalOnArbitraryTitles) {
  auto r = en_rules();
  for (const char* t : {"", " ", "(", "\xff\xfe", "== x ==", "Quotes about"})
    EXPECT_NO_THROW(classify_section(t, r));
}

}  // namespace
}  // namespace quotekg
