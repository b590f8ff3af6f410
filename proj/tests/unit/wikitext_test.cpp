#include <gtest/gtest.h>

#include <map>
#include <random>

#include "quotekg/text.hpp"
#include "quotekg/wikitext.hpp"
#include "test_util.hpp"
#include "wikitext_gen.hpp"

namespace quotekg {
namespace {

const std::string kFallingInLove =
    "Falling in love is not at all the most stupid thing that people do — but gravitation "
    "cannot be held responsible for it.";
const std::string kTomber =
    "Tomber amoureux n'est pas du tout la chose la plus stupide que font les gens — mais la "
    "gravitation ne peut en être tenue pour responsable.";

const Section& only_section(const PageTree& t) {
  EXPECT_EQ(t.root.size(), 1u);
  return *t.root.at(0).as<Section>();
}

TEST(ParseWikitext, UntemplatedQuoteListItem) {
  auto tree = parse_wikitext(testing::read_file(testing::fixture("wikitext/falling_in_love_en.wiki")));
  const Section& s = only_section(tree);
  EXPECT_EQ(s.title, "Quotes");
  ASSERT_EQ(s.children.size(), 1u);
  const auto* item = s.children[0].as<ListItem>();
  ASSERT_NE(item, nullptr);
  EXPECT_EQ(item->depth, 1);
  ASSERT_EQ(item->content.size(), 1u);
  const auto* text = std::get_if<Text>(&item->content[0]);
  ASSERT_NE(text, nullptr);
  EXPECT_TRUE(text->bold);
  EXPECT_EQ(text->value, kFallingInLove);
  ASSERT_EQ(item->children.size(), 1u);
  const auto* child = item->children[0].as<ListItem>();
  ASSERT_NE(child, nullptr);
  EXPECT_EQ(child->depth, 2);
  EXPECT_TRUE(strip_markup(child->content).starts_with("Jotted (in German) on the margins"));
}

TEST(ParseWikitext, CitationTemplate) {
  auto tree = parse_wikitext(testing::read_file(testing::fixture("wikitext/citation_fr.wiki")));
  const Section& s = only_section(tree);
  ASSERT_GE(s.children.size(), 1u);
  const auto* t = s.children[0].as<Template>();
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->name, "Citation");
  ASSERT_EQ(t->params.size(), 3u);
  EXPECT_EQ(t->params[0].key, "1");
  EXPECT_EQ(strip_markup(t->params[0].value), kTomber);
  EXPECT_EQ(t->params[1].key, "original");
  EXPECT_EQ(strip_markup(t->params[1].value), kFallingInLove);
  EXPECT_EQ(t->params[2].key, "langue");
  EXPECT_EQ(strip_markup(t->params[2].value), "en");
}

TEST(ParseWikitext, EmptyInput) {
  auto tree = parse_wikitext("");
  EXPECT_TRUE(tree.root.empty());
}

TEST(ParsePage, CarriesTitleAndLanguage) {
  auto tree = parse_page(RawPage{"Albert Einstein", 0, "== Quotes ==\n* x\n", "1", "en"});
  EXPECT_EQ(tree.page_title, "Albert Einstein");
  EXPECT_EQ(tree.language_code, "en");
}

TEST(StripMarkup, BoldQuoteBody) {
  InlineList in{Text{kFallingInLove, true, false}};
  EXPECT_EQ(strip_markup(in), kFallingInLove);
}

TEST(StripMarkup, LinkRendersAnchor) {
  InlineList in{InternalLink{"Albert Einstein", "Einstein"}};
  EXPECT_EQ(strip_markup(in), "Einstein");
}

TEST(StripMarkup, Empty) { EXPECT_EQ(strip_markup(InlineList{}), ""); }

TEST(StripMarkup, DropsReferencesAndCollapsesSpace) {
  InlineList in{Text{"a  b"}, Reference{"[http://x.org src]"}, Text{"\n c"}};
  EXPECT_EQ(strip_markup(in), "a b c");
}

TEST(TemplateValue, CitationKeys) {
  auto tree = parse_wikitext(testing::read_file(testing::fixture("wikitext/citation_fr.wiki")));
  const auto* t = only_section(tree).children[0].as<Template>();
  ASSERT_NE(t, nullptr);
  std::vector<std::string> original{"original"};
  std::vector<std::string> langue{"langue"};
  EXPECT_EQ(template_value(*t, original), kFallingInLove);
  EXPECT_EQ(template_value(*t, langue), "en");
  EXPECT_EQ(template_value(*t, std::vector<std::string>{}), std::nullopt);
  std::vector<std::string> spaced{" Langue "};
  EXPECT_EQ(template_value(*t, spaced), "en");
}

TEST(ParseInline, Links) {
  auto in = parse_inline("see [[Max Planck|Planck]] and [https://example.org/a site]");
  std::vector<InternalLink> internal;
  std::vector<ExternalLink> external;
  for (const auto& x : in) {
    if (auto* l = std::get_if<InternalLink>(&x)) internal.push_back(*l);
    if (auto* l = std::get_if<ExternalLink>(&x)) external.push_back(*l);
  }
  ASSERT_EQ(internal.size(), 1u);
  EXPECT_EQ(internal[0].target, "Max Planck");
  EXPECT_EQ(internal[0].anchor, "Planck");
  ASSERT_EQ(external.size(), 1u);
  EXPECT_EQ(external[0].url, "https://example.org/a");
  EXPECT_EQ(external[0].anchor, "site");
}

TEST(ParseWikitext, NestedSections) {
  auto tree = parse_wikitext("== A ==\n=== B ===\n* q\n== C ==\n* r\n");
  ASSERT_EQ(tree.root.size(), 2u);
  const auto* a = tree.root[0].as<Section>();
  ASSERT_NE(a, nullptr);
  ASSERT_EQ(a->children.size(), 1u);
  const auto* b = a->children[0].as<Section>();
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->level, 3);
  EXPECT_EQ(b->title, "B");
}

// Every character outside markup syntax must reappear in the tree text.
std::map<char32_t, int> letter_counts(std::string_view s) {
  std::map<char32_t, int> out;
  for (char32_t c : text::decode_utf8(s))
    if (text::is_alnum(c)) ++out[c];
  return out;
}

void collect_text(const std::vector<Node>& nodes, std::string& out) {
  for (const auto& n : nodes) {
    if (const auto* s = n.as<Section>()) {
      out += s->title + "\n";
      collect_text(s->children, out);
    } else if (const auto* li = n.as<ListItem>()) {
      out += strip_markup(li->content) + "\n";
      collect_text(li->children, out);
    } else if (const auto* p = n.as<Paragraph>()) {
      out += strip_markup(p->content) + "\n";
    }
  }
}

TEST(ParseWikitext, ReconstructionKeepsEveryLetterOnce) {
  for (const char* src : {
           "== Quotes ==\n* '''Bold''' and ''italic'' words\n** context 1933\n",
           "Intro paragraph.\n== Zitate ==\n* Wir schaffen das.\n*** deep item\n=== Sub ===\n* x\n",
       }) {
    std::string out;
    collect_text(parse_wikitext(src).root, out);
    EXPECT_EQ(letter_counts(out), letter_counts(src)) << src;
  }
  auto fig = testing::read_file(testing::fixture("wikitext/falling_in_love_en.wiki"));
  std::string out;
  collect_text(parse_wikitext(fig).root, out);
  EXPECT_EQ(letter_counts(out), letter_counts(fig));
}

void check_nesting(const std::vector<Node>& nodes) {
  for (const auto& n : nodes) {
    if (const auto* s = n.as<Section>()) check_nesting(s->children);
    if (const auto* li = n.as<ListItem>()) {
      for (const auto& c : li->children)
        if (const auto* ci = c.as<ListItem>()) {
          EXPECT_EQ(ci->depth, li->depth + 1);
        }
      check_nesting(li->children);
    }
  }
}

TEST(ParseWikitextFuzz, TenThousandRandomInputs) {
  std::mt19937_64 rng(20221013);
  for (int i = 0; i < 10000; ++i) {
    const std::string src = testing::random_wikitext(rng);
    PageTree a = parse_wikitext(src, "T", "en");
    PageTree b = parse_wikitext(src, "T", "en");
    ASSERT_EQ(a.root, b.root) << "non-deterministic on input #" << i;
    check_nesting(a.root);
  }
}

}  // namespace
}  // namespace quotekg
