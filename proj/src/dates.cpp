#include "quotekg/dates.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "quotekg/text.hpp"

namespace quotekg {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return (m == 2 && is_leap(y)) ? 29 : kDays[m - 1];
}

using MonthTable = std::unordered_map<std::string, int>;

MonthTable make_table(std::initializer_list<std::pair<const char*, int>> entries) {
  MonthTable t;
  for (auto& [name, m] : entries) t.emplace(name, m);
  return t;
}

const std::map<std::string, MonthTable, std::less<>>& month_tables() {
  static const std::map<std::string, MonthTable, std::less<>> tables = {
      {"en", make_table({{"january", 1}, {"february", 2}, {"march", 3}, {"april", 4},
                         {"may", 5}, {"june", 6}, {"july", 7}, {"august", 8},
                         {"september", 9}, {"october", 10}, {"november", 11}, {"december", 12},
                         {"jan", 1}, {"feb", 2}, {"mar", 3}, {"apr", 4}, {"jun", 6},
                         {"jul", 7}, {"aug", 8}, {"sep", 9}, {"sept", 9}, {"oct", 10},
                         {"nov", 11}, {"dec", 12}})},
      {"de", make_table({{"januar", 1}, {"jänner", 1}, {"februar", 2}, {"märz", 3},
                         {"april", 4}, {"mai", 5}, {"juni", 6}, {"juli", 7},
                         {"august", 8}, {"september", 9}, {"oktober", 10},
                         {"november", 11}, {"dezember", 12}, {"jan", 1}, {"feb", 2},
                         {"mär", 3}, {"apr", 4}, {"jun", 6}, {"jul", 7}, {"aug", 8},
                         {"sep", 9}, {"sept", 9}, {"okt", 10}, {"nov", 11}, {"dez", 12}})},
      {"fr", make_table({{"janvier", 1}, {"février", 2}, {"mars", 3}, {"avril", 4},
                         {"mai", 5}, {"juin", 6}, {"juillet", 7}, {"août", 8},
                         {"septembre", 9}, {"octobre", 10}, {"novembre", 11},
                         {"décembre", 12}, {"janv", 1}, {"févr", 2}, {"fév", 2},
                         {"avr", 4}, {"juil", 7}, {"sept", 9}, {"oct", 10},
                         {"nov", 11}, {"déc", 12}})},
      {"it", make_table({{"gennaio", 1}, {"febbraio", 2}, {"marzo", 3}, {"aprile", 4},
                         {"maggio", 5}, {"giugno", 6}, {"luglio", 7}, {"agosto", 8},
                         {"settembre", 9}, {"ottobre", 10}, {"novembre", 11},
                         {"dicembre", 12}})},
      {"hr", make_table({{"siječanj", 1}, {"veljača", 2}, {"ožujak", 3}, {"travanj", 4},
                         {"svibanj", 5}, {"lipanj", 6}, {"srpanj", 7}, {"kolovoz", 8},
                         {"rujan", 9}, {"listopad", 10}, {"studeni", 11}, {"prosinac", 12},
                         {"siječnja", 1}, {"veljače", 2}, {"ožujka", 3}, {"travnja", 4},
                         {"svibnja", 5}, {"lipnja", 6}, {"srpnja", 7}, {"kolovoza", 8},
                         {"rujna", 9}, {"listopada", 10}, {"studenoga", 11},
                         {"studenog", 11}, {"prosinca", 12}})},
      {"cy", make_table({{"ionawr", 1}, {"chwefror", 2}, {"mawrth", 3}, {"ebrill", 4},
                         {"mai", 5}, {"mehefin", 6}, {"gorffennaf", 7}, {"awst", 8},
                         {"medi", 9}, {"hydref", 10}, {"tachwedd", 11}, {"rhagfyr", 12}})},
      {"es", make_table({{"enero", 1}, {"febrero", 2}, {"marzo", 3}, {"abril", 4},
                         {"mayo", 5}, {"junio", 6}, {"julio", 7}, {"agosto", 8},
                         {"septiembre", 9}, {"setiembre", 9}, {"octubre", 10},
                         {"noviembre", 11}, {"diciembre", 12}})},
  };
  return tables;
}

std::optional<int> month_of(std::string_view word, std::string_view lang) {
  auto lower = text::to_lower(word);
  const auto& tables = month_tables();
  if (auto it = tables.find(lang); it != tables.end()) {
    if (auto m = it->second.find(lower); m != it->second.end()) return m->second;
  }
  const auto& en = tables.find("en")->second;
  if (auto m = en.find(lower); m != en.end()) return m->second;
  return std::nullopt;
}

enum class TokKind { kNumber, kWord, kMixed, kPunct };

struct Token {
  TokKind kind;
  std::string text;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  auto cps = text::decode_utf8(s);
  size_t i = 0;
  while (i < cps.size()) {
    char32_t c = cps[i];
    if (text::is_space(c)) {
      ++i;
      continue;
    }
    if (text::is_alnum(c)) {
      size_t j = i;
      bool digits = false;
      bool letters = false;
      while (j < cps.size() && text::is_alnum(cps[j])) {
        (cps[j] >= '0' && cps[j] <= '9') ? digits = true : letters = true;
        ++j;
      }
      TokKind kind = digits && letters ? TokKind::kMixed : (digits ? TokKind::kNumber : TokKind::kWord);
      out.push_back({kind, text::encode_utf8(std::u32string_view(cps).substr(i, j - i))});
      i = j;
      continue;
    }
    std::string p;
    text::append_utf8(p, c);
    out.push_back({TokKind::kPunct, std::move(p)});
    ++i;
  }
  return out;
}

std::optional<int> as_number(const Token& t, size_t min_len, size_t max_len) {
  if (t.kind != TokKind::kNumber || t.text.size() < min_len || t.text.size() > max_len) {
    return std::nullopt;
  }
  int v = 0;
  std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  return v;
}

std::optional<int> as_year(const Token& t) {
  auto v = as_number(t, 4, 4);
  if (v && *v >= 1000 && *v <= 2999) return v;
  return std::nullopt;
}

std::optional<int> as_day(const Token& t) {
  auto v = as_number(t, 1, 2);
  if (v && *v >= 1 && *v <= 31) return v;
  return std::nullopt;
}

bool is_punct(const Token& t, std::string_view p) { return t.kind == TokKind::kPunct && t.text == p; }

class DateScanner {
 public:
  DateScanner(std::vector<Token> tokens, std::string_view lang)
      : toks_(std::move(tokens)), lang_(lang) {}

  std::vector<PartialDate> scan() {
    std::vector<PartialDate> out;
    size_t i = 0;
    while (i < toks_.size()) {
      size_t used = 0;
      if (auto d = match_at(i, used)) {
        if (d->valid()) out.push_back(*d);
        i += used;
      } else {
        ++i;
      }
    }
    return out;
  }

 private:
  const Token* at(size_t i) const { return i < toks_.size() ? &toks_[i] : nullptr; }

  std::optional<int> month_at(size_t i) const {
    const Token* t = at(i);
    if (t == nullptr || t->kind != TokKind::kWord) return std::nullopt;
    return month_of(t->text, lang_);
  }

  // Skips one optional punctuation token from `allowed`.
  size_t skip(size_t i, std::string_view allowed) const {
    const Token* t = at(i);
    if (t != nullptr && t->kind == TokKind::kPunct && allowed.find(t->text) != std::string_view::npos) {
      return i + 1;
    }
    return i;
  }

  std::optional<PartialDate> match_at(size_t i, size_t& used) const {
    const Token* t0 = at(i);
    // YYYY-MM-DD
    if (auto y = as_year(*t0)) {
      const Token* t1 = at(i + 1);
      const Token* t2 = at(i + 2);
      const Token* t3 = at(i + 3);
      const Token* t4 = at(i + 4);
      if (t1 && t2 && t3 && t4 && is_punct(*t1, "-") && is_punct(*t3, "-")) {
        auto m = as_number(*t2, 2, 2);
        auto d = as_number(*t4, 2, 2);
        if (m && d) {
          used = 5;
          return PartialDate::of_day(*y, *m, *d);
        }
      }
      // YYYY, Mon D
      size_t j = skip(i + 1, ",");
      if (auto m = month_at(j)) {
        size_t k = skip(j + 1, ".");
        if (const Token* td = at(k); td && as_day(*td)) {
          used = k + 1 - i;
          return PartialDate::of_day(*y, *m, *as_day(*td));
        }
      }
      used = 1;
      return PartialDate::of_year(*y);
    }
    // D[.] Month YYYY
    if (auto d = as_day(*t0)) {
      size_t j = skip(i + 1, ".");
      if (auto m = month_at(j)) {
        size_t k = skip(j + 1, ".,");
        if (const Token* ty = at(k); ty && as_year(*ty)) {
          used = k + 1 - i;
          return PartialDate::of_day(*as_year(*ty), *m, *d);
        }
      }
      return std::nullopt;
    }
    // Month D, YYYY  |  Month YYYY
    if (auto m = month_at(i)) {
      size_t j = skip(i + 1, ".");
      if (const Token* td = at(j); td && as_day(*td)) {
        size_t k = skip(j + 1, ",");
        if (const Token* ty = at(k); ty && as_year(*ty)) {
          used = k + 1 - i;
          return PartialDate::of_day(*as_year(*ty), *m, *as_day(*td));
        }
      }
      size_t k = skip(j, ",");
      if (const Token* ty = at(k); ty && as_year(*ty)) {
        used = k + 1 - i;
        return PartialDate::of_month(*as_year(*ty), *m);
      }
    }
    return std::nullopt;
  }

  std::vector<Token> toks_;
  std::string lang_;
};

}  // namespace

bool PartialDate::valid() const {
  if (year < 1000 || year > 2999) return false;
  if (day && !month) return false;
  if (month && (*month < 1 || *month > 12)) return false;
  if (day && (*day < 1 || *day > days_in_month(year, *month))) return false;
  return true;
}

std::string PartialDate::iso() const {
  char buf[16];
  if (day) {
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, *month, *day);
  } else if (month) {
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, *month);
  } else {
    std::snprintf(buf, sizeof buf, "%04d", year);
  }
  return buf;
}

std::optional<PartialDate> PartialDate::from_iso(std::string_view s) {
  int y = 0;
  int m = 0;
  int d = 0;
  PartialDate out;
  std::string str(s);
  if (s.size() == 10 && std::sscanf(str.c_str(), "%4d-%2d-%2d", &y, &m, &d) == 3) {
    out = of_day(y, m, d);
  } else if (s.size() == 7 && std::sscanf(str.c_str(), "%4d-%2d", &y, &m) == 2) {
    out = of_month(y, m);
  } else if (s.size() == 4 && std::sscanf(str.c_str(), "%4d", &y) == 1) {
    out = of_year(y);
  } else {
    return std::nullopt;
  }
  if (!out.valid()) return std::nullopt;
  return out;
}

bool compatible(const PartialDate& a, const PartialDate& b) {
  if (a.year != b.year) return false;
  if (a.month && b.month && *a.month != *b.month) return false;
  if (a.day && b.day && *a.day != *b.day) return false;
  return true;
}

std::optional<PartialDate> resolve_dates(std::span<const PartialDate> candidates) {
  if (candidates.empty()) return std::nullopt;
  for (size_t i = 0; i < candidates.size(); ++i) {
    for (size_t j = i + 1; j < candidates.size(); ++j) {
      if (!compatible(candidates[i], candidates[j])) return std::nullopt;
    }
  }
  const PartialDate* best = &candidates.front();
  for (const auto& c : candidates) {
    if (c.precision() > best->precision()) best = &c;
  }
  return *best;
}

std::vector<PartialDate> find_dates(std::string_view text, std::string_view language_code) {
  return DateScanner(tokenize(text), language_code).scan();
}

}  // namespace quotekg
