#include "quotekg/dump_ingest.hpp"

#include <expat.h>
#include <zlib.h>

#include <algorithm>
#include <deque>
#include <fstream>
#include <regex>

#include "quotekg/errors.hpp"
#include "quotekg/text.hpp"

namespace quotekg {

std::vector<DumpDescriptor> select_editions(std::span<const DumpDescriptor> descriptors,
                                            std::uint64_t min_pages) {
  std::vector<DumpDescriptor> out;
  for (const auto& d : descriptors) {
    if (d.language_code.empty() || d.language_code == "simple") continue;
    if (d.page_count_estimate < min_pages) continue;
    out.push_back(d);
  }
  return out;
}

namespace {

enum class Field { kNone, kTitle, kNs, kRevisionId, kText };

constexpr std::size_t kChunkSize = 1 << 16;

}  // namespace

struct PageStream::Impl {
  DumpDescriptor descriptor;
  gzFile file = nullptr;
  XML_Parser parser = nullptr;
  std::vector<char> chunk = std::vector<char>(kChunkSize);

  std::vector<std::string> path;  // open element names
  Field field = Field::kNone;
  RawPage current;
  std::string ns_text;
  bool redirect = false;
  std::deque<RawPage> ready;

  bool suspended = false;
  bool final_fed = false;
  bool finished = false;
  StreamCounters counters;

  explicit Impl(const DumpDescriptor& d) : descriptor(d) {
    file = gzopen(d.path.c_str(), "rb");
    if (file == nullptr) {
      throw IoError("cannot open dump " + d.path.string());
    }
    gzbuffer(file, 1 << 17);
    parser = XML_ParserCreate("UTF-8");
    XML_SetUserData(parser, this);
    XML_SetElementHandler(parser, &Impl::on_start, &Impl::on_end);
    XML_SetCharacterDataHandler(parser, &Impl::on_chars);
  }

  ~Impl() {
    if (parser != nullptr) XML_ParserFree(parser);
    if (file != nullptr) gzclose(file);
  }

  bool parent_is(std::string_view name) const {
    return path.size() >= 2 && path[path.size() - 2] == name;
  }

  static void on_start(void* data, const XML_Char* name, const XML_Char** /*attrs*/) {
    auto* self = static_cast<Impl*>(data);
    std::string_view n(name);
    self->path.emplace_back(n);
    if (n == "page") {
      self->current = RawPage{};
      self->current.language_code = self->descriptor.language_code;
      self->ns_text.clear();
      self->redirect = false;
    } else if (n == "title" && self->parent_is("page")) {
      self->field = Field::kTitle;
    } else if (n == "ns" && self->parent_is("page")) {
      self->field = Field::kNs;
    } else if (n == "revision" && self->parent_is("page")) {
      // Keep only the last revision of multi-revision exports.
      self->current.revision_id.clear();
      self->current.wikitext.clear();
    } else if (n == "redirect" && self->parent_is("page")) {
      self->redirect = true;
    } else if (n == "id" && self->parent_is("revision")) {
      self->field = Field::kRevisionId;
    } else if (n == "text" && self->parent_is("revision")) {
      self->field = Field::kText;
    }
  }

  static void on_end(void* data, const XML_Char* name) {
    auto* self = static_cast<Impl*>(data);
    std::string_view n(name);
    self->field = Field::kNone;
    if (!self->path.empty()) self->path.pop_back();
    if (n != "page") return;

    ++self->counters.pages_seen;
    auto ns = std::string(text::trim(self->ns_text));
    self->current.namespace_id = ns.empty() ? 0 : std::atoi(ns.c_str());
    if (self->current.namespace_id != 0) {
      ++self->counters.non_main_skipped;
      return;
    }
    if (self->redirect) {
      ++self->counters.redirects_dropped;
      return;
    }
    self->ready.push_back(std::move(self->current));
    self->counters.peak_buffered = std::max(self->counters.peak_buffered, self->ready.size());
    XML_StopParser(self->parser, XML_TRUE);
  }

  static void on_chars(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<Impl*>(data);
    std::string_view chunk(s, static_cast<std::size_t>(len));
    switch (self->field) {
      case Field::kTitle: self->current.title.append(chunk); break;
      case Field::kNs: self->ns_text.append(chunk); break;
      case Field::kRevisionId: self->current.revision_id.append(chunk); break;
      case Field::kText: self->current.wikitext.append(chunk); break;
      case Field::kNone: break;
    }
  }

  void check(XML_Status status) {
    if (status == XML_STATUS_ERROR) {
      auto offset = static_cast<std::int64_t>(XML_GetCurrentByteIndex(parser));
      throw IngestError(std::string("malformed dump XML in ") + descriptor.path.string() + ": " +
                            XML_ErrorString(XML_GetErrorCode(parser)),
                        offset);
    }
    suspended = (status == XML_STATUS_SUSPENDED);
  }

  // Advances the parser until a page is ready or input is exhausted.
  void pump() {
    while (ready.empty() && !finished) {
      if (suspended) {
        check(XML_ResumeParser(parser));
        if (!suspended && final_fed) finished = true;
        continue;
      }
      if (final_fed) {
        finished = true;
        break;
      }
      int n = gzread(file, chunk.data(), static_cast<unsigned>(chunk.size()));
      if (n < 0) {
        int err = 0;
        const char* msg = gzerror(file, &err);
        throw IoError("read error in " + descriptor.path.string() + ": " + (msg ? msg : "?"));
      }
      bool is_final = (n == 0);
      final_fed = is_final;
      check(XML_Parse(parser, chunk.data(), n, is_final ? XML_TRUE : XML_FALSE));
      if (!suspended && final_fed) finished = true;
    }
  }
};

PageStream::PageStream(const DumpDescriptor& descriptor)
    : impl_(std::make_unique<Impl>(descriptor)) {}
PageStream::~PageStream() = default;
PageStream::PageStream(PageStream&&) noexcept = default;
PageStream& PageStream::operator=(PageStream&&) noexcept = default;

std::optional<RawPage> PageStream::next() {
  impl_->pump();
  if (impl_->ready.empty()) return std::nullopt;
  RawPage page = std::move(impl_->ready.front());
  impl_->ready.pop_front();
  ++impl_->counters.pages_yielded;
  return page;
}

const StreamCounters& PageStream::counters() const { return impl_->counters; }

std::uint64_t count_main_pages(const DumpDescriptor& descriptor) {
  PageStream stream(descriptor);
  std::uint64_t n = 0;
  while (stream.next()) ++n;
  return n;
}

std::vector<DumpDescriptor> discover_dumps(const std::filesystem::path& dir,
                                           std::span<const std::string> languages) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw ConfigError("dumps directory does not exist: " + dir.string());
  }
  static const std::regex kName(R"(^([a-z][a-z0-9-]*?)(wikiquote-.*)?\.xml(\.gz)?$)");
  std::vector<DumpDescriptor> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::smatch m;
    std::string name = entry.path().filename().string();
    if (!std::regex_match(name, m, kName)) continue;
    std::string lang = m[1].str();
    std::replace(lang.begin(), lang.end(), '-', '_');
    if (!languages.empty() &&
        std::find(languages.begin(), languages.end(), lang) == languages.end()) {
      continue;
    }
    found.push_back(DumpDescriptor{lang, entry.path(), 0});
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return std::tie(a.language_code, a.path) < std::tie(b.language_code, b.path);
  });
  for (auto& d : found) d.page_count_estimate = count_main_pages(d);
  return found;
}

std::string normalize_title(std::string_view title) {
  std::string t(text::trim(title));
  std::replace(t.begin(), t.end(), '_', ' ');
  return text::collapse_whitespace(t);
}

void SitelinkIndex::add(std::string language_code, std::string title, SitelinkRecord record) {
  records_[{std::move(language_code), normalize_title(title)}] = std::move(record);
}

const SitelinkRecord* SitelinkIndex::lookup(std::string_view language_code,
                                            std::string_view title) const {
  auto it = records_.find({std::string(language_code), normalize_title(title)});
  return it == records_.end() ? nullptr : &it->second;
}

namespace {

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  for (auto& part : text::split(s, ',')) {
    auto t = text::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace

SitelinkIndex SitelinkIndex::parse(std::istream& in, const std::string& source_name) {
  SitelinkIndex index;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line[0] == '#') continue;
    auto cols = text::split(line, '\t');
    if (cols.size() < 4 || cols.size() > 6) {
      throw ConfigError(source_name + ":" + std::to_string(line_no) +
                        ": expected 5 tab-separated columns, got " + std::to_string(cols.size()));
    }
    auto human = text::trim(cols[3]);
    if (human != "0" && human != "1") {
      throw ConfigError(source_name + ":" + std::to_string(line_no) +
                        ": is_human must be 0 or 1");
    }
    SitelinkRecord rec;
    rec.wikidata_iri = std::string(text::trim(cols[2]));
    rec.is_human = human == "1";
    if (cols.size() >= 5) rec.type_labels = split_list(cols[4]);
    if (cols.size() >= 6) rec.dbpedia_iris = split_list(cols[5]);
    index.add(std::string(text::trim(cols[0])), cols[1], std::move(rec));
  }
  return index;
}

SitelinkIndex SitelinkIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read sitelinks file " + path.string());
  return parse(in, path.string());
}

bool is_person_page(const RawPage& page, const SitelinkIndex& sitelinks) {
  const auto* rec = sitelinks.lookup(page.language_code, page.title);
  return rec != nullptr && rec->is_human;
}

}  // namespace quotekg
