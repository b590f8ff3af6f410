#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace quotekg {

/// One Wikiquote language edition on disk.
struct DumpDescriptor {
  std::string language_code;
  std::filesystem::path path;
  std::uint64_t page_count_estimate = 0;
};

/// A main-namespace page as it leaves the dump reader.
struct RawPage {
  std::string title;
  int namespace_id = 0;
  std::string wikitext;
  std::string revision_id;
  std::string language_code;
};

/// Keeps editions with at least `min_pages` pages, never "simple".
/// Order is preserved.
std::vector<DumpDescriptor> select_editions(std::span<const DumpDescriptor> descriptors,
                                            std::uint64_t min_pages);

struct StreamCounters {
  std::uint64_t pages_seen = 0;         // every <page> element
  std::uint64_t non_main_skipped = 0;   // ns != 0
  std::uint64_t redirects_dropped = 0;  // ns == 0 but <redirect/>
  std::uint64_t pages_yielded = 0;
  std::size_t peak_buffered = 0;        // max pages held at once
};

/// Pull-style reader over a MediaWiki XML export (plain or gzip).
///
/// The expat parser is suspended after every completed page, so at most one
/// page is buffered regardless of dump size. Malformed XML raises
/// IngestError with the byte offset; an unreadable file raises IoError.
class PageStream {
 public:
  explicit PageStream(const DumpDescriptor& descriptor);
  ~PageStream();
  PageStream(PageStream&&) noexcept;
  PageStream& operator=(PageStream&&) noexcept;
  PageStream(const PageStream&) = delete;
  PageStream& operator=(const PageStream&) = delete;

  std::optional<RawPage> next();
  const StreamCounters& counters() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::uint64_t count_main_pages(const DumpDescriptor& descriptor);

/// Finds dump files in `dir`. Accepted names are `<lang>wikiquote-*.xml[.gz]`
/// and `<lang>.xml[.gz]`. When `languages` is non-empty only those are kept.
/// Page counts are filled by a counting pass over each dump.
std::vector<DumpDescriptor> discover_dumps(const std::filesystem::path& dir,
                                           std::span<const std::string> languages);

struct SitelinkRecord {
  std::string wikidata_iri;
  std::vector<std::string> dbpedia_iris;
  bool is_human = false;
  std::vector<std::string> type_labels;
};

/// (language, page title) -> identity record, loaded from a TSV file:
///   lang \t title \t wikidata_iri \t is_human(0|1) \t type_labels[,..] [\t dbpedia_iris[,..]]
/// Titles are compared after mapping '_' to ' '.
class SitelinkIndex {
 public:
  static SitelinkIndex load(const std::filesystem::path& path);
  static SitelinkIndex parse(std::istream& in, const std::string& source_name = "<stream>");

  void add(std::string language_code, std::string title, SitelinkRecord record);
  const SitelinkRecord* lookup(std::string_view language_code, std::string_view title) const;
  std::size_t size() const { return records_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, SitelinkRecord> records_;
};

std::string normalize_title(std::string_view title);

bool is_person_page(const RawPage& page, const SitelinkIndex& sitelinks);

}  // namespace quotekg
