#include "quotekg/embedding.hpp"

#include "quotekg/text.hpp"

namespace quotekg {

namespace {

// Boundary markers; neither survives normalization.
constexpr char32_t kBegin = 0x02;
constexpr char32_t kEnd = 0x03;

}  // namespace

std::u32string fallback_normalize(std::string_view text) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t cp : text::decode_utf8(text)) {
    if (text::is_punct(cp) || cp < 0x20) continue;
    if (text::is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(text::to_lower(cp));
  }
  return out;
}

int trigram_bucket(std::u32string_view trigram) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char32_t cp : trigram) {
    for (int shift = 0; shift < 32; shift += 8) {
      h ^= (cp >> shift) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  }
  return static_cast<int>(h % kFallbackDim);
}

EmbeddingVector fallback_embed(std::string_view text) {
  std::u32string padded;
  padded.push_back(kBegin);
  padded += fallback_normalize(text);
  padded.push_back(kEnd);

  EmbeddingVector v{DenseVector<double>::Zero(kFallbackDim), std::string(kFallbackModelTag)};
  if (padded.size() < 3) {
    v.values[trigram_bucket(padded)] += 1.0;
  } else {
    for (size_t i = 0; i + 3 <= padded.size(); ++i) {
      v.values[trigram_bucket(std::u32string_view(padded).substr(i, 3))] += 1.0;
    }
  }
  normalize_in_place(v.values);
  return v;
}

}  // namespace quotekg
