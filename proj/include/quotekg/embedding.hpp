#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace quotekg {

template <typename Scalar>
using EmbeddingMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A sentence embedding plus the tag of the model that produced it.
template <typename Scalar>
struct BasicEmbedding {
  DenseVector<Scalar> values;
  std::string model_tag;

  Eigen::Index dim() const { return values.size(); }
};

using EmbeddingVector = BasicEmbedding<double>;

inline constexpr int kFallbackDim = 512;
inline constexpr std::string_view kFallbackModelTag = "fallback-trigram-512";

/// Rescales `v` to unit L2 norm. A zero vector is left unchanged.
template <typename Derived>
void normalize_in_place(Eigen::MatrixBase<Derived>& v) {
  const auto n = v.norm();
  if (n > 0) v /= n;
}

/// Cosine similarity; zero when either vector is zero.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& a,
                                 const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar na = a.norm();
  const Scalar nb = b.norm();
  if (na == Scalar(0) || nb == Scalar(0)) return Scalar(0);
  return a.dot(b) / (na * nb);
}

/// Stacks embeddings as rows. All inputs must share one model tag and one
/// dimension; throws std::invalid_argument otherwise.
template <typename Scalar>
EmbeddingMatrix<Scalar> stack_rows(std::span<const BasicEmbedding<Scalar>> vectors) {
  if (vectors.empty()) return EmbeddingMatrix<Scalar>(0, 0);
  const auto dim = vectors.front().dim();
  const auto& tag = vectors.front().model_tag;
  EmbeddingMatrix<Scalar> m(static_cast<Eigen::Index>(vectors.size()), dim);
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].dim() != dim || vectors[i].model_tag != tag) {
      throw std::invalid_argument("embeddings from different models or dimensions cannot be mixed");
    }
    m.row(static_cast<Eigen::Index>(i)) = vectors[i].values.transpose();
  }
  return m;
}

/// Text normalization used by the fallback embedder: lowercase, punctuation
/// removed, whitespace collapsed.
std::u32string fallback_normalize(std::string_view text);

/// Bucket of one character trigram (code points) in [0, kFallbackDim).
int trigram_bucket(std::u32string_view trigram);

/// Offline deterministic embedder: character trigrams of the normalized,
/// boundary-padded text hashed into kFallbackDim buckets, counted, then
/// L2-normalized.
EmbeddingVector fallback_embed(std::string_view text);

}  // namespace quotekg
