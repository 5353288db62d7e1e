#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexiclass/sparse.hpp"
#include "lexiclass/textnorm.hpp"

namespace lexiclass::features {

struct NgramRange {
  int lo = 1;
  int hi = 1;  // 1 <= lo <= hi <= 2

  friend bool operator==(const NgramRange&, const NgramRange&) = default;
};

/// N-gram term to column-index mapping. Indices are dense and assigned by
/// lexicographic term order, so the same corpus always yields the same map.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Collects all distinct contiguous n-grams (n within range) across the
  /// documents. Bigrams are the two tokens joined by a single space.
  static Vocabulary build(std::span<const textnorm::TokenSeq> docs,
                          NgramRange range);

  std::size_t size() const noexcept { return terms_.size(); }
  NgramRange ngram_range() const noexcept { return range_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  std::optional<std::uint32_t> index_of(const std::string& term) const;

  /// JSON array of terms; index = position.
  std::string to_json() const;
  static Vocabulary from_json(const std::string& text, NgramRange range);

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> index_;
  NgramRange range_{1, 1};
};

/// Occurrence counts of the document's in-vocabulary n-grams;
/// out-of-vocabulary n-grams are ignored.
SparseVector vectorize(const textnorm::TokenSeq& tokens,
                       const Vocabulary& vocab);

SparseMatrix vectorize_all(std::span<const textnorm::TokenSeq> docs,
                           const Vocabulary& vocab);

/// Distinct-token count over total token count; 0 for an empty sequence.
double type_token_ratio(const textnorm::TokenSeq& tokens);

enum class FeatureMode { bow_only, ttr_only, bow_plus_ttr };

std::string feature_mode_name(FeatureMode mode);
FeatureMode feature_mode_from_name(const std::string& name);

/// bow_only: X unchanged. bow_plus_ttr: X with one extra column holding the
/// per-row ratios. ttr_only: single-column matrix of the ratios. Throws
/// Error when a mode needs ratios that are absent or of the wrong length.
SparseMatrix assemble_features(const SparseMatrix& X,
                               const std::optional<std::vector<double>>& ttr,
                               FeatureMode mode);

}  // namespace lexiclass::features
