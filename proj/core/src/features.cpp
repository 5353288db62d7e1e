#include "lexiclass/features.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "lexiclass/errors.hpp"

namespace lexiclass::features {

using nlohmann::json;

namespace {

void check_range(NgramRange range) {
  if (range.lo < 1 || range.hi < range.lo || range.hi > 2) {
    throw ConfigError("ngram range must satisfy 1 <= lo <= hi <= 2");
  }
}

template <class Fn>
void for_each_ngram(const textnorm::TokenSeq& tokens, NgramRange range,
                    Fn&& fn) {
  for (int n = range.lo; n <= range.hi; ++n) {
    if (tokens.size() < static_cast<std::size_t>(n)) continue;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      if (n == 1) {
        fn(tokens[i]);
      } else {
        fn(tokens[i] + ' ' + tokens[i + 1]);
      }
    }
  }
}

}  // namespace

Vocabulary Vocabulary::build(std::span<const textnorm::TokenSeq> docs,
                             NgramRange range) {
  check_range(range);
  std::set<std::string> terms;
  for (const auto& tokens : docs) {
    for_each_ngram(tokens, range,
                   [&](const std::string& term) { terms.insert(term); });
  }
  Vocabulary v;
  v.range_ = range;
  v.terms_.assign(terms.begin(), terms.end());
  v.index_.reserve(v.terms_.size());
  for (std::size_t i = 0; i < v.terms_.size(); ++i) {
    v.index_.emplace(v.terms_[i], static_cast<std::uint32_t>(i));
  }
  return v;
}

std::optional<std::uint32_t> Vocabulary::index_of(
    const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::to_json() const { return json(terms_).dump(); }

Vocabulary Vocabulary::from_json(const std::string& text, NgramRange range) {
  check_range(range);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(1, std::string("invalid vocabulary JSON: ") + e.what());
  }
  if (!j.is_array()) throw ParseError(1, "vocabulary JSON must be an array");
  Vocabulary v;
  v.range_ = range;
  for (const auto& elem : j) {
    if (!elem.is_string()) {
      throw ParseError(1, "vocabulary entries must be strings");
    }
    v.terms_.push_back(elem.get<std::string>());
  }
  for (std::size_t i = 0; i < v.terms_.size(); ++i) {
    if (!v.index_.emplace(v.terms_[i], static_cast<std::uint32_t>(i)).second) {
      throw ParseError(1, "duplicate vocabulary term: " + v.terms_[i]);
    }
  }
  return v;
}

SparseVector vectorize(const textnorm::TokenSeq& tokens,
                       const Vocabulary& vocab) {
  std::map<std::uint32_t, double> counts;
  for_each_ngram(tokens, vocab.ngram_range(), [&](const std::string& term) {
    if (auto idx = vocab.index_of(term)) counts[*idx] += 1.0;
  });
  std::vector<SparseEntry> entries;
  entries.reserve(counts.size());
  for (const auto& [idx, count] : counts) entries.push_back({idx, count});
  return SparseVector(vocab.size(), std::move(entries));
}

SparseMatrix vectorize_all(std::span<const textnorm::TokenSeq> docs,
                           const Vocabulary& vocab) {
  std::vector<SparseVector> rows;
  rows.reserve(docs.size());
  for (const auto& tokens : docs) rows.push_back(vectorize(tokens, vocab));
  return SparseMatrix::from_rows(vocab.size(), rows);
}

double type_token_ratio(const textnorm::TokenSeq& tokens) {
  if (tokens.empty()) return 0.0;
  std::set<std::string_view> distinct(tokens.begin(), tokens.end());
  return static_cast<double>(distinct.size()) /
         static_cast<double>(tokens.size());
}

std::string feature_mode_name(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::bow_only: return "bow";
    case FeatureMode::ttr_only: return "ttr";
    case FeatureMode::bow_plus_ttr: return "bow+ttr";
  }
  return "?";
}

FeatureMode feature_mode_from_name(const std::string& name) {
  if (name == "bow") return FeatureMode::bow_only;
  if (name == "ttr") return FeatureMode::ttr_only;
  if (name == "bow+ttr") return FeatureMode::bow_plus_ttr;
  throw ConfigError("unknown feature mode: " + name);
}

SparseMatrix assemble_features(const SparseMatrix& X,
                               const std::optional<std::vector<double>>& ttr,
                               FeatureMode mode) {
  if (mode == FeatureMode::bow_only) return X;
  if (!ttr) throw Error("feature mode needs type-token ratios");
  if (ttr->size() != X.rows()) {
    throw Error("type-token ratio count does not match row count");
  }
  if (mode == FeatureMode::bow_plus_ttr) return X.append_column(*ttr);

  std::vector<SparseVector> rows;
  rows.reserve(ttr->size());
  for (double v : *ttr) {
    std::vector<SparseEntry> entries;
    if (v != 0.0) entries.push_back({0, v});
    rows.emplace_back(1, std::move(entries));
  }
  return SparseMatrix::from_rows(1, rows);
}

}  // namespace lexiclass::features
