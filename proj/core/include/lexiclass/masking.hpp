#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexiclass/features.hpp"
#include "lexiclass/sparse.hpp"
#include "lexiclass/textnorm.hpp"

namespace lexiclass::masking {

/// word -> set of morphological variants, all normalized tokens.
using VariantMap = std::map<std::string, std::set<std::string>>;

/// Shipped variant entries covering the nominal/verbal pairs of the common
/// ruling words; user lexicons extend or replace these.
VariantMap default_variant_map();

/// Lexicon file format: JSON object mapping word -> [variants].
std::string variant_map_to_json(const VariantMap& map);
VariantMap variant_map_from_json(const std::string& text);

struct MaskLexicon {
  std::set<std::string> forbidden;  // normalized tokens
  VariantMap variant_map;
};

struct LexiconBuild {
  MaskLexicon lexicon;
  std::vector<std::string> warnings;  // variant keys matching no label word
};

/// forbidden = every word of every label plus every variant listed in the
/// map. A map entry keyed by a word that appears in no label still
/// contributes its variants but is reported in warnings.
LexiconBuild build_mask_lexicon(const std::set<std::string>& labels,
                                const VariantMap& variant_map);

/// Removes every forbidden token; survivor order preserved. Runs on unigram
/// tokens, so later n-gram construction can never recombine a masked word.
textnorm::TokenSeq apply_mask(const textnorm::TokenSeq& tokens,
                              const MaskLexicon& lexicon);

/// One-way ANOVA F statistic per feature column over the class groupings in
/// y (any integer ids; absent sparse entries count as 0). Columns with zero
/// between-class variance score 0; zero within-class variance with positive
/// between-class variance scores +infinity. Throws Error on a single class
/// or when instances do not outnumber classes.
std::vector<double> anova_f_scores(const SparseMatrix& X,
                                   std::span<const int> y);

struct MaskAuditReport {
  /// k highest-F n-grams, F descending, ties by vocabulary order. +infinity
  /// serializes as the JSON string "inf".
  std::vector<std::pair<std::string, double>> top_features;
  /// top_features entries containing a forbidden token as a
  /// whitespace-delimited component.
  std::vector<std::string> violations;

  std::string to_json() const;
};

MaskAuditReport audit_masking(const SparseMatrix& X, std::span<const int> y,
                              const features::Vocabulary& vocab,
                              const MaskLexicon& lexicon, std::size_t k = 20);

}  // namespace lexiclass::masking
