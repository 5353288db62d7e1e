#include "lexiclass/masking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "lexiclass/errors.hpp"

namespace lexiclass::masking {

using nlohmann::json;

VariantMap default_variant_map() {
  return {
      {"cassation", {"casse", "cassee", "casser", "cassent"}},
      {"rejet", {"rejete", "rejetee", "rejettent", "rejeter"}},
      {"annulation", {"annule", "annulee", "annuler"}},
      {"irrecevabilite", {"irrecevable", "irrecevables"}},
  };
}

std::string variant_map_to_json(const VariantMap& map) {
  json j = json::object();
  for (const auto& [word, variants] : map) j[word] = variants;
  return j.dump(2);
}

VariantMap variant_map_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(1, std::string("invalid lexicon JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ParseError(1, "lexicon JSON must map word -> [variants]");
  }
  VariantMap map;
  for (const auto& [word, variants] : j.items()) {
    if (!variants.is_array()) {
      throw ParseError(1, "lexicon entry \"" + word + "\" must be an array");
    }
    auto& dst = map[textnorm::normalize(word)];
    for (const auto& v : variants) {
      if (!v.is_string()) {
        throw ParseError(1, "lexicon variants must be strings");
      }
      dst.insert(textnorm::normalize(v.get<std::string>()));
    }
  }
  return map;
}

LexiconBuild build_mask_lexicon(const std::set<std::string>& labels,
                                const VariantMap& variant_map) {
  LexiconBuild out;
  out.lexicon.variant_map = variant_map;

  std::set<std::string> label_words;
  for (const std::string& label : labels) {
    for (const std::string& word :
         textnorm::tokenize(textnorm::normalize(label))) {
      label_words.insert(word);
    }
  }
  out.lexicon.forbidden = label_words;
  for (const auto& [word, variants] : variant_map) {
    const std::string key = textnorm::normalize(word);
    if (!label_words.count(key)) {
      out.warnings.push_back("variant entry \"" + key +
                             "\" matches no label word");
    }
    for (const std::string& v : variants) {
      out.lexicon.forbidden.insert(textnorm::normalize(v));
    }
  }
  out.lexicon.forbidden.erase("");
  return out;
}

textnorm::TokenSeq apply_mask(const textnorm::TokenSeq& tokens,
                              const MaskLexicon& lexicon) {
  textnorm::TokenSeq out;
  out.reserve(tokens.size());
  for (const std::string& tok : tokens) {
    if (!lexicon.forbidden.count(tok)) out.push_back(tok);
  }
  return out;
}

std::vector<double> anova_f_scores(const SparseMatrix& X,
                                   std::span<const int> y) {
  const std::size_t n = X.rows();
  const std::size_t cols = X.cols();
  if (y.size() != n) throw Error("label count does not match row count");

  std::unordered_map<int, std::size_t> group_of;
  std::vector<double> group_sizes;
  for (int label : y) {
    if (group_of.emplace(label, group_sizes.size()).second) {
      group_sizes.push_back(0.0);
    }
    group_sizes[group_of[label]] += 1.0;
  }
  const std::size_t k = group_sizes.size();
  if (k < 2) throw Error("ANOVA needs at least 2 classes");
  if (n <= k) throw Error("ANOVA needs more instances than classes");

  // Per (column, group) sums and sums of squares; absent entries are zeros
  // and contribute nothing to either accumulator.
  std::vector<double> sums(cols * k, 0.0);
  std::vector<double> sumsqs(cols * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t g = group_of[y[i]];
    for (const SparseEntry& e : X.row(i)) {
      sums[e.index * k + g] += e.value;
      sumsqs[e.index * k + g] += e.value * e.value;
    }
  }

  std::vector<double> f(cols, 0.0);
  const double df_between = static_cast<double>(k - 1);
  const double df_within = static_cast<double>(n - k);
  for (std::size_t c = 0; c < cols; ++c) {
    double total_sum = 0.0, total_sumsq = 0.0;
    for (std::size_t g = 0; g < k; ++g) {
      total_sum += sums[c * k + g];
      total_sumsq += sumsqs[c * k + g];
    }
    const double grand_mean = total_sum / static_cast<double>(n);
    double ss_between = 0.0, ss_within = 0.0;
    for (std::size_t g = 0; g < k; ++g) {
      const double mean = sums[c * k + g] / group_sizes[g];
      const double d = mean - grand_mean;
      ss_between += group_sizes[g] * d * d;
      ss_within += sumsqs[c * k + g] - group_sizes[g] * mean * mean;
    }
    ss_within = std::max(ss_within, 0.0);
    if (ss_between <= 0.0) {
      f[c] = 0.0;
    } else if (ss_within == 0.0) {
      f[c] = std::numeric_limits<double>::infinity();
    } else {
      f[c] = (ss_between / df_between) / (ss_within / df_within);
    }
  }
  return f;
}

MaskAuditReport audit_masking(const SparseMatrix& X, std::span<const int> y,
                              const features::Vocabulary& vocab,
                              const MaskLexicon& lexicon, std::size_t k) {
  if (vocab.size() != X.cols()) {
    throw Error("vocabulary size does not match column count");
  }
  const std::vector<double> f = anova_f_scores(X, y);

  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
  // Terms are stored in lexicographic order, so equal scores already tie
  // break by vocabulary order under the stable sort.

  MaskAuditReport report;
  const std::size_t take = std::min(k, order.size());
  report.top_features.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    const std::string& term = vocab.terms()[order[i]];
    report.top_features.emplace_back(term, f[order[i]]);
    for (const std::string& word : textnorm::tokenize(term)) {
      if (lexicon.forbidden.count(word)) {
        report.violations.push_back(term);
        break;
      }
    }
  }
  return report;
}

std::string MaskAuditReport::to_json() const {
  json j;
  j["top_features"] = json::array();
  for (const auto& [term, score] : top_features) {
    json entry = json::array();
    entry.push_back(term);
    if (std::isinf(score)) {
      entry.push_back("inf");
    } else {
      entry.push_back(score);
    }
    j["top_features"].push_back(std::move(entry));
  }
  j["violations"] = violations;
  return j.dump(2);
}

}  // namespace lexiclass::masking
