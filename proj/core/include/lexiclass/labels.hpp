#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lexiclass::labels {

enum class LabelSetup { first_word, multi_word };
enum class ThresholdMode { inclusive, exclusive };

struct LabelConfig {
  std::size_t min_support = 200;
  LabelSetup setup = LabelSetup::first_word;
  ThresholdMode threshold_mode = ThresholdMode::inclusive;
};

/// Normalizes a raw label; in first_word setup only the first token is kept.
/// Throws Error when the label normalizes to the empty string.
std::string extract_label(std::string_view raw, LabelSetup setup);

struct Instance {
  std::string id;
  std::string label;
};

/// Keeps a label iff its instance count satisfies the threshold mode against
/// min_support (inclusive: count >= min_support; exclusive: count >
/// min_support). Filtered instances preserve input order.
std::pair<std::set<std::string>, std::vector<Instance>> filter_by_support(
    const std::vector<Instance>& instances, const LabelConfig& config);

enum class TemporalKind { seven_class, fourteen_class };

struct TemporalBin {
  std::string label;
  int lo;  // inclusive
  int hi;  // inclusive; INT_MAX for the open-ended latest decade
};

struct TemporalScheme {
  TemporalKind kind;
  std::vector<TemporalBin> bins;  // disjoint, ordered, covering

  /// PRE_1960 plus one bin per decade 1960s..2010s (last bin open-ended).
  static TemporalScheme seven_class();
  /// Merged bins 1830-1840, 1850-1860, 1870-1880, 1890-1910, then one bin per
  /// decade 1920s..2010s (last bin open-ended).
  static TemporalScheme fourteen_class();
};

struct BinResult {
  std::string label;
  bool clamped = false;  // year fell before the scheme floor
};

/// Maps a year to its bin. Years before the scheme floor clamp to the
/// earliest bin with the clamped flag set.
BinResult bin_temporal(int year, const TemporalScheme& scheme);

struct LabelVectors {
  std::vector<std::string> vocab;              // sorted distinct label words
  std::vector<std::vector<double>> counts;     // row i = word counts of label i
};

/// Bag-of-words occurrence vectors for a set of (normalized) labels.
LabelVectors label_vectors(const std::vector<std::string>& labels);

struct Merge {
  int left;       // node id; leaves are 0..n-1, merge i creates node n+i
  int right;      // node id > left
  double height;  // Ward merge distance
  int size;       // leaves under the merged node
};

struct Dendrogram {
  std::vector<std::string> leaf_labels;
  std::vector<Merge> merges;  // exactly n-1 entries

  std::string to_json() const;
  /// Newick with branch lengths = parent merge height minus child height.
  std::string to_newick() const;
};

/// Agglomerative clustering with Ward linkage. Singleton-singleton distance is
/// the Euclidean distance; cluster distances follow the Lance-Williams Ward
/// recurrence. At each step the minimum-distance pair merges; ties break by
/// smallest (left id, right id). Throws Error on fewer than 2 rows or
/// non-finite values.
Dendrogram ward_cluster(const std::vector<std::vector<double>>& points,
                        std::vector<std::string> leaf_labels);

/// Undoes the last k-1 merges and returns the k clusters as sets of leaf
/// labels, ordered by smallest contained leaf id. Throws Error when k is out
/// of range.
std::vector<std::vector<std::string>> cut_dendrogram(const Dendrogram& d,
                                                     std::size_t k);

}  // namespace lexiclass::labels
