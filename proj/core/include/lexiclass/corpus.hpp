#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace lexiclass::corpus {

/// One court ruling: metadata labels plus the case-description text.
struct Document {
  std::string id;  // non-empty, unique within a corpus
  std::optional<std::string> law_area;
  std::optional<int> decision_year;  // [1790, 2100] when present
  std::optional<std::string> ruling_raw;
  std::string description;
  std::vector<std::string> cited_laws;
};

/// Fields that can be required for an entry to count as complete.
enum class Field { law_area, decision_year, ruling, description };

std::string field_name(Field f);
Field field_from_name(const std::string& name);

struct CorpusStats {
  std::size_t total_docs = 0;
  std::size_t duplicates_removed = 0;
  std::size_t incomplete_removed = 0;
  /// task name -> (label -> count), computed over the surviving documents.
  std::map<std::string, std::map<std::string, std::size_t>> label_histograms;

  std::string to_json() const;
};

enum class CorpusFormat { jsonl, xml_subset };

/// Parses a corpus stream. JSONL: one object per line, keys "id", "law_area",
/// "decision_year", "ruling", "description", "cited_laws"; blank lines are
/// skipped. XML subset: root <corpus>, one <doc> per document, one child
/// element per field (repeated <cited_laws> children, one law per element),
/// text content only.
///
/// Throws ParseError naming the 1-based record ordinal for malformed records
/// (bad JSON, wrong field types, missing or duplicate id, out-of-range year),
/// Error when the stream is unreadable.
std::vector<Document> parse_corpus(std::istream& in, CorpusFormat format);

/// Removes incomplete entries (missing any required field) and duplicates
/// (same normalized description as an earlier kept document). Survivors keep
/// their input order. A document that is both incomplete and a duplicate
/// counts as incomplete.
std::pair<std::vector<Document>, CorpusStats> dedupe_and_filter(
    const std::vector<Document>& docs, const std::set<Field>& required_fields);

void write_jsonl(std::ostream& out, std::span<const Document> docs);

/// One synthetic class: its label (used for both law_area and ruling), the
/// decision year given to its documents, and optional per-class overrides.
struct SynthClass {
  std::string label;
  int year = 2000;
  int class_vocab_size = 0;       // 0: use SynthSpec::class_vocab_size
  double signal_ratio = -1.0;     // <0: use SynthSpec::signal_ratio
  int min_tokens = 0;             // 0: use SynthSpec::min_tokens
  int max_tokens = 0;             // 0: use SynthSpec::max_tokens
  std::vector<std::string> extra_leak_tokens;  // injected alongside the label
};

struct SynthSpec {
  std::vector<SynthClass> classes;  // >= 2
  int docs_per_class = 1;
  int shared_vocab_size = 100;
  int class_vocab_size = 20;
  int min_tokens = 40;
  int max_tokens = 80;
  /// Fraction of tokens drawn from the class-specific vocabulary.
  double signal_ratio = 0.3;
  /// When set, each document's raw label (and any extra_leak_tokens) is
  /// planted into its description.
  bool leak_labels = false;
};

/// Deterministic synthetic corpus for a fixed (spec, seed). Every document
/// mixes shared and class-specific vocabulary at the configured signal ratio.
/// Throws ConfigError on specs with < 2 classes or other invalid parameters.
std::vector<Document> generate_synthetic(const SynthSpec& spec,
                                         std::uint64_t seed);

}  // namespace lexiclass::corpus
