#include "lexiclass/corpus.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "lexiclass/errors.hpp"
#include "lexiclass/labels.hpp"
#include "lexiclass/rng.hpp"
#include "lexiclass/textnorm.hpp"

namespace lexiclass::corpus {

using nlohmann::json;

std::string field_name(Field f) {
  switch (f) {
    case Field::law_area: return "law_area";
    case Field::decision_year: return "decision_year";
    case Field::ruling: return "ruling";
    case Field::description: return "description";
  }
  return "?";
}

Field field_from_name(const std::string& name) {
  if (name == "law_area") return Field::law_area;
  if (name == "decision_year") return Field::decision_year;
  if (name == "ruling") return Field::ruling;
  if (name == "description") return Field::description;
  throw ConfigError("unknown field name: " + name);
}

namespace {

constexpr int kMinYear = 1790;
constexpr int kMaxYear = 2100;

void validate_year(int year, std::size_t ordinal) {
  if (year < kMinYear || year > kMaxYear) {
    throw ParseError(ordinal, "decision_year " + std::to_string(year) +
                                  " outside [" + std::to_string(kMinYear) +
                                  ", " + std::to_string(kMaxYear) + "]");
  }
}

void check_id(Document& doc, std::size_t ordinal,
              std::unordered_set<std::string>& seen_ids) {
  if (doc.id.empty()) throw ParseError(ordinal, "missing or empty id");
  if (!seen_ids.insert(doc.id).second) {
    throw ParseError(ordinal, "duplicate id \"" + doc.id + "\"");
  }
}

std::vector<Document> parse_jsonl(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(lineno, "record is not an object");

    Document doc;
    const auto get_string = [&](const char* key) -> std::optional<std::string> {
      auto it = rec.find(key);
      if (it == rec.end() || it->is_null()) return std::nullopt;
      if (!it->is_string()) {
        throw ParseError(lineno, std::string(key) + " must be a string");
      }
      return it->get<std::string>();
    };

    doc.id = get_string("id").value_or("");
    doc.law_area = get_string("law_area");
    doc.ruling_raw = get_string("ruling");
    doc.description = get_string("description").value_or("");

    if (auto it = rec.find("decision_year");
        it != rec.end() && !it->is_null()) {
      if (!it->is_number_integer() && !it->is_number_unsigned()) {
        throw ParseError(lineno, "decision_year must be an integer");
      }
      int year = it->get<int>();
      validate_year(year, lineno);
      doc.decision_year = year;
    }
    if (auto it = rec.find("cited_laws"); it != rec.end() && !it->is_null()) {
      if (!it->is_array()) {
        throw ParseError(lineno, "cited_laws must be an array of strings");
      }
      for (const auto& elem : *it) {
        if (!elem.is_string()) {
          throw ParseError(lineno, "cited_laws must be an array of strings");
        }
        doc.cited_laws.push_back(elem.get<std::string>());
      }
    }
    check_id(doc, lineno, seen_ids);
    docs.push_back(std::move(doc));
  }
  if (in.bad()) throw Error("I/O error while reading corpus stream");
  return docs;
}

// Minimal XML reader for the element-per-field subset: no attributes are
// interpreted, text content only, entities &amp; &lt; &gt; &quot; &apos; and
// numeric references are decoded.
class XmlSubsetParser {
 public:
  explicit XmlSubsetParser(std::string text) : text_(std::move(text)) {}

  std::vector<Document> parse() {
    skip_prolog();
    Tag root = read_tag();
    if (root.kind != Tag::open || root.name != "corpus") {
      throw ParseError(ordinal(), "expected <corpus> root element");
    }
    std::vector<Document> docs;
    std::unordered_set<std::string> seen_ids;
    for (;;) {
      skip_ws_and_comments();
      Tag tag = read_tag();
      if (tag.kind == Tag::close && tag.name == "corpus") break;
      if (tag.kind != Tag::open || tag.name != "doc") {
        throw ParseError(docs.size() + 1, "expected <doc> element");
      }
      docs_seen_ = docs.size() + 1;
      Document doc = parse_doc();
      check_id(doc, docs_seen_, seen_ids);
      docs.push_back(std::move(doc));
    }
    return docs;
  }

 private:
  struct Tag {
    enum Kind { open, close, selfclose, eof } kind = eof;
    std::string name;
  };

  std::size_t ordinal() const { return docs_seen_ + 1; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(
               static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  void skip_ws_and_comments() {
    for (;;) {
      skip_ws();
      if (text_.compare(pos_, 4, "<!--") == 0) {
        std::size_t end = text_.find("-->", pos_ + 4);
        if (end == std::string::npos) {
          throw ParseError(ordinal(), "unterminated comment");
        }
        pos_ = end + 3;
        continue;
      }
      return;
    }
  }

  void skip_prolog() {
    for (;;) {
      skip_ws();
      if (text_.compare(pos_, 2, "<?") == 0) {
        std::size_t end = text_.find("?>", pos_);
        if (end == std::string::npos) {
          throw ParseError(ordinal(), "unterminated XML declaration");
        }
        pos_ = end + 2;
        continue;
      }
      if (text_.compare(pos_, 4, "<!--") == 0) {
        skip_ws_and_comments();
        continue;
      }
      return;
    }
  }

  Tag read_tag() {
    skip_ws();
    if (pos_ >= text_.size()) return {};
    if (text_[pos_] != '<') {
      throw ParseError(ordinal(), "unexpected text outside field elements");
    }
    ++pos_;
    Tag tag;
    tag.kind = Tag::open;
    if (pos_ < text_.size() && text_[pos_] == '/') {
      tag.kind = Tag::close;
      ++pos_;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '>' && text_[pos_] != '/' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    tag.name = text_.substr(start, pos_ - start);
    if (tag.name.empty()) throw ParseError(ordinal(), "empty tag name");
    std::size_t close = text_.find('>', pos_);
    if (close == std::string::npos) {
      throw ParseError(ordinal(), "unterminated tag <" + tag.name);
    }
    if (close > pos_ && text_[close - 1] == '/' && tag.kind == Tag::open) {
      tag.kind = Tag::selfclose;
    }
    pos_ = close + 1;
    return tag;
  }

  std::string read_text_until_tag() {
    std::size_t end = text_.find('<', pos_);
    if (end == std::string::npos) {
      throw ParseError(ordinal(), "unterminated element text");
    }
    std::string raw = text_.substr(pos_, end - pos_);
    pos_ = end;
    return decode_entities(raw);
  }

  std::string decode_entities(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size();) {
      if (raw[i] != '&') {
        out += raw[i++];
        continue;
      }
      std::size_t semi = raw.find(';', i);
      if (semi == std::string::npos) {
        out += raw[i++];
        continue;
      }
      std::string name = raw.substr(i + 1, semi - i - 1);
      if (name == "amp") out += '&';
      else if (name == "lt") out += '<';
      else if (name == "gt") out += '>';
      else if (name == "quot") out += '"';
      else if (name == "apos") out += '\'';
      else if (!name.empty() && name[0] == '#') {
        out += decode_numeric_entity(name);
      } else {
        out += raw[i++];  // unknown entity: keep the ampersand literally
        continue;
      }
      i = semi + 1;
    }
    return out;
  }

  std::string decode_numeric_entity(const std::string& name) {
    long cp = 0;
    try {
      cp = (name.size() > 1 && (name[1] == 'x' || name[1] == 'X'))
               ? std::stol(name.substr(2), nullptr, 16)
               : std::stol(name.substr(1));
    } catch (...) {
      throw ParseError(ordinal(), "bad numeric character reference &" + name);
    }
    // Encode as UTF-8.
    std::string out;
    auto c = static_cast<char32_t>(cp);
    if (c < 0x80) {
      out += static_cast<char>(c);
    } else if (c < 0x800) {
      out += static_cast<char>(0xC0 | (c >> 6));
      out += static_cast<char>(0x80 | (c & 0x3F));
    } else if (c < 0x10000) {
      out += static_cast<char>(0xE0 | (c >> 12));
      out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (c & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (c >> 18));
      out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (c & 0x3F));
    }
    return out;
  }

  static std::string trimmed(std::string s) {
    auto not_ws = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_ws));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_ws).base(), s.end());
    return s;
  }

  Document parse_doc() {
    Document doc;
    for (;;) {
      skip_ws_and_comments();
      Tag tag = read_tag();
      if (tag.kind == Tag::eof) {
        throw ParseError(docs_seen_, "unterminated <doc> element");
      }
      if (tag.kind == Tag::close) {
        if (tag.name != "doc") {
          throw ParseError(docs_seen_, "unexpected </" + tag.name + ">");
        }
        return doc;
      }
      std::string text;
      if (tag.kind == Tag::open) {
        text = trimmed(read_text_until_tag());
        Tag closer = read_tag();
        if (closer.kind != Tag::close || closer.name != tag.name) {
          throw ParseError(docs_seen_,
                           "malformed element <" + tag.name + ">");
        }
      }
      assign_field(doc, tag.name, text);
    }
  }

  void assign_field(Document& doc, const std::string& name,
                    const std::string& text) {
    if (name == "id") {
      doc.id = text;
    } else if (name == "law_area") {
      doc.law_area = text;
    } else if (name == "ruling") {
      doc.ruling_raw = text;
    } else if (name == "description") {
      doc.description = text;
    } else if (name == "decision_year") {
      int year = 0;
      try {
        std::size_t used = 0;
        year = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
      } catch (...) {
        throw ParseError(docs_seen_, "decision_year is not an integer: \"" +
                                         text + "\"");
      }
      validate_year(year, docs_seen_);
      doc.decision_year = year;
    } else if (name == "cited_laws") {
      doc.cited_laws.push_back(text);
    }
    // Unknown field elements are ignored.
  }

  std::string text_;
  std::size_t pos_ = 0;
  std::size_t docs_seen_ = 0;
};

bool is_complete(const Document& doc, const std::set<Field>& required) {
  for (Field f : required) {
    switch (f) {
      case Field::description:
        if (doc.description.empty()) return false;
        break;
      case Field::law_area:
        if (!doc.law_area || doc.law_area->empty()) return false;
        break;
      case Field::ruling:
        if (!doc.ruling_raw || doc.ruling_raw->empty()) return false;
        break;
      case Field::decision_year:
        if (!doc.decision_year) return false;
        break;
    }
  }
  return true;
}

void add_label_histograms(CorpusStats& stats,
                          const std::vector<Document>& docs) {
  const auto seven = labels::TemporalScheme::seven_class();
  const auto fourteen = labels::TemporalScheme::fourteen_class();
  for (const Document& doc : docs) {
    if (doc.law_area && !doc.law_area->empty()) {
      std::string lab = textnorm::normalize(*doc.law_area);
      if (!lab.empty()) ++stats.label_histograms["law_area"][lab];
    }
    if (doc.ruling_raw && !doc.ruling_raw->empty()) {
      std::string multi = textnorm::normalize(*doc.ruling_raw);
      if (!multi.empty()) {
        ++stats.label_histograms["ruling_multi_word"][multi];
        ++stats.label_histograms["ruling_first_word"]
                                [multi.substr(0, multi.find(' '))];
      }
    }
    if (doc.decision_year) {
      ++stats.label_histograms["temporal_7"]
                              [labels::bin_temporal(*doc.decision_year, seven)
                                   .label];
      ++stats.label_histograms["temporal_14"]
                              [labels::bin_temporal(*doc.decision_year,
                                                    fourteen)
                                   .label];
    }
  }
}

}  // namespace

std::vector<Document> parse_corpus(std::istream& in, CorpusFormat format) {
  if (!in.good()) throw Error("corpus stream is not readable");
  if (format == CorpusFormat::jsonl) return parse_jsonl(in);
  std::string text(std::istreambuf_iterator<char>(in), {});
  if (in.bad()) throw Error("I/O error while reading corpus stream");
  return XmlSubsetParser(std::move(text)).parse();
}

std::pair<std::vector<Document>, CorpusStats> dedupe_and_filter(
    const std::vector<Document>& docs, const std::set<Field>& required) {
  std::vector<Document> kept;
  CorpusStats stats;
  std::unordered_set<std::string> seen_descriptions;
  for (const Document& doc : docs) {
    if (!is_complete(doc, required)) {
      ++stats.incomplete_removed;
      continue;
    }
    if (!seen_descriptions.insert(textnorm::normalize(doc.description))
             .second) {
      ++stats.duplicates_removed;
      continue;
    }
    kept.push_back(doc);
  }
  stats.total_docs = kept.size();
  add_label_histograms(stats, kept);
  return {std::move(kept), std::move(stats)};
}

std::string CorpusStats::to_json() const {
  json j;
  j["total_docs"] = total_docs;
  j["duplicates_removed"] = duplicates_removed;
  j["incomplete_removed"] = incomplete_removed;
  j["label_histograms"] = json::object();
  for (const auto& [task, hist] : label_histograms) {
    json h = json::object();
    for (const auto& [label, count] : hist) h[label] = count;
    j["label_histograms"][task] = std::move(h);
  }
  return j.dump(2);
}

void write_jsonl(std::ostream& out, std::span<const Document> docs) {
  for (const Document& doc : docs) {
    json j;
    j["id"] = doc.id;
    if (doc.law_area) j["law_area"] = *doc.law_area;
    if (doc.decision_year) j["decision_year"] = *doc.decision_year;
    if (doc.ruling_raw) j["ruling"] = *doc.ruling_raw;
    j["description"] = doc.description;
    if (!doc.cited_laws.empty()) j["cited_laws"] = doc.cited_laws;
    out << j.dump() << '\n';
  }
}

namespace {

std::string base26(int n) {
  std::string s;
  do {
    s += static_cast<char>('a' + n % 26);
    n /= 26;
  } while (n > 0);
  while (s.size() < 3) s += 'a';
  return s;
}

void validate_spec(const SynthSpec& spec) {
  if (spec.classes.size() < 2) {
    throw ConfigError("synthetic spec needs at least 2 classes");
  }
  if (spec.docs_per_class < 1) {
    throw ConfigError("docs_per_class must be >= 1");
  }
  if (spec.shared_vocab_size < 1 || spec.class_vocab_size < 1) {
    throw ConfigError("vocabulary sizes must be >= 1");
  }
  if (spec.min_tokens < 1 || spec.max_tokens < spec.min_tokens) {
    throw ConfigError("token range must satisfy 1 <= min <= max");
  }
  if (spec.signal_ratio < 0.0 || spec.signal_ratio > 1.0) {
    throw ConfigError("signal_ratio must lie in [0, 1]");
  }
  std::set<std::string> labels_seen;
  for (const SynthClass& cls : spec.classes) {
    if (textnorm::normalize(cls.label).empty()) {
      throw ConfigError("class label normalizes to empty: \"" + cls.label +
                        "\"");
    }
    if (!labels_seen.insert(cls.label).second) {
      throw ConfigError("duplicate class label: \"" + cls.label + "\"");
    }
    validate_year(cls.year, 0);
    if (cls.signal_ratio > 1.0) {
      throw ConfigError("per-class signal_ratio must lie in [0, 1]");
    }
  }
}

}  // namespace

std::vector<Document> generate_synthetic(const SynthSpec& spec,
                                         std::uint64_t seed) {
  validate_spec(spec);
  Rng rng(seed);

  std::vector<std::string> shared;
  shared.reserve(spec.shared_vocab_size);
  for (int i = 0; i < spec.shared_vocab_size; ++i) {
    shared.push_back("sh" + base26(i));
  }

  std::vector<Document> docs;
  docs.reserve(spec.classes.size() * spec.docs_per_class);
  for (std::size_t ci = 0; ci < spec.classes.size(); ++ci) {
    const SynthClass& cls = spec.classes[ci];
    const int vocab_size =
        cls.class_vocab_size > 0 ? cls.class_vocab_size : spec.class_vocab_size;
    const double ratio =
        cls.signal_ratio >= 0.0 ? cls.signal_ratio : spec.signal_ratio;
    const int min_tokens = cls.min_tokens > 0 ? cls.min_tokens : spec.min_tokens;
    const int max_tokens = cls.max_tokens > 0 ? cls.max_tokens : spec.max_tokens;
    if (max_tokens < min_tokens) {
      throw ConfigError("per-class token range must satisfy min <= max");
    }

    std::vector<std::string> class_vocab;
    class_vocab.reserve(vocab_size);
    const std::string prefix = "c" + base26(static_cast<int>(ci)) + "z";
    for (int i = 0; i < vocab_size; ++i) {
      class_vocab.push_back(prefix + base26(i));
    }

    for (int d = 0; d < spec.docs_per_class; ++d) {
      const int n = static_cast<int>(rng.uniform_int(min_tokens, max_tokens));
      std::vector<std::string> tokens;
      tokens.reserve(n + 4);
      for (int t = 0; t < n; ++t) {
        if (rng.uniform() < ratio) {
          tokens.push_back(class_vocab[rng.below(class_vocab.size())]);
        } else {
          tokens.push_back(shared[rng.below(shared.size())]);
        }
      }
      if (spec.leak_labels) {
        tokens.insert(tokens.begin() + rng.below(tokens.size() + 1),
                      cls.label);
        for (const std::string& extra : cls.extra_leak_tokens) {
          tokens.insert(tokens.begin() + rng.below(tokens.size() + 1), extra);
        }
      }
      std::string description;
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (t > 0) description += ' ';
        description += tokens[t];
      }
      Document doc;
      doc.id = "synth-" + std::to_string(ci) + "-" + std::to_string(d);
      doc.law_area = cls.label;
      doc.ruling_raw = cls.label;
      doc.decision_year = cls.year;
      doc.description = std::move(description);
      docs.push_back(std::move(doc));
    }
  }
  return docs;
}

}  // namespace lexiclass::corpus
