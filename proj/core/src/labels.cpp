#include "lexiclass/labels.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lexiclass/errors.hpp"
#include "lexiclass/textnorm.hpp"

namespace lexiclass::labels {

using nlohmann::json;

std::string extract_label(std::string_view raw, LabelSetup setup) {
  std::string norm = textnorm::normalize(raw);
  if (norm.empty()) {
    throw Error("label normalizes to empty: \"" + std::string(raw) + "\"");
  }
  if (setup == LabelSetup::first_word) {
    return norm.substr(0, norm.find(' '));
  }
  return norm;
}

std::pair<std::set<std::string>, std::vector<Instance>> filter_by_support(
    const std::vector<Instance>& instances, const LabelConfig& config) {
  std::map<std::string, std::size_t> counts;
  for (const Instance& inst : instances) ++counts[inst.label];

  std::set<std::string> kept_labels;
  for (const auto& [label, count] : counts) {
    const bool keep = config.threshold_mode == ThresholdMode::inclusive
                          ? count >= config.min_support
                          : count > config.min_support;
    if (keep) kept_labels.insert(label);
  }
  std::vector<Instance> kept;
  kept.reserve(instances.size());
  for (const Instance& inst : instances) {
    if (kept_labels.count(inst.label)) kept.push_back(inst);
  }
  return {std::move(kept_labels), std::move(kept)};
}

TemporalScheme TemporalScheme::seven_class() {
  TemporalScheme s;
  s.kind = TemporalKind::seven_class;
  s.bins.push_back({"PRE_1960", 1830, 1959});
  for (int decade = 1960; decade <= 2010; decade += 10) {
    s.bins.push_back({std::to_string(decade) + "s", decade,
                      decade == 2010 ? INT_MAX : decade + 9});
  }
  return s;
}

TemporalScheme TemporalScheme::fourteen_class() {
  TemporalScheme s;
  s.kind = TemporalKind::fourteen_class;
  s.bins.push_back({"1830-1840", 1830, 1849});
  s.bins.push_back({"1850-1860", 1850, 1869});
  s.bins.push_back({"1870-1880", 1870, 1889});
  s.bins.push_back({"1890-1910", 1890, 1919});
  for (int decade = 1920; decade <= 2010; decade += 10) {
    s.bins.push_back({std::to_string(decade) + "s", decade,
                      decade == 2010 ? INT_MAX : decade + 9});
  }
  return s;
}

BinResult bin_temporal(int year, const TemporalScheme& scheme) {
  if (year < scheme.bins.front().lo) {
    return {scheme.bins.front().label, true};
  }
  for (const TemporalBin& bin : scheme.bins) {
    if (year >= bin.lo && year <= bin.hi) return {bin.label, false};
  }
  throw Error("year " + std::to_string(year) + " not covered by scheme");
}

LabelVectors label_vectors(const std::vector<std::string>& raw_labels) {
  std::vector<textnorm::TokenSeq> tokenized;
  tokenized.reserve(raw_labels.size());
  std::set<std::string> vocab_set;
  for (const std::string& label : raw_labels) {
    tokenized.push_back(textnorm::tokenize(textnorm::normalize(label)));
    vocab_set.insert(tokenized.back().begin(), tokenized.back().end());
  }
  LabelVectors out;
  out.vocab.assign(vocab_set.begin(), vocab_set.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < out.vocab.size(); ++i) index[out.vocab[i]] = i;
  for (const auto& tokens : tokenized) {
    std::vector<double> row(out.vocab.size(), 0.0);
    for (const std::string& tok : tokens) row[index[tok]] += 1.0;
    out.counts.push_back(std::move(row));
  }
  return out;
}

namespace {

struct ActiveCluster {
  int id;
  int size;
};

double squared_euclidean(const std::vector<double>& a,
                         const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

Dendrogram ward_cluster(const std::vector<std::vector<double>>& points,
                        std::vector<std::string> leaf_labels) {
  const std::size_t n = points.size();
  if (n < 2) throw Error("clustering needs at least 2 points");
  if (leaf_labels.size() != n) {
    throw Error("leaf_labels size does not match point count");
  }
  const std::size_t dim = points[0].size();
  for (const auto& p : points) {
    if (p.size() != dim) throw Error("points have inconsistent dimensions");
    for (double v : p) {
      if (!std::isfinite(v)) throw Error("non-finite point coordinate");
    }
  }

  std::vector<ActiveCluster> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = {static_cast<int>(i), 1};

  // Squared distances between active clusters, indexed by active position.
  std::vector<std::vector<double>> d2(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d2[i][j] = d2[j][i] = squared_euclidean(points[i], points[j]);
    }
  }

  Dendrogram out;
  out.leaf_labels = std::move(leaf_labels);
  out.merges.reserve(n - 1);

  while (active.size() > 1) {
    std::size_t best_i = 0, best_j = 1;
    double best = d2[0][1];
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double d = d2[i][j];
        if (d < best) {
          best = d;
          best_i = i;
          best_j = j;
        } else if (d == best) {
          const auto key = std::minmax(active[i].id, active[j].id);
          const auto best_key =
              std::minmax(active[best_i].id, active[best_j].id);
          if (key < best_key) {
            best_i = i;
            best_j = j;
          }
        }
      }
    }

    const ActiveCluster ci = active[best_i];
    const ActiveCluster cj = active[best_j];
    const int new_id = static_cast<int>(n + out.merges.size());
    const int new_size = ci.size + cj.size;
    out.merges.push_back({std::min(ci.id, cj.id), std::max(ci.id, cj.id),
                          std::sqrt(best), new_size});

    // Lance-Williams update for Ward linkage, written on squared distances.
    std::vector<double> merged_d2(active.size(), 0.0);
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (k == best_i || k == best_j) continue;
      const double sk = active[k].size;
      merged_d2[k] = ((sk + ci.size) * d2[best_i][k] +
                      (sk + cj.size) * d2[best_j][k] - sk * best) /
                     (sk + new_size);
    }

    // The merged cluster replaces position best_i; best_j is removed.
    active[best_i] = {new_id, new_size};
    for (std::size_t k = 0; k < active.size(); ++k) {
      d2[best_i][k] = d2[k][best_i] = merged_d2[k];
    }
    d2[best_i][best_i] = 0.0;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
    d2.erase(d2.begin() + static_cast<std::ptrdiff_t>(best_j));
    for (auto& row : d2) {
      row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_j));
    }
  }
  return out;
}

std::string Dendrogram::to_json() const {
  json j;
  j["leaves"] = leaf_labels;
  j["merges"] = json::array();
  for (const Merge& m : merges) {
    j["merges"].push_back({{"left", m.left},
                           {"right", m.right},
                           {"height", m.height},
                           {"size", m.size}});
  }
  return j.dump(2);
}

namespace {

std::string newick_name(const std::string& label) {
  std::string out = label;
  for (char& c : out) {
    if (c == ' ' || c == ',' || c == '(' || c == ')' || c == ':' || c == ';') {
      c = '_';
    }
  }
  return out;
}

void write_newick_node(const Dendrogram& d, int node, double parent_height,
                       std::ostringstream& os) {
  const int n = static_cast<int>(d.leaf_labels.size());
  double height = 0.0;
  if (node < n) {
    os << newick_name(d.leaf_labels[static_cast<std::size_t>(node)]);
  } else {
    const Merge& m = d.merges[static_cast<std::size_t>(node - n)];
    height = m.height;
    os << '(';
    write_newick_node(d, m.left, height, os);
    os << ',';
    write_newick_node(d, m.right, height, os);
    os << ')';
  }
  if (parent_height >= 0.0) {
    os << ':' << parent_height - height;
  }
}

}  // namespace

std::string Dendrogram::to_newick() const {
  if (merges.empty()) throw Error("dendrogram has no merges");
  std::ostringstream os;
  os.precision(17);
  const int root = static_cast<int>(leaf_labels.size() + merges.size()) - 1;
  write_newick_node(*this, root, -1.0, os);
  os << ';';
  return os.str();
}

std::vector<std::vector<std::string>> cut_dendrogram(const Dendrogram& d,
                                                     std::size_t k) {
  const std::size_t n = d.leaf_labels.size();
  if (k < 1 || k > n) throw Error("cut size k must lie in [1, leaf count]");
  const std::size_t applied = n - k;  // number of merges to keep

  // Leaves under each node, built bottom-up over the applied merges.
  std::vector<std::vector<int>> members(n + applied);
  std::vector<bool> consumed(n + applied, false);
  for (std::size_t i = 0; i < n; ++i) members[i] = {static_cast<int>(i)};
  for (std::size_t i = 0; i < applied; ++i) {
    const Merge& m = d.merges[i];
    auto& dst = members[n + i];
    dst = members[static_cast<std::size_t>(m.left)];
    dst.insert(dst.end(), members[static_cast<std::size_t>(m.right)].begin(),
               members[static_cast<std::size_t>(m.right)].end());
    std::sort(dst.begin(), dst.end());
    consumed[static_cast<std::size_t>(m.left)] = true;
    consumed[static_cast<std::size_t>(m.right)] = true;
  }

  std::vector<std::vector<int>> clusters;
  for (std::size_t node = 0; node < members.size(); ++node) {
    if (!consumed[node]) clusters.push_back(members[node]);
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  std::vector<std::vector<std::string>> out;
  out.reserve(clusters.size());
  for (const auto& cluster : clusters) {
    std::vector<std::string> labels;
    labels.reserve(cluster.size());
    for (int leaf : cluster) {
      labels.push_back(d.leaf_labels[static_cast<std::size_t>(leaf)]);
    }
    out.push_back(std::move(labels));
  }
  return out;
}

}  // namespace lexiclass::labels
