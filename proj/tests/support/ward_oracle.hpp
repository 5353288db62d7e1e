#pragma once

// Brute-force reference agglomerator for Ward linkage, used only by tests.
// It tracks explicit cluster centroids and merges the pair with the smallest
// increase in within-cluster sum of squares,
//   dSSE(s, t) = |s||t| / (|s|+|t|) * ||c_s - c_t||^2,
// reporting heights sqrt(2 * dSSE), which equal the Lance-Williams Ward
// distances. Ties break by smallest (left id, right id) like the production
// code.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

struct WardMerge {
  int left;
  int right;
  double height;
};

inline std::vector<WardMerge> ward_bruteforce(
    const std::vector<std::vector<double>>& points) {
  struct Cluster {
    int id;
    double size;
    std::vector<double> centroid;
  };
  const int n = static_cast<int>(points.size());
  std::vector<Cluster> active;
  active.reserve(points.size());
  for (int i = 0; i < n; ++i) active.push_back({i, 1.0, points[i]});

  std::vector<WardMerge> merges;
  int next_id = n;
  while (active.size() > 1) {
    std::size_t best_i = 0, best_j = 1;
    double best = std::numeric_limits<double>::infinity();
    std::pair<int, int> best_key{0, 0};
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        double dist2 = 0.0;
        for (std::size_t d = 0; d < points[0].size(); ++d) {
          const double diff = active[i].centroid[d] - active[j].centroid[d];
          dist2 += diff * diff;
        }
        const double dsse = active[i].size * active[j].size /
                            (active[i].size + active[j].size) * dist2;
        const std::pair<int, int> key =
            std::minmax(active[i].id, active[j].id);
        if (dsse < best || (dsse == best && key < best_key)) {
          best = dsse;
          best_i = i;
          best_j = j;
          best_key = key;
        }
      }
    }

    Cluster& a = active[best_i];
    Cluster& b = active[best_j];
    merges.push_back({best_key.first, best_key.second,
                      std::sqrt(2.0 * best)});
    Cluster merged;
    merged.id = next_id++;
    merged.size = a.size + b.size;
    merged.centroid.resize(points[0].size());
    for (std::size_t d = 0; d < merged.centroid.size(); ++d) {
      merged.centroid[d] =
          (a.size * a.centroid[d] + b.size * b.centroid[d]) / merged.size;
    }
    active[best_i] = std::move(merged);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
  }
  return merges;
}

}  // namespace oracle
