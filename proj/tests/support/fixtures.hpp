#pragma once

// Reference label distributions of the French supreme-court corpus, frozen
// here as test fixtures (the corpus itself is not distributed).

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

inline const std::vector<std::pair<std::string, std::size_t>>&
law_area_counts() {
  static const std::vector<std::pair<std::string, std::size_t>> counts = {
      {"chambre sociale", 33139},   {"chambre civile 1", 20838},
      {"chambre civile 2", 19772},  {"chambre criminelle", 18476},
      {"chambre commerciale", 18339}, {"chambre civile 3", 15095},
      {"assemblee pleniere", 544},  {"chambre mixte", 222},
  };
  return counts;
}

inline const std::vector<std::pair<std::string, std::size_t>>&
ruling_first_word_counts() {
  static const std::vector<std::pair<std::string, std::size_t>> counts = {
      {"rejet", 68516},          {"cassation", 53813},
      {"irrecevabilite", 2737},  {"qpc", 409},
      {"annulation", 377},       {"non", 246},
  };
  return counts;
}

inline const std::vector<std::pair<std::string, std::size_t>>&
ruling_full_counts() {
  static const std::vector<std::pair<std::string, std::size_t>> counts = {
      {"cassation", 37659},
      {"cassation sans renvoi", 2078},
      {"cassation partielle", 9543},
      {"cassation partielle sans renvoi", 1015},
      {"cassation partielle cassation", 1162},
      {"cassation partielle rejet cassation", 906},
      {"rejet", 67981},
      {"irrecevabilite", 2376},
  };
  return counts;
}

/// Ruling-date decade histogram (decade start year -> count). The source
/// lists the smallest pre-1810 row ambiguously; it is read as the 1800s here
/// and every pre-1960 reading lands in the same seven-class bin either way.
inline const std::vector<std::pair<int, std::size_t>>& decade_histogram() {
  static const std::vector<std::pair<int, std::size_t>> counts = {
      {1800, 1},  {1810, 2},      {1820, 2},      {1830, 1},
      {1840, 4},  {1850, 9},      {1860, 9},      {1870, 8},
      {1880, 10}, {1890, 8},      {1910, 2},      {1920, 17},
      {1930, 29}, {1940, 15},     {1950, 84},     {1960, 4797},
      {1970, 23964}, {1980, 18233}, {1990, 16693}, {2000, 12577},
      {2010, 4541},
  };
  return counts;
}

template <class Pairs>
std::map<std::string, std::size_t> as_count_map(const Pairs& pairs) {
  std::map<std::string, std::size_t> out;
  for (const auto& [label, count] : pairs) out[label] = count;
  return out;
}

}  // namespace fixtures
