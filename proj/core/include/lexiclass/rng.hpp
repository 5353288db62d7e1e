#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace lexiclass {

/// SplitMix64 generator. All randomness in the library flows through this
/// class so that equal seeds give byte-identical outputs on every platform;
/// std:: distributions are avoided because their mappings are
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::uint64_t state_;
};

/// Derives a named sub-seed from a base seed. Components fed from one global
/// seed (fold shuffling, svm permutations, dummy sampling, synthesis) each get
/// their own stream and stay reproducible in isolation.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view role) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (char c : role) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return Rng(base ^ h).next_u64();
}

/// Indexed sub-seed (per fold, per class, ...).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return Rng(base ^ (0x9e3779b97f4a7c15ULL * (index + 1))).next_u64();
}

}  // namespace lexiclass
