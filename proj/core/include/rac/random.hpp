#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace rac {

inline constexpr std::uint64_t kDefaultSeed = 42;

// Seeded generator whose output sequence is fixed across standard libraries.
// std::mt19937_64's sequence is pinned by the standard; the bounded draw and
// shuffle below are written out so they are too.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform double in [0, 1) from the top 53 bits.
  double unit();

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// The first k entries of a seeded permutation of [0, n).
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k,
                                        std::uint64_t seed);

// 64-bit FNV-1a; stable hashing for seeding per-item decisions.
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace rac
