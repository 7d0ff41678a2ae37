#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rac/model.hpp"
#include "rac/random.hpp"

namespace rac::testing {

// OSI routing question, answer B, RaC-complete.
McqPair osi_pair();

// A valid pair with awkward text: non-ASCII, quotes, backslashes, newlines.
// Distinct serials give distinct ids. RaC annotation, subdomain and source
// are each present at random.
McqPair random_pair(SeededRng& rng, std::size_t serial);

// `n` valid RaC-complete pairs with distinct questions. When `label` is set
// every pair is answered by it.
std::vector<McqPair> synthetic_pairs(std::size_t n, std::uint64_t seed,
                                     std::optional<Label> label = std::nullopt);

// Markdown book with `sections` headed sections of `paragraphs` paragraphs
// of networking prose.
std::string synthetic_book(std::size_t sections, std::size_t paragraphs, std::uint64_t seed);

std::filesystem::path data_path(const std::string& name);

// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace rac::testing
