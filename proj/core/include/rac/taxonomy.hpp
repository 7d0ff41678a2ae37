#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "rac/curation.hpp"
#include "rac/model.hpp"

namespace rac::curation {

inline constexpr std::size_t kCategoryCount = 9;
inline constexpr std::string_view kUncategorized = "uncategorized";

struct Category {
  std::string name;
  std::vector<std::string> keywords;  // lowercase; may span several words
};

struct Taxonomy {
  std::string name;
  std::vector<Category> categories;

  // Throws ValidationError unless there are exactly 9 uniquely named
  // categories.
  void validate() const;
};

// The built-in nine-category networking taxonomy.
const Taxonomy& default_taxonomy();

// {name, categories: [{name, keywords: [...]}]}
Taxonomy taxonomy_from_json(const json& j);
Taxonomy load_taxonomy(const std::filesystem::path& path);
json to_json(const Taxonomy& t);

// Keyword scoring over question + choices: case-insensitive whole-word
// matches, highest total wins, ties go to the earlier category, no match is
// "uncategorized".
std::string classify_subdomain(const McqPair& pair, const Taxonomy& taxonomy);

// Sets `subdomain` on every pair.
std::vector<McqPair> tag_subdomains(std::vector<McqPair> pairs, const Taxonomy& taxonomy);

inline constexpr std::size_t kDefaultTopK = 50;

struct TermCount {
  std::string term;
  std::size_t count;
};

struct CategoryCount {
  std::string name;
  std::size_t count = 0;
  double fraction = 0.0;
};

struct StatsReport {
  std::string taxonomy;
  std::size_t total = 0;
  std::vector<CategoryCount> categories;  // taxonomy order, then uncategorized
  std::vector<TermCount> top_terms;       // by count desc, then term asc
  std::optional<BiasReport> bias;         // absent for empty input
};

// Uses the pair's subdomain when it names a taxonomy category, otherwise
// classifies it.
StatsReport stats(const std::vector<McqPair>& pairs, const Taxonomy& taxonomy,
                  std::size_t top_k = kDefaultTopK);
json to_json(const StatsReport& r);

bool is_stop_word(std::string_view word);

}  // namespace rac::curation
