#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbtag/core.hpp"

namespace dbtag {

/// The two string-similarity measures the calibration grid sweeps over.
enum class SimilarityMeasure { Jaccard3, Levenshtein };

inline std::string_view measure_str(SimilarityMeasure m) {
  return m == SimilarityMeasure::Jaccard3 ? "jaccard3" : "levenshtein";
}

inline std::optional<SimilarityMeasure> parse_measure(std::string_view s) {
  if (s == "jaccard3") return SimilarityMeasure::Jaccard3;
  if (s == "levenshtein") return SimilarityMeasure::Levenshtein;
  return std::nullopt;
}

/// A measure plus the minimum score a span must reach to become a candidate.
struct SimilarityConfig {
  SimilarityMeasure measure = SimilarityMeasure::Jaccard3;
  double threshold = 0.5;

  bool operator==(const SimilarityConfig&) const = default;
};

inline void validate_config(const SimilarityConfig& cfg) {
  if (!(cfg.threshold > 0.0 && cfg.threshold <= 1.0))
    throw InvariantError("similarity threshold must be in (0, 1]");
}

namespace detail {

/// Sorted, deduplicated character 3-gram set of an already case-folded
/// string. Strings shorter than 3 characters contribute themselves as the
/// single gram so short identifiers and values stay matchable.
inline std::vector<std::string> gram3_set(std::string_view folded) {
  std::vector<std::string> grams;
  if (folded.size() < 3) {
    grams.emplace_back(folded);
    return grams;
  }
  grams.reserve(folded.size() - 2);
  for (size_t i = 0; i + 3 <= folded.size(); ++i) grams.emplace_back(folded.substr(i, 3));
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

inline double jaccard_of_sets(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
  size_t inter = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int cmp = a[i].compare(b[j]);
    if (cmp == 0) {
      ++inter;
      ++i;
      ++j;
    } else if (cmp < 0) {
      ++i;
    } else {
      ++j;
    }
  }
  size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

inline size_t edit_distance(std::string_view a, std::string_view b) {
  const size_t m = a.size(), n = b.size();
  if (m == 0) return n;
  if (n == 0) return m;
  std::vector<size_t> prev(n + 1), cur(n + 1);
  for (size_t j = 0; j <= n; ++j) prev[j] = j;
  for (size_t i = 1; i <= m; ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= n; ++j) {
      size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

}  // namespace detail

/// Jaccard similarity between the character-3-gram sets of the case-folded
/// strings. Both empty -> 1, exactly one empty -> 0.
inline double jaccard3(std::string_view a, std::string_view b) {
  std::string fa = fold_case(a), fb = fold_case(b);
  if (fa.empty() && fb.empty()) return 1.0;
  if (fa.empty() || fb.empty()) return 0.0;
  return detail::jaccard_of_sets(detail::gram3_set(fa), detail::gram3_set(fb));
}

/// 1 - editDistance / max length over the case-folded strings; both empty -> 1.
inline double levenshtein_sim(std::string_view a, std::string_view b) {
  std::string fa = fold_case(a), fb = fold_case(b);
  size_t max_len = std::max(fa.size(), fb.size());
  if (max_len == 0) return 1.0;
  size_t d = detail::edit_distance(fa, fb);
  return 1.0 - static_cast<double>(d) / static_cast<double>(max_len);
}

inline double similarity(SimilarityMeasure m, std::string_view a, std::string_view b) {
  return m == SimilarityMeasure::Jaccard3 ? jaccard3(a, b) : levenshtein_sim(a, b);
}

}  // namespace dbtag
