// Test-only oracles, kept independent of the library implementations they
// check: a gram-set Jaccard built on std::set, a full-matrix edit distance,
// and a brute-force span-assignment solver that enumerates every feasible
// subset.
#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dbtag/aligner.hpp"
#include "dbtag/core.hpp"

namespace oracles {

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline double naive_jaccard3(const std::string& a_raw, const std::string& b_raw) {
  std::string a = lower(a_raw), b = lower(b_raw);
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  auto grams = [](const std::string& s) {
    std::set<std::string> g;
    if (s.size() < 3) {
      g.insert(s);
    } else {
      for (size_t i = 0; i + 3 <= s.size(); ++i) g.insert(s.substr(i, 3));
    }
    return g;
  };
  std::set<std::string> ga = grams(a), gb = grams(b);
  size_t inter = 0;
  for (const auto& g : ga) inter += gb.count(g);
  size_t uni = ga.size() + gb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

inline size_t naive_edit_distance(const std::string& a_raw, const std::string& b_raw) {
  std::string a = lower(a_raw), b = lower(b_raw);
  const size_t m = a.size(), n = b.size();
  std::vector<std::vector<size_t>> d(m + 1, std::vector<size_t>(n + 1, 0));
  for (size_t i = 0; i <= m; ++i) d[i][0] = i;
  for (size_t j = 0; j <= n; ++j) d[0][j] = j;
  for (size_t i = 1; i <= m; ++i)
    for (size_t j = 1; j <= n; ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return d[m][n];
}

inline double naive_levenshtein_sim(const std::string& a, const std::string& b) {
  size_t max_len = std::max(a.size(), b.size());
  if (max_len == 0) return 1.0;
  return 1.0 - static_cast<double>(naive_edit_distance(a, b)) / static_cast<double>(max_len);
}

// ---------------------------------------------------------------------------
// Brute-force solver
// ---------------------------------------------------------------------------

struct BruteResult {
  std::vector<std::optional<dbtag::Span>> chosen;
  double objective = 0.0;
};

/// Enumerates every per-entity choice (each candidate or none), keeps the
/// feasible ones, sums scores in entity order, and applies the same canonical
/// tie-break the solver promises: assigned before none, then smaller start,
/// then smaller end, entity by entity.
inline BruteResult brute_force_solve(const dbtag::ScoreMatrix& m) {
  const size_t n = m.candidates.size();
  BruteResult best;
  best.chosen.assign(n, std::nullopt);
  best.objective = -1.0;

  std::vector<std::optional<dbtag::Span>> current(n);

  auto better = [&](double obj, const std::vector<std::optional<dbtag::Span>>& sol) {
    if (obj != best.objective) return obj > best.objective;
    for (size_t i = 0; i < n; ++i) {
      const auto& x = sol[i];
      const auto& y = best.chosen[i];
      if (x.has_value() != y.has_value()) return x.has_value();
      if (!x) continue;
      if (x->start != y->start) return x->start < y->start;
      if (x->end != y->end) return x->end < y->end;
    }
    return false;
  };

  std::function<void(size_t)> enumerate = [&](size_t i) {
    if (i == n) {
      double obj = 0.0;
      for (size_t e = 0; e < n; ++e) {
        if (!current[e]) continue;
        for (const auto& c : m.candidates[e])
          if (c.span == *current[e]) obj += c.score;
      }
      if (better(obj, current)) {
        best.objective = obj;
        best.chosen = current;
      }
      return;
    }
    for (const auto& c : m.candidates[i]) {
      bool ok = true;
      for (size_t e = 0; e < i && ok; ++e)
        if (current[e] && dbtag::spans_overlap(*current[e], c.span)) ok = false;
      if (!ok) continue;
      current[i] = c.span;
      enumerate(i + 1);
      current[i].reset();
    }
    enumerate(i + 1);
  };
  enumerate(0);
  if (best.objective < 0.0) best.objective = 0.0;
  return best;
}

/// Random solver instance within the acceptance bounds: up to max_entities
/// entities, up to max_cands candidate spans each inside n_tokens tokens,
/// scores uniform in [0.1, 1].
inline dbtag::ScoreMatrix random_instance(std::mt19937& rng, size_t max_entities = 8,
                                          size_t max_tokens = 12, size_t max_cands = 4) {
  std::uniform_int_distribution<size_t> ent_dist(0, max_entities);
  std::uniform_int_distribution<size_t> tok_dist(1, max_tokens);
  std::uniform_real_distribution<double> score_dist(0.1, 1.0);

  dbtag::ScoreMatrix m;
  m.n_tokens = tok_dist(rng);
  m.config = dbtag::SimilarityConfig{dbtag::SimilarityMeasure::Jaccard3, 0.1};
  size_t n_ent = ent_dist(rng);
  m.candidates.resize(n_ent);
  std::uniform_int_distribution<size_t> cand_dist(0, max_cands);
  for (size_t e = 0; e < n_ent; ++e) {
    size_t k = cand_dist(rng);
    std::set<std::pair<size_t, size_t>> seen;
    for (size_t c = 0; c < k; ++c) {
      std::uniform_int_distribution<size_t> start_dist(0, m.n_tokens - 1);
      size_t start = start_dist(rng);
      std::uniform_int_distribution<size_t> len_dist(1, std::min<size_t>(4, m.n_tokens - start));
      size_t end = start + len_dist(rng);
      if (!seen.insert({start, end}).second) continue;
      m.candidates[e].push_back(
          dbtag::ScoredCandidate{e, dbtag::Span{start, end}, score_dist(rng)});
    }
    std::sort(m.candidates[e].begin(), m.candidates[e].end(),
              [](const dbtag::ScoredCandidate& a, const dbtag::ScoredCandidate& b) {
                return a.span.start != b.span.start ? a.span.start < b.span.start
                                                    : a.span.end < b.span.end;
              });
  }
  return m;
}

}  // namespace oracles
