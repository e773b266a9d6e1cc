#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dbtag/core.hpp"
#include "dbtag/similarity.hpp"
#include "dbtag/sql_entities.hpp"
#include "dbtag/sql_parser.hpp"
#include "dbtag/tokenizer.hpp"

namespace dbtag {

inline constexpr size_t kDefaultMaxSpanTokens = 8;

/// One candidate: a span whose similarity to an entity met the threshold.
struct ScoredCandidate {
  size_t entity_index = 0;
  Span span;
  double score = 0.0;

  bool operator==(const ScoredCandidate&) const = default;
};

/// Sparse (entity, span) -> score map holding exactly the candidates at or
/// above the generating config's threshold. Per-entity lists are ordered by
/// (start, end).
struct ScoreMatrix {
  SimilarityConfig config;
  size_t n_tokens = 0;
  std::vector<std::vector<ScoredCandidate>> candidates;  // indexed by entity

  size_t total() const {
    size_t n = 0;
    for (const auto& c : candidates) n += c.size();
    return n;
  }
  bool empty() const { return total() == 0; }
};

/// All spans of up to max_span_tokens tokens that are at least
/// config.threshold-similar to each entity. Span text is the tokens joined
/// by single spaces; comparison is case-folded.
inline ScoreMatrix candidate_spans(const NlqDoc& doc, const EntitySet& entities,
                                   const SimilarityConfig& config,
                                   size_t max_span_tokens = kDefaultMaxSpanTokens) {
  validate_config(config);
  if (max_span_tokens < 1) throw InvariantError("max_span_tokens must be >= 1");

  ScoreMatrix m;
  m.config = config;
  m.n_tokens = doc.tokens.size();
  m.candidates.resize(entities.size());

  const bool jaccard = config.measure == SimilarityMeasure::Jaccard3;
  std::vector<std::vector<std::string>> entity_grams;
  if (jaccard) {
    entity_grams.reserve(entities.size());
    for (const DbEntity& e : entities) entity_grams.push_back(detail::gram3_set(e.norm_text));
  }

  const size_t n = doc.tokens.size();
  for (size_t start = 0; start < n; ++start) {
    std::string text;
    for (size_t end = start + 1; end <= n && end - start <= max_span_tokens; ++end) {
      if (end - start > 1) text += ' ';
      text += doc.tokens[end - 1].text;
      std::string folded = fold_case(text);
      std::vector<std::string> span_grams;
      if (jaccard && !folded.empty()) span_grams = detail::gram3_set(folded);
      for (size_t e = 0; e < entities.size(); ++e) {
        const std::string& norm = entities[e].norm_text;
        double score;
        if (jaccard) {
          if (folded.empty() && norm.empty()) score = 1.0;
          else if (folded.empty() || norm.empty()) score = 0.0;
          else score = detail::jaccard_of_sets(span_grams, entity_grams[e]);
        } else {
          size_t max_len = std::max(folded.size(), norm.size());
          score = max_len == 0
                      ? 1.0
                      : 1.0 - static_cast<double>(detail::edit_distance(folded, norm)) /
                                  static_cast<double>(max_len);
        }
        if (score >= config.threshold)
          m.candidates[e].push_back(ScoredCandidate{e, Span{start, end}, score});
      }
    }
  }
  for (auto& list : m.candidates) {
    std::sort(list.begin(), list.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
      return a.span.start != b.span.start ? a.span.start < b.span.start
                                          : a.span.end < b.span.end;
    });
  }
  return m;
}

/// The exact optimum of the span-assignment problem: at most one span per
/// entity, chosen spans pairwise non-overlapping, total score maximal.
struct Alignment {
  std::vector<std::optional<Span>> chosen;  // indexed by entity
  double objective = 0.0;
};

namespace detail {

/// Components up to this many entities go through the set DP, whose cost is
/// bounded by 2^k states per position, subject to a table-size cap.
inline constexpr size_t kSetDpMaxEntities = 18;
inline constexpr size_t kSetDpMaxCells = size_t{1} << 24;

/// One independent subproblem of the assignment: entities whose candidate
/// spans can transitively conflict. Components share no tokens, so they are
/// solved separately and merged.
struct SolverComponent {
  std::vector<size_t> entities;  // ascending original indices
};

inline std::vector<SolverComponent> conflict_components(
    const std::vector<std::vector<ScoredCandidate>>& cands, size_t n_tokens) {
  const size_t n_ent = cands.size();
  std::vector<size_t> parent(n_ent);
  for (size_t e = 0; e < n_ent; ++e) parent[e] = e;
  std::function<size_t(size_t)> find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](size_t a, size_t b) { parent[find(a)] = find(b); };

  // Entities touching a common token conflict.
  std::vector<size_t> token_owner(n_tokens, SIZE_MAX);
  for (size_t e = 0; e < n_ent; ++e) {
    for (const ScoredCandidate& c : cands[e]) {
      for (size_t t = c.span.start; t < c.span.end; ++t) {
        if (token_owner[t] == SIZE_MAX) token_owner[t] = e;
        else unite(token_owner[t], e);
      }
    }
  }
  std::vector<std::vector<size_t>> grouped(n_ent);
  for (size_t e = 0; e < n_ent; ++e) grouped[find(e)].push_back(e);
  std::vector<SolverComponent> out;
  for (auto& group : grouped)
    if (!group.empty()) out.push_back(SolverComponent{std::move(group)});
  return out;
}

/// Positional sweep DP for one component: values are computed over states
/// (token position, set of used entities), so the work is bounded by
/// 2^k * footprint however flat the score landscape is. That keeps heavily
/// contended components (many near-duplicate entities competing for the same
/// question windows) exact and fast where bound-based search degenerates.
/// The canonical optimum is reconstructed entity by entity: a candidate is
/// accepted when a forward/backward table join proves the remaining pool can
/// still reach the target value around it.
struct SetDpSearch {
  struct Cand {
    size_t level;  // index into the component's entity list
    size_t begin;  // compressed positions
    size_t end;
    Span span;
    double score;
  };

  size_t k = 0;
  size_t length = 0;                      // compressed line length
  std::vector<std::vector<Cand>> starts;  // candidates by compressed start
  std::vector<std::vector<Cand>> per_level;  // canonical (start, end) order
  std::vector<std::optional<Span>> best;

  static constexpr double kTol = 1e-12;

  SetDpSearch(const std::vector<std::vector<ScoredCandidate>>& all_cands,
              const std::vector<size_t>& entities, const std::vector<size_t>& token_bit) {
    k = entities.size();
    per_level.resize(k);
    for (size_t i = 0; i < k; ++i) {
      for (const ScoredCandidate& c : all_cands[entities[i]]) {
        size_t begin = token_bit[c.span.start];
        size_t end = token_bit[c.span.end - 1] + 1;
        length = std::max(length, end);
        per_level[i].push_back(Cand{i, begin, end, c.span, c.score});
      }
    }
    starts.resize(length + 1);
    for (const auto& list : per_level)
      for (const Cand& c : list) starts[c.begin].push_back(c);
    best.assign(k, std::nullopt);
  }

  // Best value over positions [p, length) for entities of `pool` not in U,
  // avoiding blocked positions. Index: table[p][U].
  std::vector<std::vector<double>> backward(uint32_t pool, const std::vector<char>& blocked) const {
    const size_t states = uint64_t{1} << std::popcount(pool);
    std::vector<uint32_t> compact = compact_bits(pool);
    std::vector<std::vector<double>> table(length + 1, std::vector<double>(states, 0.0));
    for (size_t p = length; p-- > 0;) {
      table[p] = table[p + 1];
      if (blocked[p]) continue;
      for (const Cand& c : starts[p]) {
        uint32_t bit = compact[c.level];
        if (bit == 0) continue;  // entity not in the pool
        if (is_blocked(c, blocked)) continue;
        const auto& landing = table[c.end];
        auto& row = table[p];
        for (uint32_t u = 0; u < states; ++u) {
          if (u & bit) continue;
          double v = c.score + landing[u | bit];
          if (v > row[u]) row[u] = v;
        }
      }
    }
    return table;
  }

  // Best value over positions [0, p) for entities of `pool`, where U is the
  // exact set used; -1 marks unreachable states.
  std::vector<std::vector<double>> forward(uint32_t pool, const std::vector<char>& blocked) const {
    const size_t states = uint64_t{1} << std::popcount(pool);
    std::vector<uint32_t> compact = compact_bits(pool);
    std::vector<std::vector<double>> table(length + 1, std::vector<double>(states, -1.0));
    table[0][0] = 0.0;
    for (size_t p = 0; p < length; ++p) {
      auto& here = table[p];
      auto& next = table[p + 1];
      for (uint32_t u = 0; u < states; ++u)
        if (here[u] > next[u]) next[u] = here[u];
      if (blocked[p]) continue;
      for (const Cand& c : starts[p]) {
        uint32_t bit = compact[c.level];
        if (bit == 0) continue;
        if (is_blocked(c, blocked)) continue;
        auto& landing = table[c.end];
        for (uint32_t u = 0; u < states; ++u) {
          if ((u & bit) || here[u] < 0.0) continue;
          double v = here[u] + c.score;
          if (v > landing[u | bit]) landing[u | bit] = v;
        }
      }
    }
    return table;
  }

  bool is_blocked(const Cand& c, const std::vector<char>& blocked) const {
    for (size_t p = c.begin; p < c.end; ++p)
      if (blocked[p]) return true;
    return false;
  }

  // Maps entity levels to bits of the compacted pool mask; 0 when absent.
  std::vector<uint32_t> compact_bits(uint32_t pool) const {
    std::vector<uint32_t> bits(k, 0);
    uint32_t next = 1;
    for (size_t i = 0; i < k; ++i) {
      if (pool & (uint32_t{1} << i)) {
        bits[i] = next;
        next <<= 1;
      }
    }
    return bits;
  }

  void run() {
    std::vector<char> blocked(length + 1, 0);
    uint32_t full_pool = k == 32 ? ~uint32_t{0} : (uint32_t{1} << k) - 1;
    double target = backward(full_pool, blocked)[0][0];

    for (size_t i = 0; i < k; ++i) {
      uint32_t pool = 0;
      for (size_t j = i + 1; j < k; ++j) pool |= uint32_t{1} << j;
      auto fwd = forward(pool, blocked);
      auto bwd = backward(pool, blocked);
      const size_t states = uint64_t{1} << std::popcount(pool);

      bool matched = false;
      for (const Cand& c : per_level[i]) {  // canonical (start, end) order
        if (is_blocked(c, blocked)) continue;
        double around = -1.0;
        const auto& pre = fwd[c.begin];
        const auto& post = bwd[c.end];
        for (uint32_t u = 0; u < states; ++u) {
          if (pre[u] < 0.0) continue;
          double v = pre[u] + post[u];
          if (v > around) around = v;
        }
        if (around >= 0.0 && std::abs(c.score + around - target) <= kTol) {
          best[i] = c.span;
          for (size_t p = c.begin; p < c.end; ++p) blocked[p] = 1;
          target = around;
          matched = true;
          break;
        }
      }
      if (!matched) {
        double without = bwd[0][0];
        if (std::abs(without - target) > kTol)
          throw InvariantError("solver reconstruction lost the optimal value");
        target = without;
      }
    }
  }
};

/// Memoized branch-and-bound over (entity level, occupied token mask) for
/// components too large for the set DP but whose candidates fit a 64-token
/// footprint. Memoization collapses the permutation plateaus that defeat a
/// plain DFS when many entities share candidates.
struct ComponentSearch {
  struct Cand {
    Span span;
    double score;
    uint64_t mask;
  };
  struct Entry {
    double value;
    bool exact;
  };

  std::vector<std::vector<Cand>> cands;          // per level, canonical order
  std::vector<std::vector<size_t>> by_score;     // per level, score-desc index
  std::vector<double> suffix_best;               // static bound tail
  std::vector<std::unordered_map<uint64_t, Entry>> memo;
  std::vector<std::optional<Span>> best;         // reconstruction output
  size_t memo_entries = 0;
  static constexpr size_t kMemoCap = 1u << 22;   // stop inserting past ~4M states

  ComponentSearch(const std::vector<std::vector<ScoredCandidate>>& all_cands,
                  const std::vector<size_t>& entities, const std::vector<size_t>& token_bit) {
    const size_t k = entities.size();
    cands.resize(k);
    by_score.resize(k);
    for (size_t i = 0; i < k; ++i) {
      for (const ScoredCandidate& c : all_cands[entities[i]]) {
        uint64_t mask = 0;
        for (size_t t = c.span.start; t < c.span.end; ++t)
          mask |= uint64_t{1} << token_bit[t];
        cands[i].push_back(Cand{c.span, c.score, mask});
      }
      by_score[i].resize(cands[i].size());
      for (size_t j = 0; j < cands[i].size(); ++j) by_score[i][j] = j;
      std::sort(by_score[i].begin(), by_score[i].end(), [&](size_t a, size_t b) {
        if (cands[i][a].score != cands[i][b].score) return cands[i][a].score > cands[i][b].score;
        return a < b;
      });
    }
    suffix_best.assign(k + 1, 0.0);
    for (size_t i = k; i-- > 0;) {
      double top = cands[i].empty() ? 0.0 : cands[i][by_score[i][0]].score;
      suffix_best[i] = suffix_best[i + 1] + top;
    }
    memo.resize(k);
    best.assign(k, std::nullopt);
  }

  double feasible_bound(size_t i, uint64_t mask) const {
    double bound = 0.0;
    for (size_t j = i; j < cands.size(); ++j) {
      for (size_t idx : by_score[j]) {
        if ((cands[j][idx].mask & mask) == 0) {
          bound += cands[j][idx].score;
          break;
        }
      }
    }
    return bound;
  }

  // Returns r with r >= V(i, mask) always and r == V(i, mask) whenever
  // V(i, mask) > alpha; memo entries are exact values or valid upper bounds.
  double eval(size_t i, uint64_t mask, double alpha) {
    if (i == cands.size()) return 0.0;
    auto it = memo[i].find(mask);
    if (it != memo[i].end()) {
      if (it->second.exact || it->second.value <= alpha) return it->second.value;
    }
    if (suffix_best[i] <= alpha) return store(i, mask, suffix_best[i], false);
    double bound = feasible_bound(i, mask);
    if (bound <= alpha) return store(i, mask, bound, false);

    double value = 0.0;  // inexact child returns never push this above alpha
    for (size_t idx : by_score[i]) {
      const Cand& c = cands[i][idx];
      if (c.mask & mask) continue;
      double child = eval(i + 1, mask | c.mask, std::max(alpha, value) - c.score);
      value = std::max(value, c.score + child);
    }
    value = std::max(value, eval(i + 1, mask, std::max(alpha, value)));
    return store(i, mask, value, value > alpha);
  }

  double store(size_t i, uint64_t mask, double value, bool exact) {
    if (memo_entries < kMemoCap) {
      auto [it, inserted] = memo[i].try_emplace(mask, Entry{value, exact});
      if (inserted) {
        ++memo_entries;
      } else if (!it->second.exact && (exact || value < it->second.value)) {
        it->second = Entry{value, exact};
      }
    }
    return value;
  }

  void run() {
    const size_t k = cands.size();
    double target = eval(0, 0, -1.0);
    uint64_t mask = 0;
    for (size_t i = 0; i < k; ++i) {
      bool matched = false;
      for (const Cand& c : cands[i]) {  // canonical (start, end) order
        if (c.mask & mask) continue;
        double child = eval(i + 1, mask | c.mask, target - c.score - 1e-9);
        if (c.score + child == target) {
          best[i] = c.span;
          mask |= c.mask;
          target = child;
          matched = true;
          break;
        }
      }
      if (!matched) {
        double child = eval(i + 1, mask, target - 1e-9);
        if (child != target)
          throw InvariantError("solver reconstruction lost the optimal value");
      }
    }
  }
};

/// Fallback for components whose candidates touch more than 64 distinct
/// tokens: canonical-order DFS where the first solution reaching the optimum
/// is the canonical optimum, so equal-objective branches prune outright.
struct WideComponentSearch {
  const std::vector<std::vector<ScoredCandidate>>& cands;
  const std::vector<std::vector<size_t>>& by_score;
  const std::vector<size_t>& entities;
  std::vector<char>& occupied;

  std::vector<double> suffix_best;
  std::vector<std::optional<Span>> current, best;
  double best_obj = -1.0;

  WideComponentSearch(const std::vector<std::vector<ScoredCandidate>>& cands_,
                      const std::vector<std::vector<size_t>>& by_score_,
                      const std::vector<size_t>& entities_, std::vector<char>& occupied_)
      : cands(cands_), by_score(by_score_), entities(entities_), occupied(occupied_) {
    const size_t k = entities.size();
    suffix_best.assign(k + 1, 0.0);
    for (size_t i = k; i-- > 0;) {
      const auto& list = cands[entities[i]];
      double top = list.empty() ? 0.0 : list[by_score[entities[i]][0]].score;
      suffix_best[i] = suffix_best[i + 1] + top;
    }
    current.assign(k, std::nullopt);
    best.assign(k, std::nullopt);
  }

  bool fits(const Span& s) const {
    for (size_t t = s.start; t < s.end; ++t)
      if (occupied[t]) return false;
    return true;
  }

  void run() { dfs(0, 0.0); }

  void dfs(size_t i, double acc) {
    const size_t k = entities.size();
    if (i == k) {
      if (acc > best_obj) {
        best_obj = acc;
        best = current;
      }
      return;
    }
    if (acc + suffix_best[i] <= best_obj) return;
    double bound = acc;
    for (size_t j = i; j < k; ++j) {
      for (size_t idx : by_score[entities[j]]) {
        if (fits(cands[entities[j]][idx].span)) {
          bound += cands[entities[j]][idx].score;
          break;
        }
      }
    }
    if (bound <= best_obj) return;

    for (const ScoredCandidate& c : cands[entities[i]]) {  // canonical order
      if (!fits(c.span)) continue;
      for (size_t t = c.span.start; t < c.span.end; ++t) occupied[t] = 1;
      current[i] = c.span;
      dfs(i + 1, acc + c.score);
      current[i].reset();
      for (size_t t = c.span.start; t < c.span.end; ++t) occupied[t] = 0;
    }
    dfs(i + 1, acc);  // leave this entity unassigned
  }
};

}  // namespace detail

/// Exact optimizer for the span assignment. Independent conflict components
/// are solved separately: small ones by the positional set DP, larger ones by
/// memoized branch-and-bound, and oversized footprints by a plain canonical
/// DFS. For any instance the objective equals the brute-force maximum over
/// feasible subsets; among equal-objective optima the canonical one (entity
/// by entity: assigned before none, then smaller start, then smaller end) is
/// returned.
inline Alignment solve(const ScoreMatrix& m, size_t n_tokens) {
  const size_t n_ent = m.candidates.size();
  for (const auto& list : m.candidates)
    for (const ScoredCandidate& c : list)
      if (c.span.start >= c.span.end || c.span.end > n_tokens)
        throw BoundsError("candidate span does not fit the document");

  // Working copy per entity without candidates that can never appear in the
  // canonical optimum: a same-entity candidate on a contained span always
  // wins when it scores strictly higher, or ties the score at the same start
  // with a shorter span.
  std::vector<std::vector<ScoredCandidate>> cands(n_ent);
  std::vector<std::vector<size_t>> by_score(n_ent);
  for (size_t e = 0; e < n_ent; ++e) {
    const auto& list = m.candidates[e];
    for (const ScoredCandidate& c : list) {
      bool dominated = false;
      for (const ScoredCandidate& d : list) {
        if (&d == &c) continue;
        bool contained = d.span.start >= c.span.start && d.span.end <= c.span.end;
        if (!contained) continue;
        if (d.score > c.score ||
            (d.score == c.score && d.span.start == c.span.start && d.span.end < c.span.end)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) cands[e].push_back(c);
    }
    std::sort(cands[e].begin(), cands[e].end(),
              [](const ScoredCandidate& a, const ScoredCandidate& b) {
                return a.span.start != b.span.start ? a.span.start < b.span.start
                                                    : a.span.end < b.span.end;
              });
    by_score[e].resize(cands[e].size());
    for (size_t i = 0; i < cands[e].size(); ++i) by_score[e][i] = i;
    std::sort(by_score[e].begin(), by_score[e].end(), [&](size_t a, size_t b) {
      if (cands[e][a].score != cands[e][b].score) return cands[e][a].score > cands[e][b].score;
      return a < b;
    });
  }

  std::vector<std::optional<Span>> chosen(n_ent);
  std::vector<char> occupied(n_tokens, 0);
  for (const detail::SolverComponent& comp : detail::conflict_components(cands, n_tokens)) {
    // Footprint: tokens any candidate of this component covers, numbered in
    // ascending token order so compressed spans stay contiguous.
    std::vector<char> in_footprint(n_tokens, 0);
    for (size_t e : comp.entities)
      for (const ScoredCandidate& c : cands[e])
        for (size_t t = c.span.start; t < c.span.end; ++t) in_footprint[t] = 1;
    std::vector<size_t> token_bit(n_tokens, SIZE_MAX);
    size_t bits = 0;
    for (size_t t = 0; t < n_tokens; ++t)
      if (in_footprint[t]) token_bit[t] = bits++;

    auto apply = [&](const std::vector<std::optional<Span>>& best) {
      for (size_t i = 0; i < comp.entities.size(); ++i) chosen[comp.entities[i]] = best[i];
    };
    const size_t k = comp.entities.size();
    // Set-DP tables hold (footprint + 1) * 2^k values; keep them bounded.
    bool set_dp_fits =
        k <= detail::kSetDpMaxEntities && ((bits + 1) << k) <= detail::kSetDpMaxCells;
    if (set_dp_fits) {
      detail::SetDpSearch search(cands, comp.entities, token_bit);
      search.run();
      apply(search.best);
    } else if (bits <= 64) {
      detail::ComponentSearch search(cands, comp.entities, token_bit);
      search.run();
      apply(search.best);
    } else {
      detail::WideComponentSearch search(cands, by_score, comp.entities, occupied);
      search.run();
      apply(search.best);
    }
  }

  // Objective recomputed in entity order; feasibility asserted on the way.
  double objective = 0.0;
  std::fill(occupied.begin(), occupied.end(), 0);
  for (size_t e = 0; e < n_ent; ++e) {
    if (!chosen[e]) continue;
    for (size_t t = chosen[e]->start; t < chosen[e]->end; ++t) {
      if (occupied[t]) throw InvariantError("solver produced overlapping spans");
      occupied[t] = 1;
    }
    for (const ScoredCandidate& c : m.candidates[e])
      if (c.span == *chosen[e]) {
        objective += c.score;
        break;
      }
  }
  return Alignment{std::move(chosen), objective};
}

/// Links for the chosen spans, in entity order, carrying the matrix scores.
inline std::vector<EntityLink> links_from_alignment(const ScoreMatrix& m, const Alignment& a) {
  std::vector<EntityLink> links;
  for (size_t e = 0; e < a.chosen.size(); ++e) {
    if (!a.chosen[e]) continue;
    const Span& span = *a.chosen[e];
    double score = 0.0;
    bool found = false;
    for (const ScoredCandidate& c : m.candidates[e]) {
      if (c.span == span) {
        score = c.score;
        found = true;
        break;
      }
    }
    if (!found) throw InvariantError("alignment chose a span absent from the score matrix");
    links.push_back(EntityLink{span, e, score});
  }
  return links;
}

/// An annotation together with the entity set its links point into.
struct AnnotationResult {
  Annotation annotation;
  EntitySet entities;
};

inline AnnotationResult annotate_doc(NlqDoc doc, EntitySet entities,
                                     const SimilarityConfig& config,
                                     size_t max_span_tokens = kDefaultMaxSpanTokens) {
  ScoreMatrix matrix = candidate_spans(doc, entities, config, max_span_tokens);
  Alignment alignment = solve(matrix, doc.tokens.size());
  std::vector<EntityLink> links = links_from_alignment(matrix, alignment);
  Annotation annotation = make_annotation(std::move(doc), std::move(links), entities);
  return AnnotationResult{std::move(annotation), std::move(entities)};
}

/// Full synthetic-annotation pipeline for one question/SQL pair: tokenize,
/// parse the SQL, extract entities, generate candidates, solve, project
/// labels. Parse errors propagate to the caller.
inline AnnotationResult annotate(const RawPair& pair, const SimilarityConfig& config,
                                 size_t max_span_tokens = kDefaultMaxSpanTokens) {
  NlqDoc doc = tokenize(pair.question);
  sql::SelectStmt ast = sql::parse_sql(pair.sql);
  EntitySet entities = sql::extract_entities(ast);
  return annotate_doc(std::move(doc), std::move(entities), config, max_span_tokens);
}

}  // namespace dbtag
