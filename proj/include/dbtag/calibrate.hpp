#pragma once

#include <array>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dbtag/aligner.hpp"
#include "dbtag/log.hpp"
#include "dbtag/metrics.hpp"

namespace dbtag {

/// The fixed hyperparameter grid: both measures crossed with thresholds
/// 0.1 through 1.0 in steps of 0.1.
inline const std::array<double, 10>& grid_thresholds() {
  static const std::array<double, 10> t = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  return t;
}

struct GridCell {
  SimilarityConfig config;
  double f1 = 0.0;
  MetricsReport report;
};

/// All 20 grid cells plus the winner. Ties resolve toward the higher
/// threshold, then jaccard3 over levenshtein.
struct CalibrationReport {
  std::vector<GridCell> cells;
  SimilarityConfig best;
  size_t skipped = 0;  // gold examples whose SQL failed to parse
};

namespace detail {

inline bool cell_beats(const GridCell& a, const GridCell& b) {
  if (a.f1 != b.f1) return a.f1 > b.f1;
  if (a.config.threshold != b.config.threshold) return a.config.threshold > b.config.threshold;
  return a.config.measure == SimilarityMeasure::Jaccard3 &&
         b.config.measure == SimilarityMeasure::Levenshtein;
}

}  // namespace detail

/// Grid search of the synthetic annotator against human gold labels
/// (corpus micro-F1 over entity classes, 4-class projection). Examples whose
/// SQL does not parse are excluded from every cell and counted. Throws when
/// no usable example remains or an example is missing its SQL.
inline CalibrationReport calibrate(const std::vector<GoldExample>& gold,
                                   size_t max_span_tokens = kDefaultMaxSpanTokens) {
  struct Prepared {
    const GoldExample* gold;
    NlqDoc doc;
    EntitySet entities;
  };
  CalibrationReport report;
  std::vector<Prepared> usable;
  for (const GoldExample& g : gold) {
    if (!g.sql)
      throw InputError("gold example '" + g.id + "' has no SQL; calibration requires it");
    if (g.tokens.size() != g.labels.size())
      throw InputError("gold example '" + g.id + "' has " + std::to_string(g.tokens.size()) +
                       " tokens but " + std::to_string(g.labels.size()) + " labels");
    try {
      sql::SelectStmt ast = sql::parse_sql(*g.sql);
      usable.push_back(Prepared{&g, doc_from_tokens(g.tokens), sql::extract_entities(ast)});
    } catch (const ParseError& e) {
      log_warn("calibrate: skipping '" + g.id + "': " + e.what());
      ++report.skipped;
    }
  }
  if (usable.empty()) throw InputError("no usable gold examples for calibration");

  for (SimilarityMeasure measure : {SimilarityMeasure::Jaccard3, SimilarityMeasure::Levenshtein}) {
    // One matrix per example at the lowest grid threshold; higher cells are
    // score filters over it, which matches regenerating from scratch exactly.
    std::vector<ScoreMatrix> base;
    base.reserve(usable.size());
    const SimilarityConfig base_cfg{measure, grid_thresholds().front()};
    for (const Prepared& p : usable)
      base.push_back(candidate_spans(p.doc, p.entities, base_cfg, max_span_tokens));

    for (double threshold : grid_thresholds()) {
      GridCell cell;
      cell.config = SimilarityConfig{measure, threshold};
      std::vector<LabelPair> pairs;
      pairs.reserve(usable.size());
      for (size_t i = 0; i < usable.size(); ++i) {
        ScoreMatrix m;
        m.config = cell.config;
        m.n_tokens = base[i].n_tokens;
        m.candidates.resize(base[i].candidates.size());
        for (size_t e = 0; e < base[i].candidates.size(); ++e)
          for (const ScoredCandidate& c : base[i].candidates[e])
            if (c.score >= threshold) m.candidates[e].push_back(c);
        Alignment a = solve(m, m.n_tokens);
        std::vector<EntityLink> links = links_from_alignment(m, a);
        std::vector<Label> pred = labels_from_links(usable[i].doc, links, usable[i].entities);
        pairs.push_back(LabelPair{usable[i].gold->id, usable[i].gold->labels, std::move(pred)});
      }
      cell.report = score_corpus(pairs, ClassGrouping::FourClass);
      cell.f1 = entity_micro_f1(cell.report);
      report.cells.push_back(std::move(cell));
    }
  }

  size_t best_idx = 0;
  for (size_t i = 1; i < report.cells.size(); ++i)
    if (detail::cell_beats(report.cells[i], report.cells[best_idx])) best_idx = i;
  report.best = report.cells[best_idx].config;
  return report;
}

/// One skipped record of an augmentation run.
struct SkipEntry {
  std::string id;
  std::string reason;
};

struct AugmentedPair {
  std::string id;
  AnnotationResult result;
};

struct AugmentResult {
  std::vector<AugmentedPair> annotated;  // input order, skipped records removed
  std::vector<SkipEntry> skipped;        // input order
};

/// Annotates every pair with the chosen config. Records whose SQL fails to
/// parse end up in the skip report instead of aborting the run. Output order
/// equals input order regardless of the worker count.
inline AugmentResult augment(const std::vector<RawPair>& pairs, const SimilarityConfig& config,
                             size_t max_span_tokens = kDefaultMaxSpanTokens, unsigned jobs = 1) {
  validate_config(config);
  const size_t n = pairs.size();
  std::vector<std::optional<AnnotationResult>> slots(n);
  std::vector<std::optional<SkipEntry>> errors(n);

  auto work = [&](size_t i) {
    try {
      slots[i] = annotate(pairs[i], config, max_span_tokens);
    } catch (const ParseError& e) {
      errors[i] = SkipEntry{pairs[i].id, e.what()};
    }
  };

  if (jobs <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> workers;
    unsigned count = std::min<size_t>(jobs, n);
    workers.reserve(count);
    for (unsigned w = 0; w < count; ++w) {
      workers.emplace_back([&] {
        try {
          for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) work(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  AugmentResult out;
  for (size_t i = 0; i < n; ++i) {
    if (slots[i]) {
      out.annotated.push_back(AugmentedPair{pairs[i].id, std::move(*slots[i])});
    } else if (errors[i]) {
      out.skipped.push_back(std::move(*errors[i]));
    }
  }
  return out;
}

/// JSON form of a calibration report, grid cells in fixed order.
inline std::string calibration_to_json(const CalibrationReport& report) {
  std::string out = "{\"grid\": [";
  for (size_t i = 0; i < report.cells.size(); ++i) {
    const GridCell& cell = report.cells[i];
    if (i) out += ", ";
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "{\"measure\": \"%s\", \"threshold\": %.1f, \"f1\": %.4f, "
                  "\"precision\": %.4f, \"recall\": %.4f}",
                  std::string(measure_str(cell.config.measure)).c_str(),
                  cell.config.threshold, cell.f1, cell.report.micro.precision,
                  cell.report.micro.recall);
    out += buf;
  }
  char best[96];
  std::snprintf(best, sizeof(best), "], \"best\": {\"measure\": \"%s\", \"threshold\": %.1f}",
                std::string(measure_str(report.best.measure)).c_str(), report.best.threshold);
  out += best;
  out += ", \"skipped\": " + std::to_string(report.skipped) + "}";
  return out;
}

}  // namespace dbtag
