#pragma once

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "dbtag/core.hpp"

namespace dbtag {

/// Label projections used for scoring: the full {T, C, V, O} alphabet, the
/// schema/value split {S = T+C, V, O}, and entity-vs-background {I, O}.
enum class ClassGrouping { FourClass, ThreeClass, TwoClass };

inline std::string_view grouping_str(ClassGrouping g) {
  switch (g) {
    case ClassGrouping::FourClass: return "4-class";
    case ClassGrouping::ThreeClass: return "3-class";
    case ClassGrouping::TwoClass: return "2-class";
  }
  return "?";
}

inline std::optional<ClassGrouping> parse_grouping(std::string_view s) {
  if (s == "4" || s == "4-class") return ClassGrouping::FourClass;
  if (s == "3" || s == "3-class") return ClassGrouping::ThreeClass;
  if (s == "2" || s == "2-class") return ClassGrouping::TwoClass;
  return std::nullopt;
}

/// Projected class names; the background class O is always last.
inline const std::vector<std::string>& grouping_classes(ClassGrouping g) {
  static const std::vector<std::string> four = {"T", "C", "V", "O"};
  static const std::vector<std::string> three = {"S", "V", "O"};
  static const std::vector<std::string> two = {"I", "O"};
  switch (g) {
    case ClassGrouping::FourClass: return four;
    case ClassGrouping::ThreeClass: return three;
    case ClassGrouping::TwoClass: return two;
  }
  return four;
}

/// Index of a label's projected class within grouping_classes(g).
inline size_t project_label(ClassGrouping g, Label l) {
  switch (g) {
    case ClassGrouping::FourClass:
      switch (l) {
        case Label::Table: return 0;
        case Label::Column: return 1;
        case Label::Value: return 2;
        case Label::None: return 3;
      }
      break;
    case ClassGrouping::ThreeClass:
      switch (l) {
        case Label::Table:
        case Label::Column: return 0;
        case Label::Value: return 1;
        case Label::None: return 2;
      }
      break;
    case ClassGrouping::TwoClass:
      return l == Label::None ? 1 : 0;
  }
  return 0;
}

struct ClassMetrics {
  long tp = 0, fp = 0, fn = 0;
  long support = 0;  // gold tokens of this class
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

/// Precision/recall/F1 per projected class plus micro and macro aggregates
/// over the entity classes (O excluded). Also keeps the pooled gold x pred
/// confusion matrix the counts came from.
struct MetricsReport {
  ClassGrouping grouping = ClassGrouping::FourClass;
  std::vector<std::string> class_names;
  std::vector<ClassMetrics> per_class;
  ClassMetrics micro;
  ClassMetrics macro;
  std::vector<std::vector<long>> confusion;
};

namespace detail {

inline void fill_rates(ClassMetrics& m) {
  m.precision = (m.tp + m.fp) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fp) : 0.0;
  m.recall = (m.tp + m.fn) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fn) : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
}

inline MetricsReport report_from_confusion(ClassGrouping g,
                                           std::vector<std::vector<long>> confusion) {
  MetricsReport report;
  report.grouping = g;
  report.class_names = grouping_classes(g);
  const size_t k = report.class_names.size();
  report.per_class.resize(k);
  for (size_t c = 0; c < k; ++c) {
    ClassMetrics& m = report.per_class[c];
    m.tp = confusion[c][c];
    for (size_t p = 0; p < k; ++p) {
      if (p != c) {
        m.fn += confusion[c][p];
        m.fp += confusion[p][c];
      }
    }
    m.support = m.tp + m.fn;
    fill_rates(m);
  }
  // micro pools counts over the entity classes; macro averages their rates
  for (size_t c = 0; c + 1 < k; ++c) {
    report.micro.tp += report.per_class[c].tp;
    report.micro.fp += report.per_class[c].fp;
    report.micro.fn += report.per_class[c].fn;
    report.micro.support += report.per_class[c].support;
  }
  fill_rates(report.micro);
  const size_t entity_classes = k - 1;
  report.macro.support = report.micro.support;
  for (size_t c = 0; c < entity_classes; ++c) {
    report.macro.precision += report.per_class[c].precision;
    report.macro.recall += report.per_class[c].recall;
    report.macro.f1 += report.per_class[c].f1;
  }
  report.macro.precision /= entity_classes;
  report.macro.recall /= entity_classes;
  report.macro.f1 /= entity_classes;
  report.confusion = std::move(confusion);
  return report;
}

}  // namespace detail

/// Token-level scores of one prediction against gold. Zero denominators give
/// zero precision/recall, and F1 is zero when P + R is.
inline MetricsReport score(const std::vector<Label>& gold, const std::vector<Label>& pred,
                           ClassGrouping grouping) {
  if (gold.size() != pred.size())
    throw InputError("gold/pred length mismatch: " + std::to_string(gold.size()) + " vs " +
                     std::to_string(pred.size()));
  const size_t k = grouping_classes(grouping).size();
  std::vector<std::vector<long>> confusion(k, std::vector<long>(k, 0));
  for (size_t i = 0; i < gold.size(); ++i)
    ++confusion[project_label(grouping, gold[i])][project_label(grouping, pred[i])];
  return detail::report_from_confusion(grouping, std::move(confusion));
}

/// One evaluation pair: gold and predicted label sequences of equal length.
struct LabelPair {
  std::string id;
  std::vector<Label> gold;
  std::vector<Label> pred;
};

/// Pools token counts over the whole corpus (corpus-level micro), then scores
/// exactly as `score` does. A length mismatch aborts naming the offending id.
inline MetricsReport score_corpus(const std::vector<LabelPair>& pairs, ClassGrouping grouping) {
  const size_t k = grouping_classes(grouping).size();
  std::vector<std::vector<long>> confusion(k, std::vector<long>(k, 0));
  for (const LabelPair& pair : pairs) {
    if (pair.gold.size() != pair.pred.size())
      throw InputError("gold/pred length mismatch for record '" + pair.id + "': " +
                       std::to_string(pair.gold.size()) + " vs " +
                       std::to_string(pair.pred.size()));
    for (size_t i = 0; i < pair.gold.size(); ++i)
      ++confusion[project_label(grouping, pair.gold[i])][project_label(grouping, pair.pred[i])];
  }
  return detail::report_from_confusion(grouping, std::move(confusion));
}

/// The calibration objective: corpus micro-F1 over T/C/V under the 4-class
/// projection (type-sensitive, O excluded).
inline double entity_micro_f1(const MetricsReport& report) { return report.micro.f1; }

namespace detail {

inline std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

inline void append_class_metrics(std::string& out, const ClassMetrics& m) {
  out += "{\"precision\": " + fixed4(m.precision) + ", \"recall\": " + fixed4(m.recall) +
         ", \"f1\": " + fixed4(m.f1) + ", \"support\": " + std::to_string(m.support) + "}";
}

}  // namespace detail

/// JSON form: {"<grouping>": {"<class>": {precision, recall, f1, support},
/// ..., "micro": {...}, "macro": {...}}} with rates at 4 fractional digits.
inline std::string metrics_to_json(const MetricsReport& report) {
  std::string out = "{\"";
  out += grouping_str(report.grouping);
  out += "\": {";
  for (size_t c = 0; c < report.class_names.size(); ++c) {
    if (c) out += ", ";
    out += "\"" + report.class_names[c] + "\": ";
    detail::append_class_metrics(out, report.per_class[c]);
  }
  out += ", \"micro\": ";
  detail::append_class_metrics(out, report.micro);
  out += ", \"macro\": ";
  detail::append_class_metrics(out, report.macro);
  out += "}}";
  return out;
}

}  // namespace dbtag
