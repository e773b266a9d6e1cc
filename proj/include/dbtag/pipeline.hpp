#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbtag/aligner.hpp"
#include "dbtag/calibrate.hpp"
#include "dbtag/core.hpp"
#include "dbtag/metrics.hpp"
#include "dbtag/tokenizer.hpp"

namespace dbtag {

using ordered_json = nlohmann::ordered_json;

/// Supported dataset layouts. Spider ships an array of objects keyed
/// "question"/"query", BIRD an array keyed "question"/"SQL", and the generic
/// form is JSONL with "id"/"question"/"sql" per line.
enum class DatasetFormat { SpiderJson, BirdJson, GenericJsonl };

inline std::optional<DatasetFormat> parse_dataset_format(std::string_view s) {
  if (s == "spider") return DatasetFormat::SpiderJson;
  if (s == "bird") return DatasetFormat::BirdJson;
  if (s == "jsonl") return DatasetFormat::GenericJsonl;
  return std::nullopt;
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string json_string_field(const ordered_json& obj, const char* key,
                                     const std::string& where) {
  if (!obj.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_string()) throw InputError(where + ": field \"" + key + "\" must be a string");
  return v.get<std::string>();
}

inline std::string id_or_index(const ordered_json& obj, const char* key, size_t index) {
  if (obj.contains(key)) {
    const auto& v = obj.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
  }
  return std::to_string(index);
}

inline ordered_json parse_json(const std::string& text, const std::string& where) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(where + ": " + e.what());
  }
}

}  // namespace detail

/// Loads question/SQL pairs in the declared format. Ids come from the source
/// when present ("id", or "question_id" for BIRD), else the zero-based index.
inline std::vector<RawPair> load_pairs(const std::string& path, DatasetFormat format) {
  std::vector<RawPair> pairs;
  if (format == DatasetFormat::GenericJsonl) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::string where = path + ":" + std::to_string(line_no);
      ordered_json obj = detail::parse_json(line, where);
      RawPair pair;
      pair.id = detail::id_or_index(obj, "id", pairs.size());
      pair.question = detail::json_string_field(obj, "question", where);
      pair.sql = detail::json_string_field(obj, "sql", where);
      if (pair.question.empty() || pair.sql.empty())
        throw InputError(where + ": question and sql must be non-empty");
      pairs.push_back(std::move(pair));
    }
    return pairs;
  }

  const char* sql_key = format == DatasetFormat::SpiderJson ? "query" : "SQL";
  const char* id_key = format == DatasetFormat::BirdJson ? "question_id" : "id";
  ordered_json root = detail::parse_json(detail::read_file(path), path);
  if (!root.is_array()) throw InputError(path + ": expected a JSON array of records");
  for (size_t i = 0; i < root.size(); ++i) {
    std::string where = path + " record " + std::to_string(i);
    const ordered_json& obj = root[i];
    if (!obj.is_object()) throw InputError(where + ": expected an object");
    RawPair pair;
    pair.id = detail::id_or_index(obj, id_key, i);
    pair.question = detail::json_string_field(obj, "question", where);
    pair.sql = detail::json_string_field(obj, sql_key, where);
    if (pair.question.empty() || pair.sql.empty())
      throw InputError(where + ": question and " + sql_key + " must be non-empty");
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

/// Loads gold examples from JSONL: {"id", "tokens", "labels", "sql"}. A raw
/// "question" may stand in for "tokens"; when both are present they must
/// agree with the tokenizer.
inline std::vector<GoldExample> load_gold(const std::string& path, bool require_sql) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::vector<GoldExample> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = path + ":" + std::to_string(line_no);
    ordered_json obj = detail::parse_json(line, where);
    GoldExample g;
    g.id = detail::id_or_index(obj, "id", out.size());

    if (obj.contains("tokens")) {
      if (!obj.at("tokens").is_array()) throw InputError(where + ": \"tokens\" must be an array");
      for (const auto& t : obj.at("tokens")) {
        if (!t.is_string()) throw InputError(where + ": token entries must be strings");
        g.tokens.push_back(t.get<std::string>());
      }
      if (obj.contains("question")) {
        NlqDoc doc = tokenize(obj.at("question").get<std::string>());
        std::vector<std::string> from_question;
        for (const Token& t : doc.tokens) from_question.push_back(t.text);
        if (from_question != g.tokens)
          throw InputError(where + ": \"tokens\" disagree with tokenize(question)");
      }
    } else if (obj.contains("question")) {
      NlqDoc doc = tokenize(detail::json_string_field(obj, "question", where));
      for (const Token& t : doc.tokens) g.tokens.push_back(t.text);
    } else {
      throw InputError(where + ": need \"tokens\" or \"question\"");
    }

    if (!obj.contains("labels") || !obj.at("labels").is_array())
      throw InputError(where + ": missing \"labels\" array");
    for (const auto& l : obj.at("labels")) {
      auto parsed = l.is_string() ? parse_label(l.get<std::string>()) : std::nullopt;
      if (!parsed) throw InputError(where + ": labels must be \"T\", \"C\", \"V\" or \"O\"");
      g.labels.push_back(*parsed);
    }
    if (g.tokens.size() != g.labels.size())
      throw InputError(where + ": " + std::to_string(g.tokens.size()) + " tokens vs " +
                       std::to_string(g.labels.size()) + " labels");

    if (obj.contains("sql")) {
      g.sql = detail::json_string_field(obj, "sql", where);
    } else if (require_sql) {
      throw InputError(where + ": missing \"sql\" (required for calibration)");
    }
    out.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Annotated output records
// ---------------------------------------------------------------------------

struct RecordEntity {
  size_t start = 0;
  size_t end = 0;
  std::string text;    // span text from the question
  EntityType type = EntityType::Table;
  std::string entity;  // the database entity's original spelling
  double score = 0.0;

  bool operator==(const RecordEntity&) const = default;
};

/// The output schema: tokens and labels side by side, the chosen entity
/// links, and the per-token tag-id markers (<id_0> none, <id_1> T,
/// <id_2> C, <id_3> V).
struct AnnotatedRecord {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<Label> labels;
  std::vector<RecordEntity> entities;
  std::string tag_ids;

  bool operator==(const AnnotatedRecord&) const = default;
};

inline std::string tag_id_string(const std::vector<Label>& labels) {
  std::string out;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ' ';
    out += "<id_" + std::to_string(tag_id(labels[i])) + ">";
  }
  return out;
}

inline AnnotatedRecord to_record(const std::string& id, const AnnotationResult& result) {
  const Annotation& ann = result.annotation;
  AnnotatedRecord rec;
  rec.id = id;
  for (const Token& t : ann.doc.tokens) rec.tokens.push_back(t.text);
  rec.labels = ann.labels;
  for (const EntityLink& link : ann.links) {
    const DbEntity& e = result.entities[link.entity_index];
    rec.entities.push_back(RecordEntity{link.span.start, link.span.end,
                                        span_text(ann.doc, link.span), e.type, e.text,
                                        link.score});
  }
  rec.tag_ids = tag_id_string(rec.labels);
  return rec;
}

/// One line of JSONL, key order fixed: id, tokens, labels, entities, tag_ids.
inline std::string record_to_json(const AnnotatedRecord& rec) {
  ordered_json j;
  j["id"] = rec.id;
  j["tokens"] = rec.tokens;
  ordered_json labels = ordered_json::array();
  for (Label l : rec.labels) labels.push_back(std::string(label_str(l)));
  j["labels"] = std::move(labels);
  ordered_json entities = ordered_json::array();
  for (const RecordEntity& e : rec.entities) {
    ordered_json je;
    je["start"] = e.start;
    je["end"] = e.end;
    je["text"] = e.text;
    je["type"] = std::string(entity_type_str(e.type));
    je["entity"] = e.entity;
    je["score"] = e.score;
    entities.push_back(std::move(je));
  }
  j["entities"] = std::move(entities);
  j["tag_ids"] = rec.tag_ids;
  return j.dump();
}

inline void write_annotations(const std::vector<AnnotatedRecord>& records, std::ostream& out) {
  for (const AnnotatedRecord& rec : records) out << record_to_json(rec) << "\n";
}

inline void write_annotations(const std::vector<AnnotatedRecord>& records,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open file for writing: " + path);
  write_annotations(records, out);
  if (!out) throw InputError("write failed: " + path);
}

inline AnnotatedRecord record_from_json(const ordered_json& obj, const std::string& where) {
  AnnotatedRecord rec;
  rec.id = detail::json_string_field(obj, "id", where);
  if (!obj.contains("tokens") || !obj.at("tokens").is_array())
    throw InputError(where + ": missing \"tokens\" array");
  for (const auto& t : obj.at("tokens")) rec.tokens.push_back(t.get<std::string>());
  if (!obj.contains("labels") || !obj.at("labels").is_array())
    throw InputError(where + ": missing \"labels\" array");
  for (const auto& l : obj.at("labels")) {
    auto parsed = l.is_string() ? parse_label(l.get<std::string>()) : std::nullopt;
    if (!parsed) throw InputError(where + ": bad label");
    rec.labels.push_back(*parsed);
  }
  if (rec.tokens.size() != rec.labels.size())
    throw InputError(where + ": tokens/labels length mismatch");
  if (obj.contains("entities")) {
    for (const auto& je : obj.at("entities")) {
      RecordEntity e;
      e.start = je.at("start").get<size_t>();
      e.end = je.at("end").get<size_t>();
      e.text = je.at("text").get<std::string>();
      auto type = parse_entity_type(je.at("type").get<std::string>());
      if (!type) throw InputError(where + ": bad entity type");
      e.type = *type;
      e.entity = je.at("entity").get<std::string>();
      e.score = je.at("score").get<double>();
      rec.entities.push_back(std::move(e));
    }
  }
  if (obj.contains("tag_ids")) rec.tag_ids = obj.at("tag_ids").get<std::string>();
  return rec;
}

inline std::vector<AnnotatedRecord> read_annotations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::vector<AnnotatedRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = path + ":" + std::to_string(line_no);
    out.push_back(record_from_json(detail::parse_json(line, where), where));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Label statistics
// ---------------------------------------------------------------------------

struct LabelStats {
  long table = 0, column = 0, value = 0, none = 0;

  long total() const { return table + column + value + none; }
};

inline LabelStats collect_stats(const std::vector<AnnotatedRecord>& records) {
  LabelStats s;
  for (const AnnotatedRecord& rec : records) {
    for (Label l : rec.labels) {
      switch (l) {
        case Label::Table: ++s.table; break;
        case Label::Column: ++s.column; break;
        case Label::Value: ++s.value; break;
        case Label::None: ++s.none; break;
      }
    }
  }
  return s;
}

/// Per-label token counts and shares, one row per class plus the total.
inline std::string format_stats(const LabelStats& s) {
  const long total = s.total();
  auto pct = [&](long n) { return total > 0 ? 100.0 * n / total : 0.0; };
  char buf[64];
  std::string out = "Entity     Tokens       %\n";
  auto row = [&](const char* name, long n, double p) {
    std::snprintf(buf, sizeof(buf), "%-8s %8ld %7.1f\n", name, n, p);
    out += buf;
  };
  row("Table", s.table, pct(s.table));
  row("Column", s.column, pct(s.column));
  row("Value", s.value, pct(s.value));
  row("O", s.none, pct(s.none));
  row("Total", total, total > 0 ? 100.0 : 0.0);
  return out;
}

}  // namespace dbtag
