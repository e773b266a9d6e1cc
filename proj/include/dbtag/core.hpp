#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dbtag {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A span or index that does not fit its owning document.
struct BoundsError : Error {
  using Error::Error;
};

/// A violated structural invariant (overlapping links, label/link mismatch, ...).
struct InvariantError : Error {
  using Error::Error;
};

/// Malformed user-supplied data (dataset files, gold files, CLI arguments).
struct InputError : Error {
  using Error::Error;
};

/// SQL text outside the supported grammar. Carries the byte offset of the
/// offending token and a short hint about what was expected there.
struct ParseError : Error {
  size_t offset;
  std::string expected;

  ParseError(size_t offset_, std::string expected_, const std::string& found)
      : Error("parse error at byte " + std::to_string(offset_) + ": expected " +
              expected_ + ", found " + found),
        offset(offset_),
        expected(std::move(expected_)) {}
};

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

enum class EntityType { Table, Column, Value };

/// Per-token label: an entity type or none. Enum values double as tag ids,
/// so label k serializes to the marker "<id_k>".
enum class Label { None = 0, Table = 1, Column = 2, Value = 3 };

inline std::string_view entity_type_str(EntityType t) {
  switch (t) {
    case EntityType::Table: return "T";
    case EntityType::Column: return "C";
    case EntityType::Value: return "V";
  }
  return "?";
}

inline std::optional<EntityType> parse_entity_type(std::string_view s) {
  if (s == "T") return EntityType::Table;
  if (s == "C") return EntityType::Column;
  if (s == "V") return EntityType::Value;
  return std::nullopt;
}

inline Label label_of(EntityType t) {
  switch (t) {
    case EntityType::Table: return Label::Table;
    case EntityType::Column: return Label::Column;
    case EntityType::Value: return Label::Value;
  }
  return Label::None;
}

inline std::optional<EntityType> entity_type_of(Label l) {
  switch (l) {
    case Label::Table: return EntityType::Table;
    case Label::Column: return EntityType::Column;
    case Label::Value: return EntityType::Value;
    case Label::None: return std::nullopt;
  }
  return std::nullopt;
}

inline std::string_view label_str(Label l) {
  switch (l) {
    case Label::None: return "O";
    case Label::Table: return "T";
    case Label::Column: return "C";
    case Label::Value: return "V";
  }
  return "?";
}

inline std::optional<Label> parse_label(std::string_view s) {
  if (s == "O") return Label::None;
  if (auto t = parse_entity_type(s)) return label_of(*t);
  return std::nullopt;
}

inline int tag_id(Label l) { return static_cast<int>(l); }

/// ASCII case folding. Identifier and value comparison in this library is
/// byte-wise and ASCII-insensitive; non-ASCII bytes pass through unchanged.
inline std::string fold_case(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Documents and spans
// ---------------------------------------------------------------------------

/// One token of a natural-language question. Offsets are byte positions into
/// the raw UTF-8 string; text is exactly the slice [char_start, char_end).
struct Token {
  std::string text;
  size_t char_start = 0;
  size_t char_end = 0;

  bool operator==(const Token&) const = default;
};

/// A tokenized question. Token ranges are disjoint, strictly increasing, and
/// together cover every non-whitespace byte of `raw`.
struct NlqDoc {
  std::string raw;
  std::vector<Token> tokens;

  size_t size() const { return tokens.size(); }
  bool operator==(const NlqDoc&) const = default;
};

/// Contiguous token range, half-open: [start, end).
struct Span {
  size_t start = 0;
  size_t end = 0;

  size_t length() const { return end - start; }
  bool operator==(const Span&) const = default;
};

inline bool spans_overlap(const Span& a, const Span& b) {
  return a.start < b.end && b.start < a.end;
}

/// Throws unless 0 <= start < end <= |tokens|.
inline void check_span(const NlqDoc& doc, const Span& span) {
  if (span.start >= span.end || span.end > doc.tokens.size()) {
    throw BoundsError("span (" + std::to_string(span.start) + ", " +
                      std::to_string(span.end) + ") out of range for document of " +
                      std::to_string(doc.tokens.size()) + " tokens");
  }
}

/// Token texts of the span joined by single spaces.
inline std::string span_text(const NlqDoc& doc, const Span& span) {
  check_span(doc, span);
  std::string out = doc.tokens[span.start].text;
  for (size_t i = span.start + 1; i < span.end; ++i) {
    out += ' ';
    out += doc.tokens[i].text;
  }
  return out;
}

/// Checks the NlqDoc invariants; used by tests and by loaders that accept
/// pre-tokenized input.
inline void validate_doc(const NlqDoc& doc) {
  size_t prev_end = 0;
  std::vector<char> covered(doc.raw.size(), 0);
  for (size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token& t = doc.tokens[i];
    if (t.text.empty()) throw InvariantError("empty token at index " + std::to_string(i));
    if (t.char_start >= t.char_end || t.char_end > doc.raw.size())
      throw InvariantError("bad token offsets at index " + std::to_string(i));
    if (i > 0 && t.char_start < prev_end)
      throw InvariantError("token offsets not strictly increasing at index " + std::to_string(i));
    if (doc.raw.compare(t.char_start, t.char_end - t.char_start, t.text) != 0)
      throw InvariantError("token text does not match raw slice at index " + std::to_string(i));
    for (size_t p = t.char_start; p < t.char_end; ++p) covered[p] = 1;
    prev_end = t.char_end;
  }
  for (size_t p = 0; p < doc.raw.size(); ++p) {
    unsigned char c = static_cast<unsigned char>(doc.raw[p]);
    bool ascii_space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (!covered[p] && !ascii_space && c < 0x80)
      throw InvariantError("uncovered non-whitespace byte at position " + std::to_string(p));
  }
}

/// Builds a document from pre-tokenized text (gold files); raw text is the
/// tokens joined by single spaces.
inline NlqDoc doc_from_tokens(const std::vector<std::string>& tokens) {
  NlqDoc doc;
  for (const std::string& t : tokens) {
    if (t.empty()) throw InputError("empty token in pre-tokenized input");
    if (!doc.raw.empty()) doc.raw += ' ';
    size_t start = doc.raw.size();
    doc.raw += t;
    doc.tokens.push_back(Token{t, start, doc.raw.size()});
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Database entities
// ---------------------------------------------------------------------------

/// A typed database entity: a table name, column name, or cell value as it
/// appears in a SQL query. `norm_text` is the case-folded form used for
/// comparison; `text` keeps the original spelling for output.
struct DbEntity {
  std::string text;
  std::string norm_text;
  EntityType type;

  bool operator==(const DbEntity&) const = default;
};

inline DbEntity make_entity(std::string text, EntityType type) {
  if (text.empty()) throw InvariantError("entity text must be non-empty");
  std::string norm = fold_case(text);
  return DbEntity{std::move(text), std::move(norm), type};
}

/// Ordered set of entities, deduplicated by (norm_text, type); order is first
/// occurrence in the SQL traversal.
class EntitySet {
 public:
  /// Inserts unless an equal (norm_text, type) member exists; returns the
  /// index of the surviving entity either way.
  size_t add(DbEntity e) {
    auto key = make_key(e.norm_text, e.type);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    entities_.push_back(std::move(e));
    index_.emplace(std::move(key), entities_.size() - 1);
    return entities_.size() - 1;
  }

  size_t add(std::string text, EntityType type) { return add(make_entity(std::move(text), type)); }

  std::optional<size_t> find(std::string_view norm_text, EntityType type) const {
    auto it = index_.find(make_key(norm_text, type));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const DbEntity& operator[](size_t i) const { return entities_.at(i); }
  size_t size() const { return entities_.size(); }
  bool empty() const { return entities_.empty(); }
  auto begin() const { return entities_.begin(); }
  auto end() const { return entities_.end(); }

  bool operator==(const EntitySet& other) const { return entities_ == other.entities_; }

 private:
  static std::string make_key(std::string_view norm, EntityType type) {
    std::string key;
    key += entity_type_str(type);
    key += '\x1f';
    key += norm;
    return key;
  }

  std::vector<DbEntity> entities_;
  std::unordered_map<std::string, size_t> index_;
};

// ---------------------------------------------------------------------------
// Annotations
// ---------------------------------------------------------------------------

/// One chosen span for one entity, with the similarity score that selected it.
struct EntityLink {
  Span span;
  size_t entity_index = 0;
  double score = 0.0;

  bool operator==(const EntityLink&) const = default;
};

/// Per-token labels for a set of non-overlapping links. Tokens covered by a
/// link get that link's entity type; everything else is none.
inline std::vector<Label> labels_from_links(const NlqDoc& doc,
                                            const std::vector<EntityLink>& links,
                                            const EntitySet& entities) {
  std::vector<Label> labels(doc.tokens.size(), Label::None);
  for (const EntityLink& link : links) {
    check_span(doc, link.span);
    if (link.entity_index >= entities.size())
      throw InvariantError("link entity index " + std::to_string(link.entity_index) +
                           " out of range");
    Label l = label_of(entities[link.entity_index].type);
    for (size_t i = link.span.start; i < link.span.end; ++i) {
      if (labels[i] != Label::None)
        throw InvariantError("overlapping links at token " + std::to_string(i));
      labels[i] = l;
    }
  }
  return labels;
}

/// A complete annotation of one question: the chosen span->entity links plus
/// the equivalent per-token label sequence. Immutable after construction via
/// make_annotation, which is the only path that guarantees consistency.
struct Annotation {
  NlqDoc doc;
  std::vector<EntityLink> links;  // sorted by span start
  std::vector<Label> labels;
};

inline Annotation make_annotation(NlqDoc doc, std::vector<EntityLink> links,
                                  const EntitySet& entities) {
  std::vector<char> seen(entities.size(), 0);
  for (const EntityLink& link : links) {
    if (link.entity_index >= entities.size())
      throw InvariantError("link entity index out of range");
    if (seen[link.entity_index])
      throw InvariantError("two links for entity index " + std::to_string(link.entity_index));
    seen[link.entity_index] = 1;
  }
  std::vector<Label> labels = labels_from_links(doc, links, entities);
  std::sort(links.begin(), links.end(),
            [](const EntityLink& a, const EntityLink& b) { return a.span.start < b.span.start; });
  return Annotation{std::move(doc), std::move(links), std::move(labels)};
}

// ---------------------------------------------------------------------------
// Dataset records
// ---------------------------------------------------------------------------

/// A raw text-to-SQL sample: a question paired with its SQL query.
struct RawPair {
  std::string id;
  std::string question;
  std::string sql;
};

/// A human-annotated sample: tokens with gold labels, optionally with the
/// originating SQL (required for calibration).
struct GoldExample {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<Label> labels;
  std::optional<std::string> sql;
};

}  // namespace dbtag
