#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dbtag/core.hpp"

namespace dbtag::sql {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct SelectStmt;
using SelectStmtPtr = std::unique_ptr<SelectStmt>;

/// Column reference, possibly qualified (alias.col, db.table.col). The name
/// "*" represents a star projection (bare or qualified).
struct ColumnRef {
  std::vector<std::string> qualifier;
  std::string name;
};

struct Literal {
  enum class Kind { String, Number, Bool, Null };
  Kind kind = Kind::Null;
  std::string text;  // string content (unescaped) or lexeme as written
};

struct FuncCall {
  std::string name;
  bool distinct = false;
  bool star = false;  // COUNT(*)
  std::vector<ExprPtr> args;
};

struct UnaryOp {
  std::string op;  // "-", "+", "NOT", "EXISTS"
  ExprPtr operand;
};

struct BinaryOp {
  std::string op;  // comparison, arithmetic, AND, OR, ||
  ExprPtr lhs;
  ExprPtr rhs;
};

struct InExpr {
  ExprPtr lhs;
  bool negated = false;
  std::vector<ExprPtr> items;  // expression list form
  SelectStmtPtr subquery;      // subquery form (exactly one of the two is set)
};

struct BetweenExpr {
  ExprPtr operand;
  bool negated = false;
  ExprPtr lower;
  ExprPtr upper;
};

struct LikeExpr {
  ExprPtr operand;
  bool negated = false;
  ExprPtr pattern;
};

struct IsNullExpr {
  ExprPtr operand;
  bool negated = false;
};

struct CaseExpr {
  ExprPtr operand;  // optional CASE <expr> WHEN ...
  std::vector<std::pair<ExprPtr, ExprPtr>> whens;
  ExprPtr else_branch;
};

struct CastExpr {
  ExprPtr operand;
  std::string type_name;
};

struct Subquery {
  SelectStmtPtr query;
};

struct Expr {
  std::variant<ColumnRef, Literal, FuncCall, UnaryOp, BinaryOp, InExpr, BetweenExpr, LikeExpr,
               IsNullExpr, CaseExpr, CastExpr, Subquery>
      node;
};

template <typename T, typename... Args>
ExprPtr make_expr(Args&&... args) {
  return std::make_unique<Expr>(Expr{T{std::forward<Args>(args)...}});
}

struct TableName {
  std::string name;
  std::string alias;  // empty when absent
};

struct DerivedTable {
  SelectStmtPtr query;
  std::string alias;
};

/// One FROM item. `on` holds the join condition of the JOIN that introduced
/// this table (null for the first table and comma joins); `using_cols` the
/// column list of a USING clause.
struct FromItem {
  std::variant<TableName, DerivedTable> table;
  ExprPtr on;
  std::vector<std::string> using_cols;
};

struct SelectItem {
  ExprPtr expr;
  std::string alias;
};

struct OrderItem {
  ExprPtr expr;
  bool desc = false;
};

struct SelectCore {
  bool distinct = false;
  std::vector<SelectItem> items;
  std::vector<FromItem> from;
  ExprPtr where;
  std::vector<ExprPtr> group_by;
  ExprPtr having;
};

enum class SetOp { Union, UnionAll, Intersect, Except };

inline std::string_view set_op_str(SetOp op) {
  switch (op) {
    case SetOp::Union: return "UNION";
    case SetOp::UnionAll: return "UNION ALL";
    case SetOp::Intersect: return "INTERSECT";
    case SetOp::Except: return "EXCEPT";
  }
  return "?";
}

/// A full query: one select core, optional compound cores, and the statement
/// level ORDER BY / LIMIT. The comma form "LIMIT a, b" stores a as offset and
/// b as limit, with the flag set so printing and traversal keep source order.
struct SelectStmt {
  SelectCore core;
  std::vector<std::pair<SetOp, SelectCore>> compounds;
  std::vector<OrderItem> order_by;
  ExprPtr limit;
  ExprPtr offset;
  bool limit_comma_form = false;
};

// ---------------------------------------------------------------------------
// Pretty printer
// ---------------------------------------------------------------------------

namespace detail {

inline bool plain_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

inline bool reserved_word(std::string_view s) {
  static const std::vector<std::string> kWords = {
      "SELECT", "FROM",   "WHERE",  "GROUP",    "BY",     "HAVING", "ORDER",  "LIMIT",
      "OFFSET", "UNION",  "INTERSECT", "EXCEPT", "ALL",   "DISTINCT", "JOIN", "INNER",
      "LEFT",   "RIGHT",  "FULL",   "OUTER",    "CROSS",  "NATURAL", "ON",    "USING",
      "AS",     "AND",    "OR",     "NOT",      "IN",     "IS",     "NULL",   "LIKE",
      "BETWEEN", "CASE",  "WHEN",   "THEN",     "ELSE",   "END",    "ASC",    "DESC",
      "EXISTS", "CAST",   "TRUE",   "FALSE"};
  std::string upper(s);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (const auto& w : kWords)
    if (w == upper) return true;
  return false;
}

inline std::string quote_ident(std::string_view s) {
  if (plain_identifier(s) && !reserved_word(s)) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

inline std::string quote_string(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  out += '\'';
  return out;
}

}  // namespace detail

inline std::string to_sql(const SelectStmt& stmt);

inline std::string to_sql(const Expr& e) {
  using detail::quote_ident;
  using detail::quote_string;
  struct Printer {
    std::string operator()(const ColumnRef& c) const {
      std::string out;
      for (const auto& q : c.qualifier) out += quote_ident(q) + ".";
      out += c.name == "*" ? "*" : quote_ident(c.name);
      return out;
    }
    std::string operator()(const Literal& l) const {
      switch (l.kind) {
        case Literal::Kind::String: return quote_string(l.text);
        case Literal::Kind::Null: return "NULL";
        default: return l.text;
      }
    }
    std::string operator()(const FuncCall& f) const {
      std::string out = f.name + "(";
      if (f.distinct) out += "DISTINCT ";
      if (f.star) out += "*";
      for (size_t i = 0; i < f.args.size(); ++i) {
        if (i) out += ", ";
        out += to_sql(*f.args[i]);
      }
      out += ")";
      return out;
    }
    std::string operator()(const UnaryOp& u) const {
      if (u.op == "-" || u.op == "+") return u.op + to_sql(*u.operand);
      return u.op + " " + to_sql(*u.operand);
    }
    std::string operator()(const BinaryOp& b) const {
      return "(" + to_sql(*b.lhs) + " " + b.op + " " + to_sql(*b.rhs) + ")";
    }
    std::string operator()(const InExpr& in) const {
      std::string out = "(" + to_sql(*in.lhs) + (in.negated ? " NOT IN (" : " IN (");
      if (in.subquery) {
        out += to_sql(*in.subquery);
      } else {
        for (size_t i = 0; i < in.items.size(); ++i) {
          if (i) out += ", ";
          out += to_sql(*in.items[i]);
        }
      }
      out += "))";
      return out;
    }
    std::string operator()(const BetweenExpr& b) const {
      return "(" + to_sql(*b.operand) + (b.negated ? " NOT BETWEEN " : " BETWEEN ") +
             to_sql(*b.lower) + " AND " + to_sql(*b.upper) + ")";
    }
    std::string operator()(const LikeExpr& l) const {
      return "(" + to_sql(*l.operand) + (l.negated ? " NOT LIKE " : " LIKE ") +
             to_sql(*l.pattern) + ")";
    }
    std::string operator()(const IsNullExpr& i) const {
      return "(" + to_sql(*i.operand) + (i.negated ? " IS NOT NULL" : " IS NULL") + ")";
    }
    std::string operator()(const CaseExpr& c) const {
      std::string out = "CASE";
      if (c.operand) out += " " + to_sql(*c.operand);
      for (const auto& [cond, res] : c.whens)
        out += " WHEN " + to_sql(*cond) + " THEN " + to_sql(*res);
      if (c.else_branch) out += " ELSE " + to_sql(*c.else_branch);
      out += " END";
      return out;
    }
    std::string operator()(const CastExpr& c) const {
      return "CAST(" + to_sql(*c.operand) + " AS " + c.type_name + ")";
    }
    std::string operator()(const Subquery& s) const { return "(" + to_sql(*s.query) + ")"; }
  };
  return std::visit(Printer{}, e.node);
}

namespace detail {

inline std::string core_to_sql(const SelectCore& core) {
  std::string out = "SELECT ";
  if (core.distinct) out += "DISTINCT ";
  for (size_t i = 0; i < core.items.size(); ++i) {
    if (i) out += ", ";
    out += to_sql(*core.items[i].expr);
    if (!core.items[i].alias.empty()) out += " AS " + quote_ident(core.items[i].alias);
  }
  for (size_t i = 0; i < core.from.size(); ++i) {
    const FromItem& item = core.from[i];
    if (i == 0) {
      out += " FROM ";
    } else if (item.on || !item.using_cols.empty()) {
      out += " JOIN ";
    } else {
      out += ", ";
    }
    if (const auto* t = std::get_if<TableName>(&item.table)) {
      out += quote_ident(t->name);
      if (!t->alias.empty()) out += " AS " + quote_ident(t->alias);
    } else {
      const auto& d = std::get<DerivedTable>(item.table);
      out += "(" + to_sql(*d.query) + ")";
      if (!d.alias.empty()) out += " AS " + quote_ident(d.alias);
    }
    if (item.on) out += " ON " + to_sql(*item.on);
    if (!item.using_cols.empty()) {
      out += " USING (";
      for (size_t k = 0; k < item.using_cols.size(); ++k) {
        if (k) out += ", ";
        out += quote_ident(item.using_cols[k]);
      }
      out += ")";
    }
  }
  if (core.where) out += " WHERE " + to_sql(*core.where);
  if (!core.group_by.empty()) {
    out += " GROUP BY ";
    for (size_t i = 0; i < core.group_by.size(); ++i) {
      if (i) out += ", ";
      out += to_sql(*core.group_by[i]);
    }
  }
  if (core.having) out += " HAVING " + to_sql(*core.having);
  return out;
}

}  // namespace detail

inline std::string to_sql(const SelectStmt& stmt) {
  std::string out = detail::core_to_sql(stmt.core);
  for (const auto& [op, core] : stmt.compounds) {
    out += " ";
    out += set_op_str(op);
    out += " " + detail::core_to_sql(core);
  }
  if (!stmt.order_by.empty()) {
    out += " ORDER BY ";
    for (size_t i = 0; i < stmt.order_by.size(); ++i) {
      if (i) out += ", ";
      out += to_sql(*stmt.order_by[i].expr);
      if (stmt.order_by[i].desc) out += " DESC";
    }
  }
  if (stmt.limit_comma_form && stmt.limit && stmt.offset) {
    out += " LIMIT " + to_sql(*stmt.offset) + ", " + to_sql(*stmt.limit);
  } else {
    if (stmt.limit) out += " LIMIT " + to_sql(*stmt.limit);
    if (stmt.offset) out += " OFFSET " + to_sql(*stmt.offset);
  }
  return out;
}

}  // namespace dbtag::sql
