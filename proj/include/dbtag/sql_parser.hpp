#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "dbtag/core.hpp"
#include "dbtag/sql_ast.hpp"

namespace dbtag::sql {

namespace detail {

enum class TokKind { Ident, QuotedIdent, String, Number, Punct, End };

struct Tok {
  TokKind kind = TokKind::End;
  std::string text;  // decoded content for quoted idents / strings, lexeme otherwise
  size_t offset = 0;
};

inline std::string describe(const Tok& t) {
  switch (t.kind) {
    case TokKind::End: return "end of input";
    case TokKind::String: return "string '" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

inline std::vector<Tok> lex(std::string_view sql) {
  std::vector<Tok> toks;
  size_t i = 0;
  const size_t n = sql.size();
  while (i < n) {
    char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t start = i;
    if (ident_start(c)) {
      while (i < n && ident_char(sql[i])) ++i;
      toks.push_back({TokKind::Ident, std::string(sql.substr(start, i - start)), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
      if (i < n && sql[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
      }
      if (i < n && (sql[i] == 'e' || sql[i] == 'E')) {
        size_t j = i + 1;
        if (j < n && (sql[j] == '+' || sql[j] == '-')) ++j;
        if (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) {
          i = j;
          while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
        }
      }
      toks.push_back({TokKind::Number, std::string(sql.substr(start, i - start)), start});
      continue;
    }
    if (c == '\'') {
      std::string content;
      ++i;
      while (true) {
        if (i >= n) throw ParseError(start, "closing ' for string literal", "end of input");
        if (sql[i] == '\'') {
          if (i + 1 < n && sql[i + 1] == '\'') {
            content += '\'';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        content += sql[i++];
      }
      toks.push_back({TokKind::String, std::move(content), start});
      continue;
    }
    if (c == '"' || c == '`') {
      char quote = c;
      std::string content;
      ++i;
      while (true) {
        if (i >= n)
          throw ParseError(start, std::string("closing ") + quote + " for quoted identifier",
                           "end of input");
        if (sql[i] == quote) {
          if (i + 1 < n && sql[i + 1] == quote) {
            content += quote;
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        content += sql[i++];
      }
      toks.push_back({TokKind::QuotedIdent, std::move(content), start});
      continue;
    }
    auto two = [&](const char* sym) {
      toks.push_back({TokKind::Punct, sym, start});
      i += 2;
    };
    auto one = [&]() {
      toks.push_back({TokKind::Punct, std::string(1, c), start});
      ++i;
    };
    switch (c) {
      case '(': case ')': case ',': case '.': case '*': case '+': case '-':
      case '/': case '%': case ';':
        one();
        continue;
      case '=':
        if (i + 1 < n && sql[i + 1] == '=') two("==");
        else one();
        continue;
      case '<':
        if (i + 1 < n && sql[i + 1] == '=') two("<=");
        else if (i + 1 < n && sql[i + 1] == '>') two("<>");
        else one();
        continue;
      case '>':
        if (i + 1 < n && sql[i + 1] == '=') two(">=");
        else one();
        continue;
      case '!':
        if (i + 1 < n && sql[i + 1] == '=') two("!=");
        else throw ParseError(start, "'=' after '!'", "'!'");
        continue;
      case '|':
        if (i + 1 < n && sql[i + 1] == '|') two("||");
        else throw ParseError(start, "'|' after '|'", "'|'");
        continue;
      default:
        throw ParseError(start, "a SQL token", "'" + std::string(1, c) + "'");
    }
  }
  toks.push_back({TokKind::End, "", n});
  return toks;
}

inline bool same_kw(std::string_view ident, std::string_view kw) {
  if (ident.size() != kw.size()) return false;
  for (size_t i = 0; i < kw.size(); ++i)
    if (std::toupper(static_cast<unsigned char>(ident[i])) != kw[i]) return false;
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view sql) : toks_(lex(sql)) {}

  SelectStmt parse() {
    SelectStmt stmt = parse_select_stmt();
    accept_punct(";");
    if (!at_end()) throw err("end of input");
    return stmt;
  }

 private:
  const Tok& peek(size_t ahead = 0) const {
    size_t idx = pos_ + ahead;
    return idx < toks_.size() ? toks_[idx] : toks_.back();
  }
  const Tok& advance() { return toks_[pos_++]; }
  bool at_end() const { return peek().kind == TokKind::End; }

  ParseError err(std::string expected) const {
    return ParseError(peek().offset, std::move(expected), describe(peek()));
  }

  bool is_kw(std::string_view kw, size_t ahead = 0) const {
    const Tok& t = peek(ahead);
    return t.kind == TokKind::Ident && same_kw(t.text, kw);
  }
  bool accept_kw(std::string_view kw) {
    if (!is_kw(kw)) return false;
    advance();
    return true;
  }
  void expect_kw(std::string_view kw) {
    if (!accept_kw(kw)) throw err("'" + std::string(kw) + "'");
  }
  bool is_punct(std::string_view p) const {
    return peek().kind == TokKind::Punct && peek().text == p;
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    advance();
    return true;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) throw err("'" + std::string(p) + "'");
  }

  std::string expect_ident(const char* what) {
    if (peek().kind == TokKind::Ident || peek().kind == TokKind::QuotedIdent)
      return advance().text;
    throw err(what);
  }

  // [AS] alias, or a bare non-keyword identifier.
  std::string parse_alias() {
    if (accept_kw("AS")) return expect_ident("alias name");
    if (peek().kind == TokKind::QuotedIdent) return advance().text;
    if (peek().kind == TokKind::Ident && !dbtag::sql::detail::reserved_word(peek().text))
      return advance().text;
    return {};
  }

  SelectStmt parse_select_stmt() {
    SelectStmt stmt;
    stmt.core = parse_select_core();
    while (true) {
      if (accept_kw("UNION")) {
        SetOp op = accept_kw("ALL") ? SetOp::UnionAll : SetOp::Union;
        stmt.compounds.emplace_back(op, parse_select_core());
      } else if (accept_kw("INTERSECT")) {
        stmt.compounds.emplace_back(SetOp::Intersect, parse_select_core());
      } else if (accept_kw("EXCEPT")) {
        stmt.compounds.emplace_back(SetOp::Except, parse_select_core());
      } else {
        break;
      }
    }
    if (accept_kw("ORDER")) {
      expect_kw("BY");
      do {
        OrderItem item;
        item.expr = parse_expr();
        if (accept_kw("DESC")) item.desc = true;
        else accept_kw("ASC");
        stmt.order_by.push_back(std::move(item));
      } while (accept_punct(","));
    }
    if (accept_kw("LIMIT")) {
      ExprPtr first = parse_expr();
      if (accept_punct(",")) {
        stmt.offset = std::move(first);
        stmt.limit = parse_expr();
        stmt.limit_comma_form = true;
      } else {
        stmt.limit = std::move(first);
        if (accept_kw("OFFSET")) stmt.offset = parse_expr();
      }
    }
    return stmt;
  }

  SelectCore parse_select_core() {
    expect_kw("SELECT");
    SelectCore core;
    if (accept_kw("DISTINCT")) core.distinct = true;
    else accept_kw("ALL");
    do {
      SelectItem item;
      item.expr = parse_expr();
      item.alias = parse_alias();
      core.items.push_back(std::move(item));
    } while (accept_punct(","));
    if (accept_kw("FROM")) parse_from(core.from);
    if (accept_kw("WHERE")) core.where = parse_expr();
    if (accept_kw("GROUP")) {
      expect_kw("BY");
      do core.group_by.push_back(parse_expr());
      while (accept_punct(","));
    }
    if (accept_kw("HAVING")) core.having = parse_expr();
    return core;
  }

  void parse_from(std::vector<FromItem>& out) {
    out.push_back(parse_table_ref());
    while (true) {
      if (accept_punct(",")) {
        out.push_back(parse_table_ref());
        continue;
      }
      bool joined = false;
      if (accept_kw("CROSS") || accept_kw("NATURAL")) {
        expect_kw("JOIN");
        joined = true;
      } else if (accept_kw("INNER")) {
        expect_kw("JOIN");
        joined = true;
      } else if (accept_kw("LEFT") || accept_kw("RIGHT") || accept_kw("FULL")) {
        accept_kw("OUTER");
        expect_kw("JOIN");
        joined = true;
      } else if (accept_kw("JOIN")) {
        joined = true;
      }
      if (!joined) break;
      FromItem item = parse_table_ref();
      if (accept_kw("ON")) {
        item.on = parse_expr();
      } else if (accept_kw("USING")) {
        expect_punct("(");
        do item.using_cols.push_back(expect_ident("column name"));
        while (accept_punct(","));
        expect_punct(")");
      }
      out.push_back(std::move(item));
    }
  }

  FromItem parse_table_ref() {
    FromItem item;
    if (accept_punct("(")) {
      if (!is_kw("SELECT")) throw err("'SELECT' in derived table");
      DerivedTable d;
      d.query = std::make_unique<SelectStmt>(parse_select_stmt());
      expect_punct(")");
      d.alias = parse_alias();
      item.table = std::move(d);
      return item;
    }
    TableName t;
    t.name = expect_ident("table name");
    while (accept_punct(".")) t.name = expect_ident("table name");  // drop db qualifier
    t.alias = parse_alias();
    item.table = std::move(t);
    return item;
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (accept_kw("OR")) {
      ExprPtr rhs = parse_and();
      lhs = make_expr<BinaryOp>("OR", std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (accept_kw("AND")) {
      ExprPtr rhs = parse_not();
      lhs = make_expr<BinaryOp>("AND", std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (accept_kw("NOT")) return make_expr<UnaryOp>("NOT", parse_not());
    return parse_comparison();
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_additive();
    while (true) {
      if (peek().kind == TokKind::Punct) {
        const std::string& p = peek().text;
        if (p == "=" || p == "==" || p == "!=" || p == "<>" || p == "<" || p == "<=" ||
            p == ">" || p == ">=") {
          std::string op = advance().text;
          lhs = make_expr<BinaryOp>(std::move(op), std::move(lhs), parse_additive());
          continue;
        }
      }
      bool negated = false;
      size_t mark = pos_;
      if (accept_kw("NOT")) negated = true;
      if (accept_kw("IN")) {
        InExpr in;
        in.lhs = std::move(lhs);
        in.negated = negated;
        expect_punct("(");
        if (is_kw("SELECT")) {
          in.subquery = std::make_unique<SelectStmt>(parse_select_stmt());
        } else {
          do in.items.push_back(parse_expr());
          while (accept_punct(","));
        }
        expect_punct(")");
        lhs = std::make_unique<Expr>(Expr{std::move(in)});
        continue;
      }
      if (accept_kw("LIKE")) {
        LikeExpr like;
        like.operand = std::move(lhs);
        like.negated = negated;
        like.pattern = parse_additive();
        lhs = std::make_unique<Expr>(Expr{std::move(like)});
        continue;
      }
      if (accept_kw("BETWEEN")) {
        BetweenExpr between;
        between.operand = std::move(lhs);
        between.negated = negated;
        between.lower = parse_additive();
        expect_kw("AND");
        between.upper = parse_additive();
        lhs = std::make_unique<Expr>(Expr{std::move(between)});
        continue;
      }
      if (negated) {
        pos_ = mark;  // the NOT belongs to an enclosing context
        break;
      }
      if (accept_kw("IS")) {
        bool is_not = accept_kw("NOT");
        if (accept_kw("NULL")) {
          IsNullExpr isnull;
          isnull.operand = std::move(lhs);
          isnull.negated = is_not;
          lhs = std::make_unique<Expr>(Expr{std::move(isnull)});
        } else {
          lhs = make_expr<BinaryOp>(is_not ? "IS NOT" : "IS", std::move(lhs), parse_additive());
        }
        continue;
      }
      break;
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (is_punct("+") || is_punct("-") || is_punct("||")) {
      std::string op = advance().text;
      lhs = make_expr<BinaryOp>(std::move(op), std::move(lhs), parse_multiplicative());
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (is_punct("*") || is_punct("/") || is_punct("%")) {
      std::string op = advance().text;
      lhs = make_expr<BinaryOp>(std::move(op), std::move(lhs), parse_unary());
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (is_punct("-") || is_punct("+")) {
      std::string op = advance().text;
      return make_expr<UnaryOp>(std::move(op), parse_unary());
    }
    if (accept_kw("EXISTS")) {
      expect_punct("(");
      if (!is_kw("SELECT")) throw err("'SELECT' after EXISTS(");
      auto sub = std::make_unique<SelectStmt>(parse_select_stmt());
      expect_punct(")");
      return make_expr<UnaryOp>("EXISTS", make_expr<Subquery>(std::move(sub)));
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Tok& t = peek();
    switch (t.kind) {
      case TokKind::Number: {
        std::string text = advance().text;
        return make_expr<Literal>(Literal{Literal::Kind::Number, std::move(text)});
      }
      case TokKind::String: {
        std::string text = advance().text;
        return make_expr<Literal>(Literal{Literal::Kind::String, std::move(text)});
      }
      case TokKind::Punct:
        if (t.text == "(") {
          advance();
          if (is_kw("SELECT")) {
            auto sub = std::make_unique<SelectStmt>(parse_select_stmt());
            expect_punct(")");
            return make_expr<Subquery>(std::move(sub));
          }
          ExprPtr inner = parse_expr();
          expect_punct(")");
          return inner;
        }
        if (t.text == "*") {
          advance();
          return make_expr<ColumnRef>(std::vector<std::string>{}, "*");
        }
        throw err("an expression");
      case TokKind::QuotedIdent:
        return parse_column_ref();
      case TokKind::Ident: {
        if (accept_kw("NULL")) return make_expr<Literal>(Literal{Literal::Kind::Null, "NULL"});
        if (is_kw("TRUE") || is_kw("FALSE")) {
          std::string text = advance().text;
          return make_expr<Literal>(Literal{Literal::Kind::Bool, std::move(text)});
        }
        if (is_kw("CASE")) return parse_case();
        if (is_kw("CAST") && peek(1).kind == TokKind::Punct && peek(1).text == "(")
          return parse_cast();
        if (peek(1).kind == TokKind::Punct && peek(1).text == "(") return parse_func_call();
        if (dbtag::sql::detail::reserved_word(t.text)) throw err("an expression");
        return parse_column_ref();
      }
      case TokKind::End:
        throw err("an expression");
    }
    throw err("an expression");
  }

  ExprPtr parse_column_ref() {
    std::vector<std::string> parts;
    parts.push_back(advance().text);
    std::string name;
    while (accept_punct(".")) {
      if (accept_punct("*")) {
        return make_expr<ColumnRef>(std::move(parts), "*");
      }
      parts.push_back(expect_ident("column name"));
    }
    name = std::move(parts.back());
    parts.pop_back();
    return make_expr<ColumnRef>(std::move(parts), std::move(name));
  }

  ExprPtr parse_func_call() {
    FuncCall f;
    f.name = advance().text;
    expect_punct("(");
    if (accept_kw("DISTINCT")) f.distinct = true;
    if (accept_punct(")")) return std::make_unique<Expr>(Expr{std::move(f)});
    if (accept_punct("*")) {
      f.star = true;
    } else {
      do f.args.push_back(parse_expr());
      while (accept_punct(","));
    }
    expect_punct(")");
    return std::make_unique<Expr>(Expr{std::move(f)});
  }

  ExprPtr parse_case() {
    expect_kw("CASE");
    CaseExpr c;
    if (!is_kw("WHEN")) c.operand = parse_expr();
    while (accept_kw("WHEN")) {
      ExprPtr cond = parse_expr();
      expect_kw("THEN");
      c.whens.emplace_back(std::move(cond), parse_expr());
    }
    if (accept_kw("ELSE")) c.else_branch = parse_expr();
    expect_kw("END");
    return std::make_unique<Expr>(Expr{std::move(c)});
  }

  ExprPtr parse_cast() {
    expect_kw("CAST");
    expect_punct("(");
    CastExpr c;
    c.operand = parse_expr();
    expect_kw("AS");
    c.type_name = expect_ident("type name");
    if (accept_punct("(")) {
      c.type_name += "(";
      bool first = true;
      do {
        if (!first) c.type_name += ", ";
        first = false;
        if (peek().kind != TokKind::Number) throw err("numeric type parameter");
        c.type_name += advance().text;
      } while (accept_punct(","));
      expect_punct(")");
      c.type_name += ")";
    }
    expect_punct(")");
    return std::make_unique<Expr>(Expr{std::move(c)});
  }

  std::vector<Tok> toks_;
  size_t pos_ = 0;
};

}  // namespace detail

/// Parses a single SELECT statement (joins, subqueries, set operations,
/// aggregates). Throws ParseError with a byte offset and an expected-token
/// hint on anything outside the subset.
inline SelectStmt parse_sql(std::string_view sql) { return detail::Parser(sql).parse(); }

}  // namespace dbtag::sql
