#pragma once

#include <string>
#include <unordered_set>
#include <variant>

#include "dbtag/core.hpp"
#include "dbtag/sql_ast.hpp"

namespace dbtag::sql {

namespace detail {

/// Collects the typed entities of one query in traversal order: clause order
/// select, from, where, group by, having, order by, limit, recursing into
/// subqueries. Query-local aliases never become entities: table aliases are
/// dropped with the qualifier, select-list aliases (including those exported
/// by derived tables) shadow equally named bare column references.
struct EntityExtractor {
  EntitySet out;

  using AliasEnv = std::unordered_set<std::string>;

  void walk_stmt(const SelectStmt& stmt) {
    AliasEnv env = stmt_alias_env(stmt);
    walk_core(stmt.core);
    for (const auto& [op, core] : stmt.compounds) walk_core(core);
    for (const auto& item : stmt.order_by) walk_expr(*item.expr, env);
    if (stmt.limit_comma_form && stmt.limit && stmt.offset) {
      walk_expr(*stmt.offset, env);
      walk_expr(*stmt.limit, env);
    } else {
      if (stmt.limit) walk_expr(*stmt.limit, env);
      if (stmt.offset) walk_expr(*stmt.offset, env);
    }
  }

 private:
  static void collect_core_aliases(const SelectCore& core, AliasEnv& env) {
    for (const auto& item : core.items)
      if (!item.alias.empty()) env.insert(fold_case(item.alias));
    for (const auto& from : core.from) {
      if (const auto* derived = std::get_if<DerivedTable>(&from.table)) {
        collect_core_aliases(derived->query->core, env);
        for (const auto& [op, c] : derived->query->compounds) collect_core_aliases(c, env);
      }
    }
  }

  static AliasEnv stmt_alias_env(const SelectStmt& stmt) {
    AliasEnv env;
    collect_core_aliases(stmt.core, env);
    for (const auto& [op, core] : stmt.compounds) collect_core_aliases(core, env);
    return env;
  }

  void walk_core(const SelectCore& core) {
    AliasEnv env;
    collect_core_aliases(core, env);
    for (const auto& item : core.items) walk_expr(*item.expr, env);
    for (const auto& from : core.from) {
      if (const auto* table = std::get_if<TableName>(&from.table)) {
        if (!table->name.empty()) out.add(table->name, EntityType::Table);
      } else {
        walk_stmt(*std::get<DerivedTable>(from.table).query);
      }
      for (const auto& col : from.using_cols)
        if (!col.empty()) out.add(col, EntityType::Column);
      if (from.on) walk_expr(*from.on, env);
    }
    if (core.where) walk_expr(*core.where, env);
    for (const auto& g : core.group_by) walk_expr(*g, env);
    if (core.having) walk_expr(*core.having, env);
  }

  void walk_expr(const Expr& e, const AliasEnv& env) {
    struct Visitor {
      EntityExtractor& self;
      const AliasEnv& env;

      void operator()(const ColumnRef& c) const {
        if (c.name == "*" || c.name.empty()) return;
        if (env.contains(fold_case(c.name))) return;
        self.out.add(c.name, EntityType::Column);
      }
      void operator()(const Literal& l) const {
        if (l.kind == Literal::Kind::Null || l.text.empty()) return;
        self.out.add(l.text, EntityType::Value);
      }
      void operator()(const FuncCall& f) const {
        for (const auto& arg : f.args) self.walk_expr(*arg, env);
      }
      void operator()(const UnaryOp& u) const { self.walk_expr(*u.operand, env); }
      void operator()(const BinaryOp& b) const {
        self.walk_expr(*b.lhs, env);
        self.walk_expr(*b.rhs, env);
      }
      void operator()(const InExpr& in) const {
        self.walk_expr(*in.lhs, env);
        for (const auto& item : in.items) self.walk_expr(*item, env);
        if (in.subquery) self.walk_stmt(*in.subquery);
      }
      void operator()(const BetweenExpr& b) const {
        self.walk_expr(*b.operand, env);
        self.walk_expr(*b.lower, env);
        self.walk_expr(*b.upper, env);
      }
      void operator()(const LikeExpr& l) const {
        self.walk_expr(*l.operand, env);
        self.walk_expr(*l.pattern, env);
      }
      void operator()(const IsNullExpr& i) const { self.walk_expr(*i.operand, env); }
      void operator()(const CaseExpr& c) const {
        if (c.operand) self.walk_expr(*c.operand, env);
        for (const auto& [cond, res] : c.whens) {
          self.walk_expr(*cond, env);
          self.walk_expr(*res, env);
        }
        if (c.else_branch) self.walk_expr(*c.else_branch, env);
      }
      void operator()(const CastExpr& c) const { self.walk_expr(*c.operand, env); }
      void operator()(const Subquery& s) const { self.walk_stmt(*s.query); }
    };
    std::visit(Visitor{*this, env}, e.node);
  }
};

}  // namespace detail

/// Typed entities referenced by the query: table names from FROM/JOIN items
/// (never aliases), column names stripped of qualifiers ("*" excluded), and
/// literal values (string content unquoted, numeric lexemes verbatim, NULL
/// excluded). Deduplicated case-insensitively, first occurrence wins.
inline EntitySet extract_entities(const SelectStmt& stmt) {
  detail::EntityExtractor extractor;
  extractor.walk_stmt(stmt);
  return std::move(extractor.out);
}

}  // namespace dbtag::sql
