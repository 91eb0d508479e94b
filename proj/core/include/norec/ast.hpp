#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "norec/value.hpp"

namespace norec {

struct Expression;

// Expression trees are immutable and shared; rewriting builds new nodes.
using ExprPtr = std::shared_ptr<const Expression>;

enum class UnaryOp { Not, Negate, Plus };

enum class BinaryOp {
  Add, Subtract, Multiply, Divide, Remainder, Concat,
  Equal, NotEqual, Less, LessEqual, Greater, GreaterEqual,
  And, Or, Glob, Like,
};

enum class IsKind { True, False, Null, NotNull };

struct Constant {
  SqlValue value;
};

struct ColumnRef {
  std::string table;
  std::string column;
};

struct Unary {
  UnaryOp op;
  ExprPtr operand;
};

struct Binary {
  BinaryOp op;
  ExprPtr left;
  ExprPtr right;
};

struct Between {
  bool symmetric = false;
  ExprPtr value;
  ExprPtr low;
  ExprPtr high;
};

struct InList {
  ExprPtr value;
  std::vector<ExprPtr> candidates;
};

struct FunctionCall {
  std::string name;
  std::vector<ExprPtr> args;
};

struct Cast {
  ExprPtr operand;
  std::string type;
};

struct Collate {
  ExprPtr operand;
  Collation collation;
};

struct PostfixIs {
  ExprPtr operand;
  IsKind kind;
};

// There is deliberately no subquery node.
struct Expression {
  using Node = std::variant<Constant, ColumnRef, Unary, Binary, Between, InList,
                            FunctionCall, Cast, Collate, PostfixIs>;
  Node node;

  template <class T>
  const T* as() const { return std::get_if<T>(&node); }
  template <class T>
  bool is() const { return std::holds_alternative<T>(node); }
};

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

// Direct children in evaluation order.
std::vector<ExprPtr> children(const Expression& e);

// Rebuilds `e` with its children replaced, in the order returned by children().
ExprPtr with_children(const Expression& e, const std::vector<ExprPtr>& kids);

size_t node_count(const ExprPtr& e);
size_t depth(const ExprPtr& e);

bool is_comparison(BinaryOp op);
bool is_arithmetic(BinaryOp op);
BinaryOp commuted(BinaryOp comparison);
std::string_view op_symbol(BinaryOp op);
std::string_view op_name(BinaryOp op);
std::string_view op_name(UnaryOp op);
std::string_view is_kind_name(IsKind k);

// Short builders used by tests, the generator and the oracle.
namespace sql {
ExprPtr make(Expression::Node node);
ExprPtr lit(SqlValue v);
ExprPtr null();
ExprPtr integer(std::int64_t v);
ExprPtr real(double v);
ExprPtr text(std::string v);
ExprPtr boolean(bool v);
ExprPtr col(std::string table, std::string column);
ExprPtr unary(UnaryOp op, ExprPtr operand);
ExprPtr not_(ExprPtr operand);
ExprPtr binary(BinaryOp op, ExprPtr l, ExprPtr r);
ExprPtr and_(ExprPtr l, ExprPtr r);
ExprPtr or_(ExprPtr l, ExprPtr r);
ExprPtr eq(ExprPtr l, ExprPtr r);
ExprPtr lt(ExprPtr l, ExprPtr r);
ExprPtr le(ExprPtr l, ExprPtr r);
ExprPtr gt(ExprPtr l, ExprPtr r);
ExprPtr ge(ExprPtr l, ExprPtr r);
ExprPtr glob(ExprPtr l, ExprPtr pattern);
ExprPtr like(ExprPtr l, ExprPtr pattern);
ExprPtr between(ExprPtr v, ExprPtr lo, ExprPtr hi, bool symmetric = false);
ExprPtr in(ExprPtr v, std::vector<ExprPtr> candidates);
ExprPtr call(std::string name, std::vector<ExprPtr> args);
ExprPtr cast(ExprPtr operand, std::string type);
ExprPtr collate(ExprPtr operand, Collation c);
ExprPtr is(ExprPtr operand, IsKind kind);
ExprPtr is_true(ExprPtr operand);
}  // namespace sql

// --- queries ---------------------------------------------------------------

struct SelectItem {
  enum class Kind { Star, Expr, CountStar, Sum };
  Kind kind = Kind::Star;
  ExprPtr expr;
  std::string alias;

  static SelectItem star() { return {Kind::Star, nullptr, {}}; }
  static SelectItem expression(ExprPtr e, std::string alias = {}) {
    return {Kind::Expr, std::move(e), std::move(alias)};
  }
  static SelectItem count_star() { return {Kind::CountStar, nullptr, {}}; }
  static SelectItem sum(ExprPtr e, std::string alias = {}) {
    return {Kind::Sum, std::move(e), std::move(alias)};
  }
  bool is_aggregate() const { return kind == Kind::CountStar || kind == Kind::Sum; }
};

enum class JoinKind { Inner, Left, Cross };

struct JoinClause {
  JoinKind kind = JoinKind::Inner;
  std::string table;
  ExprPtr on;  // absent iff kind == Cross
};

enum class SortDirection { Asc, Desc };

struct OrderTerm {
  ExprPtr expr;
  SortDirection direction = SortDirection::Asc;
};

struct SelectQuery {
  std::vector<SelectItem> selectList;
  std::vector<std::string> fromTables;
  std::vector<JoinClause> joins;
  ExprPtr where;
  std::vector<ExprPtr> groupBy;
  std::vector<OrderTerm> orderBy;
  bool distinct = false;

  // fromTables followed by joined tables, in scope order.
  std::vector<std::string> scope_tables() const;
};

bool structurally_equal(const SelectQuery& a, const SelectQuery& b);

// --- schema and statements ---------------------------------------------------

struct ColumnDef {
  std::string name;
  std::string declaredType;
  bool unique = false;
  bool primaryKey = false;
  std::optional<Collation> collation;
};

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;

  const ColumnDef* find_column(std::string_view column) const;
};

struct IndexDef {
  std::string name;
  std::string table;
  std::vector<ExprPtr> keys;
  bool unique = false;
  ExprPtr where;  // partial-index predicate, may be null
};

struct SchemaDef {
  std::vector<TableDef> tables;
  std::vector<IndexDef> indexes;

  const TableDef* find_table(std::string_view name) const;
};

struct CreateTable {
  TableDef table;
};

struct CreateIndex {
  IndexDef index;
};

struct Insert {
  std::string table;
  std::vector<std::string> columns;
  std::vector<std::vector<ExprPtr>> rows;
};

struct Assignment {
  std::string column;
  ExprPtr value;
};

struct Update {
  std::string table;
  std::vector<Assignment> assignments;
  ExprPtr where;
};

struct Delete {
  std::string table;
  ExprPtr where;
};

struct Select {
  SelectQuery query;
};

// SELECT SUM(count) FROM (<inner>): the aggregate wrapper of an unoptimized
// query. With perGroup, the inner query yields one per-group SUM and the outer
// query sums the groups that contain at least one TRUE row.
struct SumOfCounts {
  SelectQuery inner;
  bool perGroup = false;
  bool castToInt = false;
};

using Statement = std::variant<CreateTable, CreateIndex, Insert, Update, Delete, Select, SumOfCounts>;

enum class StatementKind { CreateTable, CreateIndex, Insert, Update, Delete, Select };

StatementKind kind_of(const Statement& s);
std::string_view statement_kind_name(StatementKind k);

}  // namespace norec
