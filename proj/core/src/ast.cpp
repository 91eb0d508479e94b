#include "norec/ast.hpp"

#include <algorithm>
#include <stdexcept>

#include "overloaded.hpp"

namespace norec {

namespace {

using detail::overloaded;

bool all_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!structurally_equal(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Constant& x) { return x.value == b->as<Constant>()->value; },
          [&](const ColumnRef& x) {
            auto* y = b->as<ColumnRef>();
            return x.table == y->table && x.column == y->column;
          },
          [&](const Unary& x) {
            auto* y = b->as<Unary>();
            return x.op == y->op && structurally_equal(x.operand, y->operand);
          },
          [&](const Binary& x) {
            auto* y = b->as<Binary>();
            return x.op == y->op && structurally_equal(x.left, y->left) &&
                   structurally_equal(x.right, y->right);
          },
          [&](const Between& x) {
            auto* y = b->as<Between>();
            return x.symmetric == y->symmetric && structurally_equal(x.value, y->value) &&
                   structurally_equal(x.low, y->low) && structurally_equal(x.high, y->high);
          },
          [&](const InList& x) {
            auto* y = b->as<InList>();
            return structurally_equal(x.value, y->value) && all_equal(x.candidates, y->candidates);
          },
          [&](const FunctionCall& x) {
            auto* y = b->as<FunctionCall>();
            return x.name == y->name && all_equal(x.args, y->args);
          },
          [&](const Cast& x) {
            auto* y = b->as<Cast>();
            return x.type == y->type && structurally_equal(x.operand, y->operand);
          },
          [&](const Collate& x) {
            auto* y = b->as<Collate>();
            return x.collation == y->collation && structurally_equal(x.operand, y->operand);
          },
          [&](const PostfixIs& x) {
            auto* y = b->as<PostfixIs>();
            return x.kind == y->kind && structurally_equal(x.operand, y->operand);
          },
      },
      a->node);
}

std::vector<ExprPtr> children(const Expression& e) {
  return std::visit(
      overloaded{
          [](const Constant&) { return std::vector<ExprPtr>{}; },
          [](const ColumnRef&) { return std::vector<ExprPtr>{}; },
          [](const Unary& x) { return std::vector<ExprPtr>{x.operand}; },
          [](const Binary& x) { return std::vector<ExprPtr>{x.left, x.right}; },
          [](const Between& x) { return std::vector<ExprPtr>{x.value, x.low, x.high}; },
          [](const InList& x) {
            std::vector<ExprPtr> out{x.value};
            out.insert(out.end(), x.candidates.begin(), x.candidates.end());
            return out;
          },
          [](const FunctionCall& x) { return x.args; },
          [](const Cast& x) { return std::vector<ExprPtr>{x.operand}; },
          [](const Collate& x) { return std::vector<ExprPtr>{x.operand}; },
          [](const PostfixIs& x) { return std::vector<ExprPtr>{x.operand}; },
      },
      e.node);
}

ExprPtr with_children(const Expression& e, const std::vector<ExprPtr>& kids) {
  auto need = [&](size_t n) {
    if (kids.size() != n) throw std::invalid_argument("with_children: arity mismatch");
  };
  return std::visit(
      overloaded{
          [&](const Constant& x) { need(0); return sql::make(x); },
          [&](const ColumnRef& x) { need(0); return sql::make(x); },
          [&](const Unary& x) { need(1); return sql::make(Unary{x.op, kids[0]}); },
          [&](const Binary& x) { need(2); return sql::make(Binary{x.op, kids[0], kids[1]}); },
          [&](const Between& x) {
            need(3);
            return sql::make(Between{x.symmetric, kids[0], kids[1], kids[2]});
          },
          [&](const InList& x) {
            need(x.candidates.size() + 1);
            return sql::make(InList{kids[0], std::vector<ExprPtr>(kids.begin() + 1, kids.end())});
          },
          [&](const FunctionCall& x) {
            need(x.args.size());
            return sql::make(FunctionCall{x.name, kids});
          },
          [&](const Cast& x) { need(1); return sql::make(Cast{kids[0], x.type}); },
          [&](const Collate& x) { need(1); return sql::make(Collate{kids[0], x.collation}); },
          [&](const PostfixIs& x) { need(1); return sql::make(PostfixIs{kids[0], x.kind}); },
      },
      e.node);
}

size_t node_count(const ExprPtr& e) {
  if (!e) return 0;
  size_t n = 1;
  for (const auto& c : children(*e)) n += node_count(c);
  return n;
}

size_t depth(const ExprPtr& e) {
  if (!e) return 0;
  size_t d = 0;
  for (const auto& c : children(*e)) d = std::max(d, depth(c));
  return d + 1;
}

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Equal:
    case BinaryOp::NotEqual:
    case BinaryOp::Less:
    case BinaryOp::LessEqual:
    case BinaryOp::Greater:
    case BinaryOp::GreaterEqual: return true;
    default: return false;
  }
}

bool is_arithmetic(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add:
    case BinaryOp::Subtract:
    case BinaryOp::Multiply:
    case BinaryOp::Divide:
    case BinaryOp::Remainder: return true;
    default: return false;
  }
}

BinaryOp commuted(BinaryOp op) {
  switch (op) {
    case BinaryOp::Less: return BinaryOp::Greater;
    case BinaryOp::LessEqual: return BinaryOp::GreaterEqual;
    case BinaryOp::Greater: return BinaryOp::Less;
    case BinaryOp::GreaterEqual: return BinaryOp::LessEqual;
    default: return op;
  }
}

std::string_view op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Subtract: return "-";
    case BinaryOp::Multiply: return "*";
    case BinaryOp::Divide: return "/";
    case BinaryOp::Remainder: return "%";
    case BinaryOp::Concat: return "||";
    case BinaryOp::Equal: return "=";
    case BinaryOp::NotEqual: return "<>";
    case BinaryOp::Less: return "<";
    case BinaryOp::LessEqual: return "<=";
    case BinaryOp::Greater: return ">";
    case BinaryOp::GreaterEqual: return ">=";
    case BinaryOp::And: return "AND";
    case BinaryOp::Or: return "OR";
    case BinaryOp::Glob: return "GLOB";
    case BinaryOp::Like: return "LIKE";
  }
  return "?";
}

std::string_view op_name(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "add";
    case BinaryOp::Subtract: return "sub";
    case BinaryOp::Multiply: return "mul";
    case BinaryOp::Divide: return "div";
    case BinaryOp::Remainder: return "mod";
    case BinaryOp::Concat: return "concat";
    case BinaryOp::Equal: return "eq";
    case BinaryOp::NotEqual: return "ne";
    case BinaryOp::Less: return "lt";
    case BinaryOp::LessEqual: return "le";
    case BinaryOp::Greater: return "gt";
    case BinaryOp::GreaterEqual: return "ge";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    case BinaryOp::Glob: return "glob";
    case BinaryOp::Like: return "like";
  }
  return "?";
}

std::string_view op_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Not: return "not";
    case UnaryOp::Negate: return "neg";
    case UnaryOp::Plus: return "plus";
  }
  return "?";
}

std::string_view is_kind_name(IsKind k) {
  switch (k) {
    case IsKind::True: return "IS TRUE";
    case IsKind::False: return "IS FALSE";
    case IsKind::Null: return "IS NULL";
    case IsKind::NotNull: return "IS NOT NULL";
  }
  return "?";
}

namespace sql {
ExprPtr make(Expression::Node node) {
  return std::make_shared<const Expression>(Expression{std::move(node)});
}
ExprPtr lit(SqlValue v) { return make(Constant{std::move(v)}); }
ExprPtr null() { return lit(SqlValue::null()); }
ExprPtr integer(std::int64_t v) { return lit(SqlValue::integer(v)); }
ExprPtr real(double v) { return lit(SqlValue::real(v)); }
ExprPtr text(std::string v) { return lit(SqlValue::text(std::move(v))); }
ExprPtr boolean(bool v) { return lit(SqlValue::boolean(v)); }
ExprPtr col(std::string table, std::string column) {
  return make(ColumnRef{std::move(table), std::move(column)});
}
ExprPtr unary(UnaryOp op, ExprPtr operand) { return make(Unary{op, std::move(operand)}); }
ExprPtr not_(ExprPtr operand) { return unary(UnaryOp::Not, std::move(operand)); }
ExprPtr binary(BinaryOp op, ExprPtr l, ExprPtr r) {
  return make(Binary{op, std::move(l), std::move(r)});
}
ExprPtr and_(ExprPtr l, ExprPtr r) { return binary(BinaryOp::And, std::move(l), std::move(r)); }
ExprPtr or_(ExprPtr l, ExprPtr r) { return binary(BinaryOp::Or, std::move(l), std::move(r)); }
ExprPtr eq(ExprPtr l, ExprPtr r) { return binary(BinaryOp::Equal, std::move(l), std::move(r)); }
ExprPtr lt(ExprPtr l, ExprPtr r) { return binary(BinaryOp::Less, std::move(l), std::move(r)); }
ExprPtr le(ExprPtr l, ExprPtr r) { return binary(BinaryOp::LessEqual, std::move(l), std::move(r)); }
ExprPtr gt(ExprPtr l, ExprPtr r) { return binary(BinaryOp::Greater, std::move(l), std::move(r)); }
ExprPtr ge(ExprPtr l, ExprPtr r) {
  return binary(BinaryOp::GreaterEqual, std::move(l), std::move(r));
}
ExprPtr glob(ExprPtr l, ExprPtr pattern) {
  return binary(BinaryOp::Glob, std::move(l), std::move(pattern));
}
ExprPtr like(ExprPtr l, ExprPtr pattern) {
  return binary(BinaryOp::Like, std::move(l), std::move(pattern));
}
ExprPtr between(ExprPtr v, ExprPtr lo, ExprPtr hi, bool symmetric) {
  return make(Between{symmetric, std::move(v), std::move(lo), std::move(hi)});
}
ExprPtr in(ExprPtr v, std::vector<ExprPtr> candidates) {
  return make(InList{std::move(v), std::move(candidates)});
}
ExprPtr call(std::string name, std::vector<ExprPtr> args) {
  return make(FunctionCall{std::move(name), std::move(args)});
}
ExprPtr cast(ExprPtr operand, std::string type) {
  return make(Cast{std::move(operand), std::move(type)});
}
ExprPtr collate(ExprPtr operand, Collation c) { return make(Collate{std::move(operand), c}); }
ExprPtr is(ExprPtr operand, IsKind kind) { return make(PostfixIs{std::move(operand), kind}); }
ExprPtr is_true(ExprPtr operand) { return is(std::move(operand), IsKind::True); }
}  // namespace sql

std::vector<std::string> SelectQuery::scope_tables() const {
  std::vector<std::string> out = fromTables;
  for (const auto& j : joins) out.push_back(j.table);
  return out;
}

bool structurally_equal(const SelectQuery& a, const SelectQuery& b) {
  if (a.selectList.size() != b.selectList.size()) return false;
  for (size_t i = 0; i < a.selectList.size(); ++i) {
    const auto& x = a.selectList[i];
    const auto& y = b.selectList[i];
    if (x.kind != y.kind || x.alias != y.alias || !structurally_equal(x.expr, y.expr)) return false;
  }
  if (a.fromTables != b.fromTables || a.joins.size() != b.joins.size()) return false;
  for (size_t i = 0; i < a.joins.size(); ++i) {
    const auto& x = a.joins[i];
    const auto& y = b.joins[i];
    if (x.kind != y.kind || x.table != y.table || !structurally_equal(x.on, y.on)) return false;
  }
  if (!structurally_equal(a.where, b.where)) return false;
  if (!all_equal(a.groupBy, b.groupBy)) return false;
  if (a.orderBy.size() != b.orderBy.size()) return false;
  for (size_t i = 0; i < a.orderBy.size(); ++i) {
    if (a.orderBy[i].direction != b.orderBy[i].direction ||
        !structurally_equal(a.orderBy[i].expr, b.orderBy[i].expr)) {
      return false;
    }
  }
  return a.distinct == b.distinct;
}

const ColumnDef* TableDef::find_column(std::string_view column) const {
  for (const auto& c : columns) {
    if (c.name == column) return &c;
  }
  return nullptr;
}

const TableDef* SchemaDef::find_table(std::string_view name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

StatementKind kind_of(const Statement& s) {
  return std::visit(
      overloaded{
          [](const CreateTable&) { return StatementKind::CreateTable; },
          [](const CreateIndex&) { return StatementKind::CreateIndex; },
          [](const Insert&) { return StatementKind::Insert; },
          [](const Update&) { return StatementKind::Update; },
          [](const Delete&) { return StatementKind::Delete; },
          [](const Select&) { return StatementKind::Select; },
          [](const SumOfCounts&) { return StatementKind::Select; },
      },
      s);
}

std::string_view statement_kind_name(StatementKind k) {
  switch (k) {
    case StatementKind::CreateTable: return "create_table";
    case StatementKind::CreateIndex: return "create_index";
    case StatementKind::Insert: return "insert";
    case StatementKind::Update: return "update";
    case StatementKind::Delete: return "delete";
    case StatementKind::Select: return "select";
  }
  return "?";
}

}  // namespace norec
