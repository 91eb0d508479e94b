#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "norec/affinity.hpp"
#include "norec/ast.hpp"
#include "norec/dialect.hpp"

namespace norec {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A column as seen by the evaluator: its current value plus the metadata
// that drives affinity conversion and collation.
struct ColumnView {
  const SqlValue* value;
  Affinity affinity;
  Collation collation;
};

class RowBinding {
 public:
  virtual ~RowBinding() = default;
  virtual std::optional<ColumnView> lookup(std::string_view table,
                                           std::string_view column) const = 0;
};

// Binding over explicit (table definition, row) pairs. A missing row means
// the table is NULL-extended (outer join).
class TableRowBinding final : public RowBinding {
 public:
  void add(const TableDef& table, const std::vector<SqlValue>* row);
  std::optional<ColumnView> lookup(std::string_view table,
                                   std::string_view column) const override;

 private:
  struct Slot {
    const TableDef* table;
    const std::vector<SqlValue>* row;
  };
  std::vector<Slot> slots_;
};

// Reference semantics of the emulated embedded dialect: three-valued logic,
// NULL-propagating comparisons, affinity-aware comparisons, collations.
// Throws EvalError for arithmetic overflow and unresolvable names.
SqlValue eval_expression(const Expression& expr, const RowBinding& binding,
                         const DialectProfile& dialect);
inline SqlValue eval_expression(const ExprPtr& expr, const RowBinding& binding,
                                const DialectProfile& dialect) {
  return eval_expression(*expr, binding, dialect);
}

// Affinity carried by an expression (column refs, casts, collate wrappers);
// nullopt for expressions without affinity.
std::optional<Affinity> expression_affinity(const Expression& expr, const RowBinding& binding,
                                            const DialectProfile& dialect);

// Collation attached to an expression and whether it was explicit.
struct CollationInfo {
  std::optional<Collation> collation;
  bool isExplicit = false;
};
CollationInfo expression_collation(const Expression& expr, const RowBinding& binding);

// Explicit left, explicit right, left column, right column, else BINARY.
Collation resolve_collation(const Expression& left, const Expression& right,
                            const RowBinding& binding);

// The value a comparison `left op right` yields (NULL, 0/1 or a boolean).
SqlValue compare_expressions(BinaryOp op, const Expression& left, const Expression& right,
                             const SqlValue& lv, const SqlValue& rv, const RowBinding& binding,
                             const DialectProfile& dialect);

bool glob_match(std::string_view pattern, std::string_view text);
bool like_match(std::string_view pattern, std::string_view text);

// Truth value as a SQL value under the dialect (Integer 0/1 or Boolean).
SqlValue bool_value(bool b, const DialectProfile& dialect);

}  // namespace norec
