#pragma once

#include <stdexcept>
#include <string>

#include "norec/ast.hpp"
#include "norec/dialect.hpp"

namespace norec {

class UnsupportedFeature : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fully parenthesized SQL text; never relies on operator precedence.
// Column references are table-qualified unless `qualify` is false (index
// definitions).
std::string render_expression(const ExprPtr& expr, const DialectProfile& dialect,
                              bool qualify = true);
std::string render_value(const SqlValue& v, const DialectProfile& dialect);
std::string render_query(const SelectQuery& query, const DialectProfile& dialect);

// One `;`-terminated statement. Throws UnsupportedFeature when the statement
// uses a construct the dialect does not have.
std::string render_statement(const Statement& stmt, const DialectProfile& dialect);

}  // namespace norec
