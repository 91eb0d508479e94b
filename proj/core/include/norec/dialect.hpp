#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "norec/ast.hpp"

namespace norec {

// Per-engine feature and semantics switches consulted by the generator, the
// renderer, the evaluator and the oracle.
struct DialectProfile {
  std::string name;
  bool hasNativeBoolean = false;
  bool boolSumNeedsCast = false;
  bool hasGlob = false;
  bool hasCollateNocase = false;
  bool divByZeroYieldsNull = false;
  bool appliesColumnAffinity = false;
  bool hasBetweenSymmetric = false;
  bool hasPartialIndexes = false;
  bool derivedTableNeedsAlias = false;
  // Control characters inside string literals are spelled char(n).
  bool controlCharsViaCharFunction = false;
  std::set<std::string> deterministicFunctions;  // upper-case names
  std::map<StatementKind, std::vector<std::string>> expectedErrorPatterns;

  // The embedded engine (also emulated by the built-in toy engine).
  static DialectProfile sqlite();
  // A strict dialect with native booleans and no implicit bool->int sums.
  static DialectProfile postgres();

  bool permits_function(std::string_view name) const;
  const std::vector<std::string>& expected_errors(StatementKind kind) const;

  // First expected pattern that is a substring of `message`.
  std::optional<std::string> match_expected_error(StatementKind kind,
                                                  std::string_view message) const;
};

// Throws std::invalid_argument for unknown names.
DialectProfile dialect_by_name(std::string_view name);

// True iff every FunctionCall in `expr` is on the dialect's whitelist.
bool is_deterministic(const ExprPtr& expr, const DialectProfile& dialect);
bool is_deterministic(const SelectQuery& query, const DialectProfile& dialect);

}  // namespace norec
