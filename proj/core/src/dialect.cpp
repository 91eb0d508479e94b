#include "norec/dialect.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace norec {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

const std::set<std::string> kDefaultFunctions = {"ABS", "LENGTH", "LOWER", "UPPER"};

}  // namespace

DialectProfile DialectProfile::sqlite() {
  DialectProfile d;
  d.name = "sqlite";
  d.hasNativeBoolean = false;
  d.boolSumNeedsCast = false;
  d.hasGlob = true;
  d.hasCollateNocase = true;
  d.divByZeroYieldsNull = true;
  d.appliesColumnAffinity = true;
  d.hasBetweenSymmetric = false;
  d.hasPartialIndexes = true;
  d.derivedTableNeedsAlias = false;
  d.controlCharsViaCharFunction = true;
  d.deterministicFunctions = kDefaultFunctions;
  const std::vector<std::string> arithmetic = {"integer overflow"};
  d.expectedErrorPatterns = {
      {StatementKind::CreateTable, {}},
      {StatementKind::CreateIndex, {"UNIQUE constraint failed", "integer overflow"}},
      {StatementKind::Insert, {"UNIQUE constraint failed", "integer overflow"}},
      {StatementKind::Update, {"UNIQUE constraint failed", "integer overflow"}},
      {StatementKind::Delete, arithmetic},
      // A term that folds to an integer (c0 AND 0) is taken as a result column position.
      {StatementKind::Select,
       {"integer overflow", "term out of range", "aggregate functions are not allowed in the GROUP BY clause",
        "misuse of aggregate"}},
  };
  return d;
}

DialectProfile DialectProfile::postgres() {
  DialectProfile d;
  d.name = "postgres";
  d.hasNativeBoolean = true;
  d.boolSumNeedsCast = true;
  d.hasGlob = false;
  d.hasCollateNocase = false;
  d.divByZeroYieldsNull = false;
  d.appliesColumnAffinity = false;
  d.hasBetweenSymmetric = true;
  d.hasPartialIndexes = true;
  d.derivedTableNeedsAlias = true;
  d.controlCharsViaCharFunction = false;
  d.deterministicFunctions = kDefaultFunctions;
  const std::vector<std::string> arithmetic = {"out of range", "division by zero",
                                               "invalid input syntax"};
  std::vector<std::string> dml = arithmetic;
  dml.push_back("duplicate key value violates unique constraint");
  d.expectedErrorPatterns = {
      {StatementKind::CreateTable, {}},
      {StatementKind::CreateIndex, dml},
      {StatementKind::Insert, dml},
      {StatementKind::Update, dml},
      {StatementKind::Delete, arithmetic},
      {StatementKind::Select, arithmetic},
  };
  return d;
}

bool DialectProfile::permits_function(std::string_view fn) const {
  return deterministicFunctions.count(upper(fn)) != 0;
}

const std::vector<std::string>& DialectProfile::expected_errors(StatementKind kind) const {
  static const std::vector<std::string> kNone;
  auto it = expectedErrorPatterns.find(kind);
  return it == expectedErrorPatterns.end() ? kNone : it->second;
}

std::optional<std::string> DialectProfile::match_expected_error(StatementKind kind,
                                                                std::string_view message) const {
  for (const auto& p : expected_errors(kind)) {
    if (message.find(p) != std::string_view::npos) return p;
  }
  return std::nullopt;
}

DialectProfile dialect_by_name(std::string_view name) {
  if (name == "sqlite" || name == "toy" || name == "embedded") return DialectProfile::sqlite();
  if (name == "postgres" || name == "strict") return DialectProfile::postgres();
  throw std::invalid_argument("unknown dialect: " + std::string(name));
}

bool is_deterministic(const ExprPtr& expr, const DialectProfile& dialect) {
  if (!expr) return true;
  if (auto* f = expr->as<FunctionCall>()) {
    if (!dialect.permits_function(f->name)) return false;
  }
  for (const auto& c : children(*expr)) {
    if (!is_deterministic(c, dialect)) return false;
  }
  return true;
}

bool is_deterministic(const SelectQuery& q, const DialectProfile& dialect) {
  for (const auto& item : q.selectList) {
    if (!is_deterministic(item.expr, dialect)) return false;
  }
  for (const auto& j : q.joins) {
    if (!is_deterministic(j.on, dialect)) return false;
  }
  if (!is_deterministic(q.where, dialect)) return false;
  for (const auto& g : q.groupBy) {
    if (!is_deterministic(g, dialect)) return false;
  }
  for (const auto& o : q.orderBy) {
    if (!is_deterministic(o.expr, dialect)) return false;
  }
  return true;
}

}  // namespace norec
