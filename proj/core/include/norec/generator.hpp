#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "norec/ast.hpp"
#include "norec/dialect.hpp"

namespace norec {

// Relative weights of expression node kinds. Zero disables a kind.
struct ExprWeights {
  double constant = 8;
  double column = 14;
  double unary = 5;        // NOT, unary minus/plus
  double comparison = 22;
  double logical = 14;     // AND, OR
  double arithmetic = 5;
  double concat = 2;
  double glob = 5;
  double like = 5;
  double between = 4;
  double in = 7;
  double function = 3;
  double cast = 3;
  double collate = 3;
  double isTest = 6;       // IS [NOT] TRUE/FALSE/NULL

  // name=value access for config files ("comparison", "glob", ...).
  bool set(std::string_view name, double value);
  static const std::vector<std::string>& names();
  double get(std::string_view name) const;
};

struct GenConfig {
  std::uint64_t seed = 0;
  int maxTables = 3;
  int maxColumnsPerTable = 3;
  int maxRows = 20;
  int maxExprDepth = 6;
  int maxJoins = 2;
  ExprWeights weights;
  double orderByProbability = 0.2;
  double groupByProbability = 0.1;

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

using ScopeColumn = std::pair<std::string, ColumnDef>;  // (table, column)

// Deterministic per (config, dialect): one instance per worker.
class Generator {
 public:
  Generator(GenConfig config, DialectProfile dialect);

  // Tables, their columns/constraints, and indexes. The returned statements
  // reproduce the schema exactly.
  std::pair<SchemaDef, std::vector<Statement>> generate_schema();

  // INSERTs, then occasional UPDATE/DELETE. Rejections by the engine (for
  // example UNIQUE violations) are covered by the dialect's expected errors.
  std::vector<Statement> populate(const SchemaDef& schema);

  ExprPtr generate_predicate(const std::vector<ScopeColumn>& scope, int depth);
  SelectQuery generate_optimized_query(const SchemaDef& schema);

  // Values inserted so far into the current database; constants are biased
  // toward them.
  const std::vector<SqlValue>& value_pool() const { return pool_; }
  const GenConfig& config() const { return config_; }
  std::mt19937_64& rng() { return rng_; }

 private:
  enum class Kind {
    Constant, Column, Unary, Comparison, Logical, Arithmetic, Concat,
    Glob, Like, Between, In, Function, Cast, Collate, IsTest,
  };

  bool chance(double p);
  int uniform(int lo, int hi);
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }

  Kind pick_kind(bool have_columns);
  ExprPtr expr(const std::vector<ScopeColumn>& scope, int depth);
  ExprPtr operand(const std::vector<ScopeColumn>& scope, int depth);
  ExprPtr leaf(const std::vector<ScopeColumn>& scope);
  ExprPtr column(const std::vector<ScopeColumn>& scope);
  ExprPtr constant();
  SqlValue random_value();
  SqlValue pool_variant(const SqlValue& v);
  std::string pattern(bool glob);
  std::vector<ExprPtr> terms(const std::vector<ScopeColumn>& scope, int max_terms);

  GenConfig config_;
  DialectProfile dialect_;
  std::mt19937_64 rng_;
  std::vector<SqlValue> pool_;
};

std::vector<ScopeColumn> scope_of(const SchemaDef& schema, const std::vector<std::string>& tables);

}  // namespace norec
