#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "norec/engine.hpp"

namespace norec {

// Deliberately faulty optimizer rules. At most one is active per engine.
enum class BugInjection {
  LikeRangeSkip,          // LIKE/GLOB prefix range used on columns without TEXT affinity
  InToEqAffinity,         // x IN (y) -> x = y even when y carries affinity
  CommuteDropsCollation,  // commuting a comparison loses the resolved collation
  NullFilterAsFalse,      // NOT e filters as NOT (e IS TRUE), so NULL passes
  StringRangeBound,       // whitespace-prefixed numeric text bound becomes 0
  ValueCorruption,        // index-scanned integers come back as REAL
};

std::string_view injection_name(BugInjection b);
std::optional<BugInjection> parse_injection(std::string_view name);
const std::vector<BugInjection>& all_injections();

// Range scan over the first key of an index on the first FROM table.
struct IndexScan {
  std::string index;
  std::string column;
  enum class Kind { Compare, IsNull, Prefix } kind = Kind::Compare;
  BinaryOp op = BinaryOp::Equal;  // for Compare
  SqlValue bound;                 // for Compare
  SqlValue low, high;             // for Prefix: low <= key < high (text)
};

// Outcome of the rewrite pipeline for one query.
struct QueryPlan {
  ExprPtr where;                   // rewritten predicate, before scan extraction
  ExprPtr residual;                // what is still evaluated per row
  std::optional<IndexScan> scan;
  bool alwaysEmpty = false;        // a FALSE/NULL conjunct folded away
  std::vector<std::string> rules;  // names of rewrites that fired
};

// Miniature SQL engine emulating the embedded dialect, with a naive evaluation
// path and an optimizing path (rewrites + index range scans).
class ToyEngine final : public Executor {
 public:
  explicit ToyEngine(std::optional<BugInjection> injection = std::nullopt,
                     DialectProfile dialect = DialectProfile::sqlite());

  EngineResult execute(const Statement& stmt) override;
  const DialectProfile& dialect() const override { return dialect_; }
  std::string version() const override;

  // Full scan + per-row evaluation; no rewrites.
  EngineResult execute_naive(const SelectQuery& q);
  // Rewrite pipeline, then index range or full scan.
  EngineResult execute_optimized(const SelectQuery& q);

  QueryPlan plan(const SelectQuery& q) const;

  std::optional<BugInjection> injection() const { return injection_; }
  const SchemaDef& schema() const { return schema_; }
  size_t row_count(std::string_view table) const;

 private:
  struct Table {
    TableDef def;
    std::map<std::int64_t, Row> rows;
    std::int64_t nextRowid = 1;
  };
  struct IndexEntry {
    std::vector<SqlValue> key;
    std::int64_t rowid;
  };
  struct Index {
    IndexDef def;
    std::vector<Collation> collations;
    std::vector<IndexEntry> entries;  // sorted by key
  };
  class Deadline;

  EngineResult create_table(const CreateTable& s);
  EngineResult create_index(const CreateIndex& s);
  EngineResult insert(const Insert& s);
  EngineResult update(const Update& s);
  EngineResult remove(const Delete& s);
  EngineResult sum_of_counts(const SumOfCounts& s);
  EngineResult run_select(const SelectQuery& q, bool optimize);

  Table* find_table(std::string_view name);
  const Table* find_table(std::string_view name) const;
  // Rebuilds the indexes of `table` and enforces uniqueness; throws EvalError.
  void reindex(Table& table);
  void build_index(Index& index, const Table& table) const;

  std::optional<BugInjection> injection_;
  DialectProfile dialect_;
  SchemaDef schema_;
  std::map<std::string, Table, std::less<>> tables_;
  std::vector<Index> indexes_;
};

}  // namespace norec
