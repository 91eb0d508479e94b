#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "norec/ast.hpp"
#include "norec/dialect.hpp"
#include "norec/engine.hpp"

namespace norec {

enum class CountStrategy { NaiveIteration, AggregateCount };

std::string_view strategy_name(CountStrategy s);
// Round-robin: even check index -> NaiveIteration.
CountStrategy strategy_for_check(std::uint64_t check_index);

struct OracleVerdict {
  enum class Kind { Consistent, Discrepancy, Skipped };
  enum class SkipReason { ExpectedError, Timeout };

  Kind kind = Kind::Consistent;
  std::int64_t optimizedCount = 0;
  std::int64_t unoptimizedCount = 0;  // TRUE-count of the unoptimized query
  std::string optimizedSql;
  std::string unoptimizedSql;
  CountStrategy strategy = CountStrategy::NaiveIteration;
  std::uint64_t seed = 0;
  // Skipped
  SkipReason reason = SkipReason::ExpectedError;
  std::string pattern;
  std::string whichQuery;  // "optimized" or "unoptimized"
  // Content mode: first row present on one side only.
  std::optional<Row> differingRow;

  std::int64_t count() const { return optimizedCount; }
  bool consistent() const { return kind == Kind::Consistent; }
  bool discrepancy() const { return kind == Kind::Discrepancy; }
  bool skipped() const { return kind == Kind::Skipped; }
};

std::string_view verdict_kind_name(OracleVerdict::Kind k);

// An engine failure that is not covered by the expected-error list: a
// candidate error bug or crash bug, reported apart from the oracle verdict.
struct EngineFault {
  enum class Kind { UnexpectedError, Crash };
  Kind kind = Kind::UnexpectedError;
  std::string whichQuery;
  std::string sql;
  std::string message;
};

// Exactly one of the two is set.
struct CheckResult {
  std::optional<OracleVerdict> verdict;
  std::optional<EngineFault> fault;
};

// SELECT (φ IS TRUE) FROM ... [GROUP BY ...]; ORDER BY dropped.
SelectQuery translate(const SelectQuery& q);

Statement build_optimized_count_query(const SelectQuery& q, CountStrategy strategy);
Statement build_unoptimized_sum_query(const SelectQuery& translated, const DialectProfile& dialect);

// GROUP BY queries are always counted by iteration.
CountStrategy effective_strategy(const SelectQuery& q, CountStrategy requested);

CheckResult run_check(Executor& executor, const SelectQuery& q, CountStrategy strategy,
                      const DialectProfile& dialect, std::uint64_t seed = 0);

// Compares fetched rows as multisets. Throws std::invalid_argument for
// GROUP BY queries.
CheckResult run_content_check(Executor& executor, const SelectQuery& q,
                              const DialectProfile& dialect, std::uint64_t seed = 0);

}  // namespace norec
