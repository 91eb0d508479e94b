#include "norec/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "norec/render.hpp"

namespace norec {

std::string_view strategy_name(CountStrategy s) {
  return s == CountStrategy::NaiveIteration ? "naive-iteration" : "aggregate-count";
}

CountStrategy strategy_for_check(std::uint64_t check_index) {
  return check_index % 2 == 0 ? CountStrategy::NaiveIteration : CountStrategy::AggregateCount;
}

std::string_view verdict_kind_name(OracleVerdict::Kind k) {
  switch (k) {
    case OracleVerdict::Kind::Consistent: return "consistent";
    case OracleVerdict::Kind::Discrepancy: return "discrepancy";
    case OracleVerdict::Kind::Skipped: return "skipped";
  }
  return "?";
}

SelectQuery translate(const SelectQuery& q) {
  SelectQuery out;
  ExprPtr phi = q.where ? q.where : sql::boolean(true);
  out.selectList = {SelectItem::expression(sql::is_true(phi))};
  out.fromTables = q.fromTables;
  out.joins = q.joins;
  out.groupBy = q.groupBy;
  return out;
}

CountStrategy effective_strategy(const SelectQuery& q, CountStrategy requested) {
  return q.groupBy.empty() ? requested : CountStrategy::NaiveIteration;
}

Statement build_optimized_count_query(const SelectQuery& q, CountStrategy strategy) {
  if (effective_strategy(q, strategy) == CountStrategy::NaiveIteration) return Select{q};
  SelectQuery c = q;
  c.selectList = {SelectItem::count_star()};
  c.orderBy.clear();
  return Select{c};
}

Statement build_unoptimized_sum_query(const SelectQuery& translated, const DialectProfile& dialect) {
  SumOfCounts s;
  s.inner = translated;
  s.perGroup = !translated.groupBy.empty();
  s.castToInt = dialect.boolSumNeedsCast;
  ExprPtr term = translated.selectList.front().expr;
  if (s.castToInt) term = sql::cast(term, "INT");
  s.inner.selectList = {s.perGroup ? SelectItem::sum(term, "count") : SelectItem::expression(term, "count")};
  return s;
}

namespace {

std::int64_t count_value(const SqlValue& v) {
  if (v.is_null()) return 0;
  SqlValue n = to_numeric(v);
  return n.is_integer() ? n.as_integer() : static_cast<std::int64_t>(n.as_real());
}

std::string safe_render(const Statement& s, const DialectProfile& d) {
  try {
    return render_statement(s, d);
  } catch (const UnsupportedFeature& e) {
    return std::string("-- unsupported: ") + e.what();
  }
}

// Classifies failures of the two executions. Returns a finished CheckResult
// when at least one statement did not produce rows.
std::optional<CheckResult> classify(const EngineResult& opt, const EngineResult& unopt,
                                    const std::string& opt_sql, const std::string& unopt_sql,
                                    const DialectProfile& d, OracleVerdict base) {
  struct Side {
    const EngineResult& r;
    const char* name;
    const std::string& sql;
  };
  const Side sides[] = {{opt, "optimized", opt_sql}, {unopt, "unoptimized", unopt_sql}};
  for (const auto& s : sides) {
    if (s.r.is_crash()) {
      return CheckResult{std::nullopt, EngineFault{EngineFault::Kind::Crash, s.name, s.sql, s.r.message}};
    }
  }
  std::optional<OracleVerdict> skip;
  for (const auto& s : sides) {
    if (s.r.is_error()) {
      auto pattern = d.match_expected_error(StatementKind::Select, s.r.message);
      if (!pattern) {
        return CheckResult{std::nullopt,
                           EngineFault{EngineFault::Kind::UnexpectedError, s.name, s.sql, s.r.message}};
      }
      if (!skip) {
        skip = base;
        skip->kind = OracleVerdict::Kind::Skipped;
        skip->reason = OracleVerdict::SkipReason::ExpectedError;
        skip->pattern = *pattern;
        skip->whichQuery = s.name;
      }
    }
  }
  if (skip) return CheckResult{skip, std::nullopt};
  for (const auto& s : sides) {
    if (s.r.is_timeout()) {
      OracleVerdict v = base;
      v.kind = OracleVerdict::Kind::Skipped;
      v.reason = OracleVerdict::SkipReason::Timeout;
      v.whichQuery = s.name;
      return CheckResult{v, std::nullopt};
    }
  }
  return std::nullopt;
}

}  // namespace

CheckResult run_check(Executor& executor, const SelectQuery& q, CountStrategy strategy,
                      const DialectProfile& dialect, std::uint64_t seed) {
  strategy = effective_strategy(q, strategy);
  Statement opt = build_optimized_count_query(q, strategy);
  Statement unopt = build_unoptimized_sum_query(translate(q), dialect);
  OracleVerdict v;
  v.strategy = strategy;
  v.seed = seed;
  v.optimizedSql = safe_render(opt, dialect);
  v.unoptimizedSql = safe_render(unopt, dialect);

  EngineResult r1 = executor.execute(opt);
  EngineResult r2 = executor.execute(unopt);
  if (auto done = classify(r1, r2, v.optimizedSql, v.unoptimizedSql, dialect, v)) return *done;

  if (strategy == CountStrategy::NaiveIteration) {
    v.optimizedCount = static_cast<std::int64_t>(r1.rows.size());
  } else {
    v.optimizedCount = r1.rows.empty() || r1.rows[0].empty() ? 0 : count_value(r1.rows[0][0]);
  }
  v.unoptimizedCount = r2.rows.empty() || r2.rows[0].empty() ? 0 : count_value(r2.rows[0][0]);
  v.kind = v.optimizedCount == v.unoptimizedCount ? OracleVerdict::Kind::Consistent
                                                  : OracleVerdict::Kind::Discrepancy;
  return CheckResult{v, std::nullopt};
}

CheckResult run_content_check(Executor& executor, const SelectQuery& q,
                              const DialectProfile& dialect, std::uint64_t seed) {
  if (!q.groupBy.empty()) throw std::invalid_argument("content checks do not support GROUP BY");
  SelectQuery t = translate(q);
  t.selectList.insert(t.selectList.begin(), SelectItem::star());
  Statement opt = Select{q};
  Statement unopt = Select{t};
  OracleVerdict v;
  v.strategy = CountStrategy::NaiveIteration;
  v.seed = seed;
  v.optimizedSql = safe_render(opt, dialect);
  v.unoptimizedSql = safe_render(unopt, dialect);

  EngineResult r1 = executor.execute(opt);
  EngineResult r2 = executor.execute(unopt);
  if (auto done = classify(r1, r2, v.optimizedSql, v.unoptimizedSql, dialect, v)) return *done;

  std::vector<Row> fetched = r1.rows;
  std::vector<Row> expected;
  for (auto& row : r2.rows) {
    if (row.empty()) continue;
    if (truth_value(row.back()) != true) continue;
    row.pop_back();
    expected.push_back(std::move(row));
  }
  auto row_less = [](const Row& a, const Row& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), structural_less);
  };
  std::sort(fetched.begin(), fetched.end(), row_less);
  std::sort(expected.begin(), expected.end(), row_less);
  v.optimizedCount = static_cast<std::int64_t>(fetched.size());
  v.unoptimizedCount = static_cast<std::int64_t>(expected.size());
  if (fetched == expected) {
    v.kind = OracleVerdict::Kind::Consistent;
    return CheckResult{v, std::nullopt};
  }
  v.kind = OracleVerdict::Kind::Discrepancy;
  size_t i = 0;
  while (i < fetched.size() && i < expected.size() && fetched[i] == expected[i]) ++i;
  if (i < fetched.size() && (i >= expected.size() || row_less(fetched[i], expected[i]))) {
    v.differingRow = fetched[i];
  } else {
    v.differingRow = expected[i];
  }
  return CheckResult{v, std::nullopt};
}

}  // namespace norec
