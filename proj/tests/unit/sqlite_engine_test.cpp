#include <gtest/gtest.h>

#include <filesystem>
#include <unistd.h>

#include "norec/isolated_executor.hpp"
#include "norec/oracle.hpp"
#include "norec/sqlite_engine.hpp"
#include "support/scenarios.hpp"

namespace norec {
namespace {

using namespace sql;
using namespace testing;

TEST(SqliteEngine, SelectOne) {
  SqliteEngine e;
  EngineResult r = e.execute_sql("SELECT 1");
  ASSERT_TRUE(r.is_rows());
  EXPECT_EQ(r.rows, (std::vector<Row>{{SqlValue::integer(1)}}));
  EXPECT_EQ(e.version().rfind("sqlite ", 0), 0u);
}

TEST(SqliteEngine, ValueTypes) {
  SqliteEngine e;
  EngineResult r = e.execute_sql("SELECT NULL, 2.5, 'x', -3");
  ASSERT_TRUE(r.is_rows());
  EXPECT_EQ(r.rows[0], (Row{SqlValue::null(), SqlValue::real(2.5), SqlValue::text("x"), SqlValue::integer(-3)}));
}

TEST(SqliteEngine, ErrorsAndPrepareRejections) {
  SqliteEngine e;
  EXPECT_TRUE(e.execute_sql("SELEC 1").is_error());
  EXPECT_EQ(e.stats().rejectedAtPrepare, 1u);
  EngineResult r = e.execute(Select{select_star({"missing"}, nullptr)});
  ASSERT_TRUE(r.is_error());
  EXPECT_EQ(r.message, "no such table: missing");
}

// The listing scenarios hold on the real engine too, with no injection.
TEST(SqliteEngine, ListingScenariosAreConsistent) {
  std::vector<Scenario> all = count_scenarios();
  all.push_back(commuted_collation());
  for (const Scenario& s : all) {
    SqliteEngine e;
    for (const auto& st : s.testCase.setupStatements) ASSERT_TRUE(e.execute(st).is_rows()) << s.name;
    for (CountStrategy st : {CountStrategy::NaiveIteration, CountStrategy::AggregateCount}) {
      CheckResult r = run_check(e, *s.testCase.query, st, e.dialect(), 0);
      ASSERT_TRUE(r.verdict) << s.name;
      EXPECT_TRUE(r.verdict->consistent()) << s.name << ": " << r.verdict->optimizedSql;
      EXPECT_EQ(r.verdict->unoptimizedCount, s.unoptimized) << s.name;
    }
  }
}

TEST(SqliteEngine, Timeout) {
  SqliteEngine e;
  e.set_timeout(std::chrono::milliseconds(50));
  EngineResult r = e.execute_sql(
      "WITH RECURSIVE c(x) AS (SELECT 1 UNION ALL SELECT x + 1 FROM c) SELECT COUNT(*) FROM c");
  EXPECT_TRUE(r.is_timeout());
}

TEST(SqliteEngine, FileDatabaseIsRemoved) {
  std::string path = (std::filesystem::temp_directory_path() / ("norec-" + std::to_string(::getpid()) + ".db")).string();
  {
    SqliteOptions o;
    o.path = path;
    SqliteEngine e(o);
    e.execute(create_table("t0", {column("c0")}));
    EXPECT_TRUE(std::filesystem::exists(path));
  }
  EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(IsolatedExecutor, RunsStatementsInAChild) {
  IsolatedExecutor e(sqlite_factory(), DialectProfile::sqlite(), "sqlite");
  ASSERT_TRUE(e.execute(create_table("t0", {column("c0")})).is_rows());
  ASSERT_TRUE(e.execute(insert_rows("t0", {{integer(4)}, {text("y")}})).is_rows());
  EngineResult r = e.execute(Select{select_star({"t0"}, nullptr)});
  ASSERT_TRUE(r.is_rows());
  EXPECT_EQ(r.rows.size(), 2u);
  EXPECT_TRUE(e.execute(Select{select_star({"nope"}, nullptr)}).is_error());
  EXPECT_GE(e.stats().issued, 4u);
}

class AbortingExecutor final : public Executor {
 public:
  EngineResult execute(const Statement&) override { std::abort(); }
  const DialectProfile& dialect() const override { return d_; }
  std::string version() const override { return "abort"; }

 private:
  DialectProfile d_ = DialectProfile::sqlite();
};

TEST(IsolatedExecutor, ChildDeathIsACrash) {
  IsolatedExecutor e([] { return std::make_unique<AbortingExecutor>(); }, DialectProfile::sqlite(), "abort");
  EngineResult r = e.execute(Select{select_star({"t0"}, nullptr)});
  EXPECT_TRUE(r.is_crash());
  EXPECT_NE(r.message.find("signal"), std::string::npos);
  // The next statement gets a fresh child.
  EXPECT_TRUE(e.execute(Select{select_star({"t0"}, nullptr)}).is_crash());
}

}  // namespace
}  // namespace norec
