#include <gtest/gtest.h>

#include "norec/campaign.hpp"
#include "norec/reducer.hpp"
#include "norec/render.hpp"
#include "support/scenarios.hpp"

namespace norec {
namespace {

using namespace sql;
using namespace testing;

ExecutorFactory toy(std::optional<BugInjection> inj) { return make_factory("toy", inj); }

TestCase padded_glob_case() {
  Scenario s = glob_prefix_on_untyped_column();
  TestCase tc = s.testCase;
  std::vector<Statement> setup = {create_table("t9", {column("c0", "INT")})};
  setup.push_back(tc.setupStatements[0]);
  for (int i = 0; i < 20; ++i) setup.push_back(insert_rows("t9", {{integer(i)}}));
  setup.push_back(tc.setupStatements[1]);
  tc.setupStatements = setup;
  return tc;
}

TEST(Reducer, DropsPaddingInserts) {
  TestCase tc = padded_glob_case();
  ReduceStats stats;
  TestCase out = reduce(tc, toy(BugInjection::LikeRangeSkip), {}, &stats);
  EXPECT_LE(out.setupStatements.size(), 2u);
  EXPECT_TRUE(reproduces(out, toy(BugInjection::LikeRangeSkip)));
  EXPECT_LE(render_testcase(out).size(), render_testcase(tc).size());
  EXPECT_GT(stats.accepted, 0u);
}

TEST(Reducer, HoistsTrueConjunct) {
  TestCase tc = glob_prefix_on_untyped_column().testCase;
  tc.query->where = and_(glob(col("t0", "c0"), text("-*")), boolean(true));
  TestCase out = reduce(tc, toy(BugInjection::LikeRangeSkip));
  EXPECT_EQ(render_expression(out.query->where, DialectProfile::sqlite()), "(t0.c0 GLOB '-*')");
}

TEST(Reducer, MinimalCaseIsAFixpoint) {
  TestCase tc = glob_prefix_on_untyped_column().testCase;
  TestCase once = reduce(tc, toy(BugInjection::LikeRangeSkip));
  TestCase twice = reduce(once, toy(BugInjection::LikeRangeSkip));
  EXPECT_EQ(render_testcase(once), render_testcase(twice));
}

TEST(Reducer, Deterministic) {
  TestCase tc = padded_glob_case();
  EXPECT_EQ(render_testcase(reduce(tc, toy(BugInjection::LikeRangeSkip))),
            render_testcase(reduce(tc, toy(BugInjection::LikeRangeSkip))));
}

TEST(Reducer, RefusesNonReproducingCase) {
  TestCase tc = glob_prefix_on_untyped_column().testCase;
  EXPECT_THROW(reduce(tc, toy(std::nullopt)), NotReproducible);
}

TEST(Reducer, BudgetGivesPartialResult) {
  TestCase tc = padded_glob_case();
  ReduceOptions o;
  o.maxReplays = 3;
  ReduceStats stats;
  TestCase out = reduce(tc, toy(BugInjection::LikeRangeSkip), o, &stats);
  EXPECT_TRUE(stats.budgetExhausted);
  EXPECT_LE(stats.replays, 3u);
  EXPECT_TRUE(reproduces(out, toy(BugInjection::LikeRangeSkip)));
}

TEST(Reducer, CostPrefersShortAndCanonical) {
  TestCase a = glob_prefix_on_untyped_column().testCase;
  TestCase b = a;
  std::get<Insert>(b.setupStatements[1]).rows[0][0] = integer(-12345);
  EXPECT_LT(testcase_cost(a), testcase_cost(b));
}

TEST(Reducer, ErrorClassIsPreserved) {
  // Setup failure: the unique violation is expected, but the missing table is not.
  TestCase tc;
  tc.setupStatements = {create_table("t0", {column("c0")}), insert_rows("t0", {{integer(1)}}),
                        insert_rows("t0", {{integer(2)}}), insert_rows("nope", {{integer(3)}})};
  tc.verdictClass = VerdictClass::UnexpectedError;
  tc.errorClass = error_class("no such table: nope");
  TestCase out = reduce(tc, toy(std::nullopt));
  EXPECT_EQ(out.setupStatements.size(), 1u);
  EXPECT_EQ(out.errorClass, tc.errorClass);
}

TEST(ErrorClass, MasksVariableParts) {
  EXPECT_EQ(error_class("no such column: t0.c1"), error_class("no such column: t3.c0"));
  EXPECT_EQ(error_class("near \"FOO\": syntax error"), error_class("near \"BAR\": syntax error"));
  EXPECT_NE(error_class("no such table: x"), error_class("no such column: x"));
}

}  // namespace
}  // namespace norec
