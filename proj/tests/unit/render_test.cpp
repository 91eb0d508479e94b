#include <gtest/gtest.h>

#include "norec/oracle.hpp"
#include "norec/render.hpp"
#include "support/scenarios.hpp"

namespace norec {
namespace {

using namespace sql;
using testing::select_star;

TEST(Render, OptimizedListingQuery) {
  SelectQuery q = select_star({"t0"}, glob(col("t0", "c0"), text("-*")));
  EXPECT_EQ(render_query(q, DialectProfile::sqlite()), "SELECT * FROM t0 WHERE (t0.c0 GLOB '-*')");
  EXPECT_EQ(render_statement(Select{q}, DialectProfile::sqlite()), "SELECT * FROM t0 WHERE (t0.c0 GLOB '-*');");
}

TEST(Render, NullUnderEveryDialect) {
  EXPECT_EQ(render_expression(null(), DialectProfile::sqlite()), "NULL");
  EXPECT_EQ(render_expression(null(), DialectProfile::postgres()), "NULL");
}

TEST(Render, UnoptimizedTwin) {
  SelectQuery q = select_star({"t0"}, gt(col("t0", "c0"), integer(0)));
  EXPECT_EQ(render_query(translate(q), DialectProfile::sqlite()), "SELECT ((t0.c0 > 0) IS TRUE) FROM t0");
}

TEST(Render, BooleansFollowTheDialect) {
  EXPECT_EQ(render_expression(boolean(true), DialectProfile::sqlite()), "1");
  EXPECT_EQ(render_expression(boolean(false), DialectProfile::postgres()), "FALSE");
}

TEST(Render, TextEscapes) {
  DialectProfile d = DialectProfile::sqlite();
  EXPECT_EQ(render_expression(text("it's"), d), "'it''s'");
  // SQLite string literals have no backslash escapes; control characters go through char().
  EXPECT_EQ(render_expression(text("\\"), d), "'\\'");
  EXPECT_EQ(render_expression(text("\n2"), d), "(char(10) || '2')");
}

TEST(Render, FullyParenthesized) {
  ExprPtr e = binary(BinaryOp::Multiply, binary(BinaryOp::Add, integer(1), integer(2)), integer(3));
  EXPECT_EQ(render_expression(e, DialectProfile::sqlite()), "((1 + 2) * 3)");
}

TEST(Render, Statements) {
  DialectProfile d = DialectProfile::sqlite();
  EXPECT_EQ(render_statement(testing::create_table("t0", {testing::column("c0", "INT", true)}), d),
            "CREATE TABLE t0(c0 INT UNIQUE);");
  EXPECT_EQ(render_statement(testing::insert_rows("t0", {{integer(1)}, {null()}}, {"c0"}), d),
            "INSERT INTO t0(c0) VALUES (1), (NULL);");
  EXPECT_EQ(render_statement(testing::insert_rows("t0", {{integer(-1)}}), d), "INSERT INTO t0 VALUES (-1);");
  EXPECT_EQ(render_statement(testing::create_index("i0", "t0", {col("t0", "c0")}), d),
            "CREATE INDEX i0 ON t0(c0);");
}

TEST(Render, ListingJoinShape) {
  SelectQuery q = select_star({"t0"}, eq(col("t2", "c0"), integer(5)));
  q.joins.push_back({JoinKind::Left, "t1", eq(col("t0", "c0"), col("t1", "c0"))});
  q.joins.push_back({JoinKind::Inner, "t2", gt(col("t2", "c0"), col("t0", "c1"))});
  DialectProfile d = DialectProfile::sqlite();
  EXPECT_EQ(render_query(q, d),
            "SELECT * FROM t0 LEFT JOIN t1 ON (t0.c0 = t1.c0) JOIN t2 ON (t2.c0 > t0.c1) WHERE (t2.c0 = 5)");
  EXPECT_EQ(render_query(translate(q), d),
            "SELECT ((t2.c0 = 5) IS TRUE) FROM t0 LEFT JOIN t1 ON (t0.c0 = t1.c0) JOIN t2 ON (t2.c0 > t0.c1)");
}

TEST(Render, StrictDialectRejectsGlob) {
  EXPECT_THROW(render_expression(glob(col("t0", "c0"), text("a*")), DialectProfile::postgres()), UnsupportedFeature);
}

}  // namespace
}  // namespace norec
