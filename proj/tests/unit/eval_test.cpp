#include <gtest/gtest.h>

#include <deque>

#include "norec/dialect.hpp"
#include "norec/eval.hpp"

namespace norec {
namespace {

using namespace sql;

class EvalTest : public ::testing::Test {
 protected:
  SqlValue eval(const ExprPtr& e) const { return eval_expression(e, binding_, dialect_); }

  void bind(TableDef def, std::vector<SqlValue> row) {
    tables_.push_back(std::move(def));
    rows_.push_back(std::move(row));
  }
  void finish() {
    for (size_t i = 0; i < tables_.size(); ++i) binding_.add(tables_[i], &rows_[i]);
  }

  DialectProfile dialect_ = DialectProfile::sqlite();
  std::deque<TableDef> tables_;
  std::deque<std::vector<SqlValue>> rows_;
  TableRowBinding binding_;
};

TableDef table(std::string name, std::vector<ColumnDef> cols) { return {std::move(name), std::move(cols)}; }

ColumnDef col_def(std::string name, std::string type = {}, std::optional<Collation> c = std::nullopt) {
  ColumnDef d;
  d.name = std::move(name);
  d.declaredType = std::move(type);
  d.collation = c;
  return d;
}

TEST_F(EvalTest, ThreeValuedConnectives) {
  EXPECT_EQ(eval(and_(null(), boolean(false))), SqlValue::integer(0));
  EXPECT_EQ(eval(or_(null(), boolean(true))), SqlValue::integer(1));
  EXPECT_TRUE(eval(and_(null(), boolean(true))).is_null());
  EXPECT_TRUE(eval(or_(null(), boolean(false))).is_null());
  EXPECT_TRUE(eval(not_(null())).is_null());
  EXPECT_EQ(eval(is_true(null())), SqlValue::integer(0));
  EXPECT_EQ(eval(is(null(), IsKind::Null)), SqlValue::integer(1));
  EXPECT_EQ(eval(is(integer(0), IsKind::False)), SqlValue::integer(1));
  EXPECT_EQ(eval(is(integer(2), IsKind::NotNull)), SqlValue::integer(1));
}

TEST_F(EvalTest, InDoesNotApplyCandidateAffinity) {
  bind(table("t0", {col_def("c0", "INT")}), {SqlValue::integer(1)});
  finish();
  EXPECT_EQ(eval(in(text("1"), {col("t0", "c0")})), SqlValue::integer(0));
  EXPECT_EQ(eval(eq(text("1"), col("t0", "c0"))), SqlValue::integer(1));
  // With the column on the left its affinity converts the candidate.
  EXPECT_EQ(eval(in(col("t0", "c0"), {text("1")})), SqlValue::integer(1));
}

TEST_F(EvalTest, RealAgainstIntegerColumn) {
  bind(table("t0", {col_def("c0", "INT")}), {SqlValue::integer(1)});
  finish();
  EXPECT_EQ(eval(eq(real(0.5), col("t0", "c0"))), SqlValue::integer(0));
  EXPECT_EQ(eval(eq(real(1.0), col("t0", "c0"))), SqlValue::integer(1));
}

TEST_F(EvalTest, CollationOfColumnsAndExplicitCollate) {
  bind(table("t0", {col_def("c0", "", Collation::NoCase), col_def("c1")}), {SqlValue::text("a"), SqlValue::text("B")});
  finish();
  EXPECT_EQ(eval(ge(text("a"), text("B"))), SqlValue::integer(1));
  EXPECT_EQ(eval(ge(collate(text("a"), Collation::NoCase), text("B"))), SqlValue::integer(0));
  // Left column without COLLATE decides: binary, so 'B' <= 'a'.
  EXPECT_EQ(eval(le(col("t0", "c1"), col("t0", "c0"))), SqlValue::integer(1));
  // Left column NOCASE: 'a' >= 'B' is false.
  EXPECT_EQ(eval(ge(col("t0", "c0"), col("t0", "c1"))), SqlValue::integer(0));
  // An explicit collation on the right beats the left column's.
  EXPECT_EQ(eval(le(col("t0", "c1"), collate(col("t0", "c0"), Collation::NoCase))), SqlValue::integer(0));
}

TEST_F(EvalTest, WhitespacePrefixedTextAgainstIntegerColumn) {
  bind(table("t0", {col_def("c0", "INT")}), {SqlValue::integer(1)});
  finish();
  EXPECT_EQ(eval(lt(col("t0", "c0"), text("\n2"))), SqlValue::integer(1));
  EXPECT_EQ(eval(lt(col("t0", "c0"), text(" 1"))), SqlValue::integer(0));
}

TEST_F(EvalTest, GlobAndLike) {
  EXPECT_TRUE(glob_match("-*", "-1"));
  EXPECT_FALSE(glob_match("A*", "abc"));
  EXPECT_TRUE(glob_match("a?c", "abc"));
  EXPECT_TRUE(glob_match("[a-c]x", "bx"));
  EXPECT_FALSE(glob_match("[^a-c]x", "bx"));
  EXPECT_TRUE(like_match("A%", "abc"));
  EXPECT_TRUE(like_match("a_c", "AbC"));
  EXPECT_FALSE(like_match("a_", "abc"));
  EXPECT_TRUE(like_match("%", ""));
  EXPECT_EQ(eval(glob(integer(-1), text("-*"))), SqlValue::integer(1));
  EXPECT_TRUE(eval(like(null(), text("%"))).is_null());
}

TEST_F(EvalTest, Arithmetic) {
  EXPECT_EQ(eval(binary(BinaryOp::Add, integer(2), integer(3))), SqlValue::integer(5));
  EXPECT_EQ(eval(binary(BinaryOp::Divide, integer(7), integer(2))), SqlValue::integer(3));
  EXPECT_EQ(eval(binary(BinaryOp::Divide, integer(7), real(2))), SqlValue::real(3.5));
  EXPECT_TRUE(eval(binary(BinaryOp::Divide, integer(7), integer(0))).is_null());
  EXPECT_TRUE(eval(binary(BinaryOp::Remainder, integer(7), integer(0))).is_null());
  EXPECT_EQ(eval(binary(BinaryOp::Remainder, integer(-7), integer(3))), SqlValue::integer(-1));
  EXPECT_EQ(eval(binary(BinaryOp::Add, text("2a"), integer(1))), SqlValue::integer(3));
  EXPECT_EQ(eval(binary(BinaryOp::Concat, integer(1), text("x"))), SqlValue::text("1x"));
  EXPECT_TRUE(eval(binary(BinaryOp::Concat, null(), text("x"))).is_null());
  EXPECT_THROW(eval(binary(BinaryOp::Multiply, integer(INT64_MAX), integer(2))), EvalError);
}

TEST_F(EvalTest, BetweenIsTwoComparisons) {
  EXPECT_EQ(eval(between(integer(2), integer(1), integer(3))), SqlValue::integer(1));
  EXPECT_EQ(eval(between(integer(2), integer(3), integer(1))), SqlValue::integer(0));
  EXPECT_TRUE(eval(between(integer(2), null(), integer(3))).is_null());
  EXPECT_EQ(eval(between(integer(5), null(), integer(3))), SqlValue::integer(0));
}

TEST_F(EvalTest, InWithNulls) {
  EXPECT_EQ(eval(in(integer(1), {integer(2), integer(1)})), SqlValue::integer(1));
  EXPECT_TRUE(eval(in(integer(1), {integer(2), null()})).is_null());
  EXPECT_TRUE(eval(in(null(), {integer(1)})).is_null());
}

TEST_F(EvalTest, FunctionsAndCasts) {
  EXPECT_EQ(eval(call("ABS", {integer(-3)})), SqlValue::integer(3));
  EXPECT_EQ(eval(call("LENGTH", {text("abc")})), SqlValue::integer(3));
  EXPECT_EQ(eval(call("LENGTH", {integer(-12)})), SqlValue::integer(3));
  EXPECT_EQ(eval(call("UPPER", {text("aB")})), SqlValue::text("AB"));
  EXPECT_TRUE(eval(call("LOWER", {null()})).is_null());
  EXPECT_THROW(eval(call("RANDOM", {})), EvalError);
  EXPECT_EQ(eval(cast(text("12abc"), "INT")), SqlValue::integer(12));
  EXPECT_EQ(eval(cast(text("x"), "REAL")), SqlValue::real(0.0));
  EXPECT_EQ(eval(cast(real(2.7), "INTEGER")), SqlValue::integer(2));
  EXPECT_EQ(eval(cast(integer(5), "TEXT")), SqlValue::text("5"));
}

TEST(Determinism, Whitelist) {
  DialectProfile d = DialectProfile::sqlite();
  EXPECT_TRUE(is_deterministic(binary(BinaryOp::Add, col("t0", "c0"), integer(1)), d));
  EXPECT_TRUE(is_deterministic(call("LENGTH", {col("t0", "c0")}), d));
  EXPECT_FALSE(is_deterministic(call("RANDOM", {}), d));
}

}  // namespace
}  // namespace norec
