#include <gtest/gtest.h>

#include <functional>

#include "norec/generator.hpp"
#include "norec/render.hpp"
#include "norec/toy_engine.hpp"

namespace norec {
namespace {

std::string render_all(const std::vector<Statement>& stmts) {
  std::string out;
  for (const auto& s : stmts) out += render_statement(s, DialectProfile::sqlite()) + "\n";
  return out;
}

std::string rendered_campaign(std::uint64_t seed) {
  GenConfig c;
  c.seed = seed;
  Generator g(c, DialectProfile::sqlite());
  auto [schema, ddl] = g.generate_schema();
  std::string out = render_all(ddl) + render_all(g.populate(schema));
  for (int i = 0; i < 50; ++i) out += render_query(g.generate_optimized_query(schema), DialectProfile::sqlite()) + "\n";
  return out;
}

bool any_node(const ExprPtr& e, const std::function<bool(const Expression&)>& pred) {
  if (!e) return false;
  if (pred(*e)) return true;
  for (const auto& c : children(*e)) {
    if (any_node(c, pred)) return true;
  }
  return false;
}

TEST(Generator, SeedDeterminism) {
  EXPECT_EQ(rendered_campaign(42), rendered_campaign(42));
  EXPECT_NE(rendered_campaign(42), rendered_campaign(43));
}

TEST(Generator, SingleTable) {
  GenConfig c;
  c.seed = 5;
  c.maxTables = 1;
  Generator a(c, DialectProfile::sqlite()), b(c, DialectProfile::sqlite());
  auto sa = a.generate_schema().first;
  auto sb = b.generate_schema().first;
  ASSERT_EQ(sa.tables.size(), 1u);
  EXPECT_EQ(render_all({CreateTable{sa.tables[0]}}), render_all({CreateTable{sb.tables[0]}}));
}

TEST(Generator, ConfigValidation) {
  GenConfig c;
  c.maxTables = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.orderByProbability = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.weights.comparison = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_NO_THROW(GenConfig{}.validate());
}

TEST(Generator, WeightNames) {
  ExprWeights w;
  EXPECT_TRUE(w.set("glob", 11));
  EXPECT_EQ(w.glob, 11);
  EXPECT_EQ(w.get("glob"), 11);
  EXPECT_FALSE(w.set("nonsense", 1));
  EXPECT_EQ(ExprWeights::names().size(), 15u);
}

TEST(Generator, NoRowsMeansNoStatements) {
  GenConfig c;
  c.maxRows = 0;
  Generator g(c, DialectProfile::sqlite());
  auto schema = g.generate_schema().first;
  EXPECT_TRUE(g.populate(schema).empty());
}

TEST(Generator, DepthZeroWithoutScopeIsConstant) {
  Generator g(GenConfig{}, DialectProfile::sqlite());
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(g.generate_predicate({}, 0)->is<Constant>());
}

TEST(Generator, ClauseProbabilitiesOfZero) {
  GenConfig c;
  c.orderByProbability = 0;
  c.groupByProbability = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    c.seed = seed;
    Generator g(c, DialectProfile::sqlite());
    auto schema = g.generate_schema().first;
    for (int i = 0; i < 1000; ++i) {
      SelectQuery q = g.generate_optimized_query(schema);
      ASSERT_TRUE(q.orderBy.empty());
      ASSERT_TRUE(q.groupBy.empty());
    }
  }
}

TEST(Generator, DepthBoundAndScope) {
  GenConfig c;
  c.maxExprDepth = 4;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    c.seed = seed;
    Generator g(c, DialectProfile::sqlite());
    auto schema = g.generate_schema().first;
    for (int i = 0; i < 200; ++i) {
      SelectQuery q = g.generate_optimized_query(schema);
      ASSERT_TRUE(q.where);
      EXPECT_EQ(q.selectList.size(), 1u);
      EXPECT_EQ(q.selectList[0].kind, SelectItem::Kind::Star);
      EXPECT_FALSE(q.distinct);
      auto tables = q.scope_tables();
      auto scope = scope_of(schema, tables);
      bool resolves = !any_node(q.where, [&](const Expression& e) {
        auto* r = e.as<ColumnRef>();
        if (!r) return false;
        for (const auto& [t, col] : scope) {
          if (t == r->table && col.name == r->column) return false;
        }
        return true;
      });
      EXPECT_TRUE(resolves) << render_query(q, DialectProfile::sqlite());
    }
  }
}

// Shapes the listings rely on come up under the default configuration.
TEST(Generator, ReachableShapes) {
  bool untyped_unique = false, nocase_with_partial = false, glob_prefix = false, left_and_inner = false;
  bool null_rows = false;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GenConfig c;
    c.seed = seed;
    Generator g(c, DialectProfile::sqlite());
    auto [schema, ddl] = g.generate_schema();
    for (const auto& t : schema.tables) {
      for (const auto& col : t.columns) {
        untyped_unique |= col.declaredType.empty() && col.unique;
        if (col.collation == Collation::NoCase) {
          for (const auto& idx : schema.indexes) nocase_with_partial |= idx.table == t.name && idx.where != nullptr;
        }
      }
    }
    for (const auto& s : g.populate(schema)) {
      if (auto* ins = std::get_if<Insert>(&s)) {
        for (const auto& row : ins->rows) {
          for (const auto& v : row) {
            auto* k = v->as<Constant>();
            null_rows |= k && k->value.is_null();
          }
        }
      }
    }
    for (int i = 0; i < 30; ++i) {
      SelectQuery q = g.generate_optimized_query(schema);
      glob_prefix |= any_node(q.where, [](const Expression& e) {
        auto* b = e.as<Binary>();
        if (!b || b->op != BinaryOp::Glob || !b->left->is<ColumnRef>()) return false;
        auto* p = b->right->as<Constant>();
        return p && p->value.is_text() && p->value.as_text().size() >= 2 && p->value.as_text().back() == '*';
      });
      bool has_left = false, has_inner = false;
      for (const auto& j : q.joins) {
        has_left |= j.kind == JoinKind::Left;
        has_inner |= j.kind == JoinKind::Inner;
      }
      left_and_inner |= has_left && has_inner;
    }
  }
  EXPECT_TRUE(untyped_unique);
  EXPECT_TRUE(nocase_with_partial);
  EXPECT_TRUE(glob_prefix);
  EXPECT_TRUE(left_and_inner);
  EXPECT_TRUE(null_rows);
}

TEST(Generator, SymmetricBetweenIsExpressible) {
  using namespace sql;
  ExprPtr e = and_(col("t0", "c0"), and_(not_(between(boolean(false), col("t0", "c0"), null(), true)), boolean(true)));
  std::string s = render_expression(e, DialectProfile::postgres());
  EXPECT_NE(s.find("BETWEEN SYMMETRIC"), std::string::npos) << s;
}

TEST(Generator, DuplicateUniqueInsertIsExpected) {
  using namespace sql;
  ToyEngine e;
  e.execute(CreateTable{TableDef{"t0", {ColumnDef{"c0", "", true, false, std::nullopt}}}});
  e.execute(Insert{"t0", {}, {{integer(1)}}});
  EngineResult r = e.execute(Insert{"t0", {}, {{integer(1)}}});
  ASSERT_TRUE(r.is_error());
  auto pattern = e.dialect().match_expected_error(StatementKind::Insert, r.message);
  ASSERT_TRUE(pattern);
  EXPECT_NE(pattern->find("UNIQUE"), std::string::npos);
}

}  // namespace
}  // namespace norec
