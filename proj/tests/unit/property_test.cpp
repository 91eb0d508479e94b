// Randomized properties over generated databases and queries.

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "norec/campaign.hpp"
#include "norec/generator.hpp"
#include "norec/oracle.hpp"
#include "norec/render.hpp"
#include "norec/sqlite_engine.hpp"
#include "norec/toy_engine.hpp"

namespace norec {
namespace {

bool any_node(const ExprPtr& e, const std::function<bool(const Expression&)>& pred) {
  if (!e) return false;
  if (pred(*e)) return true;
  for (const auto& c : children(*e)) {
    if (any_node(c, pred)) return true;
  }
  return false;
}

std::vector<Row> sorted(std::vector<Row> rows) {
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), structural_less);
  });
  return rows;
}

// One generated database loaded into any number of executors.
struct World {
  explicit World(std::uint64_t seed) : gen(config(seed), DialectProfile::sqlite()) {
    auto [s, ddl] = gen.generate_schema();
    schema = s;
    setup = ddl;
    auto dml = gen.populate(schema);
    setup.insert(setup.end(), dml.begin(), dml.end());
  }
  static GenConfig config(std::uint64_t seed) {
    GenConfig c;
    c.seed = seed;
    return c;
  }
  void load(Executor& e) const {
    for (const auto& s : setup) e.execute(s);
  }
  Generator gen;
  SchemaDef schema;
  std::vector<Statement> setup;
};

TEST(Property, OptimizedPipelineMatchesNaive) {
  std::uint64_t compared = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    World w(database_seed(100, seed));
    ToyEngine e;
    w.load(e);
    for (int i = 0; i < 200; ++i) {
      SelectQuery q = w.gen.generate_optimized_query(w.schema);
      EngineResult a = e.execute_naive(q);
      EngineResult b = e.execute_optimized(q);
      // Folding may skip an erroring subterm, so an error on one side is not a mismatch.
      if (a.is_error() || b.is_error()) {
        for (const auto* r : {&a, &b}) {
          if (r->is_error()) EXPECT_TRUE(e.dialect().match_expected_error(StatementKind::Select, r->message));
        }
        continue;
      }
      ASSERT_EQ(a.status, b.status) << render_query(q, e.dialect());
      if (!a.is_rows()) continue;
      // Bare columns of a group come from an unspecified row, so only the group count is stable.
      if (!q.groupBy.empty()) {
        ASSERT_EQ(a.rows.size(), b.rows.size()) << render_query(q, e.dialect());
      } else {
        ASSERT_EQ(sorted(a.rows), sorted(b.rows)) << render_query(q, e.dialect());
      }
      ++compared;
    }
  }
  EXPECT_GE(compared, 90000u);
}

TEST(Property, MetamorphicIdentityOnBugFreeToy) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    World w(database_seed(200, seed));
    ToyEngine e;
    w.load(e);
    for (std::uint64_t i = 0; i < 100; ++i) {
      SelectQuery q = w.gen.generate_optimized_query(w.schema);
      CheckResult r = run_check(e, q, strategy_for_check(i), e.dialect(), seed);
      ASSERT_TRUE(r.verdict) << r.fault->message;
      ASSERT_FALSE(r.verdict->discrepancy()) << r.verdict->optimizedSql;
      if (r.verdict->skipped()) EXPECT_FALSE(r.verdict->pattern.empty());
    }
  }
}

TEST(Property, RenderedStatementsParseOnSqlite) {
  std::uint64_t statements = 0, syntax_errors = 0, unexpected = 0;
  for (std::uint64_t seed = 0; seed < 100 && statements < 10000; ++seed) {
    World w(database_seed(300, seed));
    SqliteEngine e;
    for (const auto& s : w.setup) {
      EngineResult r = e.execute(s);
      ++statements;
      if (r.is_error()) {
        syntax_errors += r.message.find("syntax error") != std::string::npos;
        unexpected += !e.dialect().match_expected_error(kind_of(s), r.message).has_value();
      }
    }
    for (int i = 0; i < 100; ++i) {
      SelectQuery q = w.gen.generate_optimized_query(w.schema);
      EngineResult r = e.execute(Select{q});
      ++statements;
      if (r.is_error()) {
        syntax_errors += r.message.find("syntax error") != std::string::npos;
        unexpected += !e.dialect().match_expected_error(StatementKind::Select, r.message).has_value();
      }
    }
  }
  EXPECT_GE(statements, 10000u);
  EXPECT_EQ(syntax_errors, 0u);
  EXPECT_EQ(unexpected, 0u);
}

TEST(Property, GeneratedExpressionsRespectConstraints) {
  DialectProfile d = DialectProfile::sqlite();
  std::uint64_t expressions = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    World w(database_seed(400, seed));
    for (int i = 0; i < 1000; ++i) {
      SelectQuery q = w.gen.generate_optimized_query(w.schema);
      ++expressions;
      ASSERT_FALSE(q.distinct);
      ASSERT_TRUE(is_deterministic(q, d)) << render_query(q, d);
      // depth() counts nodes; the configured bound counts edges.
      EXPECT_LE(depth(q.where), static_cast<size_t>(w.gen.config().maxExprDepth) + 1);
    }
  }
  EXPECT_GE(expressions, 100000u);
}

TEST(Property, GeneratedQueriesRunOnToy) {
  std::uint64_t total = 0, clean = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    World w(database_seed(500, seed));
    ToyEngine e;
    for (const auto& s : w.setup) {
      EngineResult r = e.execute(s);
      if (r.is_error()) EXPECT_TRUE(e.dialect().match_expected_error(kind_of(s), r.message)) << r.message;
    }
    for (int i = 0; i < 100; ++i) {
      SelectQuery q = w.gen.generate_optimized_query(w.schema);
      EngineResult r = e.execute(Select{q});
      ++total;
      if (r.is_rows()) {
        ++clean;
      } else {
        EXPECT_TRUE(e.dialect().match_expected_error(StatementKind::Select, r.message)) << r.message;
      }
    }
  }
  EXPECT_GE(static_cast<double>(clean) / static_cast<double>(total), 0.99);
}

// An injection only changes queries that use the construct it corrupts.
TEST(Property, InjectionLocality) {
  struct Guard {
    BugInjection injection;
    std::function<bool(const Expression&)> uses;
  };
  const std::vector<Guard> guards = {
      {BugInjection::LikeRangeSkip,
       [](const Expression& e) {
         auto* b = e.as<Binary>();
         return b && (b->op == BinaryOp::Glob || b->op == BinaryOp::Like);
       }},
      {BugInjection::InToEqAffinity, [](const Expression& e) { return e.is<InList>(); }},
      {BugInjection::CommuteDropsCollation,
       [](const Expression& e) {
         auto* b = e.as<Binary>();
         return e.is<Collate>() || (b && is_comparison(b->op) && !b->left->is<Constant>() &&
                                    !b->right->is<Constant>());
       }},
      {BugInjection::NullFilterAsFalse,
       [](const Expression& e) {
         auto* u = e.as<Unary>();
         return u && u->op == UnaryOp::Not;
       }},
      {BugInjection::StringRangeBound,
       [](const Expression& e) {
         auto* c = e.as<Constant>();
         return c && c->value.is_text();
       }},
  };
  for (const Guard& g : guards) {
    std::uint64_t unaffected = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      World w(database_seed(600, seed));
      ToyEngine fine, buggy(g.injection);
      w.load(fine);
      w.load(buggy);
      for (int i = 0; i < 100; ++i) {
        SelectQuery q = w.gen.generate_optimized_query(w.schema);
        bool touches = any_node(q.where, g.uses);
        for (const auto& j : q.joins) touches |= any_node(j.on, g.uses);
        if (touches) continue;
        ++unaffected;
        EngineResult a = fine.execute(Select{q});
        EngineResult b = buggy.execute(Select{q});
        ASSERT_EQ(a.status, b.status);
        ASSERT_EQ(sorted(a.rows), sorted(b.rows)) << injection_name(g.injection) << ": " << render_query(q, fine.dialect());
      }
    }
    EXPECT_GT(unaffected, 100u) << injection_name(g.injection);
  }
}

TEST(Property, TranslationKeepsSourcesIntact) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    World w(database_seed(700, seed));
    for (int i = 0; i < 100; ++i) {
      SelectQuery q = w.gen.generate_optimized_query(w.schema);
      SelectQuery t = translate(q);
      EXPECT_EQ(t.fromTables, q.fromTables);
      ASSERT_EQ(t.joins.size(), q.joins.size());
      for (size_t j = 0; j < q.joins.size(); ++j) {
        EXPECT_EQ(t.joins[j].kind, q.joins[j].kind);
        EXPECT_EQ(t.joins[j].table, q.joins[j].table);
        EXPECT_TRUE(structurally_equal(t.joins[j].on, q.joins[j].on));
      }
      EXPECT_EQ(t.groupBy.size(), q.groupBy.size());
      EXPECT_FALSE(t.where);
    }
  }
}

TEST(Property, RenderIsDeterministic) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    World a(database_seed(800, seed)), b(database_seed(800, seed));
    for (int i = 0; i < 50; ++i) {
      SelectQuery qa = a.gen.generate_optimized_query(a.schema);
      SelectQuery qb = b.gen.generate_optimized_query(b.schema);
      ASSERT_TRUE(structurally_equal(qa, qb));
      EXPECT_EQ(render_query(qa, DialectProfile::sqlite()), render_query(qb, DialectProfile::sqlite()));
    }
  }
}

// The toy engine emulates the embedded dialect; disagreements are
// measured, not treated as failures, since the real engine is authoritative.
TEST(Property, ToyAgreesWithSqliteOnCounts) {
  std::uint64_t compared = 0, agree = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    World w(database_seed(900, seed));
    ToyEngine toy;
    SqliteEngine real;
    w.load(toy);
    w.load(real);
    for (int i = 0; i < 100; ++i) {
      SelectQuery q = w.gen.generate_optimized_query(w.schema);
      EngineResult a = toy.execute(Select{q});
      EngineResult b = real.execute(Select{q});
      if (!a.is_rows() || !b.is_rows()) continue;
      ++compared;
      agree += a.rows.size() == b.rows.size();
    }
  }
  RecordProperty("agreement", std::to_string(agree) + "/" + std::to_string(compared));
  std::cout << "toy vs sqlite count agreement: " << agree << "/" << compared << "\n";
  EXPECT_GT(compared, 4000u);
}

}  // namespace
}  // namespace norec
