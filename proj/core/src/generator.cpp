#include "norec/generator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace norec {

namespace {

struct WeightField {
  const char* name;
  double ExprWeights::*field;
};

const std::vector<WeightField>& weight_fields() {
  static const std::vector<WeightField> f = {
      {"constant", &ExprWeights::constant},     {"column", &ExprWeights::column},
      {"unary", &ExprWeights::unary},           {"comparison", &ExprWeights::comparison},
      {"logical", &ExprWeights::logical},       {"arithmetic", &ExprWeights::arithmetic},
      {"concat", &ExprWeights::concat},         {"glob", &ExprWeights::glob},
      {"like", &ExprWeights::like},             {"between", &ExprWeights::between},
      {"in", &ExprWeights::in},                 {"function", &ExprWeights::function},
      {"cast", &ExprWeights::cast},             {"collate", &ExprWeights::collate},
      {"is", &ExprWeights::isTest},
  };
  return f;
}

constexpr std::int64_t kMaxConstant = std::int64_t{1} << 40;

const std::vector<std::string> kTypesAffinity = {"", "INT", "TEXT", "REAL", "NUMERIC"};
const std::vector<std::string> kTypesStrict = {"INT", "TEXT", "REAL"};
const std::vector<std::string> kCastTypes = {"INT", "TEXT", "REAL", "NUMERIC"};
const std::vector<std::string> kFunctions = {"ABS", "LENGTH", "LOWER", "UPPER"};
const std::vector<std::string> kWords = {"",  "a",  "A",  "b",   "B",  "-",  "ab",
                                         "aB", "Ba", "-a", "1a", "a1", "0", "-1"};
const std::vector<std::string> kSpaces = {" ", "\n", "\t", "  "};

bool references_column(const ExprPtr& e) {
  if (e->is<ColumnRef>()) return true;
  for (const auto& c : children(*e)) {
    if (references_column(c)) return true;
  }
  return false;
}

}  // namespace

bool ExprWeights::set(std::string_view name, double value) {
  for (const auto& f : weight_fields()) {
    if (name == f.name) {
      this->*f.field = value;
      return true;
    }
  }
  return false;
}

double ExprWeights::get(std::string_view name) const {
  for (const auto& f : weight_fields()) {
    if (name == f.name) return this->*f.field;
  }
  throw std::invalid_argument("unknown weight: " + std::string(name));
}

const std::vector<std::string>& ExprWeights::names() {
  static const std::vector<std::string> n = [] {
    std::vector<std::string> out;
    for (const auto& f : weight_fields()) out.emplace_back(f.name);
    return out;
  }();
  return n;
}

void GenConfig::validate() const {
  auto positive = [](int v, const char* what) {
    if (v < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
  };
  positive(maxTables, "maxTables");
  positive(maxColumnsPerTable, "maxColumnsPerTable");
  if (maxRows < 0) throw std::invalid_argument("maxRows must be >= 0");
  positive(maxExprDepth, "maxExprDepth");
  if (maxJoins < 0) throw std::invalid_argument("maxJoins must be >= 0");
  double total = 0;
  for (const auto& f : weight_fields()) {
    double w = weights.*f.field;
    if (!(w >= 0) || std::isinf(w)) {
      throw std::invalid_argument(std::string("weight ") + f.name + " must be nonnegative");
    }
    total += w;
  }
  if (weights.constant + weights.column <= 0) {
    throw std::invalid_argument("constant and column weights cannot both be zero");
  }
  if (total <= 0) throw std::invalid_argument("expression weights are all zero");
  for (double p : {orderByProbability, groupByProbability}) {
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("probabilities must lie in [0, 1]");
  }
}

std::vector<ScopeColumn> scope_of(const SchemaDef& schema, const std::vector<std::string>& tables) {
  std::vector<ScopeColumn> out;
  for (const auto& name : tables) {
    if (const TableDef* t = schema.find_table(name)) {
      for (const auto& c : t->columns) out.emplace_back(t->name, c);
    }
  }
  return out;
}

Generator::Generator(GenConfig config, DialectProfile dialect)
    : config_(std::move(config)), dialect_(std::move(dialect)), rng_(config_.seed) {
  config_.validate();
}

bool Generator::chance(double p) {
  if (p <= 0) return false;
  if (p >= 1) return true;
  return std::uniform_real_distribution<double>(0, 1)(rng_) < p;
}

int Generator::uniform(int lo, int hi) {
  if (hi <= lo) return lo;
  return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

// --- values ---------------------------------------------------------------------

SqlValue Generator::random_value() {
  int r = uniform(0, 99);
  if (r < 12) return SqlValue::null();
  if (r < 50) return SqlValue::integer(uniform(-3, 3));
  if (r < 56) {
    std::uniform_int_distribution<std::int64_t> big(-kMaxConstant, kMaxConstant);
    return SqlValue::integer(big(rng_));
  }
  if (r < 66) return SqlValue::real(uniform(-6, 6) * 0.5);
  if (r < 88) return SqlValue::text(pick(kWords));
  if (r < 95) return SqlValue::text(std::to_string(uniform(-2, 3)));
  return SqlValue::text(pick(kSpaces) + std::to_string(uniform(-1, 3)));
}

SqlValue Generator::pool_variant(const SqlValue& v) {
  int r = uniform(0, 99);
  if (v.is_integer() || v.is_real()) {
    if (r < 50) return v;
    if (r < 70) return to_text(v);
    if (r < 85) return SqlValue::text(pick(kSpaces) + to_text(v).as_text());
    if (v.is_integer()) return SqlValue::real(static_cast<double>(v.as_integer()));
    return SqlValue::integer(static_cast<std::int64_t>(v.as_real()));
  }
  if (v.is_text() && r < 30) {
    std::string s = v.as_text();
    for (auto& c : s) {
      auto u = static_cast<unsigned char>(c);
      c = static_cast<char>(std::isupper(u) ? std::tolower(u) : std::toupper(u));
    }
    return SqlValue::text(s);
  }
  return v;
}

ExprPtr Generator::constant() {
  if (!pool_.empty() && chance(0.6)) return sql::lit(pool_variant(pick(pool_)));
  if (chance(0.04)) return sql::boolean(chance(0.5));
  return sql::lit(random_value());
}

std::string Generator::pattern(bool glob) {
  const std::string any = glob ? "*" : "%";
  const std::string one = glob ? "?" : "_";
  std::string base;
  if (!pool_.empty() && chance(0.75)) {
    SqlValue v = pick(pool_);
    if (!v.is_null()) base = to_text(v).as_text();
  }
  if (base.empty()) base = pick(kWords);
  if (!glob && chance(0.3)) {
    for (auto& c : base) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  size_t keep = base.empty() ? 0 : static_cast<size_t>(uniform(1, static_cast<int>(std::min<size_t>(base.size(), 3))));
  std::string p = base.substr(0, keep);
  int r = uniform(0, 9);
  if (r < 6) return p + any;
  if (r < 8) return p + one + any;
  if (r < 9) return any + p;
  return p;
}

// --- expressions ------------------------------------------------------------------

Generator::Kind Generator::pick_kind(bool have_columns) {
  const auto& w = config_.weights;
  std::vector<std::pair<Kind, double>> options = {
      {Kind::Constant, w.constant},     {Kind::Column, have_columns ? w.column : 0},
      {Kind::Unary, w.unary},           {Kind::Comparison, w.comparison},
      {Kind::Logical, w.logical},       {Kind::Arithmetic, w.arithmetic},
      {Kind::Concat, w.concat},         {Kind::Glob, dialect_.hasGlob ? w.glob : 0},
      {Kind::Like, w.like},             {Kind::Between, w.between},
      {Kind::In, w.in},                 {Kind::Function, w.function},
      {Kind::Cast, w.cast},             {Kind::Collate, dialect_.hasCollateNocase ? w.collate : 0},
      {Kind::IsTest, w.isTest},
  };
  double total = 0;
  for (const auto& o : options) total += o.second;
  if (total <= 0) return have_columns && w.column > 0 ? Kind::Column : Kind::Constant;
  double x = std::uniform_real_distribution<double>(0, total)(rng_);
  for (const auto& o : options) {
    if (x < o.second) return o.first;
    x -= o.second;
  }
  return Kind::Constant;
}

ExprPtr Generator::column(const std::vector<ScopeColumn>& scope) {
  const auto& [table, col] = pick(scope);
  return sql::col(table, col.name);
}

ExprPtr Generator::leaf(const std::vector<ScopeColumn>& scope) {
  const auto& w = config_.weights;
  double col_weight = scope.empty() ? 0 : w.column;
  double total = col_weight + w.constant;
  if (total <= 0) return constant();
  return chance(col_weight / total) ? column(scope) : constant();
}

// Operands of comparisons and friends lean toward leaves so that
// column-vs-constant shapes, which the planner rewrites, stay common.
ExprPtr Generator::operand(const std::vector<ScopeColumn>& scope, int depth) {
  if (depth <= 0 || chance(0.65)) return leaf(scope);
  return expr(scope, depth);
}

ExprPtr Generator::expr(const std::vector<ScopeColumn>& scope, int depth) {
  if (depth <= 0) return leaf(scope);
  int d = depth - 1;
  switch (pick_kind(!scope.empty())) {
    case Kind::Constant: return constant();
    case Kind::Column: return column(scope);
    case Kind::Unary: {
      int r = uniform(0, 9);
      if (r < 7) return sql::not_(expr(scope, d));
      return sql::unary(r < 9 ? UnaryOp::Negate : UnaryOp::Plus, operand(scope, d));
    }
    case Kind::Comparison: {
      static const std::vector<BinaryOp> ops = {BinaryOp::Equal,     BinaryOp::NotEqual,
                                                BinaryOp::Less,      BinaryOp::LessEqual,
                                                BinaryOp::Greater,   BinaryOp::GreaterEqual};
      if (scope.size() >= 2 && chance(0.3)) {
        ExprPtr l = column(scope);
        ExprPtr r = column(scope);
        return sql::binary(pick(ops), l, r);
      }
      return sql::binary(pick(ops), operand(scope, d), operand(scope, d));
    }
    case Kind::Logical:
      return sql::binary(chance(0.55) ? BinaryOp::And : BinaryOp::Or, expr(scope, d), expr(scope, d));
    case Kind::Arithmetic: {
      static const std::vector<BinaryOp> ops = {BinaryOp::Add, BinaryOp::Subtract, BinaryOp::Multiply,
                                                BinaryOp::Divide, BinaryOp::Remainder};
      return sql::binary(pick(ops), operand(scope, d), operand(scope, d));
    }
    case Kind::Concat: return sql::binary(BinaryOp::Concat, operand(scope, d), operand(scope, d));
    case Kind::Glob:
    case Kind::Like: {
      bool glob = dialect_.hasGlob && chance(0.5);
      ExprPtr lhs = !scope.empty() && chance(0.85) ? column(scope) : operand(scope, d);
      ExprPtr pat = chance(0.9) ? sql::text(pattern(glob)) : operand(scope, d);
      return sql::binary(glob ? BinaryOp::Glob : BinaryOp::Like, lhs, pat);
    }
    case Kind::Between: {
      bool symmetric = dialect_.hasBetweenSymmetric && chance(0.3);
      bool negate = d > 0 && chance(0.2);
      int od = negate ? d - 1 : d;
      ExprPtr b = sql::between(operand(scope, od), operand(scope, od), operand(scope, od), symmetric);
      return negate ? sql::not_(b) : b;
    }
    case Kind::In: {
      int n = chance(0.5) ? 1 : uniform(2, 3);
      std::vector<ExprPtr> cands;
      for (int i = 0; i < n; ++i) cands.push_back(operand(scope, d));
      return sql::in(operand(scope, d), std::move(cands));
    }
    case Kind::Function: return sql::call(pick(kFunctions), {operand(scope, d)});
    case Kind::Cast: return sql::cast(operand(scope, d), pick(kCastTypes));
    case Kind::Collate:
      return sql::collate(operand(scope, d), chance(0.6) ? Collation::NoCase : Collation::Binary);
    case Kind::IsTest: {
      static const std::vector<IsKind> kinds = {IsKind::True, IsKind::False, IsKind::Null, IsKind::NotNull};
      return sql::is(expr(scope, d), pick(kinds));
    }
  }
  return constant();
}

ExprPtr Generator::generate_predicate(const std::vector<ScopeColumn>& scope, int depth) {
  return expr(scope, std::max(depth, 0));
}

// --- schema and data ---------------------------------------------------------------

std::pair<SchemaDef, std::vector<Statement>> Generator::generate_schema() {
  pool_.clear();
  SchemaDef schema;
  std::vector<Statement> ddl;
  int ntables = uniform(1, config_.maxTables);
  const auto& types = dialect_.appliesColumnAffinity ? kTypesAffinity : kTypesStrict;
  for (int t = 0; t < ntables; ++t) {
    TableDef table;
    table.name = "t" + std::to_string(t);
    int ncols = uniform(1, config_.maxColumnsPerTable);
    bool have_pk = false;
    for (int c = 0; c < ncols; ++c) {
      ColumnDef col;
      col.name = "c" + std::to_string(c);
      int r = uniform(0, 8);
      col.declaredType = types[static_cast<size_t>(r < 2 ? 0 : r < 5 ? 1 : r < 7 ? 2 : r < 8 ? 3 : 4) % types.size()];
      if (!have_pk && chance(0.1)) {
        col.primaryKey = true;
        have_pk = true;
      } else if (chance(0.3)) {
        col.unique = true;
      }
      if (dialect_.hasCollateNocase && chance(0.35)) col.collation = Collation::NoCase;
      table.columns.push_back(std::move(col));
    }
    schema.tables.push_back(table);
    ddl.emplace_back(CreateTable{table});
  }
  int next_index = 0;
  for (const auto& table : schema.tables) {
    std::vector<ScopeColumn> scope = scope_of(schema, {table.name});
    int nidx = uniform(0, 2);
    for (int i = 0; i < nidx; ++i) {
      IndexDef idx;
      idx.name = "i" + std::to_string(next_index++);
      idx.table = table.name;
      int nkeys = chance(0.75) ? 1 : 2;
      for (int k = 0; k < nkeys; ++k) {
        ExprPtr key = chance(0.85) ? column(scope) : expr(scope, 1);
        // SQLite takes a quoted string key for a column name.
        if (!references_column(key)) key = column(scope);
        idx.keys.push_back(key);
      }
      idx.unique = chance(0.1);
      if (dialect_.hasPartialIndexes && chance(0.2)) idx.where = expr(scope, uniform(1, 2));
      schema.indexes.push_back(idx);
      ddl.emplace_back(CreateIndex{idx});
    }
  }
  return {schema, ddl};
}

std::vector<Statement> Generator::populate(const SchemaDef& schema) {
  std::vector<Statement> out;
  if (config_.maxRows <= 0) return out;
  for (const auto& table : schema.tables) {
    int remaining = uniform(0, config_.maxRows);
    while (remaining > 0) {
      Insert ins;
      ins.table = table.name;
      std::vector<const ColumnDef*> cols;
      if (chance(0.2)) {
        for (const auto& c : table.columns) {
          if (chance(0.6)) {
            ins.columns.push_back(c.name);
            cols.push_back(&c);
          }
        }
      }
      if (cols.empty()) {
        ins.columns.clear();
        for (const auto& c : table.columns) cols.push_back(&c);
        if (chance(0.5)) {
          for (const auto* c : cols) ins.columns.push_back(c->name);
        }
      }
      int nrows = std::min(remaining, uniform(1, 4));
      for (int r = 0; r < nrows; ++r) {
        std::vector<ExprPtr> values;
        for (size_t c = 0; c < cols.size(); ++c) {
          SqlValue v = !pool_.empty() && chance(0.25) ? pool_variant(pick(pool_)) : random_value();
          if (!v.is_null()) pool_.push_back(v);
          values.push_back(sql::lit(v));
        }
        ins.rows.push_back(std::move(values));
      }
      remaining -= nrows;
      out.emplace_back(std::move(ins));
    }
  }
  int extra = uniform(0, 2);
  for (int i = 0; i < extra; ++i) {
    const TableDef& table = pick(schema.tables);
    std::vector<ScopeColumn> scope = scope_of(schema, {table.name});
    int depth = uniform(1, 2);
    if (chance(0.5)) {
      Update up;
      up.table = table.name;
      const ColumnDef& target = table.columns[static_cast<size_t>(uniform(0, static_cast<int>(table.columns.size()) - 1))];
      up.assignments.push_back({target.name, operand(scope, 1)});
      up.where = expr(scope, depth);
      out.emplace_back(std::move(up));
    } else {
      Delete del;
      del.table = table.name;
      del.where = expr(scope, depth);
      out.emplace_back(std::move(del));
    }
  }
  return out;
}

// --- queries ---------------------------------------------------------------------------

std::vector<ExprPtr> Generator::terms(const std::vector<ScopeColumn>& scope, int max_terms) {
  std::vector<ExprPtr> out;
  int n = uniform(1, max_terms);
  for (int i = 0; i < n; ++i) {
    ExprPtr e = chance(0.7) ? column(scope) : expr(scope, uniform(1, 2));
    // A column-free term can be read as a result column position.
    if (!references_column(e)) e = column(scope);
    out.push_back(e);
  }
  return out;
}

SelectQuery Generator::generate_optimized_query(const SchemaDef& schema) {
  SelectQuery q;
  q.selectList = {SelectItem::star()};
  std::vector<std::string> names;
  for (const auto& t : schema.tables) names.push_back(t.name);
  std::shuffle(names.begin(), names.end(), rng_);
  int ntables = uniform(1, std::min(config_.maxJoins + 1, static_cast<int>(names.size())));
  names.resize(static_cast<size_t>(ntables));

  q.fromTables.push_back(names[0]);
  bool comma = chance(0.3);
  for (size_t i = 1; i < names.size(); ++i) {
    if (comma && q.joins.empty()) {
      q.fromTables.push_back(names[i]);
      continue;
    }
    JoinClause j;
    j.table = names[i];
    int r = uniform(0, 19);
    j.kind = r < 9 ? JoinKind::Inner : r < 17 ? JoinKind::Left : JoinKind::Cross;
    if (j.kind != JoinKind::Cross) {
      auto visible = q.scope_tables();
      visible.push_back(names[i]);
      j.on = expr(scope_of(schema, visible), uniform(1, std::max(1, std::min(3, config_.maxExprDepth))));
    }
    q.joins.push_back(std::move(j));
  }

  auto scope = scope_of(schema, q.scope_tables());
  // Each extra conjunct nests the earlier ones one level deeper.
  int conjuncts = chance(0.5) ? 1 : uniform(2, 3);
  conjuncts = std::max(1, std::min(conjuncts, config_.maxExprDepth - 1));
  int budget = std::max(0, config_.maxExprDepth - (conjuncts - 1));
  for (int i = 0; i < conjuncts; ++i) {
    ExprPtr c = expr(scope, uniform(std::min(1, budget), budget));
    q.where = q.where ? sql::and_(q.where, c) : c;
  }
  if (chance(config_.groupByProbability)) q.groupBy = terms(scope, 2);
  if (chance(config_.orderByProbability)) {
    for (auto& e : terms(scope, 2)) {
      q.orderBy.push_back({e, chance(0.5) ? SortDirection::Asc : SortDirection::Desc});
    }
  }
  return q;
}

}  // namespace norec
