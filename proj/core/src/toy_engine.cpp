#include "norec/toy_engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "norec/affinity.hpp"
#include "norec/eval.hpp"
#include "overloaded.hpp"

namespace norec {

std::string_view injection_name(BugInjection b) {
  switch (b) {
    case BugInjection::LikeRangeSkip: return "LikeRangeSkip";
    case BugInjection::InToEqAffinity: return "InToEqAffinity";
    case BugInjection::CommuteDropsCollation: return "CommuteDropsCollation";
    case BugInjection::NullFilterAsFalse: return "NullFilterAsFalse";
    case BugInjection::StringRangeBound: return "StringRangeBound";
    case BugInjection::ValueCorruption: return "ValueCorruption";
  }
  return "?";
}

const std::vector<BugInjection>& all_injections() {
  static const std::vector<BugInjection> all = {
      BugInjection::LikeRangeSkip,     BugInjection::InToEqAffinity,
      BugInjection::CommuteDropsCollation, BugInjection::NullFilterAsFalse,
      BugInjection::StringRangeBound,  BugInjection::ValueCorruption,
  };
  return all;
}

std::optional<BugInjection> parse_injection(std::string_view name) {
  auto lower = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      if (c == '-' || c == '_') continue;
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
  };
  for (auto b : all_injections()) {
    if (lower(injection_name(b)) == lower(name)) return b;
  }
  return std::nullopt;
}

namespace {

struct TimeoutError {};

struct TableMeta {
  const TableDef* def;
  std::vector<Affinity> affinities;
  std::vector<Collation> collations;
};

TableMeta make_meta(const TableDef& def) {
  TableMeta m{&def, {}, {}};
  for (const auto& c : def.columns) {
    m.affinities.push_back(column_affinity(c.declaredType));
    m.collations.push_back(c.collation.value_or(Collation::Binary));
  }
  return m;
}

class ScopeBinding final : public RowBinding {
 public:
  void push(const TableMeta* meta, const Row* row = nullptr) { slots_.push_back({meta, row}); }
  void set_row(size_t i, const Row* row) { slots_[i].row = row; }
  size_t size() const { return slots_.size(); }

  std::optional<ColumnView> lookup(std::string_view table,
                                   std::string_view column) const override {
    static const SqlValue kNull;
    for (const auto& s : slots_) {
      if (s.meta->def->name != table) continue;
      const auto& cols = s.meta->def->columns;
      for (size_t i = 0; i < cols.size(); ++i) {
        if (cols[i].name != column) continue;
        const SqlValue* v = s.row ? &(*s.row)[i] : &kNull;
        return ColumnView{v, s.meta->affinities[i], s.meta->collations[i]};
      }
    }
    return std::nullopt;
  }

 private:
  struct Slot {
    const TableMeta* meta;
    const Row* row;
  };
  std::vector<Slot> slots_;
};

class EmptyBinding final : public RowBinding {
 public:
  std::optional<ColumnView> lookup(std::string_view, std::string_view) const override {
    return std::nullopt;
  }
};

bool has_column_ref(const ExprPtr& e) {
  if (e->is<ColumnRef>()) return true;
  for (const auto& k : children(*e)) {
    if (has_column_ref(k)) return true;
  }
  return false;
}

void flatten_and(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (auto* b = e->as<Binary>(); b && b->op == BinaryOp::And) {
    flatten_and(b->left, out);
    flatten_and(b->right, out);
    return;
  }
  out.push_back(e);
}

ExprPtr conjoin(const std::vector<ExprPtr>& parts) {
  ExprPtr out;
  for (const auto& p : parts) out = out ? sql::and_(out, p) : p;
  return out;
}

bool holds(int cmp, BinaryOp op) {
  switch (op) {
    case BinaryOp::Equal: return cmp == 0;
    case BinaryOp::NotEqual: return cmp != 0;
    case BinaryOp::Less: return cmp < 0;
    case BinaryOp::LessEqual: return cmp <= 0;
    case BinaryOp::Greater: return cmp > 0;
    case BinaryOp::GreaterEqual: return cmp >= 0;
    default: return false;
  }
}

// NULL sorts first; otherwise SQL comparison order under `c`.
int key_compare(const SqlValue& a, const SqlValue& b, Collation c) {
  if (a.is_null() || b.is_null()) return static_cast<int>(b.is_null()) - static_cast<int>(a.is_null());
  return compare_values(a, b, c);
}

int tuple_compare(const std::vector<SqlValue>& a, const std::vector<SqlValue>& b,
                  const std::vector<Collation>& colls) {
  for (size_t i = 0; i < a.size(); ++i) {
    int c = key_compare(a[i], b[i], colls[i]);
    if (c != 0) return c;
  }
  return 0;
}

bool is_true(const SqlValue& v) { return truth_value(v) == true; }

SqlValue sum_values(const std::vector<SqlValue>& values) {
  bool any = false, real = false;
  std::int64_t isum = 0;
  double rsum = 0;
  for (const auto& v : values) {
    if (v.is_null()) continue;
    any = true;
    SqlValue n = to_numeric(v);
    if (!real && n.is_integer()) {
      if (__builtin_add_overflow(isum, n.as_integer(), &isum)) throw EvalError("integer overflow");
      continue;
    }
    if (!real) {
      real = true;
      rsum = static_cast<double>(isum);
    }
    rsum += n.is_integer() ? static_cast<double>(n.as_integer()) : n.as_real();
  }
  if (!any) return SqlValue::null();
  return real ? SqlValue::real(rsum) : SqlValue::integer(isum);
}

}  // namespace

class ToyEngine::Deadline {
 public:
  explicit Deadline(std::chrono::milliseconds budget)
      : end_(std::chrono::steady_clock::now() + budget) {}
  void check() {
    if ((++ticks_ & 0xFF) == 0 && std::chrono::steady_clock::now() > end_) throw TimeoutError{};
  }

 private:
  std::chrono::steady_clock::time_point end_;
  std::uint64_t ticks_ = 0;
};

ToyEngine::ToyEngine(std::optional<BugInjection> injection, DialectProfile dialect)
    : injection_(injection), dialect_(std::move(dialect)) {}

std::string ToyEngine::version() const {
  std::string v = "toy 0.1";
  if (injection_) v += " [" + std::string(injection_name(*injection_)) + "]";
  return v;
}

size_t ToyEngine::row_count(std::string_view table) const {
  const Table* t = find_table(table);
  return t ? t->rows.size() : 0;
}

ToyEngine::Table* ToyEngine::find_table(std::string_view name) {
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : &it->second;
}

const ToyEngine::Table* ToyEngine::find_table(std::string_view name) const {
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : &it->second;
}

EngineResult ToyEngine::execute(const Statement& stmt) {
  try {
    return std::visit(
        detail::overloaded{
            [&](const CreateTable& s) { return create_table(s); },
            [&](const CreateIndex& s) { return create_index(s); },
            [&](const Insert& s) { return insert(s); },
            [&](const Update& s) { return update(s); },
            [&](const Delete& s) { return remove(s); },
            [&](const Select& s) { return execute_optimized(s.query); },
            [&](const SumOfCounts& s) { return sum_of_counts(s); },
        },
        stmt);
  } catch (const TimeoutError&) {
    return EngineResult::timeout();
  }
}

// --- DDL / DML ----------------------------------------------------------------

EngineResult ToyEngine::create_table(const CreateTable& s) {
  if (find_table(s.table.name)) return EngineResult::error("table " + s.table.name + " already exists");
  if (s.table.columns.empty()) return EngineResult::error("table must have at least one column");
  for (size_t i = 0; i < s.table.columns.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (s.table.columns[i].name == s.table.columns[j].name) {
        return EngineResult::error("duplicate column name: " + s.table.columns[i].name);
      }
    }
  }
  Table t;
  t.def = s.table;
  tables_.emplace(t.def.name, std::move(t));
  schema_.tables.push_back(s.table);
  int n = 0;
  for (const auto& c : s.table.columns) {
    if (!c.unique && !c.primaryKey) continue;
    Index idx;
    idx.def.name = "autoindex_" + s.table.name + "_" + std::to_string(++n);
    idx.def.table = s.table.name;
    idx.def.keys = {sql::col(s.table.name, c.name)};
    idx.def.unique = true;
    indexes_.push_back(std::move(idx));
    build_index(indexes_.back(), *find_table(s.table.name));
  }
  return EngineResult::ok();
}

void ToyEngine::build_index(Index& index, const Table& table) const {
  TableMeta meta = make_meta(table.def);
  ScopeBinding b;
  b.push(&meta);
  index.collations.clear();
  for (const auto& k : index.def.keys) {
    index.collations.push_back(expression_collation(*k, b).collation.value_or(Collation::Binary));
  }
  index.entries.clear();
  for (const auto& [rowid, row] : table.rows) {
    b.set_row(0, &row);
    if (index.def.where && !is_true(eval_expression(index.def.where, b, dialect_))) continue;
    IndexEntry e{{}, rowid};
    for (const auto& k : index.def.keys) e.key.push_back(eval_expression(k, b, dialect_));
    index.entries.push_back(std::move(e));
  }
  const auto& colls = index.collations;
  std::stable_sort(index.entries.begin(), index.entries.end(),
                   [&](const IndexEntry& x, const IndexEntry& y) {
                     int c = tuple_compare(x.key, y.key, colls);
                     return c != 0 ? c < 0 : x.rowid < y.rowid;
                   });
  if (!index.def.unique) return;
  for (size_t i = 1; i < index.entries.size(); ++i) {
    const auto& a = index.entries[i - 1].key;
    const auto& k = index.entries[i].key;
    bool has_null = std::any_of(k.begin(), k.end(), [](const SqlValue& v) { return v.is_null(); });
    if (has_null || tuple_compare(a, k, colls) != 0) continue;
    std::string cols;
    for (const auto& key : index.def.keys) {
      if (!cols.empty()) cols += ", ";
      if (auto* c = key->as<ColumnRef>()) {
        cols += table.def.name + "." + c->column;
      } else {
        cols += "index '" + index.def.name + "'";
        break;
      }
    }
    throw EvalError("UNIQUE constraint failed: " + cols);
  }
}

void ToyEngine::reindex(Table& table) {
  for (auto& idx : indexes_) {
    if (idx.def.table == table.def.name) build_index(idx, table);
  }
}

EngineResult ToyEngine::create_index(const CreateIndex& s) {
  Table* t = find_table(s.index.table);
  if (!t) return EngineResult::error("no such table: main." + s.index.table);
  for (const auto& idx : indexes_) {
    if (idx.def.name == s.index.name) return EngineResult::error("index " + s.index.name + " already exists");
  }
  Index idx;
  idx.def = s.index;
  try {
    build_index(idx, *t);
  } catch (const EvalError& e) {
    return EngineResult::error(e.what());
  }
  indexes_.push_back(std::move(idx));
  schema_.indexes.push_back(s.index);
  return EngineResult::ok();
}

EngineResult ToyEngine::insert(const Insert& s) {
  Table* t = find_table(s.table);
  if (!t) return EngineResult::error("no such table: " + s.table);
  std::vector<size_t> targets;
  if (s.columns.empty()) {
    for (size_t i = 0; i < t->def.columns.size(); ++i) targets.push_back(i);
  } else {
    for (const auto& name : s.columns) {
      auto it = std::find_if(t->def.columns.begin(), t->def.columns.end(),
                             [&](const ColumnDef& c) { return c.name == name; });
      if (it == t->def.columns.end()) {
        return EngineResult::error("table " + s.table + " has no column named " + name);
      }
      targets.push_back(static_cast<size_t>(it - t->def.columns.begin()));
    }
  }
  auto saved_rows = t->rows;
  auto saved_next = t->nextRowid;
  TableMeta meta = make_meta(t->def);
  EmptyBinding empty;
  try {
    for (const auto& values : s.rows) {
      if (values.size() != targets.size()) {
        throw EvalError(std::to_string(values.size()) + " values for " +
                        std::to_string(targets.size()) + " columns");
      }
      Row row(t->def.columns.size());
      for (size_t i = 0; i < values.size(); ++i) {
        row[targets[i]] = apply_affinity(eval_expression(values[i], empty, dialect_),
                                         meta.affinities[targets[i]]);
      }
      t->rows.emplace(t->nextRowid++, std::move(row));
    }
    reindex(*t);
  } catch (const EvalError& e) {
    t->rows = std::move(saved_rows);
    t->nextRowid = saved_next;
    reindex(*t);
    return EngineResult::error(e.what());
  }
  return EngineResult::ok();
}

EngineResult ToyEngine::update(const Update& s) {
  Table* t = find_table(s.table);
  if (!t) return EngineResult::error("no such table: " + s.table);
  TableMeta meta = make_meta(t->def);
  std::vector<size_t> targets;
  for (const auto& a : s.assignments) {
    auto it = std::find_if(t->def.columns.begin(), t->def.columns.end(),
                           [&](const ColumnDef& c) { return c.name == a.column; });
    if (it == t->def.columns.end()) return EngineResult::error("no such column: " + a.column);
    targets.push_back(static_cast<size_t>(it - t->def.columns.begin()));
  }
  auto saved = t->rows;
  try {
    ScopeBinding b;
    b.push(&meta);
    for (auto& [rowid, row] : t->rows) {
      b.set_row(0, &row);
      if (s.where && !is_true(eval_expression(s.where, b, dialect_))) continue;
      Row next = row;
      for (size_t i = 0; i < targets.size(); ++i) {
        next[targets[i]] = apply_affinity(eval_expression(s.assignments[i].value, b, dialect_),
                                          meta.affinities[targets[i]]);
      }
      row = std::move(next);
    }
    reindex(*t);
  } catch (const EvalError& e) {
    t->rows = std::move(saved);
    reindex(*t);
    return EngineResult::error(e.what());
  }
  return EngineResult::ok();
}

EngineResult ToyEngine::remove(const Delete& s) {
  Table* t = find_table(s.table);
  if (!t) return EngineResult::error("no such table: " + s.table);
  TableMeta meta = make_meta(t->def);
  auto saved = t->rows;
  try {
    ScopeBinding b;
    b.push(&meta);
    for (auto it = t->rows.begin(); it != t->rows.end();) {
      b.set_row(0, &it->second);
      if (!s.where || is_true(eval_expression(s.where, b, dialect_))) {
        it = t->rows.erase(it);
      } else {
        ++it;
      }
    }
    reindex(*t);
  } catch (const EvalError& e) {
    t->rows = std::move(saved);
    reindex(*t);
    return EngineResult::error(e.what());
  }
  return EngineResult::ok();
}

// --- rewrite pipeline ------------------------------------------------------------

namespace {

struct Rewriter {
  const RowBinding& meta;
  const DialectProfile& dialect;
  std::optional<BugInjection> injection;
  std::vector<std::string>& rules;

  bool injected(BugInjection b) const { return injection == b; }

  void fired(const char* rule) {
    if (std::find(rules.begin(), rules.end(), rule) == rules.end()) rules.emplace_back(rule);
  }

  ExprPtr rebuild(const ExprPtr& e, ExprPtr (Rewriter::*fn)(const ExprPtr&)) {
    auto kids = children(*e);
    bool changed = false;
    for (auto& k : kids) {
      ExprPtr n = (this->*fn)(k);
      if (n != k) changed = true;
      k = std::move(n);
    }
    return changed ? with_children(*e, kids) : e;
  }

  bool carries_metadata(const Expression& e) const {
    return expression_affinity(e, meta, dialect).has_value() ||
           expression_collation(e, meta).collation.has_value();
  }

  ExprPtr fold(const ExprPtr& e) {
    ExprPtr r = rebuild(e, &Rewriter::fold);
    if (r->is<Constant>() || r->is<Cast>() || r->is<Collate>()) return r;
    if (has_column_ref(r) || carries_metadata(*r)) return r;
    try {
      EmptyBinding none;
      ExprPtr out = sql::lit(eval_expression(r, none, dialect));
      fired("constant-folding");
      return out;
    } catch (const EvalError&) {
      return r;
    }
  }

  ExprPtr in_to_eq(const ExprPtr& e) {
    ExprPtr r = rebuild(e, &Rewriter::in_to_eq);
    auto* in = r->as<InList>();
    if (!in || in->candidates.size() != 1) return r;
    const auto& c = *in->candidates[0];
    if (carries_metadata(c) && !injected(BugInjection::InToEqAffinity)) return r;
    fired("in-to-eq");
    return sql::eq(in->value, in->candidates[0]);
  }

  static bool column_precedes(const ColumnRef& a, const ColumnRef& b) {
    return std::tie(a.table, a.column) < std::tie(b.table, b.column);
  }

  ExprPtr commute(const ExprPtr& e) {
    ExprPtr r = rebuild(e, &Rewriter::commute);
    auto* b = r->as<Binary>();
    if (!b || !is_comparison(b->op)) return r;
    auto* lc = b->left->as<ColumnRef>();
    auto* rc = b->right->as<ColumnRef>();
    bool swap = (b->left->is<Constant>() && rc) || (lc && rc && column_precedes(*rc, *lc));
    if (!swap) return r;
    Collation before = resolve_collation(*b->left, *b->right, meta);
    ExprPtr new_left = b->right;
    Collation after = resolve_collation(*new_left, *b->left, meta);
    if (before != after && !injected(BugInjection::CommuteDropsCollation)) {
      new_left = sql::collate(new_left, before);
    }
    fired("commute");
    return sql::binary(commuted(b->op), new_left, b->left);
  }

  ExprPtr normalize_not(const ExprPtr& conjunct) {
    auto* u = conjunct->as<Unary>();
    if (!u || u->op != UnaryOp::Not) return conjunct;
    fired("not-normalization");
    if (injected(BugInjection::NullFilterAsFalse)) return sql::not_(sql::is(u->operand, IsKind::True));
    return sql::is(u->operand, IsKind::False);
  }
};

std::optional<std::string> literal_prefix(const std::string& pattern, std::string_view wildcards) {
  size_t n = pattern.find_first_of(wildcards);
  if (n == std::string::npos || n == 0) return std::nullopt;
  std::string prefix = pattern.substr(0, n);
  for (unsigned char c : prefix) {
    if (c < 0x20 || c >= 0x7E) return std::nullopt;
  }
  return prefix;
}

}  // namespace

QueryPlan ToyEngine::plan(const SelectQuery& q) const {
  QueryPlan p;
  if (!q.where) return p;
  std::vector<TableMeta> metas;
  for (const auto& name : q.scope_tables()) {
    if (const Table* t = find_table(name)) metas.push_back(make_meta(t->def));
  }
  ScopeBinding meta;
  for (const auto& m : metas) meta.push(&m);

  Rewriter rw{meta, dialect_, injection_, p.rules};
  ExprPtr w = rw.fold(q.where);
  w = rw.in_to_eq(w);
  w = rw.commute(w);

  std::vector<ExprPtr> parts, kept;
  flatten_and(w, parts);
  for (auto& c : parts) {
    if (auto* k = c->as<Constant>()) {
      if (truth_value(k->value) == true) continue;
      p.alwaysEmpty = true;
    }
    kept.push_back(rw.normalize_not(c));
  }
  p.where = conjoin(kept);
  p.residual = p.where;
  if (p.alwaysEmpty || kept.empty() || q.fromTables.empty()) return p;

  const std::string& first = q.fromTables.front();
  const Table* table = find_table(first);
  if (!table) return p;
  TableMeta tmeta = make_meta(table->def);

  auto index_on = [&](const std::string& column) -> const Index* {
    for (const auto& idx : indexes_) {
      if (idx.def.table != first || idx.def.where || idx.def.keys.empty()) continue;
      auto* c = idx.def.keys.front()->as<ColumnRef>();
      if (c && c->column == column) return &idx;
    }
    return nullptr;
  };
  auto column_index = [&](const std::string& column) -> std::optional<size_t> {
    for (size_t i = 0; i < table->def.columns.size(); ++i) {
      if (table->def.columns[i].name == column) return i;
    }
    return std::nullopt;
  };
  // A reference to a column of the first table, optionally wrapped in a
  // COLLATE that matches the column's own collation.
  auto scanned_column = [&](const ExprPtr& e) -> std::optional<size_t> {
    const Expression* x = e.get();
    std::optional<Collation> wrap;
    if (auto* c = x->as<Collate>()) {
      wrap = c->collation;
      x = c->operand.get();
    }
    auto* ref = x->as<ColumnRef>();
    if (!ref || ref->table != first) return std::nullopt;
    auto i = column_index(ref->column);
    if (!i || (wrap && *wrap != tmeta.collations[*i])) return std::nullopt;
    return i;
  };

  EmptyBinding none;
  for (size_t ci = 0; ci < kept.size(); ++ci) {
    const ExprPtr& c = kept[ci];
    std::optional<IndexScan> scan;
    bool consume = false;
    if (auto* is = c->as<PostfixIs>(); is && is->kind == IsKind::Null) {
      auto col = scanned_column(is->operand);
      if (col && !is->operand->is<Collate>()) {
        if (const Index* idx = index_on(table->def.columns[*col].name)) {
          scan = IndexScan{idx->def.name, table->def.columns[*col].name, IndexScan::Kind::IsNull};
          consume = true;
        }
      }
    } else if (auto* b = c->as<Binary>()) {
      auto col = scanned_column(b->left);
      auto* k = b->right->as<Constant>();
      const Index* idx = col ? index_on(table->def.columns[*col].name) : nullptr;
      if (idx && k) {
        Affinity aff = tmeta.affinities[*col];
        Collation coll = tmeta.collations[*col];
        SqlValue v = eval_expression(b->right, none, dialect_);
        const std::string& cname = table->def.columns[*col].name;
        if (is_comparison(b->op) && b->op != BinaryOp::NotEqual && !v.is_null()) {
          IndexScan s{idx->def.name, cname, IndexScan::Kind::Compare, b->op};
          auto ca = comparison_affinity(aff, std::nullopt);
          s.bound = ca ? apply_affinity(v, *ca) : v;
          if (injection_ == BugInjection::StringRangeBound && is_numeric_affinity(aff) && v.is_text() &&
              !v.as_text().empty() && std::isspace(static_cast<unsigned char>(v.as_text()[0])) &&
              parse_numeric_text(v.as_text())) {
            s.bound = SqlValue::integer(0);
            if (s.op == BinaryOp::Less) s.op = BinaryOp::LessEqual;
            if (s.op == BinaryOp::Greater) s.op = BinaryOp::GreaterEqual;
          }
          scan = s;
          consume = true;
        } else if ((b->op == BinaryOp::Glob || b->op == BinaryOp::Like) && v.is_text() &&
                   !b->left->is<Collate>()) {
          bool glob = b->op == BinaryOp::Glob;
          bool affinity_ok = aff == Affinity::Text || injection_ == BugInjection::LikeRangeSkip;
          bool collation_ok = glob ? coll == Collation::Binary : coll == Collation::NoCase;
          auto prefix = literal_prefix(v.as_text(), glob ? "*?[" : "%_");
          if (affinity_ok && collation_ok && prefix) {
            std::string lo = *prefix;
            if (!glob) {
              for (auto& ch : lo) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            }
            std::string hi = lo;
            hi.back() = static_cast<char>(hi.back() + 1);
            IndexScan s{idx->def.name, cname, IndexScan::Kind::Prefix};
            s.low = SqlValue::text(lo);
            s.high = SqlValue::text(hi);
            scan = s;
          }
        }
      }
    }
    if (!scan) continue;
    p.scan = scan;
    p.rules.emplace_back(scan->kind == IndexScan::Kind::Prefix ? "prefix-range" : "index-range");
    if (consume) {
      std::vector<ExprPtr> rest;
      for (size_t j = 0; j < kept.size(); ++j) {
        if (j != ci) rest.push_back(kept[j]);
      }
      p.residual = conjoin(rest);
    }
    break;
  }
  return p;
}

// --- query execution -------------------------------------------------------------

EngineResult ToyEngine::execute_naive(const SelectQuery& q) {
  try {
    return run_select(q, false);
  } catch (const TimeoutError&) {
    return EngineResult::timeout();
  }
}

EngineResult ToyEngine::execute_optimized(const SelectQuery& q) {
  try {
    return run_select(q, true);
  } catch (const TimeoutError&) {
    return EngineResult::timeout();
  }
}

EngineResult ToyEngine::run_select(const SelectQuery& q, bool optimize) {
  Deadline deadline(timeout_);
  auto scope = q.scope_tables();
  std::vector<const Table*> tables;
  for (const auto& name : scope) {
    const Table* t = find_table(name);
    if (!t) return EngineResult::error("no such table: " + name);
    tables.push_back(t);
  }
  std::vector<TableMeta> metas;
  metas.reserve(tables.size());
  for (const auto* t : tables) metas.push_back(make_meta(t->def));

  try {
    QueryPlan p;
    if (optimize) {
      p = plan(q);
    } else {
      p.where = p.residual = q.where;
    }

    using Combo = std::vector<const Row*>;
    std::vector<Combo> combos;
    std::optional<size_t> corrupt_column;
    if (tables.empty() && !p.alwaysEmpty) combos.push_back({});
    if (!tables.empty() && !p.alwaysEmpty) {
      const Table& first = *tables.front();
      if (p.scan) {
        const Index* idx = nullptr;
        for (const auto& i : indexes_) {
          if (i.def.name == p.scan->index) idx = &i;
        }
        const auto& es = idx->entries;
        Collation coll = idx->collations.front();
        auto lower = [&](const SqlValue& v) {
          return std::partition_point(es.begin(), es.end(), [&](const IndexEntry& e) {
            return key_compare(e.key.front(), v, coll) < 0;
          });
        };
        auto upper = [&](const SqlValue& v) {
          return std::partition_point(es.begin(), es.end(), [&](const IndexEntry& e) {
            return key_compare(e.key.front(), v, coll) <= 0;
          });
        };
        auto first_non_null = std::partition_point(
            es.begin(), es.end(), [](const IndexEntry& e) { return e.key.front().is_null(); });
        auto lo = es.begin(), hi = es.end();
        switch (p.scan->kind) {
          case IndexScan::Kind::IsNull: hi = first_non_null; break;
          case IndexScan::Kind::Prefix:
            lo = lower(p.scan->low);
            hi = lower(p.scan->high);
            break;
          case IndexScan::Kind::Compare: {
            const SqlValue& v = p.scan->bound;
            switch (p.scan->op) {
              case BinaryOp::Equal: lo = lower(v); hi = upper(v); break;
              case BinaryOp::Less: lo = first_non_null; hi = lower(v); break;
              case BinaryOp::LessEqual: lo = first_non_null; hi = upper(v); break;
              case BinaryOp::Greater: lo = upper(v); break;
              case BinaryOp::GreaterEqual: lo = lower(v); break;
              default: break;
            }
            break;
          }
        }
        for (auto it = lo; it < hi; ++it) {
          deadline.check();
          combos.push_back({&first.rows.at(it->rowid)});
        }
        if (injection_ == BugInjection::ValueCorruption) {
          for (size_t i = 0; i < first.def.columns.size(); ++i) {
            if (first.def.columns[i].name == p.scan->column) corrupt_column = i;
          }
        }
      } else {
        for (const auto& [rowid, row] : first.rows) combos.push_back({&row});
      }
    }

    ScopeBinding binding;
    for (const auto& m : metas) binding.push(&m);
    auto bind = [&](const Combo& c) {
      for (size_t i = 0; i < binding.size(); ++i) binding.set_row(i, i < c.size() ? c[i] : nullptr);
    };

    // Remaining comma-separated tables, then explicit joins.
    for (size_t t = 1; t < q.fromTables.size(); ++t) {
      std::vector<Combo> next;
      for (const auto& c : combos) {
        for (const auto& [rowid, row] : tables[t]->rows) {
          deadline.check();
          Combo n = c;
          n.push_back(&row);
          next.push_back(std::move(n));
        }
      }
      combos = std::move(next);
    }
    for (size_t j = 0; j < q.joins.size(); ++j) {
      const auto& join = q.joins[j];
      size_t t = q.fromTables.size() + j;
      ScopeBinding on_binding;
      for (size_t i = 0; i <= t; ++i) on_binding.push(&metas[i]);
      std::vector<Combo> next;
      for (const auto& c : combos) {
        bool matched = false;
        for (const auto& [rowid, row] : tables[t]->rows) {
          deadline.check();
          Combo n = c;
          n.push_back(&row);
          if (join.kind != JoinKind::Cross && join.on) {
            for (size_t i = 0; i < n.size(); ++i) on_binding.set_row(i, n[i]);
            if (!is_true(eval_expression(join.on, on_binding, dialect_))) continue;
          }
          matched = true;
          next.push_back(std::move(n));
        }
        if (!matched && join.kind == JoinKind::Left) {
          Combo n = c;
          n.push_back(nullptr);
          next.push_back(std::move(n));
        }
      }
      combos = std::move(next);
    }

    if (p.residual) {
      std::vector<Combo> kept;
      for (auto& c : combos) {
        deadline.check();
        bind(c);
        if (is_true(eval_expression(p.residual, binding, dialect_))) kept.push_back(std::move(c));
      }
      combos = std::move(kept);
    }

    std::vector<std::string> names;
    for (const auto& item : q.selectList) {
      switch (item.kind) {
        case SelectItem::Kind::Star:
          for (const auto* t : tables) {
            for (const auto& c : t->def.columns) names.push_back(c.name);
          }
          break;
        case SelectItem::Kind::Expr: names.push_back(item.alias.empty() ? "expr" : item.alias); break;
        case SelectItem::Kind::CountStar: names.push_back(item.alias.empty() ? "COUNT(*)" : item.alias); break;
        case SelectItem::Kind::Sum: names.push_back(item.alias.empty() ? "SUM" : item.alias); break;
      }
    }

    // Each output row is produced from a group of combos and a representative.
    struct Group {
      Combo rep;
      std::vector<size_t> members;
    };
    std::vector<Group> groups;
    bool aggregate = !q.groupBy.empty() ||
                     std::any_of(q.selectList.begin(), q.selectList.end(),
                                 [](const SelectItem& i) { return i.is_aggregate(); });
    if (!q.groupBy.empty()) {
      std::vector<Collation> colls;
      for (const auto& g : q.groupBy) {
        colls.push_back(expression_collation(*g, binding).collation.value_or(Collation::Binary));
      }
      std::vector<std::vector<SqlValue>> keys;
      for (size_t i = 0; i < combos.size(); ++i) {
        deadline.check();
        bind(combos[i]);
        std::vector<SqlValue> key;
        for (const auto& g : q.groupBy) key.push_back(eval_expression(g, binding, dialect_));
        size_t gi = 0;
        for (; gi < keys.size(); ++gi) {
          if (tuple_compare(keys[gi], key, colls) == 0) break;
        }
        if (gi == keys.size()) {
          keys.push_back(std::move(key));
          groups.push_back({combos[i], {}});
        }
        groups[gi].members.push_back(i);
      }
    } else if (aggregate) {
      Group g{combos.empty() ? Combo{} : combos.front(), {}};
      for (size_t i = 0; i < combos.size(); ++i) g.members.push_back(i);
      groups.push_back(std::move(g));
    } else {
      for (size_t i = 0; i < combos.size(); ++i) groups.push_back({combos[i], {i}});
    }

    std::vector<Row> rows;
    std::vector<std::vector<SqlValue>> sort_keys;
    for (const auto& g : groups) {
      deadline.check();
      Row out;
      for (const auto& item : q.selectList) {
        switch (item.kind) {
          case SelectItem::Kind::Star: {
            bind(g.rep);
            for (size_t t = 0; t < tables.size(); ++t) {
              const Row* r = t < g.rep.size() ? g.rep[t] : nullptr;
              for (size_t c = 0; c < tables[t]->def.columns.size(); ++c) {
                SqlValue v = r ? (*r)[c] : SqlValue::null();
                if (t == 0 && corrupt_column == c && v.is_integer()) {
                  v = SqlValue::real(static_cast<double>(v.as_integer()));
                }
                out.push_back(std::move(v));
              }
            }
            break;
          }
          case SelectItem::Kind::Expr:
            bind(g.rep);
            out.push_back(eval_expression(item.expr, binding, dialect_));
            break;
          case SelectItem::Kind::CountStar:
            out.push_back(SqlValue::integer(static_cast<std::int64_t>(g.members.size())));
            break;
          case SelectItem::Kind::Sum: {
            std::vector<SqlValue> vals;
            for (size_t m : g.members) {
              bind(combos[m]);
              vals.push_back(eval_expression(item.expr, binding, dialect_));
            }
            out.push_back(sum_values(vals));
            break;
          }
        }
      }
      if (!q.orderBy.empty()) {
        bind(g.rep);
        std::vector<SqlValue> key;
        for (const auto& o : q.orderBy) key.push_back(eval_expression(o.expr, binding, dialect_));
        sort_keys.push_back(std::move(key));
      }
      rows.push_back(std::move(out));
    }

    if (!q.orderBy.empty()) {
      std::vector<Collation> colls;
      for (const auto& o : q.orderBy) {
        colls.push_back(expression_collation(*o.expr, binding).collation.value_or(Collation::Binary));
      }
      std::vector<size_t> order(rows.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        for (size_t k = 0; k < q.orderBy.size(); ++k) {
          int c = key_compare(sort_keys[a][k], sort_keys[b][k], colls[k]);
          if (c == 0) continue;
          return q.orderBy[k].direction == SortDirection::Asc ? c < 0 : c > 0;
        }
        return false;
      });
      std::vector<Row> sorted;
      for (size_t i : order) sorted.push_back(std::move(rows[i]));
      rows = std::move(sorted);
    }

    if (q.distinct) {
      std::vector<Row> unique;
      for (auto& r : rows) {
        if (std::find(unique.begin(), unique.end(), r) == unique.end()) unique.push_back(std::move(r));
      }
      rows = std::move(unique);
    }
    return EngineResult::ok(std::move(names), std::move(rows));
  } catch (const EvalError& e) {
    return EngineResult::error(e.what());
  }
}

EngineResult ToyEngine::sum_of_counts(const SumOfCounts& s) {
  EngineResult inner = execute_optimized(s.inner);
  if (!inner.is_rows()) return inner;
  std::vector<SqlValue> vals;
  for (const auto& r : inner.rows) {
    if (r.empty()) continue;
    if (s.perGroup) {
      if (r[0].is_null()) {
        vals.push_back(SqlValue::null());
      } else {
        vals.push_back(SqlValue::integer(
            compare_values(to_numeric(r[0]), SqlValue::integer(0), Collation::Binary) > 0 ? 1 : 0));
      }
    } else {
      vals.push_back(r[0]);
    }
  }
  try {
    return EngineResult::ok({"SUM"}, {{sum_values(vals)}});
  } catch (const EvalError& e) {
    return EngineResult::error(e.what());
  }
}

}  // namespace norec
