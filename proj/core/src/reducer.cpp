#include "norec/reducer.hpp"

#include <algorithm>
#include <functional>

#include "norec/render.hpp"
#include "norec/serialize.hpp"

namespace norec {

namespace {

bool canonical(const SqlValue& v) {
  return v.is_null() || v == SqlValue::integer(0) || v == SqlValue::integer(1) ||
         v == SqlValue::text("") || v == SqlValue::text("a");
}

void count_odd(const ExprPtr& e, size_t& n) {
  if (!e) return;
  if (auto* c = e->as<Constant>(); c && !canonical(c->value)) ++n;
  for (const auto& k : children(*e)) count_odd(k, n);
}

std::string render_or_json(const Statement& s, const DialectProfile& d) {
  try {
    return render_statement(s, d);
  } catch (const UnsupportedFeature&) {
    return serialize_statement(s);
  }
}

DialectProfile dialect_of(const TestCase& tc) {
  try {
    return dialect_by_name(tc.dialect);
  } catch (const std::invalid_argument&) {
    return DialectProfile::sqlite();
  }
}

// Pointers to every expression slot of a test case. `nullable` slots may be
// cleared entirely.
struct Slot {
  ExprPtr* expr;
  bool nullable;
};

std::vector<Slot> slots(TestCase& tc) {
  std::vector<Slot> out;
  auto add = [&](ExprPtr& e, bool nullable) {
    if (e) out.push_back({&e, nullable});
  };
  if (tc.query) {
    auto& q = *tc.query;
    add(q.where, true);
    for (auto& j : q.joins) add(j.on, false);
    for (auto& g : q.groupBy) add(g, false);
    for (auto& o : q.orderBy) add(o.expr, false);
  }
  for (auto& s : tc.setupStatements) {
    if (auto* ci = std::get_if<CreateIndex>(&s)) {
      add(ci->index.where, true);
      for (auto& k : ci->index.keys) add(k, false);
    } else if (auto* u = std::get_if<Update>(&s)) {
      add(u->where, true);
      for (auto& a : u->assignments) add(a.value, false);
    } else if (auto* d = std::get_if<Delete>(&s)) {
      add(d->where, true);
    } else if (auto* ins = std::get_if<Insert>(&s)) {
      for (auto& row : ins->rows) {
        for (auto& v : row) add(v, false);
      }
    }
  }
  return out;
}

void preorder(const ExprPtr& e, std::vector<ExprPtr>& out) {
  out.push_back(e);
  for (const auto& k : children(*e)) preorder(k, out);
}

// Replaces the node at preorder position `target` (counted from `next`).
ExprPtr replace_at(const ExprPtr& e, size_t target, size_t& next, const ExprPtr& replacement) {
  if (next++ == target) return replacement;
  auto kids = children(*e);
  bool changed = false;
  for (auto& k : kids) {
    if (next > target) break;
    ExprPtr n = replace_at(k, target, next, replacement);
    if (n != k) {
      k = n;
      changed = true;
    }
  }
  return changed ? with_children(*e, kids) : e;
}

ExprPtr replace_at(const ExprPtr& e, size_t target, const ExprPtr& replacement) {
  size_t next = 0;
  return replace_at(e, target, next, replacement);
}

class Reducer {
 public:
  Reducer(const TestCase& tc, const ExecutorFactory& factory, ReduceOptions options)
      : best_(tc),
        cost_(testcase_cost(tc)),
        factory_(factory),
        options_(options),
        start_(std::chrono::steady_clock::now()) {}

  TestCase run(ReduceStats& stats) {
    ++replays_;
    if (!reproduces(best_, factory_)) throw NotReproducible("test case does not reproduce its verdict");
    bool progress = true;
    while (progress && !exhausted()) {
      ++stats.rounds;
      progress = false;
      progress |= delta_debug();
      progress |= prune_rows();
      progress |= prune_clauses();
      progress |= hoist();
      progress |= prune_ddl();
    }
    stats.replays = replays_;
    stats.accepted = accepted_;
    stats.budgetExhausted = exhausted();
    return best_;
  }

 private:
  bool exhausted() const {
    return replays_ >= options_.maxReplays ||
           std::chrono::steady_clock::now() - start_ >= options_.maxTime;
  }

  // Accepts `cand` when it is strictly smaller and still reproduces.
  bool attempt(const TestCase& cand) {
    if (exhausted()) return false;
    ReduceCost c = testcase_cost(cand);
    if (!(c < cost_)) return false;
    ++replays_;
    if (!reproduces(cand, factory_)) return false;
    best_ = cand;
    cost_ = c;
    ++accepted_;
    return true;
  }

  bool delta_debug() {
    bool any = false;
    size_t n = 2;
    while (best_.setupStatements.size() >= 1 && !exhausted()) {
      auto& stmts = best_.setupStatements;
      size_t size = stmts.size();
      n = std::min(n, size);
      size_t chunk = (size + n - 1) / n;
      bool reduced = false;
      for (size_t start = 0; start < size && !exhausted(); start += chunk) {
        TestCase cand = best_;
        auto& cs = cand.setupStatements;
        cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(start),
                 cs.begin() + static_cast<std::ptrdiff_t>(std::min(size, start + chunk)));
        if (attempt(cand)) {
          reduced = any = true;
          n = std::max<size_t>(n - 1, 2);
          break;
        }
      }
      if (reduced) continue;
      if (n >= size) break;
      n = std::min(size, n * 2);
    }
    return any;
  }

  bool prune_rows() {
    bool any = false;
    for (size_t s = 0; s < best_.setupStatements.size(); ++s) {
      for (size_t r = 0;; ++r) {
        auto* ins = std::get_if<Insert>(&best_.setupStatements[s]);
        if (!ins || r >= ins->rows.size() || ins->rows.size() < 2 || exhausted()) break;
        TestCase cand = best_;
        auto& rows = std::get<Insert>(cand.setupStatements[s]).rows;
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(r));
        if (attempt(cand)) {
          any = true;
          --r;
        }
      }
    }
    return any;
  }

  bool prune_clauses() {
    if (!best_.query) return false;
    bool any = false;
    auto try_edit = [&](const std::function<bool(SelectQuery&)>& edit) {
      TestCase cand = best_;
      if (!edit(*cand.query)) return false;
      return attempt(cand);
    };
    any |= try_edit([](SelectQuery& q) { return !q.orderBy.empty() && (q.orderBy.clear(), true); });
    any |= try_edit([](SelectQuery& q) { return !q.groupBy.empty() && (q.groupBy.clear(), true); });
    any |= try_edit([](SelectQuery& q) { return q.distinct && !(q.distinct = false); });
    for (size_t j = best_.query->joins.size(); j-- > 0;) {
      any |= try_edit([j](SelectQuery& q) {
        if (j >= q.joins.size()) return false;
        q.joins.erase(q.joins.begin() + static_cast<std::ptrdiff_t>(j));
        return true;
      });
      any |= try_edit([j](SelectQuery& q) {
        if (j >= q.joins.size() || q.joins[j].kind == JoinKind::Cross) return false;
        q.joins[j].kind = JoinKind::Cross;
        q.joins[j].on = nullptr;
        return true;
      });
    }
    for (size_t t = best_.query->fromTables.size(); t-- > 1;) {
      any |= try_edit([t](SelectQuery& q) {
        if (t >= q.fromTables.size()) return false;
        q.fromTables.erase(q.fromTables.begin() + static_cast<std::ptrdiff_t>(t));
        return true;
      });
    }
    // Drop top-level conjuncts of the predicate.
    for (bool again = true; again && !exhausted();) {
      again = false;
      const ExprPtr& w = best_.query->where;
      auto* b = w ? w->as<Binary>() : nullptr;
      if (!b || b->op != BinaryOp::And) break;
      for (const ExprPtr& keep : {b->left, b->right}) {
        TestCase cand = best_;
        cand.query->where = keep;
        if (attempt(cand)) {
          any = again = true;
          break;
        }
      }
    }
    return any;
  }

  bool hoist() {
    static const std::vector<SqlValue> kCanonical = {SqlValue::null(), SqlValue::integer(0), SqlValue::integer(1),
                                                     SqlValue::text(""), SqlValue::text("a")};
    bool any = false;
    for (size_t s = 0;; ++s) {
      auto current = slots(best_);
      if (s >= current.size() || exhausted()) break;
      if (current[s].nullable) {
        TestCase cand = best_;
        *slots(cand)[s].expr = nullptr;
        if (attempt(cand)) {
          any = true;
          --s;
          continue;
        }
      }
      for (size_t i = 0;; ++i) {
        std::vector<ExprPtr> nodes;
        preorder(*slots(best_)[s].expr, nodes);
        if (i >= nodes.size() || exhausted()) break;
        std::vector<ExprPtr> replacements = children(*nodes[i]);
        for (const auto& v : kCanonical) {
          auto* c = nodes[i]->as<Constant>();
          if (c && c->value == v) continue;
          replacements.push_back(sql::lit(v));
        }
        for (const auto& r : replacements) {
          TestCase cand = best_;
          ExprPtr& slot = *slots(cand)[s].expr;
          slot = replace_at(slot, i, r);
          if (attempt(cand)) {
            any = true;
            break;
          }
        }
      }
    }
    return any;
  }

  // Removes column `col` of `table` everywhere it is stored.
  static bool drop_column(TestCase& tc, const std::string& table, size_t col) {
    std::string name;
    for (auto& s : tc.setupStatements) {
      if (auto* ct = std::get_if<CreateTable>(&s); ct && ct->table.name == table) {
        if (ct->table.columns.size() < 2 || col >= ct->table.columns.size()) return false;
        name = ct->table.columns[col].name;
        ct->table.columns.erase(ct->table.columns.begin() + static_cast<std::ptrdiff_t>(col));
      } else if (auto* ins = std::get_if<Insert>(&s); ins && ins->table == table) {
        size_t pos = col;
        if (!ins->columns.empty()) {
          auto it = std::find(ins->columns.begin(), ins->columns.end(), name);
          if (it == ins->columns.end()) continue;
          pos = static_cast<size_t>(it - ins->columns.begin());
          ins->columns.erase(it);
          if (ins->columns.empty()) return false;
        }
        for (auto& row : ins->rows) {
          if (pos < row.size()) row.erase(row.begin() + static_cast<std::ptrdiff_t>(pos));
        }
      }
    }
    return !name.empty();
  }

  bool prune_ddl() {
    bool any = false;
    for (size_t s = 0; s < best_.setupStatements.size() && !exhausted(); ++s) {
      auto* ct = std::get_if<CreateTable>(&best_.setupStatements[s]);
      if (!ct) continue;
      std::string table = ct->table.name;
      for (size_t c = ct->table.columns.size(); c-- > 0 && !exhausted();) {
        TestCase cand = best_;
        if (drop_column(cand, table, c) && attempt(cand)) {
          any = true;
          continue;
        }
        using Edit = std::function<bool(ColumnDef&)>;
        const std::vector<Edit> edits = {
            [](ColumnDef& d) { return d.unique && !(d.unique = false); },
            [](ColumnDef& d) { return d.primaryKey && !(d.primaryKey = false); },
            [](ColumnDef& d) { return d.collation.has_value() && (d.collation.reset(), true); },
            [](ColumnDef& d) { return !d.declaredType.empty() && (d.declaredType.clear(), true); },
        };
        for (const auto& edit : edits) {
          TestCase cand2 = best_;
          auto& cols = std::get<CreateTable>(cand2.setupStatements[s]).table.columns;
          if (c < cols.size() && edit(cols[c]) && attempt(cand2)) any = true;
        }
      }
    }
    return any;
  }

  TestCase best_;
  ReduceCost cost_;
  const ExecutorFactory& factory_;
  ReduceOptions options_;
  std::chrono::steady_clock::time_point start_;
  size_t replays_ = 0;
  size_t accepted_ = 0;
};

}  // namespace

std::string render_testcase(const TestCase& tc) {
  DialectProfile d = dialect_of(tc);
  std::string out;
  for (const auto& s : tc.setupStatements) out += render_or_json(s, d) + "\n";
  if (tc.query) out += render_or_json(Select{*tc.query}, d) + "\n";
  return out;
}

ReduceCost testcase_cost(const TestCase& tc) {
  ReduceCost c;
  c.length = render_testcase(tc).size();
  TestCase copy = tc;
  for (const auto& s : slots(copy)) count_odd(*s.expr, c.oddConstants);
  return c;
}

TestCase reduce(const TestCase& tc, const ExecutorFactory& factory, ReduceOptions options,
                ReduceStats* stats) {
  ReduceStats local;
  Reducer r(tc, factory, options);
  TestCase out = r.run(stats ? *stats : local);
  return out;
}

}  // namespace norec
