#include "norec/serialize.hpp"

#include <cstdio>
#include <cstdlib>

#include "json.hpp"

#include "overloaded.hpp"

namespace norec {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw SerializeError("malformed json: " + what); }

json value_json(const SqlValue& v) {
  switch (v.storage_class()) {
    case StorageClass::Null: return nullptr;
    case StorageClass::Integer: return {{"i", v.as_integer()}};
    case StorageClass::Real: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v.as_real());
      return {{"r", buf}};
    }
    case StorageClass::Text: return {{"t", v.as_text()}};
    case StorageClass::Boolean: return {{"b", v.as_boolean()}};
  }
  return nullptr;
}

SqlValue value_from(const json& j) {
  if (j.is_null()) return SqlValue::null();
  if (!j.is_object()) bad("value");
  if (j.contains("i")) return SqlValue::integer(j.at("i").get<std::int64_t>());
  if (j.contains("r")) return SqlValue::real(std::strtod(j.at("r").get<std::string>().c_str(), nullptr));
  if (j.contains("t")) return SqlValue::text(j.at("t").get<std::string>());
  if (j.contains("b")) return SqlValue::boolean(j.at("b").get<bool>());
  bad("value");
}

template <class E, class F>
E enum_from(const std::string& name, std::initializer_list<E> all, F namer, const char* what) {
  for (E e : all) {
    if (namer(e) == name) return e;
  }
  bad(std::string(what) + " '" + name + "'");
}

BinaryOp binary_op(const std::string& n) {
  return enum_from(n,
                   {BinaryOp::Add, BinaryOp::Subtract, BinaryOp::Multiply, BinaryOp::Divide,
                    BinaryOp::Remainder, BinaryOp::Concat, BinaryOp::Equal, BinaryOp::NotEqual,
                    BinaryOp::Less, BinaryOp::LessEqual, BinaryOp::Greater, BinaryOp::GreaterEqual,
                    BinaryOp::And, BinaryOp::Or, BinaryOp::Glob, BinaryOp::Like},
                   [](BinaryOp o) { return op_name(o); }, "binary operator");
}

UnaryOp unary_op(const std::string& n) {
  return enum_from(n, {UnaryOp::Not, UnaryOp::Negate, UnaryOp::Plus},
                   [](UnaryOp o) { return op_name(o); }, "unary operator");
}

IsKind is_kind(const std::string& n) {
  return enum_from(n, {IsKind::True, IsKind::False, IsKind::Null, IsKind::NotNull},
                   [](IsKind k) { return is_kind_name(k); }, "IS test");
}

json expr_json(const ExprPtr& e);

json exprs_json(const std::vector<ExprPtr>& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(expr_json(e));
  return a;
}

json expr_json(const ExprPtr& e) {
  if (!e) return nullptr;
  return std::visit(
      detail::overloaded{
          [](const Constant& c) -> json { return {{"k", "const"}, {"v", value_json(c.value)}}; },
          [](const ColumnRef& c) -> json { return {{"k", "col"}, {"t", c.table}, {"c", c.column}}; },
          [](const Unary& u) -> json {
            return {{"k", "unary"}, {"op", op_name(u.op)}, {"e", expr_json(u.operand)}};
          },
          [](const Binary& b) -> json {
            return {{"k", "binary"}, {"op", op_name(b.op)}, {"l", expr_json(b.left)}, {"r", expr_json(b.right)}};
          },
          [](const Between& b) -> json {
            return {{"k", "between"}, {"sym", b.symmetric}, {"v", expr_json(b.value)},
                    {"lo", expr_json(b.low)}, {"hi", expr_json(b.high)}};
          },
          [](const InList& in) -> json {
            return {{"k", "in"}, {"v", expr_json(in.value)}, {"c", exprs_json(in.candidates)}};
          },
          [](const FunctionCall& f) -> json {
            return {{"k", "call"}, {"f", f.name}, {"a", exprs_json(f.args)}};
          },
          [](const Cast& c) -> json { return {{"k", "cast"}, {"e", expr_json(c.operand)}, {"type", c.type}}; },
          [](const Collate& c) -> json {
            return {{"k", "collate"}, {"e", expr_json(c.operand)}, {"coll", collation_name(c.collation)}};
          },
          [](const PostfixIs& p) -> json {
            return {{"k", "is"}, {"e", expr_json(p.operand)}, {"is", is_kind_name(p.kind)}};
          },
      },
      e->node);
}

ExprPtr expr_from(const json& j);

std::vector<ExprPtr> exprs_from(const json& j) {
  std::vector<ExprPtr> out;
  for (const auto& x : j) out.push_back(expr_from(x));
  return out;
}

ExprPtr expr_from(const json& j) {
  if (j.is_null()) return nullptr;
  const std::string k = j.at("k").get<std::string>();
  if (k == "const") return sql::lit(value_from(j.at("v")));
  if (k == "col") return sql::col(j.at("t").get<std::string>(), j.at("c").get<std::string>());
  if (k == "unary") return sql::unary(unary_op(j.at("op")), expr_from(j.at("e")));
  if (k == "binary") return sql::binary(binary_op(j.at("op")), expr_from(j.at("l")), expr_from(j.at("r")));
  if (k == "between") {
    return sql::between(expr_from(j.at("v")), expr_from(j.at("lo")), expr_from(j.at("hi")),
                        j.at("sym").get<bool>());
  }
  if (k == "in") return sql::in(expr_from(j.at("v")), exprs_from(j.at("c")));
  if (k == "call") return sql::call(j.at("f").get<std::string>(), exprs_from(j.at("a")));
  if (k == "cast") return sql::cast(expr_from(j.at("e")), j.at("type").get<std::string>());
  if (k == "collate") {
    auto c = parse_collation(j.at("coll").get<std::string>());
    if (!c) bad("collation");
    return sql::collate(expr_from(j.at("e")), *c);
  }
  if (k == "is") return sql::is(expr_from(j.at("e")), is_kind(j.at("is")));
  bad("expression kind '" + k + "'");
}

const char* item_kind(SelectItem::Kind k) {
  switch (k) {
    case SelectItem::Kind::Star: return "star";
    case SelectItem::Kind::Expr: return "expr";
    case SelectItem::Kind::CountStar: return "count";
    case SelectItem::Kind::Sum: return "sum";
  }
  return "?";
}

const char* join_kind(JoinKind k) {
  switch (k) {
    case JoinKind::Inner: return "inner";
    case JoinKind::Left: return "left";
    case JoinKind::Cross: return "cross";
  }
  return "?";
}

json query_json(const SelectQuery& q) {
  json items = json::array();
  for (const auto& i : q.selectList) {
    items.push_back({{"kind", item_kind(i.kind)}, {"e", expr_json(i.expr)}, {"alias", i.alias}});
  }
  json joins = json::array();
  for (const auto& jn : q.joins) {
    joins.push_back({{"kind", join_kind(jn.kind)}, {"table", jn.table}, {"on", expr_json(jn.on)}});
  }
  json order = json::array();
  for (const auto& o : q.orderBy) {
    order.push_back({{"e", expr_json(o.expr)}, {"desc", o.direction == SortDirection::Desc}});
  }
  return {{"select", items}, {"from", q.fromTables}, {"joins", joins}, {"where", expr_json(q.where)},
          {"groupBy", exprs_json(q.groupBy)}, {"orderBy", order}, {"distinct", q.distinct}};
}

SelectQuery query_from(const json& j) {
  SelectQuery q;
  for (const auto& i : j.at("select")) {
    SelectItem item;
    item.kind = enum_from(i.at("kind").get<std::string>(),
                          {SelectItem::Kind::Star, SelectItem::Kind::Expr, SelectItem::Kind::CountStar,
                           SelectItem::Kind::Sum},
                          [](SelectItem::Kind k) { return std::string_view(item_kind(k)); }, "select item");
    item.expr = expr_from(i.at("e"));
    item.alias = i.value("alias", "");
    q.selectList.push_back(std::move(item));
  }
  q.fromTables = j.at("from").get<std::vector<std::string>>();
  for (const auto& jn : j.at("joins")) {
    JoinClause c;
    c.kind = enum_from(jn.at("kind").get<std::string>(), {JoinKind::Inner, JoinKind::Left, JoinKind::Cross},
                       [](JoinKind k) { return std::string_view(join_kind(k)); }, "join");
    c.table = jn.at("table").get<std::string>();
    c.on = expr_from(jn.at("on"));
    q.joins.push_back(std::move(c));
  }
  q.where = expr_from(j.at("where"));
  q.groupBy = exprs_from(j.at("groupBy"));
  for (const auto& o : j.at("orderBy")) {
    q.orderBy.push_back({expr_from(o.at("e")), o.at("desc").get<bool>() ? SortDirection::Desc : SortDirection::Asc});
  }
  q.distinct = j.value("distinct", false);
  return q;
}

json table_json(const TableDef& t) {
  json cols = json::array();
  for (const auto& c : t.columns) {
    json cj = {{"name", c.name}, {"type", c.declaredType}, {"unique", c.unique}, {"pk", c.primaryKey}};
    cj["collate"] = c.collation ? json(collation_name(*c.collation)) : json(nullptr);
    cols.push_back(cj);
  }
  return {{"name", t.name}, {"columns", cols}};
}

TableDef table_from(const json& j) {
  TableDef t;
  t.name = j.at("name").get<std::string>();
  for (const auto& cj : j.at("columns")) {
    ColumnDef c;
    c.name = cj.at("name").get<std::string>();
    c.declaredType = cj.at("type").get<std::string>();
    c.unique = cj.at("unique").get<bool>();
    c.primaryKey = cj.at("pk").get<bool>();
    if (!cj.at("collate").is_null()) c.collation = parse_collation(cj.at("collate").get<std::string>());
    t.columns.push_back(std::move(c));
  }
  return t;
}

json statement_json(const Statement& s) {
  return std::visit(
      detail::overloaded{
          [](const CreateTable& c) -> json { return {{"stmt", "create_table"}, {"table", table_json(c.table)}}; },
          [](const CreateIndex& c) -> json {
            return {{"stmt", "create_index"}, {"name", c.index.name}, {"table", c.index.table},
                    {"keys", exprs_json(c.index.keys)}, {"unique", c.index.unique},
                    {"where", expr_json(c.index.where)}};
          },
          [](const Insert& i) -> json {
            json rows = json::array();
            for (const auto& r : i.rows) rows.push_back(exprs_json(r));
            return {{"stmt", "insert"}, {"table", i.table}, {"columns", i.columns}, {"rows", rows}};
          },
          [](const Update& u) -> json {
            json as = json::array();
            for (const auto& a : u.assignments) as.push_back({{"column", a.column}, {"value", expr_json(a.value)}});
            return {{"stmt", "update"}, {"table", u.table}, {"set", as}, {"where", expr_json(u.where)}};
          },
          [](const Delete& d) -> json {
            return {{"stmt", "delete"}, {"table", d.table}, {"where", expr_json(d.where)}};
          },
          [](const Select& s) -> json { return {{"stmt", "select"}, {"query", query_json(s.query)}}; },
          [](const SumOfCounts& s) -> json {
            return {{"stmt", "sum_of_counts"}, {"inner", query_json(s.inner)}, {"perGroup", s.perGroup},
                    {"cast", s.castToInt}};
          },
      },
      s);
}

Statement statement_from(const json& j) {
  const std::string k = j.at("stmt").get<std::string>();
  if (k == "create_table") return CreateTable{table_from(j.at("table"))};
  if (k == "create_index") {
    IndexDef idx;
    idx.name = j.at("name").get<std::string>();
    idx.table = j.at("table").get<std::string>();
    idx.keys = exprs_from(j.at("keys"));
    idx.unique = j.at("unique").get<bool>();
    idx.where = expr_from(j.at("where"));
    return CreateIndex{idx};
  }
  if (k == "insert") {
    Insert i;
    i.table = j.at("table").get<std::string>();
    i.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) i.rows.push_back(exprs_from(r));
    return i;
  }
  if (k == "update") {
    Update u;
    u.table = j.at("table").get<std::string>();
    for (const auto& a : j.at("set")) u.assignments.push_back({a.at("column").get<std::string>(), expr_from(a.at("value"))});
    u.where = expr_from(j.at("where"));
    return u;
  }
  if (k == "delete") return Delete{j.at("table").get<std::string>(), expr_from(j.at("where"))};
  if (k == "select") return Select{query_from(j.at("query"))};
  if (k == "sum_of_counts") {
    return SumOfCounts{query_from(j.at("inner")), j.at("perGroup").get<bool>(), j.at("cast").get<bool>()};
  }
  bad("statement kind '" + k + "'");
}

template <class F>
auto guarded(std::string_view text, F f) {
  try {
    return f(json::parse(text));
  } catch (const json::exception& e) {
    throw SerializeError(e.what());
  }
}

}  // namespace

std::string serialize_expression(const ExprPtr& e) { return expr_json(e).dump(); }
ExprPtr deserialize_expression(std::string_view text) {
  return guarded(text, [](const json& j) { return expr_from(j); });
}

std::string serialize_statement(const Statement& s) { return statement_json(s).dump(); }
Statement deserialize_statement(std::string_view text) {
  return guarded(text, [](const json& j) { return statement_from(j); });
}

std::string serialize_query(const SelectQuery& q) { return query_json(q).dump(); }
SelectQuery deserialize_query(std::string_view text) {
  return guarded(text, [](const json& j) { return query_from(j); });
}

std::string serialize_result(const EngineResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr = json::array();
    for (const auto& v : row) jr.push_back(value_json(v));
    rows.push_back(jr);
  }
  return json{{"status", status_name(r.status)}, {"columns", r.columns}, {"rows", rows}, {"message", r.message}}
      .dump();
}

EngineResult deserialize_result(std::string_view text) {
  return guarded(text, [](const json& j) {
    EngineResult r;
    r.status = enum_from(j.at("status").get<std::string>(),
                         {EngineResult::Status::Rows, EngineResult::Status::Error, EngineResult::Status::Crash,
                          EngineResult::Status::Timeout},
                         [](EngineResult::Status s) { return status_name(s); }, "status");
    r.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& jr : j.at("rows")) {
      Row row;
      for (const auto& v : jr) row.push_back(value_from(v));
      r.rows.push_back(std::move(row));
    }
    r.message = j.at("message").get<std::string>();
    return r;
  });
}

std::string serialize_testcase(const TestCase& tc, int indent) {
  json setup = json::array();
  for (const auto& s : tc.setupStatements) setup.push_back(statement_json(s));
  json j = {{"setup", setup},
            {"query", tc.query ? query_json(*tc.query) : json(nullptr)},
            {"dialect", tc.dialect},
            {"seed", tc.seed},
            {"verdictClass", verdict_class_name(tc.verdictClass)},
            {"errorClass", tc.errorClass},
            {"strategy", strategy_name(tc.strategy)},
            {"contentMode", tc.contentMode}};
  return j.dump(indent);
}

TestCase deserialize_testcase(std::string_view text) {
  return guarded(text, [](const json& j) {
    TestCase tc;
    for (const auto& s : j.at("setup")) tc.setupStatements.push_back(statement_from(s));
    if (!j.at("query").is_null()) tc.query = query_from(j.at("query"));
    tc.dialect = j.at("dialect").get<std::string>();
    tc.seed = j.at("seed").get<std::uint64_t>();
    auto vc = parse_verdict_class(j.at("verdictClass").get<std::string>());
    if (!vc) bad("verdict class");
    tc.verdictClass = *vc;
    tc.errorClass = j.value("errorClass", "");
    tc.strategy = enum_from(j.at("strategy").get<std::string>(),
                            {CountStrategy::NaiveIteration, CountStrategy::AggregateCount},
                            [](CountStrategy s) { return strategy_name(s); }, "strategy");
    tc.contentMode = j.value("contentMode", false);
    return tc;
  });
}

}  // namespace norec
