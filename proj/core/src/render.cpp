#include "norec/render.hpp"

#include <cmath>
#include <cstdio>

#include "overloaded.hpp"

namespace norec {

using detail::overloaded;

namespace {

bool is_control(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x20 || u == 0x7f;
}

std::string quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "''";
    else out += c;
  }
  return out + "'";
}

std::string render_text(const std::string& s, const DialectProfile& d) {
  bool has_control = false;
  for (char c : s) has_control = has_control || is_control(c);
  if (!has_control) return quote(s);
  if (d.controlCharsViaCharFunction) {
    // 'a' || char(10) || '2'
    std::string out = "(";
    std::string run;
    bool first = true;
    auto emit = [&](const std::string& piece) {
      if (!first) out += " || ";
      out += piece;
      first = false;
    };
    for (char c : s) {
      if (is_control(c)) {
        if (!run.empty()) emit(quote(run));
        run.clear();
        emit("char(" + std::to_string(static_cast<unsigned char>(c)) + ")");
      } else {
        run += c;
      }
    }
    if (!run.empty()) emit(quote(run));
    return out + ")";
  }
  std::string out = "E'";
  for (char c : s) {
    switch (c) {
      case '\'': out += "''"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (is_control(c)) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\x%02x", static_cast<unsigned char>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "'";
}

std::string render_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

class Renderer {
 public:
  Renderer(const DialectProfile& d, bool qualify) : d_(d), qualify_(qualify) {}

  std::string expr(const ExprPtr& e) const {
    if (!e) throw std::invalid_argument("render: null expression");
    return std::visit(
        overloaded{
            [&](const Constant& c) { return render_value(c.value, d_); },
            [&](const ColumnRef& c) { return qualify_ ? c.table + "." + c.column : c.column; },
            [&](const Unary& u) {
              switch (u.op) {
                case UnaryOp::Not: return "(NOT " + expr(u.operand) + ")";
                case UnaryOp::Negate: return "(- " + expr(u.operand) + ")";
                case UnaryOp::Plus: return "(+ " + expr(u.operand) + ")";
              }
              return std::string();
            },
            [&](const Binary& b) {
              if (b.op == BinaryOp::Glob && !d_.hasGlob) {
                throw UnsupportedFeature("GLOB is not available in dialect " + d_.name);
              }
              return "(" + expr(b.left) + " " + std::string(op_symbol(b.op)) + " " +
                     expr(b.right) + ")";
            },
            [&](const Between& b) {
              if (b.symmetric && !d_.hasBetweenSymmetric) {
                throw UnsupportedFeature("BETWEEN SYMMETRIC is not available in dialect " +
                                         d_.name);
              }
              return "(" + expr(b.value) + (b.symmetric ? " BETWEEN SYMMETRIC " : " BETWEEN ") +
                     expr(b.low) + " AND " + expr(b.high) + ")";
            },
            [&](const InList& in) {
              std::string out = "(" + expr(in.value) + " IN (";
              for (size_t i = 0; i < in.candidates.size(); ++i) {
                if (i) out += ", ";
                out += expr(in.candidates[i]);
              }
              return out + "))";
            },
            [&](const FunctionCall& f) {
              std::string out = f.name + "(";
              for (size_t i = 0; i < f.args.size(); ++i) {
                if (i) out += ", ";
                out += expr(f.args[i]);
              }
              return out + ")";
            },
            [&](const Cast& c) { return "CAST(" + expr(c.operand) + " AS " + c.type + ")"; },
            [&](const Collate& c) {
              if (c.collation == Collation::NoCase && !d_.hasCollateNocase) {
                throw UnsupportedFeature("COLLATE NOCASE is not available in dialect " + d_.name);
              }
              return "(" + expr(c.operand) + " COLLATE " + std::string(collation_name(c.collation)) +
                     ")";
            },
            [&](const PostfixIs& p) {
              return "(" + expr(p.operand) + " " + std::string(is_kind_name(p.kind)) + ")";
            },
        },
        e->node);
  }

 private:
  const DialectProfile& d_;
  bool qualify_;
};

std::string item_text(const SelectItem& item, const Renderer& r) {
  std::string out;
  switch (item.kind) {
    case SelectItem::Kind::Star: return "*";
    case SelectItem::Kind::CountStar: out = "COUNT(*)"; break;
    case SelectItem::Kind::Expr: out = r.expr(item.expr); break;
    case SelectItem::Kind::Sum: out = "SUM(" + r.expr(item.expr) + ")"; break;
  }
  if (!item.alias.empty()) out += " AS " + item.alias;
  return out;
}

std::string column_def(const ColumnDef& c, const DialectProfile& d) {
  std::string out = c.name;
  if (!c.declaredType.empty()) out += " " + c.declaredType;
  if (c.primaryKey) out += " PRIMARY KEY";
  if (c.unique) out += " UNIQUE";
  if (c.collation) {
    if (*c.collation == Collation::NoCase && !d.hasCollateNocase) {
      throw UnsupportedFeature("COLLATE NOCASE is not available in dialect " + d.name);
    }
    out += " COLLATE " + std::string(collation_name(*c.collation));
  }
  return out;
}

}  // namespace

std::string render_value(const SqlValue& v, const DialectProfile& d) {
  switch (v.storage_class()) {
    case StorageClass::Null: return "NULL";
    case StorageClass::Integer: return std::to_string(v.as_integer());
    case StorageClass::Real: return render_real(v.as_real());
    case StorageClass::Text: return render_text(v.as_text(), d);
    case StorageClass::Boolean:
      if (d.hasNativeBoolean) return v.as_boolean() ? "TRUE" : "FALSE";
      return v.as_boolean() ? "1" : "0";
  }
  return "NULL";
}

std::string render_expression(const ExprPtr& expr, const DialectProfile& dialect, bool qualify) {
  return Renderer(dialect, qualify).expr(expr);
}

std::string render_query(const SelectQuery& q, const DialectProfile& d) {
  Renderer r(d, true);
  std::string out = q.distinct ? "SELECT DISTINCT " : "SELECT ";
  for (size_t i = 0; i < q.selectList.size(); ++i) {
    if (i) out += ", ";
    out += item_text(q.selectList[i], r);
  }
  if (!q.fromTables.empty() || !q.joins.empty()) {
    out += " FROM ";
    for (size_t i = 0; i < q.fromTables.size(); ++i) {
      if (i) out += ", ";
      out += q.fromTables[i];
    }
    for (const auto& j : q.joins) {
      switch (j.kind) {
        case JoinKind::Inner: out += " JOIN " + j.table + " ON " + r.expr(j.on); break;
        case JoinKind::Left: out += " LEFT JOIN " + j.table + " ON " + r.expr(j.on); break;
        case JoinKind::Cross: out += " CROSS JOIN " + j.table; break;
      }
    }
  }
  if (q.where) out += " WHERE " + r.expr(q.where);
  if (!q.groupBy.empty()) {
    out += " GROUP BY ";
    for (size_t i = 0; i < q.groupBy.size(); ++i) {
      if (i) out += ", ";
      out += r.expr(q.groupBy[i]);
    }
  }
  if (!q.orderBy.empty()) {
    out += " ORDER BY ";
    for (size_t i = 0; i < q.orderBy.size(); ++i) {
      if (i) out += ", ";
      out += r.expr(q.orderBy[i].expr);
      out += q.orderBy[i].direction == SortDirection::Asc ? " ASC" : " DESC";
    }
  }
  return out;
}

std::string render_statement(const Statement& stmt, const DialectProfile& d) {
  Renderer qualified(d, true);
  Renderer bare(d, false);
  return std::visit(
      overloaded{
          [&](const CreateTable& s) {
            std::string out = "CREATE TABLE " + s.table.name + "(";
            for (size_t i = 0; i < s.table.columns.size(); ++i) {
              if (i) out += ", ";
              out += column_def(s.table.columns[i], d);
            }
            return out + ");";
          },
          [&](const CreateIndex& s) {
            const auto& ix = s.index;
            std::string out = ix.unique ? "CREATE UNIQUE INDEX " : "CREATE INDEX ";
            out += ix.name + " ON " + ix.table + "(";
            for (size_t i = 0; i < ix.keys.size(); ++i) {
              if (i) out += ", ";
              out += bare.expr(ix.keys[i]);
            }
            out += ")";
            if (ix.where) {
              if (!d.hasPartialIndexes) {
                throw UnsupportedFeature("partial indexes are not available in dialect " + d.name);
              }
              out += " WHERE " + bare.expr(ix.where);
            }
            return out + ";";
          },
          [&](const Insert& s) {
            std::string out = "INSERT INTO " + s.table;
            if (!s.columns.empty()) {
              out += "(";
              for (size_t i = 0; i < s.columns.size(); ++i) {
                if (i) out += ", ";
                out += s.columns[i];
              }
              out += ")";
            }
            out += " VALUES ";
            for (size_t r = 0; r < s.rows.size(); ++r) {
              if (r) out += ", ";
              out += "(";
              for (size_t i = 0; i < s.rows[r].size(); ++i) {
                if (i) out += ", ";
                out += qualified.expr(s.rows[r][i]);
              }
              out += ")";
            }
            return out + ";";
          },
          [&](const Update& s) {
            std::string out = "UPDATE " + s.table + " SET ";
            for (size_t i = 0; i < s.assignments.size(); ++i) {
              if (i) out += ", ";
              out += s.assignments[i].column + " = " + qualified.expr(s.assignments[i].value);
            }
            if (s.where) out += " WHERE " + qualified.expr(s.where);
            return out + ";";
          },
          [&](const Delete& s) {
            std::string out = "DELETE FROM " + s.table;
            if (s.where) out += " WHERE " + qualified.expr(s.where);
            return out + ";";
          },
          [&](const Select& s) { return render_query(s.query, d) + ";"; },
          [&](const SumOfCounts& s) {
            std::string indicator = s.perGroup ? "(count > 0)" : "count";
            if (s.castToInt && s.perGroup) indicator = "CAST(" + indicator + " AS INT)";
            std::string out = "SELECT SUM(" + indicator + ") FROM (" + render_query(s.inner, d) + ")";
            if (d.derivedTableNeedsAlias) out += " AS norec_counts";
            return out + ";";
          },
      },
      stmt);
}

}  // namespace norec
