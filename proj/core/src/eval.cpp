#include "norec/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "overloaded.hpp"

namespace norec {

using detail::overloaded;

void TableRowBinding::add(const TableDef& table, const std::vector<SqlValue>* row) {
  slots_.push_back({&table, row});
}

std::optional<ColumnView> TableRowBinding::lookup(std::string_view table,
                                                  std::string_view column) const {
  static const SqlValue kNull;
  for (const auto& slot : slots_) {
    if (slot.table->name != table) continue;
    for (size_t i = 0; i < slot.table->columns.size(); ++i) {
      const auto& c = slot.table->columns[i];
      if (c.name != column) continue;
      const SqlValue* v = slot.row ? &(*slot.row)[i] : &kNull;
      return ColumnView{v, column_affinity(c.declaredType), c.collation.value_or(Collation::Binary)};
    }
  }
  return std::nullopt;
}

SqlValue bool_value(bool b, const DialectProfile& d) {
  return d.hasNativeBoolean ? SqlValue::boolean(b) : SqlValue::integer(b ? 1 : 0);
}

namespace {

SqlValue tri(std::optional<bool> t, const DialectProfile& d) {
  if (!t) return SqlValue::null();
  return bool_value(*t, d);
}

std::optional<bool> and3(std::optional<bool> a, std::optional<bool> b) {
  if (a == false || b == false) return false;
  if (!a || !b) return std::nullopt;
  return true;
}

std::optional<bool> or3(std::optional<bool> a, std::optional<bool> b) {
  if (a == true || b == true) return true;
  if (!a || !b) return std::nullopt;
  return false;
}

[[noreturn]] void overflow() { throw EvalError("integer overflow"); }

double as_double(const SqlValue& n) {
  return n.is_integer() ? static_cast<double>(n.as_integer()) : n.as_real();
}

std::int64_t real_to_int(double d) {
  if (std::isnan(d)) return 0;
  if (d <= -9223372036854775808.0) return std::numeric_limits<std::int64_t>::min();
  if (d >= 9223372036854775807.0) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(d);
}

SqlValue arithmetic(BinaryOp op, const SqlValue& lv, const SqlValue& rv, const DialectProfile& d) {
  if (lv.is_null() || rv.is_null()) return SqlValue::null();
  SqlValue a = to_numeric(lv), b = to_numeric(rv);
  auto div_zero = [&]() -> SqlValue {
    if (d.divByZeroYieldsNull) return SqlValue::null();
    throw EvalError("division by zero");
  };
  if (op == BinaryOp::Remainder) {
    std::int64_t x = a.is_integer() ? a.as_integer() : real_to_int(a.as_real());
    std::int64_t y = b.is_integer() ? b.as_integer() : real_to_int(b.as_real());
    if (y == 0) return div_zero();
    std::int64_t r = (y == -1) ? 0 : x % y;
    if (a.is_real() || b.is_real()) return SqlValue::real(static_cast<double>(r));
    return SqlValue::integer(r);
  }
  if (a.is_integer() && b.is_integer()) {
    std::int64_t x = a.as_integer(), y = b.as_integer(), r = 0;
    switch (op) {
      case BinaryOp::Add:
        if (__builtin_add_overflow(x, y, &r)) overflow();
        return SqlValue::integer(r);
      case BinaryOp::Subtract:
        if (__builtin_sub_overflow(x, y, &r)) overflow();
        return SqlValue::integer(r);
      case BinaryOp::Multiply:
        if (__builtin_mul_overflow(x, y, &r)) overflow();
        return SqlValue::integer(r);
      case BinaryOp::Divide:
        if (y == 0) return div_zero();
        if (x == std::numeric_limits<std::int64_t>::min() && y == -1) overflow();
        return SqlValue::integer(x / y);
      default: break;
    }
  }
  double x = as_double(a), y = as_double(b);
  switch (op) {
    case BinaryOp::Add: return SqlValue::real(x + y);
    case BinaryOp::Subtract: return SqlValue::real(x - y);
    case BinaryOp::Multiply: return SqlValue::real(x * y);
    case BinaryOp::Divide:
      if (y == 0.0) return div_zero();
      return SqlValue::real(x / y);
    default: break;
  }
  return SqlValue::null();
}

std::string ascii_map(std::string s, bool to_upper) {
  for (auto& c : s) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x80) c = static_cast<char>(to_upper ? std::toupper(u) : std::tolower(u));
  }
  return s;
}

SqlValue call_function(const FunctionCall& f, const std::vector<SqlValue>& args,
                       const DialectProfile& d) {
  std::string name = ascii_map(f.name, true);
  auto arity = [&](size_t n) {
    if (args.size() != n) throw EvalError("wrong number of arguments to function " + f.name + "()");
  };
  if (!d.permits_function(name)) throw EvalError("no such function: " + f.name);
  if (name == "ABS") {
    arity(1);
    const auto& v = args[0];
    if (v.is_null()) return v;
    if (v.is_integer()) {
      if (v.as_integer() == std::numeric_limits<std::int64_t>::min()) overflow();
      return SqlValue::integer(std::llabs(v.as_integer()));
    }
    if (v.is_real()) return SqlValue::real(std::fabs(v.as_real()));
    if (v.is_boolean()) return SqlValue::integer(v.as_boolean() ? 1 : 0);
    SqlValue n = to_numeric(v);
    return SqlValue::real(std::fabs(as_double(n)));
  }
  if (name == "LENGTH") {
    arity(1);
    if (args[0].is_null()) return args[0];
    SqlValue t = to_text(args[0]);
    std::int64_t n = 0;
    for (unsigned char c : t.as_text()) {
      if ((c & 0xC0) != 0x80) ++n;
    }
    return SqlValue::integer(n);
  }
  if (name == "LOWER" || name == "UPPER") {
    arity(1);
    if (args[0].is_null()) return args[0];
    return SqlValue::text(ascii_map(to_text(args[0]).as_text(), name == "UPPER"));
  }
  throw EvalError("no such function: " + f.name);
}

SqlValue cast_value(const SqlValue& v, const std::string& type) {
  if (v.is_null()) return v;
  Affinity a = column_affinity(type);
  switch (a) {
    case Affinity::Blob: return v;
    case Affinity::Text: return to_text(v);
    case Affinity::Integer: {
      SqlValue n = to_numeric(v);
      if (n.is_integer()) return n;
      return SqlValue::integer(real_to_int(n.as_real()));
    }
    case Affinity::Real: {
      SqlValue n = to_numeric(v);
      return SqlValue::real(as_double(n));
    }
    case Affinity::Numeric: {
      SqlValue n = to_numeric(v);
      return apply_affinity(n, Affinity::Numeric);
    }
  }
  return v;
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

class Evaluator {
 public:
  Evaluator(const RowBinding& b, const DialectProfile& d) : b_(b), d_(d) {}

  SqlValue eval(const Expression& e) const {
    return std::visit(
        overloaded{
            [&](const Constant& c) -> SqlValue {
              if (c.value.is_boolean() && !d_.hasNativeBoolean) {
                return SqlValue::integer(c.value.as_boolean() ? 1 : 0);
              }
              return c.value;
            },
            [&](const ColumnRef& c) -> SqlValue {
              auto view = b_.lookup(c.table, c.column);
              if (!view) throw EvalError("no such column: " + c.table + "." + c.column);
              return *view->value;
            },
            [&](const Unary& u) { return unary(u); },
            [&](const Binary& bin) { return binary(bin); },
            [&](const Between& bt) { return between(bt); },
            [&](const InList& in) { return in_list(in); },
            [&](const FunctionCall& f) {
              std::vector<SqlValue> args;
              args.reserve(f.args.size());
              for (const auto& a : f.args) args.push_back(eval(*a));
              return call_function(f, args, d_);
            },
            [&](const Cast& c) { return cast_value(eval(*c.operand), c.type); },
            [&](const Collate& c) { return eval(*c.operand); },
            [&](const PostfixIs& p) {
              SqlValue v = eval(*p.operand);
              switch (p.kind) {
                case IsKind::True: return bool_value(truth_value(v) == true, d_);
                case IsKind::False: return bool_value(truth_value(v) == false, d_);
                case IsKind::Null: return bool_value(v.is_null(), d_);
                case IsKind::NotNull: return bool_value(!v.is_null(), d_);
              }
              return SqlValue::null();
            },
        },
        e.node);
  }

 private:
  SqlValue unary(const Unary& u) const {
    SqlValue v = eval(*u.operand);
    switch (u.op) {
      case UnaryOp::Not:
        if (v.is_null()) return v;
        return bool_value(!*truth_value(v), d_);
      case UnaryOp::Plus: return v;
      case UnaryOp::Negate: {
        if (v.is_null()) return v;
        SqlValue n = to_numeric(v);
        if (n.is_integer()) {
          if (n.as_integer() == std::numeric_limits<std::int64_t>::min()) overflow();
          return SqlValue::integer(-n.as_integer());
        }
        return SqlValue::real(-n.as_real());
      }
    }
    return SqlValue::null();
  }

  SqlValue binary(const Binary& b) const {
    if (b.op == BinaryOp::And) {
      auto l = truth_value(eval(*b.left));
      if (l == false) return bool_value(false, d_);
      return tri(and3(l, truth_value(eval(*b.right))), d_);
    }
    if (b.op == BinaryOp::Or) {
      auto l = truth_value(eval(*b.left));
      if (l == true) return bool_value(true, d_);
      return tri(or3(l, truth_value(eval(*b.right))), d_);
    }
    SqlValue lv = eval(*b.left);
    SqlValue rv = eval(*b.right);
    if (is_comparison(b.op)) {
      return compare_expressions(b.op, *b.left, *b.right, lv, rv, b_, d_);
    }
    if (is_arithmetic(b.op)) return arithmetic(b.op, lv, rv, d_);
    if (lv.is_null() || rv.is_null()) return SqlValue::null();
    switch (b.op) {
      case BinaryOp::Concat:
        return SqlValue::text(to_text(lv).as_text() + to_text(rv).as_text());
      case BinaryOp::Glob:
        return bool_value(glob_match(to_text(rv).as_text(), to_text(lv).as_text()), d_);
      case BinaryOp::Like:
        return bool_value(like_match(to_text(rv).as_text(), to_text(lv).as_text()), d_);
      default: break;
    }
    return SqlValue::null();
  }

  std::optional<bool> range_test(const Between& bt, const SqlValue& v, const Expression& lo_e,
                                 const SqlValue& lo, const Expression& hi_e,
                                 const SqlValue& hi) const {
    auto ge = truth_value(
        compare_expressions(BinaryOp::GreaterEqual, *bt.value, lo_e, v, lo, b_, d_));
    auto le = truth_value(compare_expressions(BinaryOp::LessEqual, *bt.value, hi_e, v, hi, b_, d_));
    return and3(ge, le);
  }

  SqlValue between(const Between& bt) const {
    SqlValue v = eval(*bt.value);
    SqlValue lo = eval(*bt.low);
    SqlValue hi = eval(*bt.high);
    auto forward = range_test(bt, v, *bt.low, lo, *bt.high, hi);
    if (!bt.symmetric) return tri(forward, d_);
    auto backward = range_test(bt, v, *bt.high, hi, *bt.low, lo);
    return tri(or3(forward, backward), d_);
  }

  SqlValue in_list(const InList& in) const {
    SqlValue v = eval(*in.value);
    if (v.is_null()) return v;
    // Only the left operand's affinity and collation take part.
    std::optional<Affinity> aff = expression_affinity(*in.value, b_, d_);
    Collation coll = expression_collation(*in.value, b_).collation.value_or(Collation::Binary);
    if (aff) v = apply_affinity(v, *aff == Affinity::Text ? Affinity::Text : *aff);
    bool saw_null = false;
    for (const auto& c : in.candidates) {
      SqlValue cv = eval(*c);
      if (cv.is_null()) {
        saw_null = true;
        continue;
      }
      if (aff && *aff != Affinity::Blob) {
        cv = apply_affinity(cv, is_numeric_affinity(*aff) ? Affinity::Numeric : Affinity::Text);
      }
      if (compare_values(v, cv, coll) == 0) return bool_value(true, d_);
    }
    if (saw_null) return SqlValue::null();
    return bool_value(false, d_);
  }

  const RowBinding& b_;
  const DialectProfile& d_;
};

}  // namespace

std::optional<Affinity> expression_affinity(const Expression& e, const RowBinding& binding,
                                            const DialectProfile& d) {
  if (!d.appliesColumnAffinity) return std::nullopt;
  if (auto* c = e.as<ColumnRef>()) {
    auto view = binding.lookup(c->table, c->column);
    if (!view) return std::nullopt;
    return view->affinity;
  }
  if (auto* c = e.as<Cast>()) return column_affinity(c->type);
  if (auto* c = e.as<Collate>()) return expression_affinity(*c->operand, binding, d);
  return std::nullopt;
}

CollationInfo expression_collation(const Expression& e, const RowBinding& binding) {
  if (auto* c = e.as<Collate>()) return {c->collation, true};
  if (auto* c = e.as<ColumnRef>()) {
    auto view = binding.lookup(c->table, c->column);
    if (!view) return {};
    return {view->collation, false};
  }
  if (auto* c = e.as<Cast>()) return expression_collation(*c->operand, binding);
  if (auto* u = e.as<Unary>(); u && u->op == UnaryOp::Plus) {
    return expression_collation(*u->operand, binding);
  }
  return {};
}

Collation resolve_collation(const Expression& left, const Expression& right,
                            const RowBinding& binding) {
  CollationInfo l = expression_collation(left, binding);
  CollationInfo r = expression_collation(right, binding);
  if (l.isExplicit) return *l.collation;
  if (r.isExplicit) return *r.collation;
  if (l.collation) return *l.collation;
  if (r.collation) return *r.collation;
  return Collation::Binary;
}

SqlValue compare_expressions(BinaryOp op, const Expression& left, const Expression& right,
                             const SqlValue& lv, const SqlValue& rv, const RowBinding& binding,
                             const DialectProfile& d) {
  if (lv.is_null() || rv.is_null()) return SqlValue::null();
  SqlValue a = lv, b = rv;
  if (d.appliesColumnAffinity) {
    auto aff = comparison_affinity(expression_affinity(left, binding, d),
                                   expression_affinity(right, binding, d));
    if (aff) {
      a = apply_affinity(a, *aff);
      b = apply_affinity(b, *aff);
    }
  }
  int cmp = compare_values(a, b, resolve_collation(left, right, binding));
  return bool_value(holds(cmp, op), d);
}

namespace {

// Matches a [...] class starting at pattern[i] (just past '['). Advances i past
// the closing ']'. Returns whether `c` is in the class.
bool glob_class(std::string_view p, size_t& i, unsigned char c, bool& ok) {
  bool negate = false;
  bool found = false;
  if (i < p.size() && p[i] == '^') {
    negate = true;
    ++i;
  }
  bool first = true;
  unsigned char prev = 0;
  while (i < p.size() && (first || p[i] != ']')) {
    auto ch = static_cast<unsigned char>(p[i]);
    if (ch == '-' && !first && i + 1 < p.size() && p[i + 1] != ']' && prev) {
      auto hi = static_cast<unsigned char>(p[i + 1]);
      if (c >= prev && c <= hi) found = true;
      prev = 0;
      i += 2;
      first = false;
      continue;
    }
    if (ch == c) found = true;
    prev = ch;
    ++i;
    first = false;
  }
  if (i >= p.size()) {
    ok = false;
    return false;
  }
  ++i;  // ']'
  ok = true;
  return found != negate;
}

bool glob_from(std::string_view p, size_t pi, std::string_view s, size_t si) {
  while (pi < p.size()) {
    char pc = p[pi];
    if (pc == '*') {
      while (pi < p.size() && (p[pi] == '*' || p[pi] == '?')) {
        if (p[pi] == '?') {
          if (si >= s.size()) return false;
          ++si;
        }
        ++pi;
      }
      if (pi == p.size()) return true;
      for (size_t k = si; k <= s.size(); ++k) {
        if (glob_from(p, pi, s, k)) return true;
      }
      return false;
    }
    if (si >= s.size()) return false;
    if (pc == '?') {
      ++pi;
      ++si;
      continue;
    }
    if (pc == '[') {
      size_t j = pi + 1;
      bool ok = false;
      bool in = glob_class(p, j, static_cast<unsigned char>(s[si]), ok);
      if (!ok || !in) return false;
      pi = j;
      ++si;
      continue;
    }
    if (pc != s[si]) return false;
    ++pi;
    ++si;
  }
  return si == s.size();
}

char fold(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c;
}

bool like_from(std::string_view p, size_t pi, std::string_view s, size_t si) {
  while (pi < p.size()) {
    char pc = p[pi];
    if (pc == '%') {
      while (pi < p.size() && (p[pi] == '%' || p[pi] == '_')) {
        if (p[pi] == '_') {
          if (si >= s.size()) return false;
          ++si;
        }
        ++pi;
      }
      if (pi == p.size()) return true;
      for (size_t k = si; k <= s.size(); ++k) {
        if (like_from(p, pi, s, k)) return true;
      }
      return false;
    }
    if (si >= s.size()) return false;
    if (pc != '_' && fold(pc) != fold(s[si])) return false;
    ++pi;
    ++si;
  }
  return si == s.size();
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view text) {
  return glob_from(pattern, 0, text, 0);
}

bool like_match(std::string_view pattern, std::string_view text) {
  return like_from(pattern, 0, text, 0);
}

SqlValue eval_expression(const Expression& expr, const RowBinding& binding,
                         const DialectProfile& dialect) {
  return Evaluator(binding, dialect).eval(expr);
}

}  // namespace norec
