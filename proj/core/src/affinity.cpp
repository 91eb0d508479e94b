#include "norec/affinity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace norec {

std::string_view affinity_name(Affinity a) {
  switch (a) {
    case Affinity::Integer: return "INTEGER";
    case Affinity::Text: return "TEXT";
    case Affinity::Real: return "REAL";
    case Affinity::Numeric: return "NUMERIC";
    case Affinity::Blob: return "BLOB";
  }
  return "BLOB";
}

Affinity column_affinity(std::string_view declared_type) {
  std::string upper(declared_type);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  auto has = [&](std::string_view s) { return upper.find(s) != std::string::npos; };
  if (has("INT")) return Affinity::Integer;
  if (has("CHAR") || has("CLOB") || has("TEXT")) return Affinity::Text;
  if (upper.empty() || has("BLOB")) return Affinity::Blob;
  if (has("REAL") || has("FLOA") || has("DOUB")) return Affinity::Real;
  return Affinity::Numeric;
}

bool is_numeric_affinity(Affinity a) {
  return a == Affinity::Integer || a == Affinity::Real || a == Affinity::Numeric;
}

namespace {

// Reals that are exactly integral collapse to INTEGER under NUMERIC and
// INTEGER affinity.
SqlValue integral_real_to_integer(const SqlValue& v) {
  if (!v.is_real()) return v;
  double d = v.as_real();
  if (std::floor(d) == d && d >= -9223372036854775808.0 && d < 9223372036854775808.0) {
    auto i = static_cast<std::int64_t>(d);
    if (static_cast<double>(i) == d) return SqlValue::integer(i);
  }
  return v;
}

}  // namespace

SqlValue apply_affinity(const SqlValue& v, Affinity a) {
  if (v.is_null()) return v;
  switch (a) {
    case Affinity::Blob:
      return v;
    case Affinity::Text:
      return v.is_numeric() || v.is_boolean() ? to_text(v) : v;
    case Affinity::Integer:
    case Affinity::Numeric: {
      if (v.is_text()) {
        auto n = parse_numeric_text(v.as_text());
        if (!n) return v;
        return integral_real_to_integer(*n);
      }
      if (v.is_boolean()) return SqlValue::integer(v.as_boolean() ? 1 : 0);
      return integral_real_to_integer(v);
    }
    case Affinity::Real: {
      SqlValue n = v;
      if (v.is_text()) {
        auto parsed = parse_numeric_text(v.as_text());
        if (!parsed) return v;
        n = *parsed;
      }
      if (n.is_boolean()) n = SqlValue::integer(n.as_boolean() ? 1 : 0);
      if (n.is_integer()) return SqlValue::real(static_cast<double>(n.as_integer()));
      return n;
    }
  }
  return v;
}

std::optional<Affinity> comparison_affinity(std::optional<Affinity> left,
                                            std::optional<Affinity> right) {
  if (left && right) {
    if (is_numeric_affinity(*left) || is_numeric_affinity(*right)) return Affinity::Numeric;
    return std::nullopt;
  }
  std::optional<Affinity> only = left ? left : right;
  if (!only) return std::nullopt;
  // A lone TEXT or numeric affinity is applied to the other operand; a lone
  // BLOB affinity converts nothing.
  if (*only == Affinity::Blob) return std::nullopt;
  if (is_numeric_affinity(*only)) return Affinity::Numeric;
  return Affinity::Text;
}

}  // namespace norec
