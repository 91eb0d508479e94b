#include "norec/value.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <ostream>

namespace norec {

std::string_view collation_name(Collation c) {
  switch (c) {
    case Collation::Binary: return "BINARY";
    case Collation::NoCase: return "NOCASE";
  }
  return "BINARY";
}

std::optional<Collation> parse_collation(std::string_view name) {
  auto iequals = [](std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
      char x = a[i], y = b[i];
      if (x >= 'a' && x <= 'z') x = static_cast<char>(x - 'a' + 'A');
      if (y >= 'a' && y <= 'z') y = static_cast<char>(y - 'a' + 'A');
      if (x != y) return false;
    }
    return true;
  };
  if (iequals(name, "BINARY")) return Collation::Binary;
  if (iequals(name, "NOCASE")) return Collation::NoCase;
  return std::nullopt;
}

std::string SqlValue::debug_string() const {
  switch (storage_class()) {
    case StorageClass::Null: return "NULL";
    case StorageClass::Integer: return std::to_string(as_integer());
    case StorageClass::Real: return real_to_text(as_real());
    case StorageClass::Boolean: return as_boolean() ? "TRUE" : "FALSE";
    case StorageClass::Text: {
      std::string out = "'";
      for (char c : as_text()) {
        if (c == '\'') out += "''";
        else if (c == '\n') out += "\\n";
        else out += c;
      }
      return out + "'";
    }
  }
  return {};
}

bool structural_less(const SqlValue& a, const SqlValue& b) {
  if (a.storage_class() != b.storage_class()) {
    return a.storage_class() < b.storage_class();
  }
  switch (a.storage_class()) {
    case StorageClass::Null: return false;
    case StorageClass::Integer: return a.as_integer() < b.as_integer();
    case StorageClass::Real: return a.as_real() < b.as_real();
    case StorageClass::Text: return a.as_text() < b.as_text();
    case StorageClass::Boolean: return a.as_boolean() < b.as_boolean();
  }
  return false;
}

std::string real_to_text(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  std::string s = buf;
  auto e = s.find('e');
  if (e != std::string::npos) {
    if (s.substr(0, e).find('.') == std::string::npos) s.insert(e, ".0");
  } else if (s.find('.') == std::string::npos) {
    s += ".0";
  }
  return s;
}

SqlValue to_text(const SqlValue& v) {
  switch (v.storage_class()) {
    case StorageClass::Null: return v;
    case StorageClass::Integer: return SqlValue::text(std::to_string(v.as_integer()));
    case StorageClass::Real: return SqlValue::text(real_to_text(v.as_real()));
    case StorageClass::Text: return v;
    case StorageClass::Boolean: return SqlValue::text(v.as_boolean() ? "1" : "0");
  }
  return v;
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Length of the longest numeric literal at the start of `s` (no leading
// whitespace), and whether it has integer form.
size_t scan_number(std::string_view s, bool& integer_form) {
  size_t i = 0;
  integer_form = true;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  size_t digits = 0;
  while (i < s.size() && is_digit(s[i])) ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    size_t j = i + 1;
    size_t frac = 0;
    while (j < s.size() && is_digit(s[j])) ++j, ++frac;
    if (digits + frac > 0) {
      integer_form = false;
      i = j;
      digits += frac;
    }
  }
  if (digits == 0) return 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    size_t j = i + 1;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    size_t exp = 0;
    while (j < s.size() && is_digit(s[j])) ++j, ++exp;
    if (exp > 0) {
      integer_form = false;
      i = j;
    }
  }
  return i;
}

SqlValue number_from_literal(std::string_view lit, bool integer_form) {
  std::string buf(lit);
  if (integer_form) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(buf.c_str(), &end, 10);
    if (errno != ERANGE) return SqlValue::integer(v);
  }
  return SqlValue::real(std::strtod(buf.c_str(), nullptr));
}

}  // namespace

std::optional<SqlValue> parse_numeric_text(std::string_view text) {
  size_t b = 0, e = text.size();
  while (b < e && is_space(text[b])) ++b;
  while (e > b && is_space(text[e - 1])) --e;
  std::string_view core = text.substr(b, e - b);
  if (core.empty()) return std::nullopt;
  bool integer_form = true;
  size_t n = scan_number(core, integer_form);
  if (n == 0 || n != core.size()) return std::nullopt;
  return number_from_literal(core, integer_form);
}

SqlValue numeric_prefix(std::string_view text) {
  size_t b = 0;
  while (b < text.size() && is_space(text[b])) ++b;
  std::string_view rest = text.substr(b);
  bool integer_form = true;
  size_t n = scan_number(rest, integer_form);
  if (n == 0) return SqlValue::integer(0);
  return number_from_literal(rest.substr(0, n), integer_form);
}

SqlValue to_numeric(const SqlValue& v) {
  switch (v.storage_class()) {
    case StorageClass::Null: return v;
    case StorageClass::Integer:
    case StorageClass::Real: return v;
    case StorageClass::Text: return numeric_prefix(v.as_text());
    case StorageClass::Boolean: return SqlValue::integer(v.as_boolean() ? 1 : 0);
  }
  return v;
}

std::optional<bool> truth_value(const SqlValue& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_boolean()) return v.as_boolean();
  SqlValue n = to_numeric(v);
  if (n.is_integer()) return n.as_integer() != 0;
  return n.as_real() != 0.0;
}

int compare_int_real(std::int64_t i, double r) {
  if (std::isnan(r)) return 1;
  if (r < -9223372036854775808.0) return 1;
  if (r >= 9223372036854775808.0) return -1;
  auto y = static_cast<std::int64_t>(r);
  if (i < y) return -1;
  if (i > y) return 1;
  auto s = static_cast<double>(i);
  if (s < r) return -1;
  if (s > r) return 1;
  return 0;
}

int compare_text(std::string_view a, std::string_view b, Collation collation) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    auto x = static_cast<unsigned char>(a[i]);
    auto y = static_cast<unsigned char>(b[i]);
    if (collation == Collation::NoCase) {
      if (x >= 'A' && x <= 'Z') x = static_cast<unsigned char>(x + 32);
      if (y >= 'A' && y <= 'Z') y = static_cast<unsigned char>(y + 32);
    }
    if (x != y) return x < y ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

namespace {
int rank(const SqlValue& v) {
  switch (v.storage_class()) {
    case StorageClass::Null: return 0;
    case StorageClass::Integer:
    case StorageClass::Real:
    case StorageClass::Boolean: return 1;
    case StorageClass::Text: return 2;
  }
  return 3;
}
}  // namespace

int compare_values(const SqlValue& a, const SqlValue& b, Collation collation) {
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (ra == 0) return 0;
  if (ra == 2) return compare_text(a.as_text(), b.as_text(), collation);
  SqlValue x = to_numeric(a), y = to_numeric(b);
  if (x.is_integer() && y.is_integer()) {
    return x.as_integer() < y.as_integer() ? -1 : (x.as_integer() > y.as_integer() ? 1 : 0);
  }
  if (x.is_integer()) return compare_int_real(x.as_integer(), y.as_real());
  if (y.is_integer()) return -compare_int_real(y.as_integer(), x.as_real());
  double p = x.as_real(), q = y.as_real();
  return p < q ? -1 : (p > q ? 1 : 0);
}

std::ostream& operator<<(std::ostream& out, const SqlValue& v) { return out << v.debug_string(); }

}  // namespace norec
