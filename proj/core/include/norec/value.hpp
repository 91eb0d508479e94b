#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace norec {

enum class StorageClass { Null, Integer, Real, Text, Boolean };

enum class Collation { Binary, NoCase };

std::string_view collation_name(Collation c);
std::optional<Collation> parse_collation(std::string_view name);

// A single SQL value. Booleans only appear under dialects with a native
// boolean type; elsewhere truth values are Integer 0/1.
class SqlValue {
 public:
  SqlValue() = default;

  static SqlValue null() { return {}; }
  static SqlValue integer(std::int64_t v) { return SqlValue(Repr(v)); }
  static SqlValue real(double v) { return SqlValue(Repr(v)); }
  static SqlValue text(std::string v) { return SqlValue(Repr(std::move(v))); }
  static SqlValue boolean(bool v) { return SqlValue(Repr(v)); }

  StorageClass storage_class() const {
    return static_cast<StorageClass>(repr_.index());
  }
  bool is_null() const { return repr_.index() == 0; }
  bool is_integer() const { return repr_.index() == 1; }
  bool is_real() const { return repr_.index() == 2; }
  bool is_text() const { return repr_.index() == 3; }
  bool is_boolean() const { return repr_.index() == 4; }
  bool is_numeric() const { return is_integer() || is_real(); }

  std::int64_t as_integer() const { return std::get<std::int64_t>(repr_); }
  double as_real() const { return std::get<double>(repr_); }
  const std::string& as_text() const { return std::get<std::string>(repr_); }
  bool as_boolean() const { return std::get<bool>(repr_); }

  // Exact structural equality: Integer 1 and Real 1.0 differ.
  bool operator==(const SqlValue&) const = default;

  // NULL, 1, 1.5, 'a''b', TRUE. Not dialect-aware; use render for SQL text.
  std::string debug_string() const;

 private:
  using Repr = std::variant<std::monostate, std::int64_t, double, std::string, bool>;
  explicit SqlValue(Repr r) : repr_(std::move(r)) {}
  Repr repr_;
};

// Total order over values by storage class then payload. Used for multiset
// comparisons of result rows, not for SQL comparison semantics.
bool structural_less(const SqlValue& a, const SqlValue& b);

// --- SQL value semantics of the emulated embedded dialect ------------------

// Text form of a REAL the way the embedded engine prints it (1.0, 1.0e+20).
std::string real_to_text(double v);

std::ostream& operator<<(std::ostream& out, const SqlValue& v);

// Text conversion used by ||, LENGTH, GLOB and TEXT affinity. NULL stays NULL.
SqlValue to_text(const SqlValue& v);

// Parses a complete numeric literal, ignoring surrounding whitespace.
// Returns nullopt when the text is not entirely numeric.
std::optional<SqlValue> parse_numeric_text(std::string_view text);

// Longest-numeric-prefix conversion used by arithmetic and truth tests:
// '12abc' -> 12, 'abc' -> 0, ' 2' -> 2.
SqlValue numeric_prefix(std::string_view text);

// Numeric view of any non-NULL value (booleans become 0/1).
SqlValue to_numeric(const SqlValue& v);

// nullopt for NULL, otherwise whether the value is non-zero.
std::optional<bool> truth_value(const SqlValue& v);

// Three-way comparison of two non-NULL values: numbers < text. Integers and
// reals compare exactly.
int compare_values(const SqlValue& a, const SqlValue& b, Collation collation);

// Compare two text values under a collation.
int compare_text(std::string_view a, std::string_view b, Collation collation);

int compare_int_real(std::int64_t i, double r);

}  // namespace norec
