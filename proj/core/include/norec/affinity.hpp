#pragma once

#include <string_view>

#include "norec/value.hpp"

namespace norec {

// Column type affinity of the emulated embedded dialect. `Blob` doubles as
// "no affinity" for expressions that are not column references or casts.
enum class Affinity { Integer, Text, Real, Numeric, Blob };

std::string_view affinity_name(Affinity a);

// Five-class substring rules: INT -> INTEGER; CHAR/CLOB/TEXT -> TEXT;
// BLOB or empty -> BLOB; REAL/FLOA/DOUB -> REAL; anything else -> NUMERIC.
Affinity column_affinity(std::string_view declared_type);

bool is_numeric_affinity(Affinity a);

// Conversion applied when a value is stored into (or compared as) a column
// of the given affinity.
SqlValue apply_affinity(const SqlValue& v, Affinity a);

// Affinity applied to both operands of a binary comparison. Operands that
// carry no affinity are passed as std::nullopt.
std::optional<Affinity> comparison_affinity(std::optional<Affinity> left,
                                            std::optional<Affinity> right);

}  // namespace norec
