#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "norec/ast.hpp"
#include "norec/engine.hpp"
#include "norec/testcase.hpp"

namespace norec {

class SerializeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON encodings of ASTs and results. Round trips are exact, including the
// storage class of every value.
std::string serialize_expression(const ExprPtr& e);
ExprPtr deserialize_expression(std::string_view json);

std::string serialize_statement(const Statement& s);
Statement deserialize_statement(std::string_view json);

std::string serialize_query(const SelectQuery& q);
SelectQuery deserialize_query(std::string_view json);

std::string serialize_result(const EngineResult& r);
EngineResult deserialize_result(std::string_view json);

std::string serialize_testcase(const TestCase& tc, int indent = 2);
TestCase deserialize_testcase(std::string_view json);

}  // namespace norec
