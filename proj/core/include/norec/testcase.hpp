#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "norec/ast.hpp"
#include "norec/engine.hpp"
#include "norec/oracle.hpp"

namespace norec {

enum class VerdictClass { Discrepancy, UnexpectedError, Crash };

std::string_view verdict_class_name(VerdictClass v);
std::optional<VerdictClass> parse_verdict_class(std::string_view name);

// Message with identifiers, numbers and quoted text removed, so that
// "no such column: t0.c1" and "no such column: t3.c0" share a class.
std::string error_class(std::string_view message);

struct TestCase {
  std::vector<Statement> setupStatements;
  // Absent when the failure happens while executing a setup statement.
  std::optional<SelectQuery> query;
  std::string dialect = "sqlite";
  std::uint64_t seed = 0;
  VerdictClass verdictClass = VerdictClass::Discrepancy;
  std::string errorClass;  // UnexpectedError only
  CountStrategy strategy = CountStrategy::NaiveIteration;
  bool contentMode = false;
};

struct ReplayOutcome {
  std::optional<VerdictClass> observed;  // nullopt: nothing wrong observed
  std::string errorClass;
  std::optional<size_t> failingStatement;  // index into setupStatements
  std::optional<CheckResult> check;
  std::string message;
};

// Runs the setup statements and then the oracle check on a fresh executor.
ReplayOutcome replay(const TestCase& tc, const ExecutorFactory& factory);
bool reproduces(const TestCase& tc, const ReplayOutcome& outcome);
bool reproduces(const TestCase& tc, const ExecutorFactory& factory);

}  // namespace norec
