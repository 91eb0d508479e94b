#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "norec/oracle.hpp"
#include "norec/testcase.hpp"

namespace norec {

enum class FindingKind { OptimizationBug, ErrorBug, CrashBug, Hang };

std::string_view finding_kind_name(FindingKind k);

struct Finding {
  FindingKind kind = FindingKind::OptimizationBug;
  std::string fingerprint;
  TestCase testCase;  // reduced when reduction ran
  TestCase raw;       // as found
  std::optional<OracleVerdict> verdict;
  std::optional<EngineFault> fault;
  std::string errorMessage;
  std::string injection;  // empty when none
  std::string engineVersion;
  std::string backend;
  std::string firstSeen;
  std::uint64_t databaseIndex = 0;
  std::uint64_t checkIndex = 0;
  bool reduced = false;
};

// Sorted operator names of the failing predicate (or failing statement),
// ignoring identifiers and constants.
std::string operator_signature(const Finding& f);

// 16 hex digits: FNV-1a over kind, operator signature, error class and
// injection name.
std::string fingerprint(const Finding& f);

}  // namespace norec
