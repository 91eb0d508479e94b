#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "norec/fingerprint.hpp"
#include "norec/generator.hpp"
#include "norec/reducer.hpp"
#include "norec/toy_engine.hpp"

namespace norec {

enum class OracleMode { Count, Content };

std::string_view oracle_mode_name(OracleMode m);
std::optional<OracleMode> parse_oracle_mode(std::string_view name);

struct CampaignConfig {
  std::string backend = "toy";  // toy | embedded
  std::optional<BugInjection> injection;
  OracleMode oracleMode = OracleMode::Count;
  std::uint64_t seed = 0;
  std::uint64_t queriesPerDatabase = 100;
  std::uint64_t databases = 100;
  int workers = 1;
  std::string outputDir = "norec-out";  // empty: keep findings in memory only
  std::chrono::milliseconds perQueryTimeout{10000};
  GenConfig gen;

  double durationSeconds = 0;      // > 0: stop starting work after this long
  std::uint64_t stopAfterFindings = 0;  // > 0: stop once this many unique findings exist
  bool reduce = true;
  bool isolate = false;            // embedded backend in a child process
  ReduceOptions reduceOptions;

  // Throws std::invalid_argument.
  void validate() const;
  std::string to_json() const;
};

struct CampaignSummary {
  std::uint64_t databases = 0;
  std::uint64_t checks = 0;
  std::uint64_t consistent = 0;
  std::uint64_t discrepancies = 0;
  std::uint64_t skippedExpectedError = 0;
  std::uint64_t skippedTimeout = 0;
  std::uint64_t unexpectedErrors = 0;
  std::uint64_t crashes = 0;
  std::uint64_t setupStatements = 0;
  std::uint64_t setupRejected = 0;       // expected errors on setup statements
  std::uint64_t statementsIssued = 0;    // as counted by the executor
  std::uint64_t rejectedAtPrepare = 0;
  std::uint64_t reportErrors = 0;
  double seconds = 0;
  std::vector<Finding> findings;  // unique, ordered by fingerprint
  std::map<std::string, std::uint64_t> occurrences;

  double throughput() const { return seconds > 0 ? static_cast<double>(checks) / seconds : 0; }
  // Share of issued statements accepted by the engine's parser; 1 when the
  // executor does not track it.
  double syntax_validity() const;
  std::uint64_t findings_of(FindingKind k) const;
  std::string to_text() const;
};

using CampaignLog = std::function<void(const std::string&)>;

CampaignSummary run_campaign(const CampaignConfig& config, const CampaignLog& log = {});

// Executor factory for a backend name. `path` is the database file of the
// embedded backend (empty: in memory).
ExecutorFactory make_factory(const std::string& backend, std::optional<BugInjection> injection,
                             const std::string& path = {}, bool isolate = false);

std::uint64_t database_seed(std::uint64_t campaign_seed, std::uint64_t database_index);

}  // namespace norec
