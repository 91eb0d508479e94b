#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "norec/fingerprint.hpp"

namespace norec {

std::string utc_timestamp();

// reproduce.sql text: the setup statements, then the failing statement(s),
// one per line, with a trailing count comment for optimization bugs.
std::string reproduce_sql(const Finding& f);

// Creates <outDir>/<fingerprint>/ with reproduce.sql, meta.json and
// testcase.json, plus raw/<fingerprint>.json. A second finding with the same
// fingerprint only bumps the occurrence counter. `configEcho` is a JSON
// object text stored verbatim in meta.json. Throws std::filesystem_error or
// std::runtime_error on IO failure.
std::filesystem::path write_report(const Finding& f, const std::filesystem::path& outDir,
                                   const std::string& configEcho = "{}");

// Replaces the persisted representative of an existing fingerprint without
// touching its counter.
void overwrite_report(const Finding& f, const std::filesystem::path& outDir,
                      const std::string& configEcho = "{}");

struct ReportMeta {
  std::string kind;
  std::string fingerprint;
  std::string backend;
  std::string injection;
  std::string verdictClass;
  std::uint64_t occurrences = 0;
  std::optional<std::int64_t> optimizedCount;
  std::optional<std::int64_t> unoptimizedCount;
};

ReportMeta read_meta(const std::filesystem::path& findingDir);

// Finding directories below `dir` (or `dir` itself when it holds a
// testcase.json).
std::vector<std::filesystem::path> finding_dirs(const std::filesystem::path& dir);

}  // namespace norec
