#pragma once

#include <memory>
#include <string>
#include <vector>

#include "norec/engine.hpp"

struct sqlite3;

namespace norec {

struct SqliteOptions {
  // Empty: in-memory database. Otherwise the file is removed before opening.
  std::string path;
  std::vector<std::string> pragmas = {"PRAGMA journal_mode=OFF", "PRAGMA synchronous=OFF"};
};

// In-process adapter for the embedded engine. Statements are rendered with
// the embedded dialect and run through prepare/step.
class SqliteEngine final : public Executor {
 public:
  explicit SqliteEngine(SqliteOptions options = {});
  ~SqliteEngine() override;
  SqliteEngine(const SqliteEngine&) = delete;
  SqliteEngine& operator=(const SqliteEngine&) = delete;

  EngineResult execute(const Statement& stmt) override;
  // Raw SQL text, for smoke tests and replays of reproduce.sql files.
  EngineResult execute_sql(const std::string& sql);

  const DialectProfile& dialect() const override { return dialect_; }
  std::string version() const override;
  ExecutorStats stats() const override { return stats_; }

 private:
  SqliteOptions options_;
  DialectProfile dialect_;
  sqlite3* db_ = nullptr;
  ExecutorStats stats_;
};

ExecutorFactory sqlite_factory(SqliteOptions options = {});

}  // namespace norec
