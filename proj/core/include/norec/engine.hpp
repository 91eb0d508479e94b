#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "norec/ast.hpp"
#include "norec/dialect.hpp"
#include "norec/value.hpp"

namespace norec {

using Row = std::vector<SqlValue>;

struct EngineResult {
  enum class Status { Rows, Error, Crash, Timeout };

  Status status = Status::Rows;
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::string message;

  static EngineResult ok(std::vector<std::string> columns = {}, std::vector<Row> rows = {}) {
    return {Status::Rows, std::move(columns), std::move(rows), {}};
  }
  static EngineResult error(std::string message) {
    return {Status::Error, {}, {}, std::move(message)};
  }
  static EngineResult crash(std::string message) {
    return {Status::Crash, {}, {}, std::move(message)};
  }
  static EngineResult timeout() { return {Status::Timeout, {}, {}, "timeout"}; }

  bool is_rows() const { return status == Status::Rows; }
  bool is_error() const { return status == Status::Error; }
  bool is_crash() const { return status == Status::Crash; }
  bool is_timeout() const { return status == Status::Timeout; }
};

std::string_view status_name(EngineResult::Status s);

// Counters kept by executors that talk to a real engine.
struct ExecutorStats {
  std::uint64_t issued = 0;
  std::uint64_t rejectedAtPrepare = 0;  // syntax or name-resolution failures
  std::uint64_t errors = 0;
};

// One executor per worker; never shared while in use.
class Executor {
 public:
  virtual ~Executor() = default;

  virtual EngineResult execute(const Statement& stmt) = 0;
  virtual const DialectProfile& dialect() const = 0;
  virtual std::string version() const = 0;

  virtual ExecutorStats stats() const { return {}; }
  void set_timeout(std::chrono::milliseconds t) { timeout_ = t; }
  std::chrono::milliseconds timeout() const { return timeout_; }

 protected:
  std::chrono::milliseconds timeout_{10000};
};

using ExecutorFactory = std::function<std::unique_ptr<Executor>()>;

}  // namespace norec
