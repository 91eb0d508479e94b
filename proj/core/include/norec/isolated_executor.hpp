#pragma once

#include <sys/types.h>

#include <string>

#include "norec/engine.hpp"

namespace norec {

// Runs an executor in a forked child so that aborts inside the engine library
// surface as Crash results instead of killing the harness. After a crash the
// next statement starts a fresh child with an empty database.
class IsolatedExecutor final : public Executor {
 public:
  IsolatedExecutor(ExecutorFactory inner, DialectProfile dialect, std::string version);
  ~IsolatedExecutor() override;
  IsolatedExecutor(const IsolatedExecutor&) = delete;
  IsolatedExecutor& operator=(const IsolatedExecutor&) = delete;

  EngineResult execute(const Statement& stmt) override;
  const DialectProfile& dialect() const override { return dialect_; }
  std::string version() const override { return version_ + " (isolated)"; }
  ExecutorStats stats() const override { return stats_; }

 private:
  void spawn();
  void reap();
  [[noreturn]] void child_main(int fd);

  ExecutorFactory inner_;
  DialectProfile dialect_;
  std::string version_;
  pid_t child_ = -1;
  int fd_ = -1;
  ExecutorStats stats_;
  ExecutorStats childBase_;
};

}  // namespace norec
