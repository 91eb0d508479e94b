#include "norec/sqlite_engine.hpp"

#include <sqlite3.h>

#include <chrono>
#include <cstdio>
#include <stdexcept>

#include "norec/render.hpp"

namespace norec {

namespace {

struct Progress {
  std::chrono::steady_clock::time_point deadline;
  bool expired = false;
};

int on_progress(void* arg) {
  auto* p = static_cast<Progress*>(arg);
  if (std::chrono::steady_clock::now() > p->deadline) {
    p->expired = true;
    return 1;
  }
  return 0;
}

SqlValue column_value(sqlite3_stmt* st, int i) {
  switch (sqlite3_column_type(st, i)) {
    case SQLITE_INTEGER: return SqlValue::integer(sqlite3_column_int64(st, i));
    case SQLITE_FLOAT: return SqlValue::real(sqlite3_column_double(st, i));
    case SQLITE_TEXT: {
      const auto* t = reinterpret_cast<const char*>(sqlite3_column_text(st, i));
      return SqlValue::text(std::string(t, static_cast<size_t>(sqlite3_column_bytes(st, i))));
    }
    case SQLITE_BLOB: {
      const auto* b = static_cast<const char*>(sqlite3_column_blob(st, i));
      return SqlValue::text(std::string(b ? b : "", static_cast<size_t>(sqlite3_column_bytes(st, i))));
    }
    default: return SqlValue::null();
  }
}

}  // namespace

SqliteEngine::SqliteEngine(SqliteOptions options)
    : options_(std::move(options)), dialect_(DialectProfile::sqlite()) {
  std::string target = options_.path.empty() ? ":memory:" : options_.path;
  if (!options_.path.empty()) std::remove(options_.path.c_str());
  if (sqlite3_open(target.c_str(), &db_) != SQLITE_OK) {
    std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw std::runtime_error("cannot open database " + target + ": " + msg);
  }
  for (const auto& p : options_.pragmas) sqlite3_exec(db_, p.c_str(), nullptr, nullptr, nullptr);
}

SqliteEngine::~SqliteEngine() {
  sqlite3_close(db_);
  if (!options_.path.empty()) std::remove(options_.path.c_str());
}

std::string SqliteEngine::version() const { return std::string("sqlite ") + sqlite3_libversion(); }

EngineResult SqliteEngine::execute(const Statement& stmt) {
  std::string text;
  try {
    text = render_statement(stmt, dialect_);
  } catch (const UnsupportedFeature& e) {
    ++stats_.issued;
    ++stats_.rejectedAtPrepare;
    return EngineResult::error(std::string("unsupported: ") + e.what());
  }
  return execute_sql(text);
}

EngineResult SqliteEngine::execute_sql(const std::string& text) {
  ++stats_.issued;
  sqlite3_stmt* st = nullptr;
  if (sqlite3_prepare_v2(db_, text.c_str(), -1, &st, nullptr) != SQLITE_OK) {
    ++stats_.rejectedAtPrepare;
    ++stats_.errors;
    EngineResult r = EngineResult::error(sqlite3_errmsg(db_));
    sqlite3_finalize(st);
    return r;
  }
  if (!st) return EngineResult::ok();
  Progress progress{std::chrono::steady_clock::now() + timeout_};
  sqlite3_progress_handler(db_, 1000, on_progress, &progress);

  EngineResult out = EngineResult::ok();
  int ncols = sqlite3_column_count(st);
  for (int i = 0; i < ncols; ++i) {
    const char* n = sqlite3_column_name(st, i);
    out.columns.emplace_back(n ? n : "");
  }
  int rc;
  while ((rc = sqlite3_step(st)) == SQLITE_ROW) {
    Row row;
    row.reserve(static_cast<size_t>(ncols));
    for (int i = 0; i < ncols; ++i) row.push_back(column_value(st, i));
    out.rows.push_back(std::move(row));
  }
  if (rc != SQLITE_DONE) {
    if (progress.expired) {
      out = EngineResult::timeout();
    } else {
      ++stats_.errors;
      out = EngineResult::error(sqlite3_errmsg(db_));
    }
  }
  sqlite3_finalize(st);
  sqlite3_progress_handler(db_, 0, nullptr, nullptr);
  return out;
}

ExecutorFactory sqlite_factory(SqliteOptions options) {
  return [options] { return std::make_unique<SqliteEngine>(options); };
}

}  // namespace norec
