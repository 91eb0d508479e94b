#include "norec/report.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "norec/dialect.hpp"
#include "norec/render.hpp"
#include "norec/serialize.hpp"

namespace norec {

namespace fs = std::filesystem;
using nlohmann::json;

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DialectProfile dialect_for(const TestCase& tc) {
  try {
    return dialect_by_name(tc.dialect);
  } catch (const std::invalid_argument&) {
    return DialectProfile::sqlite();
  }
}

std::string render_line(const Statement& s, const DialectProfile& d) {
  try {
    return render_statement(s, d);
  } catch (const UnsupportedFeature& e) {
    return std::string("-- unsupported: ") + e.what();
  }
}

json meta_json(const Finding& f, const std::string& configEcho, std::uint64_t occurrences,
               const std::string& firstSeen) {
  json j;
  j["kind"] = finding_kind_name(f.kind);
  j["fingerprint"] = f.fingerprint;
  j["seed"] = f.testCase.seed;
  j["backend"] = f.backend;
  j["injection"] = f.injection;
  j["dialect"] = f.testCase.dialect;
  j["engineVersion"] = f.engineVersion;
  j["verdictClass"] = verdict_class_name(f.testCase.verdictClass);
  j["errorClass"] = f.testCase.errorClass;
  j["errorMessage"] = f.errorMessage;
  j["reduced"] = f.reduced;
  j["databaseIndex"] = f.databaseIndex;
  j["checkIndex"] = f.checkIndex;
  j["strategy"] = strategy_name(f.testCase.strategy);
  j["contentMode"] = f.testCase.contentMode;
  if (f.verdict && !f.verdict->skipped()) {
    j["optimizedCount"] = f.verdict->optimizedCount;
    j["unoptimizedCount"] = f.verdict->unoptimizedCount;
    j["strategy"] = strategy_name(f.verdict->strategy);
  }
  j["firstSeen"] = firstSeen;
  j["lastSeen"] = utc_timestamp();
  j["occurrences"] = occurrences;
  json config = json::parse(configEcho, nullptr, false);
  j["config"] = config.is_discarded() ? json(configEcho) : config;
  return j;
}

void write_contents(const Finding& f, const fs::path& dir, const std::string& configEcho,
                    std::uint64_t occurrences, const std::string& firstSeen) {
  write_file(dir / "reproduce.sql", reproduce_sql(f));
  write_file(dir / "testcase.json", serialize_testcase(f.testCase));
  write_file(dir / "meta.json", meta_json(f, configEcho, occurrences, firstSeen).dump(2) + "\n");
}

}  // namespace

std::string reproduce_sql(const Finding& f) {
  const TestCase& tc = f.testCase;
  DialectProfile d = dialect_for(tc);
  std::string out;
  for (const auto& s : tc.setupStatements) out += render_line(s, d) + "\n";
  if (!tc.query) return out;
  if (f.verdict && !f.verdict->skipped()) {
    out += f.verdict->optimizedSql + "\n";
    out += f.verdict->unoptimizedSql + "\n";
    out += "-- optimized=" + std::to_string(f.verdict->optimizedCount) +
           " unoptimized=" + std::to_string(f.verdict->unoptimizedCount) + "\n";
    if (tc.contentMode && f.verdict->differingRow) {
      out += "-- row on one side only:";
      for (const auto& v : *f.verdict->differingRow) out += " " + render_value(v, d);
      out += "\n";
    }
  } else if (f.fault) {
    out += f.fault->sql + "\n";
    out += "-- " + std::string(finding_kind_name(f.kind)) + ": " + f.errorMessage + "\n";
  } else if (f.verdict) {
    out += f.verdict->optimizedSql + "\n";
    out += f.verdict->unoptimizedSql + "\n";
    out += "-- " + std::string(finding_kind_name(f.kind)) + " (" + f.verdict->whichQuery + ")\n";
  }
  return out;
}

fs::path write_report(const Finding& f, const fs::path& outDir, const std::string& configEcho) {
  fs::path dir = outDir / f.fingerprint;
  if (fs::exists(dir / "meta.json")) {
    json meta = json::parse(read_file(dir / "meta.json"));
    meta["occurrences"] = meta.value("occurrences", std::uint64_t{1}) + 1;
    meta["lastSeen"] = utc_timestamp();
    write_file(dir / "meta.json", meta.dump(2) + "\n");
    return dir;
  }
  fs::create_directories(dir);
  fs::create_directories(outDir / "raw");
  std::string now = utc_timestamp();
  write_contents(f, dir, configEcho, 1, now);
  write_file(outDir / "raw" / (f.fingerprint + ".json"), serialize_testcase(f.raw));
  return dir;
}

void overwrite_report(const Finding& f, const fs::path& outDir, const std::string& configEcho) {
  fs::path dir = outDir / f.fingerprint;
  json meta = json::parse(read_file(dir / "meta.json"));
  write_contents(f, dir, configEcho, meta.value("occurrences", std::uint64_t{1}),
                 meta.value("firstSeen", utc_timestamp()));
  write_file(outDir / "raw" / (f.fingerprint + ".json"), serialize_testcase(f.raw));
}

ReportMeta read_meta(const fs::path& dir) {
  json j = json::parse(read_file(dir / "meta.json"));
  ReportMeta m;
  m.kind = j.value("kind", "");
  m.fingerprint = j.value("fingerprint", "");
  m.backend = j.value("backend", "");
  m.injection = j.value("injection", "");
  m.verdictClass = j.value("verdictClass", "");
  m.occurrences = j.value("occurrences", std::uint64_t{0});
  if (j.contains("optimizedCount")) m.optimizedCount = j["optimizedCount"].get<std::int64_t>();
  if (j.contains("unoptimizedCount")) m.unoptimizedCount = j["unoptimizedCount"].get<std::int64_t>();
  return m;
}

std::vector<fs::path> finding_dirs(const fs::path& dir) {
  std::vector<fs::path> out;
  if (fs::exists(dir / "testcase.json")) {
    out.push_back(dir);
    return out;
  }
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && fs::exists(e.path() / "testcase.json")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace norec
