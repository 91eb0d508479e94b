#include "norec/campaign.hpp"

#include <atomic>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "norec/isolated_executor.hpp"
#include "norec/report.hpp"
#include "norec/sqlite_engine.hpp"

namespace norec {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string_view oracle_mode_name(OracleMode m) { return m == OracleMode::Count ? "count" : "content"; }

std::optional<OracleMode> parse_oracle_mode(std::string_view name) {
  if (name == "count") return OracleMode::Count;
  if (name == "content") return OracleMode::Content;
  return std::nullopt;
}

void CampaignConfig::validate() const {
  if (backend != "toy" && backend != "embedded") {
    throw std::invalid_argument("backend must be 'toy' or 'embedded'");
  }
  if (injection && backend != "toy") throw std::invalid_argument("bug injection requires the toy backend");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (perQueryTimeout.count() <= 0) throw std::invalid_argument("timeout must be positive");
  if (durationSeconds < 0) throw std::invalid_argument("duration must be >= 0");
  gen.validate();
}

std::string CampaignConfig::to_json() const {
  nlohmann::json j;
  j["backend"] = backend;
  j["injection"] = injection ? std::string(injection_name(*injection)) : "";
  j["oracle"] = oracle_mode_name(oracleMode);
  j["seed"] = seed;
  j["queries"] = queriesPerDatabase;
  j["databases"] = databases;
  j["workers"] = workers;
  j["timeoutMs"] = perQueryTimeout.count();
  j["duration"] = durationSeconds;
  j["reduce"] = reduce;
  nlohmann::json g;
  g["maxTables"] = gen.maxTables;
  g["maxColumnsPerTable"] = gen.maxColumnsPerTable;
  g["maxRows"] = gen.maxRows;
  g["maxExprDepth"] = gen.maxExprDepth;
  g["maxJoins"] = gen.maxJoins;
  g["orderByProbability"] = gen.orderByProbability;
  g["groupByProbability"] = gen.groupByProbability;
  for (const auto& n : ExprWeights::names()) g["weight." + n] = gen.weights.get(n);
  j["generator"] = g;
  return j.dump();
}

double CampaignSummary::syntax_validity() const {
  if (statementsIssued == 0) return 1.0;
  return 1.0 - static_cast<double>(rejectedAtPrepare) / static_cast<double>(statementsIssued);
}

std::uint64_t CampaignSummary::findings_of(FindingKind k) const {
  std::uint64_t n = 0;
  for (const auto& f : findings) n += f.kind == k;
  return n;
}

std::string CampaignSummary::to_text() const {
  std::ostringstream out;
  out << "databases:            " << databases << "\n"
      << "checks:               " << checks << "\n"
      << "  consistent:         " << consistent << "\n"
      << "  discrepancies:      " << discrepancies << "\n"
      << "  skipped (expected): " << skippedExpectedError << "\n"
      << "  skipped (timeout):  " << skippedTimeout << "\n"
      << "  unexpected errors:  " << unexpectedErrors << "\n"
      << "  crashes:            " << crashes << "\n"
      << "setup statements:     " << setupStatements << " (" << setupRejected << " rejected as expected)\n";
  if (statementsIssued > 0) {
    out << "syntax validity:      " << syntax_validity() * 100 << "% of " << statementsIssued << " statements\n";
  }
  out << "elapsed:              " << seconds << " s (" << throughput() << " checks/s)\n"
      << "unique findings:      " << findings.size() << "\n";
  for (const auto& f : findings) {
    auto it = occurrences.find(f.fingerprint);
    out << "  " << f.fingerprint << "  " << finding_kind_name(f.kind) << "  x"
        << (it == occurrences.end() ? 1 : it->second) << "  " << operator_signature(f) << "\n";
  }
  return out.str();
}

std::uint64_t database_seed(std::uint64_t campaign_seed, std::uint64_t database_index) {
  std::uint64_t z = campaign_seed + 0x9E3779B97F4A7C15ULL * (database_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ExecutorFactory make_factory(const std::string& backend, std::optional<BugInjection> injection,
                             const std::string& path, bool isolate) {
  if (backend == "toy") {
    return [injection] { return std::make_unique<ToyEngine>(injection); };
  }
  if (backend == "embedded") {
    SqliteOptions opts;
    opts.path = path;
    ExecutorFactory inner = sqlite_factory(opts);
    if (!isolate) return inner;
    std::string version = SqliteEngine().version();
    return [inner, version] {
      return std::make_unique<IsolatedExecutor>(inner, DialectProfile::sqlite(), version);
    };
  }
  throw std::invalid_argument("unknown backend: " + backend);
}

namespace {

class Campaign {
 public:
  Campaign(const CampaignConfig& config, const CampaignLog& log)
      : config_(config), log_(log), start_(Clock::now()) {
    gen_ = config.gen;
    if (config.oracleMode == OracleMode::Content) gen_.groupByProbability = 0;
    if (!config.outputDir.empty()) fs::create_directories(config.outputDir);
    configEcho_ = config.to_json();
  }

  CampaignSummary run() {
    std::vector<std::thread> threads;
    for (int w = 1; w < config_.workers; ++w) threads.emplace_back([this, w] { worker(w); });
    worker(0);
    for (auto& t : threads) t.join();
    summary_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    for (auto& [fp, f] : unique_) summary_.findings.push_back(f);
    summary_.occurrences = occurrences_;
    if (!config_.outputDir.empty()) {
      std::error_code ec;
      fs::remove_all(fs::path(config_.outputDir) / "work", ec);
    }
    return summary_;
  }

 private:
  bool out_of_time() const {
    return config_.durationSeconds > 0 &&
           std::chrono::duration<double>(Clock::now() - start_).count() >= config_.durationSeconds;
  }

  bool should_stop() const { return stop_.load() || out_of_time(); }

  void say(const std::string& msg) {
    if (!log_) return;
    std::lock_guard<std::mutex> g(logMutex_);
    log_(msg);
  }

  void worker(int w) {
    while (!should_stop()) {
      std::uint64_t i = nextDatabase_.fetch_add(1);
      if (i >= config_.databases) break;
      CampaignSummary local;
      try {
        run_database(i, w, local);
      } catch (const std::exception& e) {
        say("database " + std::to_string(i) + ": harness error: " + e.what());
        throw;
      }
      std::lock_guard<std::mutex> g(mutex_);
      auto& s = summary_;
      s.databases += 1;
      s.checks += local.checks;
      s.consistent += local.consistent;
      s.discrepancies += local.discrepancies;
      s.skippedExpectedError += local.skippedExpectedError;
      s.skippedTimeout += local.skippedTimeout;
      s.unexpectedErrors += local.unexpectedErrors;
      s.crashes += local.crashes;
      s.setupStatements += local.setupStatements;
      s.setupRejected += local.setupRejected;
      s.statementsIssued += local.statementsIssued;
      s.rejectedAtPrepare += local.rejectedAtPrepare;
    }
  }

  std::string work_path(int w) const {
    if (config_.backend != "embedded" || config_.outputDir.empty()) return {};
    fs::path dir = fs::path(config_.outputDir) / "work";
    fs::create_directories(dir);
    return (dir / ("w" + std::to_string(w) + ".db")).string();
  }

  void run_database(std::uint64_t index, int w, CampaignSummary& s) {
    GenConfig g = gen_;
    g.seed = database_seed(config_.seed, index);
    auto engine = make_factory(config_.backend, config_.injection, work_path(w), config_.isolate)();
    engine->set_timeout(config_.perQueryTimeout);
    const DialectProfile dialect = engine->dialect();
    Generator gen(g, dialect);
    auto [schema, ddl] = gen.generate_schema();
    auto dml = gen.populate(schema);
    ddl.insert(ddl.end(), dml.begin(), dml.end());

    TestCase base;
    base.dialect = dialect.name;
    base.seed = g.seed;
    base.contentMode = config_.oracleMode == OracleMode::Content;

    bool abandoned = false;
    for (const auto& stmt : ddl) {
      EngineResult r = engine->execute(stmt);
      base.setupStatements.push_back(stmt);
      ++s.setupStatements;
      if (r.is_rows() || r.is_timeout()) continue;
      if (r.is_error() && dialect.match_expected_error(kind_of(stmt), r.message)) {
        ++s.setupRejected;
        continue;
      }
      TestCase tc = base;
      tc.verdictClass = r.is_crash() ? VerdictClass::Crash : VerdictClass::UnexpectedError;
      tc.errorClass = r.is_crash() ? "" : error_class(r.message);
      (r.is_crash() ? s.crashes : s.unexpectedErrors) += 1;
      report(tc, r.is_crash() ? FindingKind::CrashBug : FindingKind::ErrorBug, std::nullopt,
             EngineFault{r.is_crash() ? EngineFault::Kind::Crash : EngineFault::Kind::UnexpectedError, "setup",
                         "", r.message},
             index, 0, engine->version());
      abandoned = true;
      break;
    }

    for (std::uint64_t c = 0; !abandoned && c < config_.queriesPerDatabase && !should_stop(); ++c) {
      SelectQuery q = gen.generate_optimized_query(schema);
      CountStrategy strategy = effective_strategy(q, strategy_for_check(c));
      CheckResult res = config_.oracleMode == OracleMode::Content
                            ? run_content_check(*engine, q, dialect, g.seed)
                            : run_check(*engine, q, strategy, dialect, g.seed);
      ++s.checks;
      TestCase tc = base;
      tc.query = q;
      tc.strategy = strategy;
      if (res.fault) {
        bool crash = res.fault->kind == EngineFault::Kind::Crash;
        tc.verdictClass = crash ? VerdictClass::Crash : VerdictClass::UnexpectedError;
        tc.errorClass = crash ? "" : error_class(res.fault->message);
        (crash ? s.crashes : s.unexpectedErrors) += 1;
        report(tc, crash ? FindingKind::CrashBug : FindingKind::ErrorBug, std::nullopt, res.fault, index, c,
               engine->version());
        if (crash) abandoned = true;
        continue;
      }
      const OracleVerdict& v = *res.verdict;
      if (v.consistent()) {
        ++s.consistent;
      } else if (v.discrepancy()) {
        ++s.discrepancies;
        tc.verdictClass = VerdictClass::Discrepancy;
        report(tc, FindingKind::OptimizationBug, v, std::nullopt, index, c, engine->version());
      } else if (v.reason == OracleVerdict::SkipReason::Timeout) {
        ++s.skippedTimeout;
        say("hang candidate in database " + std::to_string(index) + " check " + std::to_string(c) + ": " +
            v.optimizedSql);
        report(tc, FindingKind::Hang, v, std::nullopt, index, c, engine->version());
      } else {
        ++s.skippedExpectedError;
      }
    }
    ExecutorStats st = engine->stats();
    s.statementsIssued += st.issued;
    s.rejectedAtPrepare += st.rejectedAtPrepare;
  }

  void report(const TestCase& tc, FindingKind kind, std::optional<OracleVerdict> verdict,
              std::optional<EngineFault> fault, std::uint64_t db, std::uint64_t check,
              const std::string& version) {
    Finding f;
    f.kind = kind;
    f.raw = tc;
    f.testCase = tc;
    f.verdict = verdict;
    f.fault = fault;
    f.errorMessage = fault ? fault->message : "";
    f.injection = config_.injection ? std::string(injection_name(*config_.injection)) : "";
    f.engineVersion = version;
    f.backend = config_.backend;
    f.firstSeen = utc_timestamp();
    f.databaseIndex = db;
    f.checkIndex = check;

    // Identical raw shapes reduce to the same fingerprint in practice; reuse it
    // instead of reducing again.
    std::string raw_key = fingerprint(f);
    std::optional<std::string> known;
    {
      std::lock_guard<std::mutex> g(mutex_);
      auto it = rawToReduced_.find(raw_key);
      if (it != rawToReduced_.end()) known = it->second;
    }
    if (known) {
      record_duplicate(*known, f);
      return;
    }

    if (config_.reduce && kind != FindingKind::Hang) {
      ExecutorFactory replay_factory = make_factory(config_.backend, config_.injection, {}, config_.isolate);
      try {
        ReduceStats rs;
        f.testCase = reduce(tc, replay_factory, config_.reduceOptions, &rs);
        f.reduced = true;
        ReplayOutcome o = replay(f.testCase, replay_factory);
        if (o.check && o.check->verdict) f.verdict = o.check->verdict;
        if (o.check && o.check->fault) f.fault = o.check->fault;
        if (!o.message.empty()) f.errorMessage = o.message;
        if (o.failingStatement) f.testCase.setupStatements.resize(*o.failingStatement + 1);
      } catch (const NotReproducible&) {
        say("finding in database " + std::to_string(db) + " check " + std::to_string(check) +
            " did not reproduce on a fresh engine; kept unreduced");
      }
    }
    f.fingerprint = fingerprint(f);

    std::lock_guard<std::mutex> g(mutex_);
    rawToReduced_[raw_key] = f.fingerprint;
    auto it = unique_.find(f.fingerprint);
    occurrences_[f.fingerprint] += 1;
    if (it == unique_.end()) {
      unique_.emplace(f.fingerprint, f);
      persist(f, true);
      say("new " + std::string(finding_kind_name(kind)) + " finding " + f.fingerprint + " (" +
          operator_signature(f) + ")");
      if (config_.stopAfterFindings > 0 && unique_.size() >= config_.stopAfterFindings) stop_ = true;
    } else {
      keep_earliest(it->second, f);
    }
  }

  void record_duplicate(const std::string& fp, Finding& f) {
    std::lock_guard<std::mutex> g(mutex_);
    occurrences_[fp] += 1;
    auto it = unique_.find(fp);
    if (it == unique_.end()) return;
    if (!config_.outputDir.empty()) {
      try {
        write_report(it->second, config_.outputDir, configEcho_);
      } catch (const std::exception& e) {
        ++summary_.reportErrors;
        say(std::string("report write failed: ") + e.what());
      }
    }
    (void)f;
  }

  void keep_earliest(Finding& existing, const Finding& f) {
    bool earlier = std::tie(f.databaseIndex, f.checkIndex) < std::tie(existing.databaseIndex, existing.checkIndex);
    if (earlier) existing = f;
    if (config_.outputDir.empty()) return;
    try {
      write_report(existing, config_.outputDir, configEcho_);
      if (earlier) overwrite_report(existing, config_.outputDir, configEcho_);
    } catch (const std::exception& e) {
      ++summary_.reportErrors;
      say(std::string("report write failed: ") + e.what());
    }
  }

  void persist(const Finding& f, bool) {
    if (config_.outputDir.empty()) return;
    try {
      write_report(f, config_.outputDir, configEcho_);
    } catch (const std::exception& e) {
      ++summary_.reportErrors;
      say(std::string("report write failed: ") + e.what());
    }
  }

  const CampaignConfig& config_;
  CampaignLog log_;
  GenConfig gen_;
  Clock::time_point start_;
  std::string configEcho_;
  std::atomic<std::uint64_t> nextDatabase_{0};
  std::atomic<bool> stop_{false};
  std::mutex mutex_;
  std::mutex logMutex_;
  CampaignSummary summary_;
  std::map<std::string, Finding> unique_;
  std::map<std::string, std::uint64_t> occurrences_;
  std::map<std::string, std::string> rawToReduced_;
};

}  // namespace

CampaignSummary run_campaign(const CampaignConfig& config, const CampaignLog& log) {
  config.validate();
  Campaign c(config, log);
  return c.run();
}

}  // namespace norec
