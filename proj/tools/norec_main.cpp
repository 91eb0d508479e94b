// norec: run a NoREC campaign, or replay persisted findings.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "norec/campaign.hpp"
#include "norec/report.hpp"
#include "norec/serialize.hpp"

namespace fs = std::filesystem;
using namespace norec;

namespace {

int replay_all(const std::string& dir, const std::string& backend_flag, bool isolate) {
  auto dirs = finding_dirs(dir);
  if (dirs.empty()) {
    std::cerr << "no findings below " << dir << "\n";
    return 1;
  }
  int reproduced = 0;
  for (const auto& d : dirs) {
    ReportMeta meta = read_meta(d);
    std::ifstream in(d / "testcase.json");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    TestCase tc = deserialize_testcase(text);
    std::string backend = backend_flag.empty() ? meta.backend : backend_flag;
    std::optional<BugInjection> inj;
    if (!meta.injection.empty()) inj = parse_injection(meta.injection);
    if (backend != "toy") inj.reset();
    ReplayOutcome o = replay(tc, make_factory(backend, inj, {}, isolate));
    bool ok = reproduces(tc, o);
    reproduced += ok;
    std::cout << (ok ? "reproduced  " : "NOT reproduced  ") << d.filename().string() << "  " << meta.kind;
    if (o.check && o.check->verdict) {
      std::cout << "  optimized=" << o.check->verdict->optimizedCount
                << " unoptimized=" << o.check->verdict->unoptimizedCount;
    }
    if (!o.message.empty()) std::cout << "  " << o.message;
    std::cout << "\n";
  }
  std::cout << reproduced << "/" << dirs.size() << " findings reproduced\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NoREC: find optimization bugs by comparing optimized and unoptimized queries"};
  app.set_config("--config", "", "key=value config file; flags given on the command line win");

  CampaignConfig cfg;
  std::string inject, oracle = "count", replay_dir;
  std::int64_t timeout_ms = cfg.perQueryTimeout.count();
  bool no_reduce = false, quiet = false;
  std::map<std::string, double> weights;

  app.add_option("--backend", cfg.backend, "toy or embedded")->check(CLI::IsMember({"toy", "embedded"}));
  app.add_option("--inject", inject, "bug injection for the toy engine");
  app.add_option("--oracle", oracle, "count or content")->check(CLI::IsMember({"count", "content"}));
  app.add_option("--seed", cfg.seed, "campaign seed");
  app.add_option("--queries", cfg.queriesPerDatabase, "oracle checks per database");
  app.add_option("--databases", cfg.databases, "number of generated databases");
  app.add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--timeout-ms", timeout_ms, "per-statement timeout")->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.outputDir, "finding output directory");
  app.add_option("--replay", replay_dir, "replay findings below this directory and exit");
  app.add_option("--duration", cfg.durationSeconds, "stop starting new work after this many seconds");
  app.add_option("--stop-after", cfg.stopAfterFindings, "stop after this many unique findings");
  app.add_flag("--no-reduce", no_reduce, "persist findings unreduced");
  app.add_flag("--isolate", cfg.isolate, "run the embedded engine in a child process");
  app.add_flag("-q,--quiet", quiet, "no progress log");

  auto& g = cfg.gen;
  app.add_option("--max-tables", g.maxTables);
  app.add_option("--max-columns", g.maxColumnsPerTable);
  app.add_option("--max-rows", g.maxRows);
  app.add_option("--max-depth", g.maxExprDepth);
  app.add_option("--max-joins", g.maxJoins);
  app.add_option("--order-by-probability", g.orderByProbability);
  app.add_option("--group-by-probability", g.groupByProbability);
  for (const auto& name : ExprWeights::names()) {
    app.add_option("--weight-" + name, weights[name], "relative weight of " + name + " expressions");
  }
  app.add_option("--reduce-max-replays", cfg.reduceOptions.maxReplays);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!replay_dir.empty()) {
      std::string backend = app.count("--backend") ? cfg.backend : "";
      return replay_all(replay_dir, backend, cfg.isolate);
    }
    if (!inject.empty() && inject != "none") {
      cfg.injection = parse_injection(inject);
      if (!cfg.injection) {
        std::cerr << "unknown injection: " << inject << "\n";
        return 2;
      }
    }
    cfg.oracleMode = *parse_oracle_mode(oracle);
    cfg.perQueryTimeout = std::chrono::milliseconds(timeout_ms);
    cfg.reduce = !no_reduce;
    for (const auto& [name, value] : weights) {
      if (app.count("--weight-" + name)) g.weights.set(name, value);
    }
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }

  try {
    CampaignLog log;
    if (!quiet) log = [](const std::string& m) { std::cerr << m << "\n"; };
    CampaignSummary s = run_campaign(cfg, log);
    std::cout << s.to_text();
    if (!cfg.outputDir.empty() && !s.findings.empty()) std::cout << "reports in " << cfg.outputDir << "\n";
  } catch (const std::exception& e) {
    std::cerr << "harness failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
