#include <gtest/gtest.h>

#include <filesystem>
#include <unistd.h>

#include "norec/campaign.hpp"
#include "norec/report.hpp"

namespace norec {
namespace {

namespace fs = std::filesystem;

CampaignConfig small(std::optional<BugInjection> inj, std::uint64_t seed) {
  CampaignConfig c;
  c.injection = inj;
  c.seed = seed;
  c.databases = 20;
  c.queriesPerDatabase = 100;
  c.outputDir.clear();
  return c;
}

std::vector<std::string> fingerprints(const CampaignSummary& s) {
  std::vector<std::string> out;
  for (const auto& f : s.findings) out.push_back(f.fingerprint);
  return out;
}

TEST(Campaign, ConfigValidation) {
  CampaignConfig c;
  c.backend = "embedded";
  c.injection = BugInjection::LikeRangeSkip;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.workers = 0;
  EXPECT_THROW(run_campaign(c), std::invalid_argument);
  c = {};
  c.backend = "oracle-db";
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Campaign, ZeroQueries) {
  CampaignConfig c = small(std::nullopt, 1);
  c.queriesPerDatabase = 0;
  CampaignSummary s = run_campaign(c);
  EXPECT_EQ(s.checks, 0u);
  EXPECT_EQ(s.databases, 20u);
  EXPECT_TRUE(s.findings.empty());
}

TEST(Campaign, BugFreeToyHasNoFindings) {
  CampaignSummary s = run_campaign(small(std::nullopt, 3));
  EXPECT_EQ(s.checks, 2000u);
  EXPECT_EQ(s.discrepancies, 0u);
  EXPECT_EQ(s.unexpectedErrors, 0u);
  EXPECT_TRUE(s.findings.empty());
  EXPECT_EQ(s.consistent + s.skippedExpectedError + s.skippedTimeout, s.checks);
}

TEST(Campaign, FindsGlobPrefixBug) {
  CampaignConfig c = small(BugInjection::LikeRangeSkip, 2);
  c.databases = 100;
  c.stopAfterFindings = 1;
  CampaignSummary s = run_campaign(c);
  ASSERT_EQ(s.findings_of(FindingKind::OptimizationBug), 1u);
  const Finding& f = s.findings.front();
  EXPECT_TRUE(f.reduced);
  ASSERT_TRUE(f.verdict);
  EXPECT_LT(f.verdict->optimizedCount, f.verdict->unoptimizedCount);
  std::string sig = operator_signature(f);
  EXPECT_TRUE(sig.find("glob") != std::string::npos || sig.find("like") != std::string::npos) << sig;
  EXPECT_TRUE(reproduces(f.testCase, make_factory("toy", BugInjection::LikeRangeSkip)));
}

TEST(Campaign, Reproducible) {
  CampaignConfig c = small(BugInjection::NullFilterAsFalse, 4);
  CampaignSummary a = run_campaign(c);
  CampaignSummary b = run_campaign(c);
  EXPECT_FALSE(a.findings.empty());
  EXPECT_EQ(fingerprints(a), fingerprints(b));
  EXPECT_EQ(a.checks, b.checks);
  EXPECT_EQ(a.discrepancies, b.discrepancies);
}

TEST(Campaign, SameBugDifferentSeedsSameFingerprint) {
  CampaignConfig a = small(BugInjection::InToEqAffinity, 11);
  CampaignConfig b = small(BugInjection::InToEqAffinity, 12);
  a.databases = b.databases = 100;
  a.stopAfterFindings = b.stopAfterFindings = 1;
  CampaignSummary sa = run_campaign(a), sb = run_campaign(b);
  ASSERT_FALSE(sa.findings.empty());
  ASSERT_FALSE(sb.findings.empty());
  EXPECT_EQ(operator_signature(sa.findings[0]), operator_signature(sb.findings[0]));
  EXPECT_EQ(sa.findings[0].fingerprint, sb.findings[0].fingerprint);
}

TEST(Campaign, WorkersCoverAllDatabases) {
  CampaignConfig c = small(std::nullopt, 5);
  c.workers = 3;
  CampaignSummary s = run_campaign(c);
  EXPECT_EQ(s.databases, 20u);
  EXPECT_EQ(s.checks, 2000u);
}

TEST(Campaign, PersistsFindings) {
  fs::path dir = fs::temp_directory_path() / ("norec-campaign-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  CampaignConfig c = small(BugInjection::NullFilterAsFalse, 6);
  c.outputDir = dir.string();
  CampaignSummary s = run_campaign(c);
  auto dirs = finding_dirs(dir);
  EXPECT_EQ(dirs.size(), s.findings.size());
  std::uint64_t total = 0;
  for (const auto& d : dirs) total += read_meta(d).occurrences;
  std::uint64_t counted = 0;
  for (const auto& [fp, n] : s.occurrences) counted += n;
  EXPECT_EQ(total, counted);
  EXPECT_FALSE(fs::exists(dir / "work"));
  fs::remove_all(dir);
}

TEST(Campaign, ContentModeCatchesCorruption) {
  CampaignConfig c = small(BugInjection::ValueCorruption, 1);
  CampaignSummary count = run_campaign(c);
  EXPECT_EQ(count.discrepancies, 0u);
  c.oracleMode = OracleMode::Content;
  CampaignSummary content = run_campaign(c);
  EXPECT_GT(content.discrepancies, 0u);
}

TEST(Campaign, DatabaseSeedsDiffer) {
  EXPECT_NE(database_seed(1, 0), database_seed(1, 1));
  EXPECT_NE(database_seed(1, 0), database_seed(2, 0));
  EXPECT_EQ(database_seed(1, 5), database_seed(1, 5));
}

}  // namespace
}  // namespace norec
