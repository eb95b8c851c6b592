#include <algorithm>
#include <cstdlib>

#include "qibg/harness.hpp"
#include "support.hpp"

namespace qibg {
namespace {

// Sets QIBG_THREADS for the lifetime of the object.
class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* value) {
    if (const char* old = std::getenv("QIBG_THREADS")) old_ = old;
    ::setenv("QIBG_THREADS", value, 1);
  }
  ~ThreadsEnv() {
    if (old_.empty())
      ::unsetenv("QIBG_THREADS");
    else
      ::setenv("QIBG_THREADS", old_.c_str(), 1);
  }

 private:
  std::string old_;
};

CampaignConfig standard_config() { return {3, {5, 10, 20, 40}, 100, 7, Strategy::ColumnMajor}; }

TEST(Campaign, IdentityOnly) {
  CampaignReport r = run_campaign({2, {0}, 1, 0, Strategy::ColumnMajor});
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].ratio, 0.0);
  EXPECT_EQ(r.records[0].factor_count, 0u);
  EXPECT_EQ(r.factor_count_histogram, (std::map<std::size_t, std::size_t>{{0, 1}}));
  EXPECT_TRUE(r.passed());
}

TEST(Campaign, StandardConfigGolden) {
  CampaignReport r = run_campaign(standard_config());
  EXPECT_EQ(r.records.size(), 400u);
  EXPECT_EQ(r.bound_violations, 0u);
  for (const auto& rec : r.records) EXPECT_LE(rec.factor_count, 6u);
  test::expect_golden("campaign_n3_seed7.json", to_json(r).dump(2) + "\n");
  test::expect_golden("campaign_n3_seed7.csv", to_csv(r));
}

TEST(Campaign, DeterministicAcrossThreadCounts) {
  CampaignConfig c{4, {3, 17}, 30, 123, Strategy::Clockwise};
  std::string one, four;
  {
    ThreadsEnv env("1");
    one = to_json(run_campaign(c)).dump();
  }
  {
    ThreadsEnv env("4");
    four = to_json(run_campaign(c)).dump();
  }
  EXPECT_EQ(one, four);
}

TEST(Campaign, RecordsFollowSeedAndIndexOrder) {
  CampaignReport r = run_campaign({3, {2, 4}, 5, 9, Strategy::ColumnMajor});
  ASSERT_EQ(r.records.size(), 10u);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    EXPECT_EQ(r.records[i].length, i < 5 ? 2u : 4u);
    EXPECT_EQ(r.records[i].index, i % 5);
    EXPECT_EQ(r.records[i].seed, derive_seed(9, r.records[i].length, r.records[i].index));
  }
  EXPECT_EQ(r.buckets.size(), 2u);
}

TEST(Campaign, FaultInjectionAborts) {
  CampaignHooks hooks;
  hooks.tamper = [](Factorization& f) {
    if (!f.factors.empty()) f.factors.pop_back();
  };
  try {
    run_campaign({3, {10}, 20, 1, Strategy::ColumnMajor}, hooks);
    FAIL() << "campaign should abort";
  } catch (const CampaignAbort& e) {
    const auto& sample = e.sample();
    EXPECT_TRUE(sample.contains("matrix"));
    EXPECT_TRUE(sample.contains("seed"));
    EXPECT_TRUE(sample.contains("factorization"));
    // The serialized sample reproduces the offending matrix.
    const std::uint64_t seed = sample["seed"].get<std::uint64_t>();
    EXPECT_EQ(integer_matrix_from_json(sample["matrix"]), random_word(3, 10, seed).matrix());
  }
}

TEST(Campaign, SupportViolationAlsoAborts) {
  CampaignHooks hooks;
  hooks.tamper = [](Factorization& f) { f.factors.push_back({1, 1, {}}); };
  EXPECT_THROW(run_campaign({2, {3}, 2, 1, Strategy::ColumnMajor}, hooks), CampaignAbort);
}

TEST(CampaignConfig, Validation) {
  EXPECT_THROW((CampaignConfig{3, {5}, 0, 0, Strategy::ColumnMajor}.validate()), InvalidArgument);
  EXPECT_THROW((CampaignConfig{3, {}, 5, 0, Strategy::ColumnMajor}.validate()), InvalidArgument);
  EXPECT_THROW((CampaignConfig{3, {10, 5}, 5, 0, Strategy::ColumnMajor}.validate()), InvalidArgument);
  EXPECT_THROW((CampaignConfig{3, {5, 5}, 5, 0, Strategy::ColumnMajor}.validate()), InvalidArgument);
  EXPECT_THROW((CampaignConfig{1, {5}, 5, 0, Strategy::ColumnMajor}.validate()), InvalidArgument);
  EXPECT_NO_THROW(standard_config().validate());
}

TEST(CampaignConfig, JsonRoundTripAndErrors) {
  CampaignConfig c = standard_config();
  c.strategy = Strategy::Clockwise;
  CampaignConfig back = campaign_config_from_json(to_json(c));
  EXPECT_EQ(back.n, c.n);
  EXPECT_EQ(back.word_lengths, c.word_lengths);
  EXPECT_EQ(back.samples_per_length, c.samples_per_length);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.strategy, c.strategy);
  EXPECT_THROW(campaign_config_from_json(nlohmann::json::parse(R"({"n": 3})")), ParseError);
  EXPECT_THROW(campaign_config_from_json(nlohmann::json::parse(R"({"n": "x", "word_lengths": [1], "samples_per_length": 1})")),
               ParseError);
  EXPECT_THROW(campaign_config_from_json(nlohmann::json::parse(R"({"n": 3, "word_lengths": [1], "samples_per_length": 0})")),
               InvalidArgument);
}

TEST(Campaign, CsvHasOneRowPerSample) {
  CampaignReport r = run_campaign({2, {1, 2}, 3, 4, Strategy::ColumnMajor});
  std::string csv = to_csv(r);
  EXPECT_EQ(csv.rfind("length,index,seed,log_norm,factor_count,max_factor_log_norm,ratio", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Compare, N2StrategiesIdentical) {
  ComparisonReport r = compare_strategies({2, {5, 20}, 50, 3, Strategy::ColumnMajor});
  for (const auto& rec : r.records) EXPECT_TRUE(rec.identical);
  EXPECT_TRUE(r.passed());
}

TEST(Compare, N3HundredSamples) {
  ComparisonReport r = compare_strategies({3, {10, 30}, 50, 11, Strategy::ColumnMajor});
  EXPECT_EQ(r.records.size(), 100u);
  EXPECT_EQ(r.reannihilations, 0u);
  EXPECT_LE(r.clockwise_max_count, 6u);
  EXPECT_LE(r.column_max_count, 6u);
  EXPECT_TRUE(r.passed());
}

TEST(Compare, N4FiftySamples) {
  ComparisonReport r = compare_strategies({4, {25}, 50, 12, Strategy::ColumnMajor});
  EXPECT_EQ(r.reannihilations, 0u);
  EXPECT_LE(r.clockwise_max_count, 12u);
  nlohmann::json doc = to_json(r);
  EXPECT_EQ(doc["records"].size(), 50u);
  const std::string csv = to_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 51);
}

TEST(Threads, EnvironmentParsing) {
  {
    ThreadsEnv env("3");
    EXPECT_EQ(harness_threads(), 3u);
  }
  for (const char* bad : {"0", "-2", "two", "4x"}) {
    ThreadsEnv env(bad);
    EXPECT_THROW(harness_threads(), InvalidArgument) << bad;
  }
}

}  // namespace
}  // namespace qibg
