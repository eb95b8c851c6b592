#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qibg/decompose.hpp"

namespace qibg {

struct CampaignConfig {
  std::size_t n = 3;
  std::vector<std::size_t> word_lengths;
  std::size_t samples_per_length = 0;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::ColumnMajor;

  // Throws InvalidArgument: n >= 2, at least one length, lengths strictly increasing,
  // samples_per_length >= 1.
  void validate() const;
};

// Throws ParseError on malformed documents and InvalidArgument on values
// that fail validate().
CampaignConfig campaign_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const CampaignConfig& c);

// Per-sample seed, a SplitMix64 mix of the campaign seed, the word length and
// the sample index. The clockwise ordering for a sample is drawn from
// derive_seed(sample_seed, 0, 0).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t length, std::uint64_t index);

struct SampleRecord {
  std::size_t length = 0;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double log_norm = 0;
  std::size_t factor_count = 0;
  double max_factor_log_norm = 0;
  double ratio = 0;
  std::size_t bound_violations = 0;
};

struct BucketSummary {
  std::size_t length = 0;
  std::size_t samples = 0;
  double max_ratio = 0;
  double mean_ratio = 0;
  std::size_t max_factor_count = 0;
};

// The largest word-length bucket may not push the worst ratio more than 10%
// above the worst ratio seen in all shorter buckets.
struct StabilityCheck {
  static constexpr double kTolerance = 1.10;
  bool passed = true;
  double largest_bucket_max = 0;
  double smaller_buckets_max = 0;
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<SampleRecord> records;
  std::vector<BucketSummary> buckets;
  std::map<std::size_t, std::size_t> factor_count_histogram;
  std::size_t bound_violations = 0;
  StabilityCheck stability;

  bool passed() const { return bound_violations == 0 && stability.passed; }
};

// A sample failed exact verification. sample() holds the matrix, the factor
// list (if any) and the problems found.
class CampaignAbort : public Error {
 public:
  CampaignAbort(const std::string& what, nlohmann::json sample) : Error(what), sample_(std::move(sample)) {}
  const nlohmann::json& sample() const noexcept { return sample_; }

 private:
  nlohmann::json sample_;
};

// Test seam: lets a caller damage factorizations before they are verified.
struct CampaignHooks {
  std::function<void(Factorization&)> tamper;
};

// Deterministic for a given config regardless of thread count.
CampaignReport run_campaign(const CampaignConfig& config, const CampaignHooks& hooks = {});

nlohmann::json to_json(const CampaignReport& r);
std::string to_csv(const CampaignReport& r);

struct ComparisonRecord {
  std::size_t length = 0;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t column_count = 0;
  std::size_t clockwise_count = 0;
  double column_ratio = 0;
  double clockwise_ratio = 0;
  std::size_t reannihilations = 0;
  bool identical = false;
  bool left_preconditioned = false;
  bool right_preconditioned = false;
};

struct ComparisonReport {
  CampaignConfig config;
  std::vector<ComparisonRecord> records;
  std::size_t reannihilations = 0;
  std::size_t column_max_count = 0;
  std::size_t clockwise_max_count = 0;
  double column_max_ratio = 0;
  double clockwise_max_ratio = 0;
  std::size_t preconditioned = 0;

  bool passed() const { return reannihilations == 0; }
};

// Runs both strategies on the same words; `config.strategy` is ignored.
ComparisonReport compare_strategies(const CampaignConfig& config);

nlohmann::json to_json(const ComparisonReport& r);
std::string to_csv(const ComparisonReport& r);

// Worker count from QIBG_THREADS (positive integer), else the hardware
// concurrency. Throws InvalidArgument for a malformed value.
std::size_t harness_threads();

}  // namespace qibg
