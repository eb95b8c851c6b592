#include "qibg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <optional>
#include <functional>
#include <sstream>
#include <thread>

#include "qibg/matrix_io.hpp"

namespace qibg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Job {
  std::size_t length;
  std::size_t index;
  std::uint64_t seed;
};

std::vector<Job> jobs_for(const CampaignConfig& c) {
  std::vector<Job> jobs;
  for (std::size_t length : c.word_lengths)
    for (std::size_t i = 0; i < c.samples_per_length; ++i) jobs.push_back({length, i, derive_seed(c.seed, length, i)});
  return jobs;
}

// Runs fn(i) for every i in [0, count) on harness_threads() workers. Results
// are written by index, so the outcome does not depend on scheduling; the
// exception of the lowest failing index is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, Fn fn) {
  std::vector<std::exception_ptr> errors(count);
  const std::size_t workers = std::max<std::size_t>(1, std::min(harness_threads(), count));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

nlohmann::json sample_json(const UnimodularMatrix& gamma, const Job& job, const Factorization* f,
                           const std::vector<std::string>& problems) {
  nlohmann::json j{{"length", job.length}, {"index", job.index}, {"seed", job.seed}, {"matrix", to_json(gamma)},
                   {"problems", problems}};
  if (f) j["factorization"] = to_json(*f);
  return j;
}

Factorization run_strategy(Strategy s, const UnimodularMatrix& gamma, std::uint64_t sample_seed,
                           ClockwiseTrace* trace = nullptr) {
  if (s == Strategy::ColumnMajor) return decompose_column_major(gamma);
  TypeAOrdering ordering = sample_type_a_ordering(gamma.n(), derive_seed(sample_seed, 0, 0));
  ClockwiseResult r = decompose_clockwise_traced(gamma, ordering);
  if (trace) *trace = r.trace;
  return std::move(r.factorization);
}

// Decomposes and verifies one sample; aborts the campaign on any failure.
Factorization checked(Strategy s, const UnimodularMatrix& gamma, const Job& job, const CampaignHooks& hooks,
                      ClockwiseTrace* trace = nullptr) {
  Factorization f;
  try {
    f = run_strategy(s, gamma, job.seed, trace);
  } catch (const Error& e) {
    throw CampaignAbort(std::string("decomposition failed: ") + e.what(), sample_json(gamma, job, nullptr, {e.what()}));
  }
  if (hooks.tamper) hooks.tamper(f);
  VerificationReport v = verify(gamma, f);
  if (!v.passed())
    throw CampaignAbort("sample (length " + std::to_string(job.length) + ", index " + std::to_string(job.index) +
                            ") failed verification",
                        sample_json(gamma, job, &f, v.problems));
  return f;
}

std::string csv_double(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

}  // namespace

void CampaignConfig::validate() const {
  if (n < 2) throw InvalidArgument("campaign needs n >= 2");
  if (word_lengths.empty()) throw InvalidArgument("campaign needs at least one word length");
  if (std::adjacent_find(word_lengths.begin(), word_lengths.end(), std::greater_equal<>()) != word_lengths.end())
    throw InvalidArgument("word lengths must be strictly increasing");
  if (samples_per_length == 0) throw InvalidArgument("samples_per_length must be at least 1");
}

CampaignConfig campaign_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("campaign config must be a JSON object");
  CampaignConfig c;
  try {
    c.n = doc.at("n").get<std::size_t>();
    c.word_lengths = doc.at("word_lengths").get<std::vector<std::size_t>>();
    c.samples_per_length = doc.at("samples_per_length").get<std::size_t>();
    c.seed = doc.value("seed", std::uint64_t{0});
    c.strategy = parse_strategy(doc.value("strategy", std::string("column_major")));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("campaign config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("campaign config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const CampaignConfig& c) {
  return {{"n", c.n},
          {"word_lengths", c.word_lengths},
          {"samples_per_length", c.samples_per_length},
          {"seed", c.seed},
          {"strategy", to_string(c.strategy)}};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t length, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ length) ^ index);
}

CampaignReport run_campaign(const CampaignConfig& config, const CampaignHooks& hooks) {
  config.validate();
  const std::vector<Job> jobs = jobs_for(config);
  CampaignReport report;
  report.config = config;
  report.records.resize(jobs.size());

  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    UnimodularMatrix gamma = random_word(config.n, job.length, job.seed);
    Factorization f = checked(config.strategy, gamma, job, hooks);
    VerificationReport v = verify(gamma, f);
    report.records[i] = {job.length,
                         job.index,
                         job.seed,
                         v.stats.input_log_norm,
                         f.factors.size(),
                         v.stats.max_factor_log_norm,
                         v.stats.max_ratio,
                         v.bound_violations};
  });

  for (std::size_t length : config.word_lengths) {
    BucketSummary b{length, 0, 0, 0, 0};
    for (const auto& r : report.records) {
      if (r.length != length) continue;
      ++b.samples;
      b.max_ratio = std::max(b.max_ratio, r.ratio);
      b.mean_ratio += r.ratio;
      b.max_factor_count = std::max(b.max_factor_count, r.factor_count);
    }
    b.mean_ratio /= static_cast<double>(b.samples);
    report.buckets.push_back(b);
  }
  for (const auto& r : report.records) {
    ++report.factor_count_histogram[r.factor_count];
    report.bound_violations += r.bound_violations;
  }

  const std::size_t longest = *std::max_element(config.word_lengths.begin(), config.word_lengths.end());
  bool have_smaller = false;
  for (const auto& b : report.buckets) {
    if (b.length == longest) {
      report.stability.largest_bucket_max = b.max_ratio;
    } else {
      have_smaller = true;
      report.stability.smaller_buckets_max = std::max(report.stability.smaller_buckets_max, b.max_ratio);
    }
  }
  report.stability.passed =
      !have_smaller ||
      report.stability.largest_bucket_max <= StabilityCheck::kTolerance * report.stability.smaller_buckets_max;
  return report;
}

nlohmann::json to_json(const CampaignReport& r) {
  nlohmann::json buckets = nlohmann::json::array();
  for (const auto& b : r.buckets)
    buckets.push_back({{"length", b.length},
                       {"samples", b.samples},
                       {"max_ratio", b.max_ratio},
                       {"mean_ratio", b.mean_ratio},
                       {"max_factor_count", b.max_factor_count}});
  nlohmann::json histogram = nlohmann::json::object();
  for (const auto& [count, freq] : r.factor_count_histogram) histogram[std::to_string(count)] = freq;
  nlohmann::json records = nlohmann::json::array();
  for (const auto& s : r.records)
    records.push_back({{"length", s.length},
                       {"index", s.index},
                       {"seed", s.seed},
                       {"log_norm", s.log_norm},
                       {"factor_count", s.factor_count},
                       {"max_factor_log_norm", s.max_factor_log_norm},
                       {"ratio", s.ratio}});
  return {{"config", to_json(r.config)},
          {"passed", r.passed()},
          {"bound_violations", r.bound_violations},
          {"stability",
           {{"passed", r.stability.passed},
            {"tolerance", StabilityCheck::kTolerance},
            {"largest_bucket_max", r.stability.largest_bucket_max},
            {"smaller_buckets_max", r.stability.smaller_buckets_max}}},
          {"factor_count_histogram", std::move(histogram)},
          {"buckets", std::move(buckets)},
          {"records", std::move(records)}};
}

std::string to_csv(const CampaignReport& r) {
  std::ostringstream out;
  out << "length,index,seed,log_norm,factor_count,max_factor_log_norm,ratio\n";
  for (const auto& s : r.records)
    out << s.length << ',' << s.index << ',' << s.seed << ',' << csv_double(s.log_norm) << ',' << s.factor_count << ','
        << csv_double(s.max_factor_log_norm) << ',' << csv_double(s.ratio) << '\n';
  return out.str();
}

ComparisonReport compare_strategies(const CampaignConfig& config) {
  config.validate();
  const std::vector<Job> jobs = jobs_for(config);
  ComparisonReport report;
  report.config = config;
  report.records.resize(jobs.size());

  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    UnimodularMatrix gamma = random_word(config.n, job.length, job.seed);
    ClockwiseTrace trace;
    Factorization col = checked(Strategy::ColumnMajor, gamma, job, {});
    Factorization cw = checked(Strategy::Clockwise, gamma, job, {}, &trace);
    ComparisonRecord& rec = report.records[i];
    rec = {job.length, job.index, job.seed, col.factors.size(), cw.factors.size(),
           quasi_isometry_stats(gamma, col).max_ratio, quasi_isometry_stats(gamma, cw).max_ratio,
           trace.reannihilations, col.factors == cw.factors, trace.left_preconditioned, trace.right_preconditioned};
  });

  for (const auto& r : report.records) {
    report.reannihilations += r.reannihilations;
    report.column_max_count = std::max(report.column_max_count, r.column_count);
    report.clockwise_max_count = std::max(report.clockwise_max_count, r.clockwise_count);
    report.column_max_ratio = std::max(report.column_max_ratio, r.column_ratio);
    report.clockwise_max_ratio = std::max(report.clockwise_max_ratio, r.clockwise_ratio);
    if (r.left_preconditioned || r.right_preconditioned) ++report.preconditioned;
  }
  return report;
}

nlohmann::json to_json(const ComparisonReport& r) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& s : r.records)
    records.push_back({{"length", s.length},
                       {"index", s.index},
                       {"seed", s.seed},
                       {"column_count", s.column_count},
                       {"clockwise_count", s.clockwise_count},
                       {"column_ratio", s.column_ratio},
                       {"clockwise_ratio", s.clockwise_ratio},
                       {"reannihilations", s.reannihilations},
                       {"identical", s.identical},
                       {"left_preconditioned", s.left_preconditioned},
                       {"right_preconditioned", s.right_preconditioned}});
  return {{"config", to_json(r.config)},
          {"passed", r.passed()},
          {"reannihilations", r.reannihilations},
          {"column_max_count", r.column_max_count},
          {"clockwise_max_count", r.clockwise_max_count},
          {"column_max_ratio", r.column_max_ratio},
          {"clockwise_max_ratio", r.clockwise_max_ratio},
          {"preconditioned", r.preconditioned},
          {"records", std::move(records)}};
}

std::string to_csv(const ComparisonReport& r) {
  std::ostringstream out;
  out << "length,index,seed,column_count,clockwise_count,column_ratio,clockwise_ratio,reannihilations,identical\n";
  for (const auto& s : r.records)
    out << s.length << ',' << s.index << ',' << s.seed << ',' << s.column_count << ',' << s.clockwise_count << ','
        << csv_double(s.column_ratio) << ',' << csv_double(s.clockwise_ratio) << ',' << s.reannihilations << ','
        << (s.identical ? 1 : 0) << '\n';
  return out.str();
}

std::size_t harness_threads() {
  if (const char* env = std::getenv("QIBG_THREADS"); env && *env) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw InvalidArgument(std::string("QIBG_THREADS must be a positive integer, got '") + env + "'");
    return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace qibg
