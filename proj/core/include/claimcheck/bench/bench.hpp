#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "claimcheck/classifier/model.hpp"
#include "claimcheck/post.hpp"

namespace claimcheck::bench {

inline constexpr double kHumanSecondsPerPost = 30.0;

struct BenchConfig {
  std::vector<std::size_t> counts{100, 1000, 2000};
  std::size_t warmup = 1;          // untimed passes per count
  std::size_t warmup_size = 100;   // posts per warmup pass, capped at the count
  std::size_t repeats = 1;         // timed passes per count, each reported
  std::size_t threads = 1;         // > 1 selects the parallel mode
  double human_seconds_per_post = kHumanSecondsPerPost;
  std::string label = "baseline";

  // Throws ConfigError.
  void validate(std::size_t corpus_size) const;
};

struct Measurement {
  double elapsed_seconds = 0.0;
  double throughput = 0.0;  // posts per second
  double speedup = 0.0;     // n * human_seconds_per_post / elapsed
  std::vector<double> per_thread_throughput;  // parallel mode only
};

struct BenchRow {
  std::size_t count = 0;
  std::vector<Measurement> repeats;

  double mean_elapsed() const;
  // Sample variance of elapsed seconds; 0 with a single repeat.
  double elapsed_variance() const;
};

struct BenchReport {
  std::string label;
  double human_seconds_per_post = kHumanSecondsPerPost;
  std::size_t warmup = 0;
  std::size_t warmup_size = 0;
  std::size_t threads = 1;
  std::vector<BenchRow> rows;
};

Measurement make_measurement(std::size_t n, double elapsed_seconds, double human_seconds_per_post);

// For each count n: `warmup` untimed passes over the first min(n, warmup_size)
// posts, then `repeats` timed passes over the first n posts, measured with
// std::chrono::steady_clock.
BenchReport run_bench(const classifier::ScorerModel& model, const std::vector<Post>& posts,
                      const BenchConfig& config);

// Deterministic posts of 15..500 characters mixing Latin, Cyrillic, Arabic
// and Greek words with digits and punctuation.
std::vector<Post> synth_corpus(std::size_t n, std::uint64_t seed);

// Counts as rows; each report contributes elapsed / posts-per-second /
// speedup columns (per repeat when there are several).
std::string format_bench_table(const std::vector<BenchReport>& reports);
std::string format_bench_structured(const std::vector<BenchReport>& reports);

}  // namespace claimcheck::bench
