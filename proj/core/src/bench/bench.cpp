#include "claimcheck/bench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include <json.hpp>

#include "claimcheck/error.hpp"
#include "claimcheck/evaluation/report_format.hpp"
#include "claimcheck/random.hpp"
#include "claimcheck/unicode.hpp"

namespace claimcheck::bench {
namespace {

using Clock = std::chrono::steady_clock;

double score_range(const classifier::ScorerModel& model, const std::vector<Post>& posts, std::size_t begin,
                   std::size_t end) {
  double sink = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const auto v = model.score(posts[i].text);
    sink += v.vfc->pos + v.harmful->pos;
  }
  return sink;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Script {
  std::u32string letters;
  const char* language;
};

const std::vector<Script>& scripts() {
  static const std::vector<Script> all{
      {U"abcdefghijklmnopqrstuvwxyz", "en"},
      {U"абвгдежзийклмнопрстуфхцчшщъьюя", "bg"},
      {U"ابتثجحخدذرزسشصضطظعغفقكلمنهوي", "ar"},
      {U"αβγδεζηθικλμνξοπρστυφχψω", "el"},
  };
  return all;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void BenchConfig::validate(std::size_t corpus_size) const {
  if (counts.empty()) throw ConfigError("bench needs at least one count");
  for (auto n : counts) {
    if (n == 0) throw ConfigError("bench counts must be positive");
    if (n > corpus_size) {
      throw ConfigError("bench count " + std::to_string(n) + " exceeds the corpus size " +
                        std::to_string(corpus_size));
    }
  }
  if (repeats == 0) throw ConfigError("bench repeats must be at least 1");
  if (threads == 0) throw ConfigError("bench threads must be at least 1");
  if (!(human_seconds_per_post > 0.0)) throw ConfigError("human baseline must be positive");
}

double BenchRow::mean_elapsed() const {
  if (repeats.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& m : repeats) sum += m.elapsed_seconds;
  return sum / static_cast<double>(repeats.size());
}

double BenchRow::elapsed_variance() const {
  if (repeats.size() < 2) return 0.0;
  const double mean = mean_elapsed();
  double ss = 0.0;
  for (const auto& m : repeats) ss += (m.elapsed_seconds - mean) * (m.elapsed_seconds - mean);
  return ss / static_cast<double>(repeats.size() - 1);
}

Measurement make_measurement(std::size_t n, double elapsed_seconds, double human_seconds_per_post) {
  Measurement m;
  // A zero reading would only come from a clock coarser than the workload.
  m.elapsed_seconds = std::max(elapsed_seconds, 1e-9);
  m.throughput = static_cast<double>(n) / m.elapsed_seconds;
  m.speedup = static_cast<double>(n) * human_seconds_per_post / m.elapsed_seconds;
  return m;
}

BenchReport run_bench(const classifier::ScorerModel& model, const std::vector<Post>& posts,
                      const BenchConfig& config) {
  config.validate(posts.size());
  BenchReport report;
  report.label = config.label;
  report.human_seconds_per_post = config.human_seconds_per_post;
  report.warmup = config.warmup;
  report.warmup_size = config.warmup_size;
  report.threads = config.threads;

  volatile double sink = 0.0;
  for (std::size_t n : config.counts) {
    BenchRow row;
    row.count = n;
    const std::size_t warm = std::min(n, config.warmup_size);
    for (std::size_t w = 0; w < config.warmup; ++w) sink = sink + score_range(model, posts, 0, warm);

    for (std::size_t r = 0; r < config.repeats; ++r) {
      if (config.threads == 1) {
        const auto start = Clock::now();
        sink = sink + score_range(model, posts, 0, n);
        row.repeats.push_back(make_measurement(n, seconds_since(start), config.human_seconds_per_post));
        continue;
      }
      const std::size_t t_count = std::min(config.threads, n);
      std::vector<double> thread_elapsed(t_count, 0.0);
      std::vector<std::size_t> thread_items(t_count, 0);
      std::vector<double> thread_sink(t_count, 0.0);
      std::vector<std::thread> workers;
      const auto start = Clock::now();
      for (std::size_t t = 0; t < t_count; ++t) {
        const std::size_t begin = n * t / t_count;
        const std::size_t end = n * (t + 1) / t_count;
        thread_items[t] = end - begin;
        workers.emplace_back([&, t, begin, end] {
          const auto t_start = Clock::now();
          thread_sink[t] = score_range(model, posts, begin, end);
          thread_elapsed[t] = seconds_since(t_start);
        });
      }
      for (auto& w : workers) w.join();
      auto m = make_measurement(n, seconds_since(start), config.human_seconds_per_post);
      for (std::size_t t = 0; t < t_count; ++t) {
        m.per_thread_throughput.push_back(static_cast<double>(thread_items[t]) / std::max(thread_elapsed[t], 1e-9));
        sink = sink + thread_sink[t];
      }
      row.repeats.push_back(std::move(m));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<Post> synth_corpus(std::size_t n, std::uint64_t seed) {
  SeededRng rng(seed);
  const auto& all = scripts();
  const std::u32string punct = U".,!?;:";
  std::vector<Post> out;
  out.reserve(n);
  char id[32];
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t target = 15 + static_cast<std::size_t>(rng.uniform_below(486));
    const auto& primary = all[rng.uniform_below(all.size())];
    std::u32string text;
    while (text.size() < target) {
      if (!text.empty()) text.push_back(U' ');
      const double roll = rng.uniform01();
      if (roll < 0.08) {
        const auto digits = 1 + rng.uniform_below(4);
        for (std::uint64_t d = 0; d < digits; ++d) text.push_back(U'0' + static_cast<char32_t>(rng.uniform_below(10)));
        continue;
      }
      const auto& script = roll < 0.20 ? all[rng.uniform_below(all.size())] : primary;
      const auto len = 2 + rng.uniform_below(8);
      for (std::uint64_t k = 0; k < len; ++k) text.push_back(script.letters[rng.uniform_below(script.letters.size())]);
      if (rng.uniform01() < 0.1) text.push_back(punct[rng.uniform_below(punct.size())]);
    }
    text.resize(target);
    if (text.back() == U' ') text.back() = primary.letters.front();

    Post post;
    std::snprintf(id, sizeof id, "synth-%06zu", i + 1);
    post.id = id;
    post.text = unicode::encode(text);
    post.language = primary.language;
    post.source = "synthetic";
    post.labels.vfc = rng.uniform_below(2) == 1;
    post.labels.harmful = rng.uniform_below(2) == 1;
    out.push_back(std::move(post));
  }
  return out;
}

std::string format_bench_table(const std::vector<BenchReport>& reports) {
  std::vector<std::string> header{"posts"};
  for (const auto& rep : reports) {
    const std::string base = rep.label.empty() ? "model" : rep.label;
    const std::size_t repeats = rep.rows.empty() ? 1 : rep.rows.front().repeats.size();
    for (std::size_t r = 0; r < repeats; ++r) {
      const std::string suffix = repeats > 1 ? " #" + std::to_string(r + 1) : "";
      header.push_back(base + suffix + " s");
      header.push_back("posts/s");
      header.push_back("speedup");
    }
    if (repeats > 1) header.push_back("var(s)");
  }
  std::vector<std::vector<std::string>> rows{header};

  std::vector<std::size_t> counts;
  for (const auto& rep : reports) {
    for (const auto& row : rep.rows) {
      if (std::find(counts.begin(), counts.end(), row.count) == counts.end()) counts.push_back(row.count);
    }
  }
  for (std::size_t n : counts) {
    std::vector<std::string> line{std::to_string(n)};
    for (const auto& rep : reports) {
      const std::size_t repeats = rep.rows.empty() ? 1 : rep.rows.front().repeats.size();
      auto it = std::find_if(rep.rows.begin(), rep.rows.end(), [&](const BenchRow& r) { return r.count == n; });
      for (std::size_t r = 0; r < repeats; ++r) {
        if (it == rep.rows.end() || r >= it->repeats.size()) {
          line.insert(line.end(), {"-", "-", "-"});
          continue;
        }
        const auto& m = it->repeats[r];
        line.push_back(fixed(m.elapsed_seconds, 4));
        line.push_back(fixed(m.throughput, 1));
        line.push_back(fixed(m.speedup, 1) + "x");
      }
      if (repeats > 1) line.push_back(it == rep.rows.end() ? "-" : fixed(it->elapsed_variance(), 8));
    }
    rows.push_back(std::move(line));
  }
  std::string notes;
  for (const auto& rep : reports) {
    notes += rep.label + ": warmup " + std::to_string(rep.warmup) + " x " + std::to_string(rep.warmup_size) +
             " posts, threads " + std::to_string(rep.threads) + ", human baseline " +
             fixed(rep.human_seconds_per_post, 1) + " s/post\n";
  }
  return evaluation::align_table(rows) + notes;
}

std::string format_bench_structured(const std::vector<BenchReport>& reports) {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::array();
  for (const auto& rep : reports) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : rep.rows) {
      ordered_json repeats = ordered_json::array();
      for (const auto& m : row.repeats) {
        ordered_json j{{"elapsed_seconds", m.elapsed_seconds}, {"throughput", m.throughput}, {"speedup", m.speedup}};
        if (!m.per_thread_throughput.empty()) j["per_thread_throughput"] = m.per_thread_throughput;
        repeats.push_back(j);
      }
      rows.push_back({{"count", row.count},
                      {"repeats", repeats},
                      {"mean_elapsed_seconds", row.mean_elapsed()},
                      {"elapsed_variance", row.elapsed_variance()}});
    }
    doc.push_back({{"label", rep.label},
                   {"human_seconds_per_post", rep.human_seconds_per_post},
                   {"warmup", rep.warmup},
                   {"warmup_size", rep.warmup_size},
                   {"threads", rep.threads},
                   {"rows", rows}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace claimcheck::bench
