#include "claimcheck/corpus/split.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "claimcheck/error.hpp"
#include "claimcheck/random.hpp"

namespace claimcheck::corpus {
namespace {

constexpr std::array<Fold, 3> kFolds{Fold::train, Fold::val, Fold::test};

using FoldCounts = std::array<std::size_t, 3>;

// Largest-remainder rounding of fraction * size; ties go to the earlier fold.
FoldCounts apportion(std::size_t size, const std::array<double, 3>& fractions) {
  FoldCounts counts{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (std::size_t f = 0; f < 3; ++f) {
    const double quota = fractions[f] * static_cast<double>(size);
    counts[f] = static_cast<std::size_t>(std::floor(quota));
    remainders[f] = quota - std::floor(quota);
    assigned += counts[f];
  }
  // Guard against a quota rounding above the stratum size.
  while (assigned > size) {
    auto f = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    --counts[f];
    --assigned;
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < size; k = (k + 1) % 3) {
    ++counts[order[k]];
    ++assigned;
  }
  return counts;
}

// Integer max flow on a tiny dense graph (Edmonds-Karp).
class FlowGraph {
 public:
  explicit FlowGraph(std::size_t nodes) : n_(nodes), cap_(nodes * nodes, 0) {}

  void add(std::size_t from, std::size_t to, long long capacity) { cap_[from * n_ + to] += capacity; }
  long long residual(std::size_t from, std::size_t to) const { return cap_[from * n_ + to]; }

  long long max_flow(std::size_t source, std::size_t sink) {
    long long total = 0;
    std::vector<std::size_t> parent(n_);
    while (true) {
      std::fill(parent.begin(), parent.end(), n_);
      parent[source] = source;
      std::queue<std::size_t> queue;
      queue.push(source);
      while (!queue.empty() && parent[sink] == n_) {
        auto u = queue.front();
        queue.pop();
        for (std::size_t v = 0; v < n_; ++v) {
          if (parent[v] == n_ && cap_[u * n_ + v] > 0) {
            parent[v] = u;
            queue.push(v);
          }
        }
      }
      if (parent[sink] == n_) return total;
      long long bottleneck = std::numeric_limits<long long>::max();
      for (auto v = sink; v != source; v = parent[v]) {
        bottleneck = std::min(bottleneck, cap_[parent[v] * n_ + v]);
      }
      for (auto v = sink; v != source; v = parent[v]) {
        cap_[parent[v] * n_ + v] -= bottleneck;
        cap_[v * n_ + parent[v]] += bottleneck;
      }
      total += bottleneck;
    }
  }

 private:
  std::size_t n_;
  std::vector<long long> cap_;
};

// Per-stratum fold counts whose column sums equal `totals` and whose cells
// are floor or ceil of size_s * totals_f / n.
std::vector<FoldCounts> controlled_rounding(const std::vector<std::size_t>& sizes,
                                            const FoldCounts& totals) {
  const std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  const std::size_t rows = sizes.size();
  std::vector<FoldCounts> cells(rows);
  std::vector<std::array<bool, 3>> fractional(rows);
  std::vector<long long> row_deficit(rows);
  std::array<long long, 3> col_deficit{};
  for (std::size_t f = 0; f < 3; ++f) col_deficit[f] = static_cast<long long>(totals[f]);
  for (std::size_t s = 0; s < rows; ++s) {
    row_deficit[s] = static_cast<long long>(sizes[s]);
    for (std::size_t f = 0; f < 3; ++f) {
      const std::size_t product = sizes[s] * totals[f];
      cells[s][f] = product / n;
      fractional[s][f] = product % n != 0;
      row_deficit[s] -= static_cast<long long>(cells[s][f]);
      col_deficit[f] -= static_cast<long long>(cells[s][f]);
    }
  }
  // Nodes: 0 source, 1..rows strata, rows+1..rows+3 folds, rows+4 sink.
  const std::size_t source = 0;
  const std::size_t sink = rows + 4;
  FlowGraph graph(rows + 5);
  long long needed = 0;
  for (std::size_t s = 0; s < rows; ++s) {
    graph.add(source, 1 + s, row_deficit[s]);
    needed += row_deficit[s];
    for (std::size_t f = 0; f < 3; ++f) {
      if (fractional[s][f]) graph.add(1 + s, rows + 1 + f, 1);
    }
  }
  for (std::size_t f = 0; f < 3; ++f) graph.add(rows + 1 + f, sink, col_deficit[f]);
  if (graph.max_flow(source, sink) != needed) {
    throw Error("internal error: controlled rounding found no feasible allocation");
  }
  for (std::size_t s = 0; s < rows; ++s) {
    for (std::size_t f = 0; f < 3; ++f) {
      if (fractional[s][f] && graph.residual(1 + s, rows + 1 + f) == 0) ++cells[s][f];
    }
  }
  return cells;
}

void assign_prefix(const std::vector<std::size_t>& order, const FoldCounts& counts,
                   const std::vector<Post>& posts, std::map<std::string, Fold>& out) {
  std::size_t pos = 0;
  for (std::size_t f = 0; f < 3; ++f) {
    for (std::size_t k = 0; k < counts[f]; ++k, ++pos) out.emplace(posts[order[pos]].id, kFolds[f]);
  }
}

char label_char(const std::optional<bool>& label) {
  if (!label) return '-';
  return *label ? '1' : '0';
}

}  // namespace

SplitSpec SplitSpec::with_counts(std::size_t train, std::size_t val, std::size_t test, std::uint64_t seed) {
  SplitSpec spec;
  spec.mode = Mode::explicit_counts;
  spec.counts = {train, val, test};
  spec.seed = seed;
  return spec;
}

SplitSpec SplitSpec::with_fractions(double train, double val, double test, std::uint64_t seed) {
  SplitSpec spec;
  spec.mode = Mode::fractions;
  spec.fractions = {train, val, test};
  spec.seed = seed;
  return spec;
}

void SplitSpec::validate(std::size_t total) const {
  if (mode == Mode::explicit_counts) {
    const auto sum = counts[0] + counts[1] + counts[2];
    if (sum != total) {
      throw ConfigError("explicit split counts sum to " + std::to_string(sum) +
                        " but the collection has " + std::to_string(total) + " posts");
    }
    return;
  }
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0) || !std::isfinite(f)) throw ConfigError("split fractions must be non-negative");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split fractions sum to " + std::to_string(sum) + ", expected 1.0");
  }
}

std::string_view split_mode_name(SplitSpec::Mode mode) {
  return mode == SplitSpec::Mode::explicit_counts ? "explicit-counts" : "fractions";
}

SplitSpec::Mode parse_split_mode(std::string_view name) {
  if (name == "explicit-counts" || name == "counts") return SplitSpec::Mode::explicit_counts;
  if (name == "fractions") return SplitSpec::Mode::fractions;
  throw ConfigError("unknown split mode '" + std::string(name) + "'");
}

std::string stratum_key(const Post& post) {
  std::string key = "vfc=";
  key += label_char(post.labels.vfc);
  key += "|harmful=";
  key += label_char(post.labels.harmful);
  key += '|';
  key += post.language;
  return key;
}

std::map<std::string, Fold> assign_folds(const std::vector<Post>& posts, const SplitSpec& spec) {
  spec.validate(posts.size());
  check_unique_ids(posts, "split");

  SeededRng rng(spec.seed);
  std::map<std::string, Fold> out;

  if (!spec.stratified()) {
    std::vector<std::size_t> order(posts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span(order));
    const FoldCounts counts = spec.mode == SplitSpec::Mode::explicit_counts
                                  ? spec.counts
                                  : apportion(posts.size(), spec.fractions);
    assign_prefix(order, counts, posts, out);
    return out;
  }

  std::map<std::string, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < posts.size(); ++i) strata[stratum_key(posts[i])].push_back(i);

  std::vector<FoldCounts> per_stratum;
  if (spec.mode == SplitSpec::Mode::explicit_counts) {
    std::vector<std::size_t> sizes;
    for (const auto& [key, members] : strata) sizes.push_back(members.size());
    per_stratum = controlled_rounding(sizes, spec.counts);
  } else {
    for (const auto& [key, members] : strata) per_stratum.push_back(apportion(members.size(), spec.fractions));
  }

  std::size_t s = 0;
  for (auto& [key, members] : strata) {
    rng.shuffle(std::span(members));
    assign_prefix(members, per_stratum[s++], posts, out);
  }
  return out;
}

Collection split(Collection collection, const SplitSpec& spec) {
  collection.split_assignment = assign_folds(collection.posts, spec);
  return collection;
}

}  // namespace claimcheck::corpus
