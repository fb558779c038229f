#pragma once

// Rank metrics over benchmark outcomes. A missing rank (target not in the
// top-k) contributes 0 to MRR and NDCG and is absent from the histogram.

#include <array>
#include <cmath>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

#include "scopecomplete/corpus.hpp"

namespace scopecomplete {

struct EmptyInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  BenchmarkCase benchCase;
  std::optional<int> rank;  // 1..k
  std::chrono::nanoseconds elapsed{0};
  std::uint64_t pulled = 0;  // candidates drawn from tier sources
};

// MRR = (1/|Q|) * sum(1/rank_i), with 0 for misses.
inline double mrr(std::span<const Outcome> outcomes) {
  if (outcomes.empty()) throw EmptyInput("mrr over empty outcome set");
  double sum = 0.0;
  for (const Outcome& o : outcomes)
    if (o.rank) sum += 1.0 / static_cast<double>(*o.rank);
  return sum / static_cast<double>(outcomes.size());
}

// Binary relevance with a single relevant item reduces NDCG@k to
// 1/log2(rank + 1) per query, 0 for misses; the result is the query mean.
inline double ndcg_at_k(std::span<const Outcome> outcomes, int k) {
  if (k < 1) throw EmptyInput("ndcg_at_k requires k >= 1");
  if (outcomes.empty()) throw EmptyInput("ndcg over empty outcome set");
  double sum = 0.0;
  for (const Outcome& o : outcomes)
    if (o.rank && *o.rank <= k) sum += 1.0 / std::log2(static_cast<double>(*o.rank) + 1.0);
  return sum / static_cast<double>(outcomes.size());
}

inline double accuracy_at_k(std::span<const Outcome> outcomes, int k) {
  if (k < 1) throw EmptyInput("accuracy_at_k requires k >= 1");
  if (outcomes.empty()) throw EmptyInput("accuracy over empty outcome set");
  std::uint64_t hit = 0;
  for (const Outcome& o : outcomes)
    if (o.rank && *o.rank <= k) ++hit;
  return static_cast<double>(hit) / static_cast<double>(outcomes.size());
}

// counts[i] = outcomes ranked at position i+1; positions 1..10.
inline std::array<std::uint64_t, 10> rank_histogram(std::span<const Outcome> outcomes) {
  std::array<std::uint64_t, 10> counts{};
  for (const Outcome& o : outcomes)
    if (o.rank && *o.rank >= 1 && *o.rank <= 10) ++counts[static_cast<std::size_t>(*o.rank - 1)];
  return counts;
}

}  // namespace scopecomplete
