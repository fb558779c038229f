#pragma once

// Prefix-masking benchmark. Every uppercase-starting reference site becomes
// one query per prefix length; the engine is invoked as if the user had
// typed that prefix and the target's rank in the top-k is recorded. Metrics
// aggregate per package, per prefix length, and overall.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <vector>

#if defined(__unix__) || defined(__APPLE__)
#include <sys/resource.h>
#endif

#include "scopecomplete/corpus.hpp"
#include "scopecomplete/engine.hpp"
#include "scopecomplete/index.hpp"
#include "scopecomplete/metrics.hpp"

namespace scopecomplete {

struct EmptyBenchmark : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MismatchedReports : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BenchConfig {
  int k = 10;
  PrefixRange prefixRange{};
  bool caseSensitive = true;
  CaseFilter filter{};
  std::string testMarker = "Test";  // partition marker for comparison aggregates
  unsigned threads = 0;             // 0 = hardware, capped by SCOPECOMPLETE_THREADS
};

// One aggregated table row. prefixLength 0 stands for "all".
//
// accuracy/mrr/ndcg are computed at the configured k; the histogram always
// covers positions 1..10, so the sum(histogram) == hits identity is exact
// for k <= 10. fullNameQueries counts cases whose prefix is the whole
// target name, so they can be excluded in sensitivity analysis.
struct MetricRow {
  std::string scope;
  int prefixLength = 0;
  std::uint64_t queryCount = 0;
  std::uint64_t fullNameQueries = 0;
  double accuracyAt10 = 0.0;
  double mrr = 0.0;
  double ndcgAt10 = 0.0;
  std::array<std::uint64_t, 10> rankHistogram{};
  std::uint64_t pulledTotal = 0;
  std::chrono::nanoseconds meanElapsed{0};
  std::chrono::nanoseconds totalElapsed{0};
};

struct BenchReport {
  std::string strategyName;
  std::string corpusName;
  BenchConfig config;
  std::chrono::nanoseconds indexBuildTime{0};
  std::uint64_t peakRssBytes = 0;  // best effort; 0 when unavailable
  std::vector<MetricRow> frameworkRows;                      // "all" first, then prefix lengths
  std::map<std::string, std::vector<MetricRow>> packageRows;  // same shape per package
};

namespace detail {

inline unsigned env_thread_cap() {
  if (const char* env = std::getenv("SCOPECOMPLETE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 0;
}

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const unsigned cap = env_thread_cap()) n = std::min(n, cap);
  n = std::min<std::size_t>(n, jobs);
  return std::max(1u, n);
}

inline std::uint64_t peak_rss_bytes() {
#if defined(__unix__) || defined(__APPLE__)
  rusage ru{};
  if (getrusage(RUSAGE_SELF, &ru) == 0) {
#if defined(__APPLE__)
    return static_cast<std::uint64_t>(ru.ru_maxrss);  // bytes on macOS
#else
    return static_cast<std::uint64_t>(ru.ru_maxrss) * 1024;  // KiB on Linux
#endif
  }
#endif
  return 0;
}

}  // namespace detail

// Runs every case against one strategy. Workers own their ResultSets and
// write into disjoint slots, so the outcome order (and every metric derived
// from it) is independent of the thread count.
inline std::vector<Outcome> evaluate_cases(const Repository& repo, const SymbolIndex& index,
                                           std::span<const BenchmarkCase> cases, Strategy strategy,
                                           const BenchConfig& cfg = {}) {
  std::vector<Outcome> outcomes(cases.size());
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const BenchmarkCase& c = cases[i];
      CompletionContext ctx{&repo, c.site.packageName, c.prefix, cfg.caseSensitive};
      const auto t0 = std::chrono::steady_clock::now();
      ResultSet rs = make_pipeline(ctx, strategy, index);
      auto rank = rs.rank_of(c.targetName, static_cast<std::size_t>(cfg.k));
      const auto t1 = std::chrono::steady_clock::now();
      Outcome& o = outcomes[i];
      o.benchCase = c;
      if (rank) o.rank = static_cast<int>(*rank);
      o.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0);
      o.pulled = rs.stats().total();
    }
  };
  const unsigned threads = detail::worker_count(cfg.threads, cases.size());
  if (threads <= 1) {
    worker(0, cases.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (cases.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(cases.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (std::thread& t : pool) t.join();
  }
  return outcomes;
}

namespace detail {

inline MetricRow make_row(std::string scope, int prefixLength,
                          const std::vector<Outcome>& outcomes,
                          const std::vector<std::size_t>& picks, int k) {
  MetricRow row;
  row.scope = std::move(scope);
  row.prefixLength = prefixLength;
  row.queryCount = picks.size();
  std::chrono::nanoseconds total{0};
  double mrrSum = 0.0, ndcgSum = 0.0;
  std::uint64_t hits = 0;
  for (const std::size_t i : picks) {
    const Outcome& o = outcomes[i];
    if (o.benchCase.prefix_is_full_name()) ++row.fullNameQueries;
    if (o.rank) {
      const int r = *o.rank;
      if (r <= k) {
        ++hits;
        mrrSum += 1.0 / static_cast<double>(r);
        ndcgSum += 1.0 / std::log2(static_cast<double>(r) + 1.0);
      }
      if (r >= 1 && r <= 10) ++row.rankHistogram[static_cast<std::size_t>(r - 1)];
    }
    row.pulledTotal += o.pulled;
    total += o.elapsed;
  }
  if (!picks.empty()) {
    const auto n = static_cast<double>(picks.size());
    row.accuracyAt10 = static_cast<double>(hits) / n;
    row.mrr = mrrSum / n;
    row.ndcgAt10 = ndcgSum / n;
    row.totalElapsed = total;
    row.meanElapsed = std::chrono::nanoseconds(total.count() / static_cast<long long>(picks.size()));
  }
  return row;
}

}  // namespace detail

inline BenchReport run_benchmark(const Repository& repo, Strategy strategy,
                                 const BenchConfig& cfg = {}) {
  if (cfg.k < 1) throw std::invalid_argument("k must be >= 1");
  if (!cfg.prefixRange.valid()) throw std::invalid_argument("invalid prefix range (1..32)");
  const std::vector<BenchmarkCase> cases =
      extract_benchmark_cases(repo, cfg.filter, cfg.prefixRange);
  if (cases.empty()) throw EmptyBenchmark("no benchmark cases qualify for " + repo.name);

  const auto b0 = std::chrono::steady_clock::now();
  const SymbolIndex index = build_index(repo);
  const auto b1 = std::chrono::steady_clock::now();

  const std::vector<Outcome> outcomes = evaluate_cases(repo, index, cases, strategy, cfg);

  BenchReport report;
  report.strategyName = std::string(to_string(strategy.kind));
  report.corpusName = repo.name;
  report.config = cfg;
  report.indexBuildTime = std::chrono::duration_cast<std::chrono::nanoseconds>(b1 - b0);

  // Fixed-order fold: outcomes grouped by (package, prefix length) in case
  // order, so reports are bit-identical across thread counts.
  std::map<std::string, std::vector<std::size_t>> byPackage;
  std::vector<std::size_t> all(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    all[i] = i;
    byPackage[outcomes[i].benchCase.site.packageName].push_back(i);
  }
  auto rows_for = [&](const std::string& scope, const std::vector<std::size_t>& picks) {
    std::vector<MetricRow> rows;
    rows.push_back(detail::make_row(scope, 0, outcomes, picks, cfg.k));
    for (int L = cfg.prefixRange.min; L <= cfg.prefixRange.max; ++L) {
      std::vector<std::size_t> sub;
      for (const std::size_t i : picks)
        if (outcomes[i].benchCase.prefixLength == L) sub.push_back(i);
      if (!sub.empty()) rows.push_back(detail::make_row(scope, L, outcomes, sub, cfg.k));
    }
    return rows;
  };
  report.frameworkRows = rows_for(repo.name, all);
  for (const auto& [pkg, picks] : byPackage) report.packageRows[pkg] = rows_for(pkg, picks);
  report.peakRssBytes = detail::peak_rss_bytes();
  return report;
}

// --- with/without comparison ---------------------------------------------------

struct PartitionRule {
  std::string testMarker = "Test";
};

struct DeltaCell {
  double without = 0.0;
  double with = 0.0;
  double delta = 0.0;  // with - without, negative values pass through
};

// Cells keyed by prefix length, 0 = overall. `aggregate` blocks are means
// over package rows with zero cells omitted per side (the zero-omission
// rule); package blocks are raw per-package values.
struct DeltaBlock {
  std::string scope;
  bool aggregate = false;
  std::map<int, DeltaCell> mrr;
  std::map<int, DeltaCell> accuracy;
};

struct DeltaReport {
  std::string corpusName;
  BenchConfig config;
  std::string withoutStrategy;
  std::string withStrategy;
  std::vector<DeltaBlock> aggregates;  // Overall, Test, Non-test
  std::vector<DeltaBlock> packages;
};

namespace detail {

inline bool same_config(const BenchConfig& a, const BenchConfig& b) {
  return a.k == b.k && a.prefixRange.min == b.prefixRange.min &&
         a.prefixRange.max == b.prefixRange.max && a.caseSensitive == b.caseSensitive &&
         a.filter.mode == b.filter.mode && a.filter.packages == b.filter.packages &&
         a.filter.testMarker == b.filter.testMarker && a.testMarker == b.testMarker;
}

inline const MetricRow* find_row(const std::vector<MetricRow>& rows, int prefixLength) {
  for (const MetricRow& r : rows)
    if (r.prefixLength == prefixLength) return &r;
  return nullptr;
}

}  // namespace detail

inline DeltaReport compare(const BenchReport& without, const BenchReport& with,
                           const PartitionRule& partition = {}) {
  if (without.corpusName != with.corpusName)
    throw MismatchedReports("reports cover different corpora: " + without.corpusName + " vs " +
                            with.corpusName);
  if (!detail::same_config(without.config, with.config))
    throw MismatchedReports("reports were produced with different configurations");
  {
    auto keys = [](const BenchReport& r) {
      std::vector<std::string> k;
      for (const auto& [pkg, rows] : r.packageRows) k.push_back(pkg);
      return k;
    };
    if (keys(without) != keys(with))
      throw MismatchedReports("reports cover different package sets");
  }

  DeltaReport out;
  out.corpusName = without.corpusName;
  out.config = without.config;
  out.withoutStrategy = without.strategyName;
  out.withStrategy = with.strategyName;

  std::vector<int> lengths;
  lengths.push_back(0);
  for (int L = without.config.prefixRange.min; L <= without.config.prefixRange.max; ++L)
    lengths.push_back(L);

  for (const auto& [pkg, rowsWithout] : without.packageRows) {
    const auto& rowsWith = with.packageRows.at(pkg);
    DeltaBlock block;
    block.scope = pkg;
    for (const int L : lengths) {
      const MetricRow* a = detail::find_row(rowsWithout, L);
      const MetricRow* b = detail::find_row(rowsWith, L);
      if (!a && !b) continue;
      if (!a || !b) throw MismatchedReports("row sets differ for package " + pkg);
      block.mrr[L] = {a->mrr, b->mrr, b->mrr - a->mrr};
      block.accuracy[L] = {a->accuracyAt10, b->accuracyAt10, b->accuracyAt10 - a->accuracyAt10};
    }
    out.packages.push_back(std::move(block));
  }

  // Aggregates: mean over package cells, omitting zero values side by side
  // (a zero typically marks a trivial, abstract, or extension-only package).
  auto aggregate_block = [&](const std::string& scope, auto&& selectPkg) {
    DeltaBlock block;
    block.scope = scope;
    block.aggregate = true;
    for (const int L : lengths) {
      auto fold_cell = [&](auto&& pick) {
        double sumW = 0, sumX = 0;
        std::uint64_t nW = 0, nX = 0;
        for (const DeltaBlock& pb : out.packages) {
          if (!selectPkg(pb.scope)) continue;
          auto it = pick(pb).find(L);
          if (it == pick(pb).end()) continue;
          if (it->second.without != 0.0) { sumW += it->second.without; ++nW; }
          if (it->second.with != 0.0) { sumX += it->second.with; ++nX; }
        }
        DeltaCell cell;
        cell.without = nW ? sumW / static_cast<double>(nW) : 0.0;
        cell.with = nX ? sumX / static_cast<double>(nX) : 0.0;
        cell.delta = cell.with - cell.without;
        return std::pair<bool, DeltaCell>(nW + nX > 0, cell);
      };
      auto [mAny, mCell] = fold_cell([](const DeltaBlock& b) -> const auto& { return b.mrr; });
      auto [aAny, aCell] = fold_cell([](const DeltaBlock& b) -> const auto& { return b.accuracy; });
      if (mAny) block.mrr[L] = mCell;
      if (aAny) block.accuracy[L] = aCell;
    }
    bool hasMember = false;
    for (const DeltaBlock& pb : out.packages) hasMember = hasMember || selectPkg(pb.scope);
    if (hasMember) out.aggregates.push_back(std::move(block));
  };
  const std::string& marker = partition.testMarker;
  aggregate_block("Overall", [](const std::string&) { return true; });
  aggregate_block("Test", [&](const std::string& p) { return p.find(marker) != std::string::npos; });
  aggregate_block("Non-test",
                  [&](const std::string& p) { return p.find(marker) == std::string::npos; });
  return out;
}

}  // namespace scopecomplete
