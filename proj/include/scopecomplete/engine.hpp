#pragma once

// Completion strategies. flatGlobal ranks every prefix match in one
// lexicographic order; packageAware serves the requesting package first,
// then related packages (shared leading name segments), then the rest of
// the global namespace, deduplicated by name across tiers.

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scopecomplete/ascii.hpp"
#include "scopecomplete/corpus.hpp"
#include "scopecomplete/fetcher.hpp"
#include "scopecomplete/index.hpp"

namespace scopecomplete {

struct UnknownPackage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CompletionContext {
  const Repository* repo = nullptr;
  std::string requestingPackage;
  std::string prefix;  // empty matches everything (interactive use)
  bool caseSensitive = true;
};

enum class StrategyKind { flatGlobal, packageAware };

struct Strategy {
  StrategyKind kind = StrategyKind::packageAware;
};

inline std::string_view to_string(StrategyKind k) {
  return k == StrategyKind::flatGlobal ? "flat_global" : "package_aware";
}

struct BeginsWithFilter {
  std::string prefix;
  bool caseSensitive = true;
  bool operator()(std::string_view name) const {
    return ascii::starts_with(name, prefix, caseSensitive);
  }
  bool operator()(const Candidate& c) const { return (*this)(c.name); }
};

inline BeginsWithFilter begins_with_filter(std::string prefix, bool caseSensitive) {
  return BeginsWithFilter{std::move(prefix), caseSensitive};
}

inline std::vector<std::string_view> split_segments(std::string_view name, std::string_view sep) {
  std::vector<std::string_view> segs;
  if (sep.empty()) {
    segs.push_back(name);
    return segs;
  }
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = name.find(sep, pos);
    if (next == std::string_view::npos) {
      segs.push_back(name.substr(pos));
      return segs;
    }
    segs.push_back(name.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

// Packages sharing at least the first separator-delimited segment with
// packageName, ordered by descending shared-segment count then name.
// Relatedness is inferred from naming alone, not declared dependencies.
inline std::vector<std::string> related_packages(const Repository& repo,
                                                 std::string_view packageName) {
  const auto base = split_segments(packageName, repo.segmentSeparator);
  std::vector<std::pair<std::size_t, std::string_view>> hits;  // (shared count, name)
  for (const Package& p : repo.packages) {
    if (p.name == packageName) continue;
    const auto segs = split_segments(p.name, repo.segmentSeparator);
    std::size_t shared = 0;
    while (shared < base.size() && shared < segs.size() && base[shared] == segs[shared]) ++shared;
    if (shared >= 1) hits.emplace_back(shared, p.name);
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::string> out;
  out.reserve(hits.size());
  for (const auto& [shared, name] : hits) out.emplace_back(name);
  return out;
}

namespace detail {

class ScanFetcher final : public Fetcher {
 public:
  ScanFetcher(SymbolIndex::Scan scan, Tier tier, PipelineStats* stats)
      : scan_(scan), tier_(tier), counter_(&stats->slot(tier)) {}

  std::optional<Candidate> next() override {
    if (pos_ >= scan_.size()) return std::nullopt;
    const IndexEntry& e = scan_.at(pos_++);
    ++*counter_;
    return Candidate{e.name, e.package, tier_};
  }

 private:
  SymbolIndex::Scan scan_;
  Tier tier_;
  std::uint64_t* counter_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Builds the lazy candidate pipeline for one query. Scan boundaries are
// binary searches; no source is enumerated until the ResultSet pulls.
inline ResultSet make_pipeline(const CompletionContext& ctx, Strategy strategy,
                               const SymbolIndex& index) {
  if (!ctx.repo || !index.has_package(ctx.requestingPackage))
    throw UnknownPackage("unknown package: " + ctx.requestingPackage);

  auto stats = std::make_unique<PipelineStats>();
  FetcherPtr source;
  if (strategy.kind == StrategyKind::flatGlobal) {
    source = std::make_unique<detail::ScanFetcher>(
        index.global_scan(ctx.prefix, ctx.caseSensitive), Tier::global, stats.get());
  } else {
    std::vector<FetcherPtr> tiers;
    tiers.push_back(std::make_unique<detail::ScanFetcher>(
        index.package_scan(ctx.requestingPackage, ctx.prefix, ctx.caseSensitive),
        Tier::currentPackage, stats.get()));
    for (const std::string& pkg : related_packages(*ctx.repo, ctx.requestingPackage)) {
      tiers.push_back(std::make_unique<detail::ScanFetcher>(
          index.package_scan(pkg, ctx.prefix, ctx.caseSensitive), Tier::relatedPackage,
          stats.get()));
    }
    tiers.push_back(std::make_unique<detail::ScanFetcher>(
        index.global_scan(ctx.prefix, ctx.caseSensitive), Tier::global, stats.get()));
    source = concat_fetcher(std::move(tiers));
  }
  return ResultSet(dedup_fetcher(std::move(source)), std::move(stats));
}

}  // namespace scopecomplete
