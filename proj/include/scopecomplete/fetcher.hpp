#pragma once

// Pull-driven candidate producers. A fetcher yields candidates one at a time
// and never touches its source beyond what the pulls demand; combinators
// (filter, concat, dedup, limit) compose fetchers into pipelines. ResultSet
// wraps a pipeline in an append-only cache.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace scopecomplete {

enum class Tier { currentPackage, relatedPackage, global };

inline std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::currentPackage: return "current-package";
    case Tier::relatedPackage: return "related-package";
    case Tier::global: return "global";
  }
  return "global";
}

struct Candidate {
  std::string name;
  std::string originPackage;
  Tier tier = Tier::global;
};

class Fetcher {
 public:
  virtual ~Fetcher() = default;
  // Next candidate, or nullopt once exhausted (and from then on).
  virtual std::optional<Candidate> next() = 0;
};

using FetcherPtr = std::unique_ptr<Fetcher>;

// Candidates drawn from each tier's sources. Candidates later dropped by
// filter or dedup still count: a pull is a pull.
struct PipelineStats {
  std::uint64_t pulledCurrent = 0;
  std::uint64_t pulledRelated = 0;
  std::uint64_t pulledGlobal = 0;

  std::uint64_t total() const { return pulledCurrent + pulledRelated + pulledGlobal; }
  std::uint64_t& slot(Tier t) {
    switch (t) {
      case Tier::currentPackage: return pulledCurrent;
      case Tier::relatedPackage: return pulledRelated;
      case Tier::global: return pulledGlobal;
    }
    return pulledGlobal;
  }
};

namespace detail {

class FilterFetcher final : public Fetcher {
 public:
  FilterFetcher(FetcherPtr src, std::function<bool(const Candidate&)> pred)
      : src_(std::move(src)), pred_(std::move(pred)) {}

  std::optional<Candidate> next() override {
    while (auto c = src_->next()) {
      if (pred_(*c)) return c;
    }
    return std::nullopt;
  }

 private:
  FetcherPtr src_;
  std::function<bool(const Candidate&)> pred_;
};

class ConcatFetcher final : public Fetcher {
 public:
  explicit ConcatFetcher(std::vector<FetcherPtr> parts) : parts_(std::move(parts)) {}

  std::optional<Candidate> next() override {
    while (current_ < parts_.size()) {
      if (auto c = parts_[current_]->next()) return c;
      ++current_;  // exhausted parts are never revisited
    }
    return std::nullopt;
  }

 private:
  std::vector<FetcherPtr> parts_;
  std::size_t current_ = 0;
};

class DedupFetcher final : public Fetcher {
 public:
  explicit DedupFetcher(FetcherPtr src) : src_(std::move(src)) {}

  std::optional<Candidate> next() override {
    while (auto c = src_->next()) {
      if (seen_.insert(c->name).second) return c;
    }
    return std::nullopt;
  }

 private:
  FetcherPtr src_;
  std::unordered_set<std::string> seen_;
};

class LimitFetcher final : public Fetcher {
 public:
  LimitFetcher(FetcherPtr src, std::size_t limit) : src_(std::move(src)), remaining_(limit) {}

  std::optional<Candidate> next() override {
    if (remaining_ == 0) return std::nullopt;
    auto c = src_->next();
    if (c) --remaining_;
    return c;
  }

 private:
  FetcherPtr src_;
  std::size_t remaining_;
};

class EmptyFetcher final : public Fetcher {
 public:
  std::optional<Candidate> next() override { return std::nullopt; }
};

}  // namespace detail

inline FetcherPtr filter_fetcher(FetcherPtr src, std::function<bool(const Candidate&)> pred) {
  return std::make_unique<detail::FilterFetcher>(std::move(src), std::move(pred));
}

inline FetcherPtr concat_fetcher(std::vector<FetcherPtr> parts) {
  return std::make_unique<detail::ConcatFetcher>(std::move(parts));
}

inline FetcherPtr dedup_fetcher(FetcherPtr src) {
  return std::make_unique<detail::DedupFetcher>(std::move(src));
}

inline FetcherPtr limit_fetcher(FetcherPtr src, std::size_t limit) {
  return std::make_unique<detail::LimitFetcher>(std::move(src), limit);
}

inline FetcherPtr empty_fetcher() { return std::make_unique<detail::EmptyFetcher>(); }

// Lazy, cached store over a pipeline. The cached prefix is append-only:
// top(k) twice returns identical sequences, top(k') for k' > k extends
// without reordering. Single-consumer; create one per query.
class ResultSet {
 public:
  ResultSet(FetcherPtr source, std::unique_ptr<PipelineStats> stats)
      : stats_(std::move(stats)), source_(std::move(source)) {}

  // First min(k, available) candidates in pipeline order.
  std::span<const Candidate> top(std::size_t k) {
    pull_until(k);
    return {cache_.data(), std::min(k, cache_.size())};
  }

  // 1-based position of target within top(k), or nullopt.
  std::optional<std::size_t> rank_of(std::string_view target, std::size_t k) {
    auto candidates = top(k);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (candidates[i].name == target) return i + 1;
    }
    return std::nullopt;
  }

  const std::vector<Candidate>& cached() const { return cache_; }
  bool exhausted() const { return exhausted_; }
  const PipelineStats& stats() const { return *stats_; }

 private:
  void pull_until(std::size_t k) {
    while (!exhausted_ && cache_.size() < k) {
      if (auto c = source_->next()) {
        cache_.push_back(std::move(*c));
      } else {
        exhausted_ = true;
      }
    }
  }

  std::unique_ptr<PipelineStats> stats_;
  FetcherPtr source_;
  std::vector<Candidate> cache_;
  bool exhausted_ = false;
};

}  // namespace scopecomplete
