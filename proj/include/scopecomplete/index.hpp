#pragma once

// Immutable symbol index: one sorted table per package plus a global table,
// each with a case-folded secondary order. Prefix scans resolve to a
// contiguous range in O(log n) and are enumerated lazily by the fetchers.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scopecomplete/ascii.hpp"
#include "scopecomplete/corpus.hpp"

namespace scopecomplete {

struct IndexEntry {
  std::string name;
  std::string package;
  SymbolKind kind = SymbolKind::className;
};

namespace detail {

// Smallest string that is greater than every string with the given prefix,
// or nullopt when no such bound exists (prefix is all 0xFF).
inline std::optional<std::string> prefix_upper_bound(std::string prefix) {
  while (!prefix.empty()) {
    auto last = static_cast<unsigned char>(prefix.back());
    if (last != 0xFF) {
      prefix.back() = static_cast<char>(last + 1);
      return prefix;
    }
    prefix.pop_back();
  }
  return std::nullopt;
}

}  // namespace detail

class SymbolIndex {
 public:
  // A resolved contiguous slice of one table. `order` redirects through the
  // folded permutation when the scan is case-insensitive.
  struct Scan {
    const std::vector<IndexEntry>* table = nullptr;
    const std::vector<std::uint32_t>* order = nullptr;  // nullptr = identity
    std::size_t first = 0;
    std::size_t last = 0;  // one past the end

    std::size_t size() const { return last - first; }
    const IndexEntry& at(std::size_t i) const {
      const std::size_t idx = first + i;
      return order ? (*table)[(*order)[idx]] : (*table)[idx];
    }
  };

  static SymbolIndex build(const Repository& repo) {
    SymbolIndex ix;
    for (const Package& p : repo.packages) ix.packageNames_.push_back(p.name);
    ix.packages_.resize(ix.packageNames_.size());
    for (std::size_t pi = 0; pi < repo.packages.size(); ++pi) {
      const Package& p = repo.packages[pi];
      for (const Unit& u : p.units) {
        for (const SymbolDef& d : u.definedSymbols) {
          ix.global_.push_back({d.name, p.name, d.kind});
          ix.packages_[pi].entries.push_back({d.name, p.name, d.kind});
        }
      }
    }
    std::sort(ix.global_.begin(), ix.global_.end(), [](const IndexEntry& a, const IndexEntry& b) {
      return a.name != b.name ? a.name < b.name : a.package < b.package;
    });
    ix.globalFolded_ = folded_order(ix.global_);
    for (Table& t : ix.packages_) {
      std::sort(t.entries.begin(), t.entries.end(),
                [](const IndexEntry& a, const IndexEntry& b) { return a.name < b.name; });
      t.folded = folded_order(t.entries);
    }
    return ix;
  }

  bool has_package(std::string_view pkg) const {
    return std::binary_search(packageNames_.begin(), packageNames_.end(), pkg);
  }

  const std::vector<std::string>& package_names() const { return packageNames_; }
  std::size_t symbol_count() const { return global_.size(); }

  Scan global_scan(std::string_view prefix, bool caseSensitive) const {
    return scan_table(global_, globalFolded_, prefix, caseSensitive);
  }

  // Empty scan for unknown packages; callers validate the requesting package.
  Scan package_scan(std::string_view pkg, std::string_view prefix, bool caseSensitive) const {
    auto it = std::lower_bound(packageNames_.begin(), packageNames_.end(), pkg);
    if (it == packageNames_.end() || *it != pkg) return {};
    const Table& t = packages_[static_cast<std::size_t>(it - packageNames_.begin())];
    return scan_table(t.entries, t.folded, prefix, caseSensitive);
  }

 private:
  struct Table {
    std::vector<IndexEntry> entries;       // sorted by (name, package)
    std::vector<std::uint32_t> folded;     // permutation sorted by (folded name, name, package)
  };

  static std::vector<std::uint32_t> folded_order(const std::vector<IndexEntry>& entries) {
    std::vector<std::uint32_t> order(entries.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      const int c = ascii::fold_compare(entries[a].name, entries[b].name);
      if (c != 0) return c < 0;
      return entries[a].package < entries[b].package;
    });
    return order;
  }

  static Scan scan_table(const std::vector<IndexEntry>& table,
                         const std::vector<std::uint32_t>& folded, std::string_view prefix,
                         bool caseSensitive) {
    Scan s;
    s.table = &table;
    if (caseSensitive) {
      auto lo = std::lower_bound(table.begin(), table.end(), prefix,
                                 [](const IndexEntry& e, std::string_view p) { return e.name < p; });
      auto hi = table.end();
      if (auto bound = detail::prefix_upper_bound(std::string(prefix))) {
        hi = std::lower_bound(lo, table.end(), std::string_view(*bound),
                              [](const IndexEntry& e, std::string_view p) { return e.name < p; });
      }
      s.first = static_cast<std::size_t>(lo - table.begin());
      s.last = static_cast<std::size_t>(hi - table.begin());
    } else {
      const std::string fp = ascii::fold_copy(prefix);
      auto cmp = [&](std::uint32_t i, std::string_view p) {
        return ascii::fold_compare_weak(table[i].name, p) < 0;  // p pre-folded: fold(p) == p
      };
      auto lo = std::lower_bound(folded.begin(), folded.end(), std::string_view(fp), cmp);
      auto hi = folded.end();
      if (auto bound = detail::prefix_upper_bound(fp)) {
        hi = std::lower_bound(lo, folded.end(), std::string_view(*bound), cmp);
      }
      s.order = &folded;
      s.first = static_cast<std::size_t>(lo - folded.begin());
      s.last = static_cast<std::size_t>(hi - folded.begin());
    }
    return s;
  }

  std::vector<IndexEntry> global_;
  std::vector<std::uint32_t> globalFolded_;
  std::vector<std::string> packageNames_;  // sorted (canonical repository order)
  std::vector<Table> packages_;            // parallel to packageNames_
};

inline SymbolIndex build_index(const Repository& repo) { return SymbolIndex::build(repo); }

}  // namespace scopecomplete
