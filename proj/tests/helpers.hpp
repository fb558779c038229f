#pragma once

// Shared test utilities: a fluent corpus builder, an eager full-enumeration
// oracle independent of the fetcher/index implementation, and CSV helpers
// for determinism checks.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "scopecomplete/corpus.hpp"
#include "scopecomplete/engine.hpp"

namespace testutil {

// --- corpus builder -------------------------------------------------------

class RepoBuilder {
 public:
  explicit RepoBuilder(std::string name = "Fixture") { repo_.name = std::move(name); }

  RepoBuilder& pkg(std::string name) {
    repo_.packages.push_back({std::move(name), {}});
    unit("U0");
    return *this;
  }

  RepoBuilder& unit(std::string name) {
    repo_.packages.back().units.push_back({std::move(name), {}, {}});
    method("m0");
    return *this;
  }

  RepoBuilder& def(std::string name,
                   scopecomplete::SymbolKind kind = scopecomplete::SymbolKind::className) {
    repo_.packages.back().units.back().definedSymbols.push_back({std::move(name), kind});
    return *this;
  }

  RepoBuilder& method(std::string id) {
    repo_.packages.back().units.back().methods.push_back({std::move(id), {}});
    return *this;
  }

  RepoBuilder& ref(std::string symbol) {
    scopecomplete::ReferenceSite site;
    site.symbolName = std::move(symbol);
    repo_.packages.back().units.back().methods.back().references.push_back(std::move(site));
    return *this;
  }

  scopecomplete::Repository build() {
    scopecomplete::Repository out = repo_;
    scopecomplete::canonicalize(out);
    return out;
  }

 private:
  scopecomplete::Repository repo_;
};

// --- eager oracle -----------------------------------------------------------

namespace oracle {

inline char fold_char(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

inline std::string fold(std::string s) {
  for (char& c : s) c = fold_char(c);
  return s;
}

inline int fold_cmp(const std::string& a, const std::string& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned char fa = static_cast<unsigned char>(fold_char(a[i]));
    const unsigned char fb = static_cast<unsigned char>(fold_char(b[i]));
    if (fa != fb) return fa < fb ? -1 : 1;
  }
  return a.size() == b.size() ? 0 : (a.size() < b.size() ? -1 : 1);
}

inline bool starts_with(const std::string& name, const std::string& prefix, bool caseSensitive) {
  if (prefix.size() > name.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (caseSensitive ? name[i] != prefix[i] : fold_char(name[i]) != fold_char(prefix[i]))
      return false;
  }
  return true;
}

inline std::vector<std::string> split(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  if (sep.empty()) return {s};
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

inline std::vector<std::string> related(const scopecomplete::Repository& repo,
                                        const std::string& pkg) {
  const auto base = split(pkg, repo.segmentSeparator);
  std::vector<std::pair<std::size_t, std::string>> hits;
  for (const auto& p : repo.packages) {
    if (p.name == pkg) continue;
    const auto segs = split(p.name, repo.segmentSeparator);
    std::size_t shared = 0;
    while (shared < base.size() && shared < segs.size() && base[shared] == segs[shared]) ++shared;
    if (shared >= 1) hits.emplace_back(shared, p.name);
  }
  std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::string> out;
  for (auto& [n, name] : hits) out.push_back(name);
  return out;
}

// Eager reference pipeline: collect every definition, filter by prefix,
// partition into tiers, sort, and dedup by name keeping the first.
inline std::vector<scopecomplete::Candidate> candidates(const scopecomplete::Repository& repo,
                                                        const std::string& requesting,
                                                        const std::string& prefix,
                                                        bool caseSensitive,
                                                        scopecomplete::StrategyKind kind) {
  using scopecomplete::Candidate;
  using scopecomplete::Tier;
  struct Item {
    int tier;            // 0 current, 1 related, 2 global (flat: all 2)
    std::size_t relIdx;  // order within the related tier
    std::string name;
    std::string pkg;
  };
  std::map<std::string, std::size_t> relIndex;
  if (kind == scopecomplete::StrategyKind::packageAware) {
    const auto rel = related(repo, requesting);
    for (std::size_t i = 0; i < rel.size(); ++i) relIndex[rel[i]] = i;
  }
  std::vector<Item> items;
  repo.for_each_symbol([&](const scopecomplete::Package& p, const scopecomplete::Unit&,
                           const scopecomplete::SymbolDef& d) {
    if (!starts_with(d.name, prefix, caseSensitive)) return;
    Item it{2, 0, d.name, p.name};
    if (kind == scopecomplete::StrategyKind::packageAware) {
      if (p.name == requesting) it.tier = 0;
      else if (auto found = relIndex.find(p.name); found != relIndex.end()) {
        it.tier = 1;
        it.relIdx = found->second;
      }
    }
    items.push_back(std::move(it));
  });
  std::stable_sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
    if (a.tier != b.tier) return a.tier < b.tier;
    if (a.relIdx != b.relIdx) return a.relIdx < b.relIdx;
    if (!caseSensitive) {
      if (const int c = fold_cmp(a.name, b.name)) return c < 0;
    }
    if (a.name != b.name) return a.name < b.name;
    return a.pkg < b.pkg;
  });
  std::vector<Candidate> out;
  std::set<std::string> dedup;
  for (const Item& it : items) {
    if (!dedup.insert(it.name).second) continue;
    const Tier tier = it.tier == 0   ? Tier::currentPackage
                      : it.tier == 1 ? Tier::relatedPackage
                                     : Tier::global;
    out.push_back({it.name, it.pkg, tier});
  }
  return out;
}

inline std::optional<std::size_t> rank(const scopecomplete::Repository& repo,
                                       const std::string& requesting, const std::string& prefix,
                                       bool caseSensitive, scopecomplete::StrategyKind kind,
                                       const std::string& target, std::size_t k) {
  const auto list = candidates(repo, requesting, prefix, caseSensitive, kind);
  const std::size_t limit = std::min(k, list.size());
  for (std::size_t i = 0; i < limit; ++i)
    if (list[i].name == target) return i + 1;
  return std::nullopt;
}

}  // namespace oracle

// --- CSV helpers ------------------------------------------------------------

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

// Drops the wall-clock columns so deterministic content can be compared
// byte for byte.
inline std::string strip_timing_columns(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<std::size_t> keep;
  std::ostringstream out;
  bool header = true;
  while (std::getline(in, line)) {
    const auto fields = split_csv_line(line);
    if (header) {
      for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i] != "mean_elapsed_ns" && fields[i] != "total_elapsed_ns") keep.push_back(i);
      header = false;
    }
    bool first = true;
    for (const std::size_t i : keep) {
      if (i >= fields.size()) continue;
      out << (first ? "" : ",") << fields[i];
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace testutil
