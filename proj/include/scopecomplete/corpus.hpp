#pragma once

// Package-structured corpus model: packages own units, units define global
// symbols and hold methods, methods reference symbols by name. A Repository
// is immutable once canonicalized and safe to share across threads.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scopecomplete/ascii.hpp"

namespace scopecomplete {

struct CorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedCorpus : CorpusError {
  using CorpusError::CorpusError;
};
struct DuplicatePackage : CorpusError {
  using CorpusError::CorpusError;
};
struct DuplicateSymbolInPackage : CorpusError {
  using CorpusError::CorpusError;
};
struct EmptyCorpus : CorpusError {
  using CorpusError::CorpusError;
};

enum class SymbolKind { globalVariable, className };

inline std::string_view to_string(SymbolKind k) {
  return k == SymbolKind::className ? "class" : "global";
}

inline std::optional<SymbolKind> symbol_kind_from_string(std::string_view s) {
  if (s == "class") return SymbolKind::className;
  if (s == "global") return SymbolKind::globalVariable;
  return std::nullopt;
}

struct SymbolDef {
  std::string name;
  SymbolKind kind = SymbolKind::className;
};

struct ReferenceSite {
  std::string symbolName;
  std::string methodId;
  std::string packageName;  // package of the referencing method
  std::uint32_t ordinal = 0;  // position within the method, source order
};

struct Method {
  std::string id;
  std::vector<ReferenceSite> references;  // source order preserved
};

struct Unit {
  std::string name;
  std::vector<SymbolDef> definedSymbols;
  std::vector<Method> methods;
};

struct Package {
  std::string name;
  std::vector<Unit> units;
};

struct Repository {
  std::string name;
  std::string segmentSeparator = "-";  // for package-name segment grouping
  std::vector<Package> packages;       // canonical: sorted by name, unique

  const Package* find_package(std::string_view pkg) const {
    auto it = std::lower_bound(packages.begin(), packages.end(), pkg,
                               [](const Package& p, std::string_view n) { return p.name < n; });
    if (it == packages.end() || it->name != pkg) return nullptr;
    return &*it;
  }

  template <class F>
  void for_each_symbol(F&& f) const {  // f(package, unit, def)
    for (const Package& p : packages)
      for (const Unit& u : p.units)
        for (const SymbolDef& d : u.definedSymbols) f(p, u, d);
  }

  template <class F>
  void for_each_reference(F&& f) const {  // f(site), canonical order
    for (const Package& p : packages)
      for (const Unit& u : p.units)
        for (const Method& m : u.methods)
          for (const ReferenceSite& s : m.references) f(s);
  }
};

// Sorts packages/units/methods by name/id, rewires each reference's
// methodId/packageName/ordinal back-links, and checks the load invariants.
// Loaders and generators call this; hand-built fixtures should too.
inline void canonicalize(Repository& repo) {
  if (repo.packages.empty()) throw EmptyCorpus("corpus defines no packages");
  std::sort(repo.packages.begin(), repo.packages.end(),
            [](const Package& a, const Package& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < repo.packages.size(); ++i) {
    if (repo.packages[i].name == repo.packages[i - 1].name)
      throw DuplicatePackage("package declared twice: " + repo.packages[i].name);
  }
  for (Package& p : repo.packages) {
    if (p.name.empty()) throw MalformedCorpus("empty package name");
    if (p.name.find_first_of(" \t\r\n") != std::string::npos)
      throw MalformedCorpus("package name contains whitespace: '" + p.name + "'");
    std::sort(p.units.begin(), p.units.end(),
              [](const Unit& a, const Unit& b) { return a.name < b.name; });
    std::set<std::string_view> defined;
    for (Unit& u : p.units) {
      for (const SymbolDef& d : u.definedSymbols) {
        if (d.name.empty())
          throw MalformedCorpus("empty symbol name in package " + p.name);
        if (!ascii::is_upper(d.name.front()))
          throw MalformedCorpus("global symbol must start uppercase: '" + d.name +
                                "' in package " + p.name);
        if (!defined.insert(d.name).second)
          throw DuplicateSymbolInPackage("symbol '" + d.name +
                                         "' defined twice in package " + p.name);
      }
      std::sort(u.methods.begin(), u.methods.end(),
                [](const Method& a, const Method& b) { return a.id < b.id; });
      std::set<std::string_view> methodIds;
      for (Method& m : u.methods) {
        if (!methodIds.insert(m.id).second)
          throw MalformedCorpus("method id '" + m.id + "' duplicated in unit " + u.name +
                                " of package " + p.name);
        std::uint32_t ord = 0;
        for (ReferenceSite& s : m.references) {
          if (s.symbolName.empty())
            throw MalformedCorpus("empty reference name in method " + m.id + " of package " +
                                  p.name);
          s.methodId = m.id;
          s.packageName = p.name;
          s.ordinal = ord++;
        }
      }
    }
  }
}

// --- reference resolution ---------------------------------------------------

enum class ResolutionKind { internal, external, unresolved };

struct ResolutionResult {
  ResolutionKind kind = ResolutionKind::unresolved;
  std::string packageName;  // defining package; empty when unresolved
};

// Symbol name -> sorted list of defining packages. Built once per pass over
// a repository; resolution queries are then O(log n).
class DefinitionTable {
 public:
  explicit DefinitionTable(const Repository& repo) {
    repo.for_each_symbol([&](const Package& p, const Unit&, const SymbolDef& d) {
      byName_[d.name].push_back(p.name);
    });
    for (auto& [name, pkgs] : byName_) std::sort(pkgs.begin(), pkgs.end());
  }

  const std::vector<std::string>* packages_for(std::string_view name) const {
    auto it = byName_.find(std::string(name));
    return it == byName_.end() ? nullptr : &it->second;
  }

  bool defined_in(std::string_view name, std::string_view pkg) const {
    const auto* pkgs = packages_for(name);
    return pkgs && std::binary_search(pkgs->begin(), pkgs->end(), pkg);
  }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> byName_;
};

inline ResolutionResult resolve_reference(const DefinitionTable& defs, const ReferenceSite& site) {
  const auto* pkgs = defs.packages_for(site.symbolName);
  if (!pkgs || pkgs->empty()) return {ResolutionKind::unresolved, {}};
  if (std::binary_search(pkgs->begin(), pkgs->end(), site.packageName))
    return {ResolutionKind::internal, site.packageName};
  return {ResolutionKind::external, pkgs->front()};  // lexicographically smallest definer
}

inline ResolutionResult resolve_reference(const Repository& repo, const ReferenceSite& site) {
  return resolve_reference(DefinitionTable(repo), site);
}

// --- corpus statistics --------------------------------------------------------

struct CorpusStats {
  std::uint64_t packageCount = 0;
  std::uint64_t classCount = 0;         // units present in packages
  std::uint64_t definedClassCount = 0;  // symbol definitions of kind class
  std::uint64_t methodCount = 0;
  std::uint64_t rInt = 0;
  std::uint64_t rExt = 0;
  std::uint64_t rUnresolved = 0;
  double rhoIntGlobal = 0.0;  // rInt / (rInt + rExt)
  double rhoIntMean = 0.0;    // mean per-package ratio, packages with >=1 resolved ref
};

inline CorpusStats corpus_stats(const Repository& repo) {
  CorpusStats st;
  st.packageCount = repo.packages.size();
  for (const Package& p : repo.packages) {
    st.classCount += p.units.size();
    for (const Unit& u : p.units) {
      st.methodCount += u.methods.size();
      for (const SymbolDef& d : u.definedSymbols)
        if (d.kind == SymbolKind::className) ++st.definedClassCount;
    }
  }
  DefinitionTable defs(repo);
  std::uint64_t perPkgInt = 0, perPkgExt = 0;
  double ratioSum = 0.0;
  std::uint64_t ratioCount = 0;
  for (const Package& p : repo.packages) {
    perPkgInt = perPkgExt = 0;
    for (const Unit& u : p.units) {
      for (const Method& m : u.methods) {
        for (const ReferenceSite& s : m.references) {
          switch (resolve_reference(defs, s).kind) {
            case ResolutionKind::internal: ++perPkgInt; break;
            case ResolutionKind::external: ++perPkgExt; break;
            case ResolutionKind::unresolved: ++st.rUnresolved; break;
          }
        }
      }
    }
    st.rInt += perPkgInt;
    st.rExt += perPkgExt;
    if (perPkgInt + perPkgExt > 0) {
      ratioSum += static_cast<double>(perPkgInt) / static_cast<double>(perPkgInt + perPkgExt);
      ++ratioCount;
    }
  }
  if (st.rInt + st.rExt > 0)
    st.rhoIntGlobal = static_cast<double>(st.rInt) / static_cast<double>(st.rInt + st.rExt);
  if (ratioCount > 0) st.rhoIntMean = ratioSum / static_cast<double>(ratioCount);
  return st;
}

// --- benchmark case extraction ------------------------------------------------

struct CaseFilter {
  enum class Mode { all, named, testOnly, nonTestOnly };
  Mode mode = Mode::all;
  std::vector<std::string> packages;  // Mode::named
  std::string testMarker = "Test";

  bool selects(std::string_view packageName) const {
    switch (mode) {
      case Mode::all: return true;
      case Mode::named:
        return std::find(packages.begin(), packages.end(), packageName) != packages.end();
      case Mode::testOnly: return packageName.find(testMarker) != std::string_view::npos;
      case Mode::nonTestOnly: return packageName.find(testMarker) == std::string_view::npos;
    }
    return true;
  }
};

struct PrefixRange {
  int min = 2;
  int max = 8;
  bool valid() const { return min >= 1 && max <= 32 && min <= max; }
};

struct BenchmarkCase {
  ReferenceSite site;
  std::string targetName;  // == site.symbolName
  std::string prefix;      // leading prefixLength bytes of targetName
  int prefixLength = 0;

  bool prefix_is_full_name() const {
    return static_cast<std::size_t>(prefixLength) == targetName.size();
  }
};

// One case per (uppercase-starting reference site, prefix length in
// range.min .. min(range.max, len)). Order: package, unit, method, ordinal,
// prefix length — all canonical, so extraction is deterministic.
inline std::vector<BenchmarkCase> extract_benchmark_cases(const Repository& repo,
                                                          const CaseFilter& filter = {},
                                                          PrefixRange range = {}) {
  std::vector<BenchmarkCase> cases;
  if (!range.valid()) return cases;
  for (const Package& p : repo.packages) {
    if (!filter.selects(p.name)) continue;
    for (const Unit& u : p.units) {
      for (const Method& m : u.methods) {
        for (const ReferenceSite& s : m.references) {
          if (s.symbolName.empty() || !ascii::is_upper(s.symbolName.front())) continue;
          const int len = static_cast<int>(s.symbolName.size());
          const int hi = std::min(range.max, len);
          for (int L = range.min; L <= hi; ++L) {
            BenchmarkCase c;
            c.site = s;
            c.targetName = s.symbolName;
            c.prefix = s.symbolName.substr(0, static_cast<std::size_t>(L));
            c.prefixLength = L;
            cases.push_back(std::move(c));
          }
        }
      }
    }
  }
  return cases;
}

}  // namespace scopecomplete
