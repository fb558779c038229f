#pragma once

// Deterministic synthetic corpus generator. std::mt19937_64 output is fixed
// by the standard; all draws below are hand-rolled on top of it so that a
// (spec, seed) pair yields the same corpus on any platform.

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "scopecomplete/corpus.hpp"

namespace scopecomplete {

struct InvalidSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SyntheticSpec {
  int packages = 10;
  int groupSize = 5;  // packages per shared-root name group
  int unitsPerPackage = 2;
  int methodsPerUnit = 3;
  int referencesPerMethod = 5;
  int symbolsPerPackage = 20;
  double collisionRate = 0.25;   // fraction of symbols named from the shared token pool
  double pInt = 0.5;             // P(reference targets a symbol defined in its own package)
  double unresolvedRate = 0.0;   // fraction of references to names defined nowhere
  bool testPackages = true;      // last package of each group gets a "-Tests" name
  std::vector<std::string> collisionTokens = {"Spa", "Spe", "Spi", "Sto",
                                              "Str", "Sub", "Sup", "Sym"};
  std::string repositoryName = "Synthetic";

  void validate() const {
    if (packages < 1) throw InvalidSpec("packages must be >= 1");
    if (groupSize < 1) throw InvalidSpec("groupSize must be >= 1");
    if (unitsPerPackage < 1) throw InvalidSpec("unitsPerPackage must be >= 1");
    if (methodsPerUnit < 0 || referencesPerMethod < 0)
      throw InvalidSpec("negative method/reference counts");
    if (symbolsPerPackage < 1) throw InvalidSpec("symbolsPerPackage must be >= 1");
    if (collisionRate < 0.0 || collisionRate > 1.0) throw InvalidSpec("collisionRate outside [0,1]");
    if (pInt < 0.0 || pInt > 1.0) throw InvalidSpec("pInt outside [0,1]");
    if (unresolvedRate < 0.0 || unresolvedRate > 1.0)
      throw InvalidSpec("unresolvedRate outside [0,1]");
    if (collisionRate > 0.0 && collisionTokens.empty())
      throw InvalidSpec("collisionRate > 0 needs collision tokens");
    for (const std::string& t : collisionTokens)
      if (t.empty() || !ascii::is_upper(t.front()))
        throw InvalidSpec("collision tokens must start with an uppercase letter");
    const bool wantsExternal =
        pInt < 1.0 && methodsPerUnit > 0 && referencesPerMethod > 0 && unresolvedRate < 1.0;
    if (wantsExternal && packages < 2)
      throw InvalidSpec("external references (pInt < 1) need at least 2 packages");
    if (repositoryName.empty()) throw InvalidSpec("empty repository name");
  }
};

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t below(std::uint64_t n) { return n ? gen_() % n : 0; }
  double real01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return real01() < p; }

 private:
  std::mt19937_64 gen_;
};

inline std::string base26(std::uint64_t v) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('a' + v % 26));
    v /= 26;
  } while (v);
  return s;
}

inline std::string pad2(int v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}

// A name defined in some other package and not in the referencing one, so
// resolution is guaranteed external. Random attempts first, then a
// deterministic sweep; if every foreign name is also local (fully saturated
// collision pools), falls back to a local pick.
inline std::string pick_external(int packages, Rng& rng,
                                 const std::vector<std::vector<SymbolDef>>& defs,
                                 const std::set<std::string>& localSet, int self,
                                 const std::vector<SymbolDef>& local) {
  if (packages > 1) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto j = rng.below(static_cast<std::uint64_t>(packages - 1));
      if (static_cast<int>(j) >= self) ++j;
      const auto& foreign = defs[static_cast<std::size_t>(j)];
      const std::string& name = foreign[rng.below(foreign.size())].name;
      if (!localSet.count(name)) return name;
    }
    for (int step = 1; step < packages; ++step) {
      const auto j = static_cast<std::size_t>((self + step) % packages);
      for (const SymbolDef& d : defs[j])
        if (!localSet.count(d.name)) return d.name;
    }
  }
  return local[rng.below(local.size())].name;
}

}  // namespace detail

inline Repository generate_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  detail::Rng rng(seed);

  Repository repo;
  repo.name = spec.repositoryName;

  // Package names share a per-group leading segment, so related_packages
  // groups them: Grp00-Core, Grp00-Ext01, ..., Grp00-Tests.
  std::vector<std::string> packageNames;
  for (int i = 0; i < spec.packages; ++i) {
    const int group = i / spec.groupSize;
    const int member = i % spec.groupSize;
    const std::string root = "Grp" + detail::pad2(group);
    std::string name;
    if (member == 0) {
      name = root + "-Core";
    } else if (spec.testPackages && member == spec.groupSize - 1) {
      name = root + "-Tests";
    } else {
      name = root + "-Ext" + detail::pad2(member);
    }
    packageNames.push_back(std::move(name));
  }

  // Symbol names per package. Collision symbols come from a shared pool of
  // full names reused across packages, so the corpus carries both identical
  // names in several packages and prefix-colliding names built from the same
  // tokens. Non-collision names embed the package index and are globally
  // unique. Names stay unique within a package.
  std::vector<std::vector<SymbolDef>> defs(static_cast<std::size_t>(spec.packages));
  std::vector<std::set<std::string>> defined(static_cast<std::size_t>(spec.packages));
  std::vector<std::string> pool;  // shared collision names
  std::uint64_t salvage = 0;
  for (int i = 0; i < spec.packages; ++i) {
    auto& localSet = defined[static_cast<std::size_t>(i)];
    for (int s = 0; s < spec.symbolsPerPackage; ++s) {
      std::string name;
      if (rng.chance(spec.collisionRate)) {
        if (!pool.empty() && !rng.chance(0.25)) {
          for (int attempt = 0; attempt < 8 && name.empty(); ++attempt) {
            const std::string& cand = pool[rng.below(pool.size())];
            if (!localSet.count(cand)) name = cand;
          }
        }
        if (name.empty()) {  // grow the pool with a fresh token-based name
          const std::string& token = spec.collisionTokens[rng.below(spec.collisionTokens.size())];
          for (int attempt = 0; attempt < 32; ++attempt) {
            std::string disc;
            const std::uint64_t len = 2 + rng.below(6);
            for (std::uint64_t c = 0; c < len; ++c)
              disc += static_cast<char>('a' + rng.below(26));
            name = token + disc;
            if (!localSet.count(name)) break;
          }
          while (localSet.count(name)) name += detail::base26(salvage++);
          pool.push_back(name);
        }
      } else {
        const std::string token = "Q" + detail::base26(static_cast<std::uint64_t>(i)) + "q";
        for (int attempt = 0; attempt < 32; ++attempt) {
          std::string disc;
          const std::uint64_t len = 2 + rng.below(6);
          for (std::uint64_t c = 0; c < len; ++c)
            disc += static_cast<char>('a' + rng.below(26));
          name = token + disc;
          if (!localSet.count(name)) break;
        }
        while (localSet.count(name)) name += detail::base26(salvage++);
      }
      localSet.insert(name);
      const SymbolKind kind = rng.chance(0.8) ? SymbolKind::className : SymbolKind::globalVariable;
      defs[static_cast<std::size_t>(i)].push_back({name, kind});
    }
  }

  std::uint64_t ghost = 0;
  for (int i = 0; i < spec.packages; ++i) {
    Package pkg;
    pkg.name = packageNames[static_cast<std::size_t>(i)];
    const auto& local = defs[static_cast<std::size_t>(i)];
    const auto& localSet = defined[static_cast<std::size_t>(i)];
    for (int u = 0; u < spec.unitsPerPackage; ++u) {
      Unit unit;
      unit.name = "Unit" + detail::pad2(u);
      for (std::size_t s = static_cast<std::size_t>(u); s < local.size();
           s += static_cast<std::size_t>(spec.unitsPerPackage))
        unit.definedSymbols.push_back(local[s]);
      for (int m = 0; m < spec.methodsPerUnit; ++m) {
        Method method;
        method.id = "m" + detail::pad2(m);
        for (int r = 0; r < spec.referencesPerMethod; ++r) {
          ReferenceSite site;
          if (rng.chance(spec.unresolvedRate)) {
            // "Zz" prefix is reserved: no generated definition starts with it.
            site.symbolName = "Zz" + detail::base26(ghost++);
          } else if (rng.chance(spec.pInt)) {
            site.symbolName = local[rng.below(local.size())].name;
          } else {
            site.symbolName = detail::pick_external(spec.packages, rng, defs, localSet, i, local);
          }
          method.references.push_back(std::move(site));
        }
        unit.methods.push_back(std::move(method));
      }
      pkg.units.push_back(std::move(unit));
    }
    repo.packages.push_back(std::move(pkg));
  }

  canonicalize(repo);
  return repo;
}

}  // namespace scopecomplete
