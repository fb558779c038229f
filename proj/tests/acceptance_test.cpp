// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "scopecomplete/scopecomplete.hpp"
#include "helpers.hpp"

using namespace scopecomplete;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& message) {
    if (!cond && ok) {
      ok = false;
      detail = message;
    }
  }
  void note(const std::string& message) {
    if (detail.empty()) detail = message;
    else detail += "; " + message;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Outcome> outcomes_from_ranks(const std::vector<std::optional<int>>& ranks) {
  std::vector<Outcome> out;
  for (const auto& r : ranks) {
    Outcome o;
    o.rank = r;
    out.push_back(std::move(o));
  }
  return out;
}

// Eager-oracle MRR over the cases, summed in case order so the expected
// value is bit-identical to the harness's fold.
double oracle_overall_mrr(const Repository& repo, const std::vector<BenchmarkCase>& cases,
                          StrategyKind kind) {
  double sum = 0.0;
  for (const BenchmarkCase& c : cases) {
    const auto r =
        testutil::oracle::rank(repo, c.site.packageName, c.prefix, true, kind, c.targetName, 10);
    if (r) sum += 1.0 / static_cast<double>(*r);
  }
  return sum / static_cast<double>(cases.size());
}

// criterion 1 — metric unit suite
void criterion_metrics(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();

  const double m = mrr(outcomes_from_ranks({1, 2, 4}));
  c.require(std::fabs(m - 1.75 / 3.0) <= 1e-9, "mrr([1,2,4]) != 0.58333...");

  const double n = ndcg_at_k(outcomes_from_ranks({3}), 10);
  c.require(n == 0.5, "ndcg at rank 3 != 0.5 exactly");

  std::mt19937 gen(2024);
  for (int round = 0; round < 1000; ++round) {
    std::vector<std::optional<int>> ranks;
    const std::size_t count = 1 + gen() % 40;
    for (std::size_t i = 0; i < count; ++i) {
      if (gen() % 3 == 0) ranks.emplace_back(std::nullopt);
      else ranks.emplace_back(1 + static_cast<int>(gen() % 10));
    }
    const auto outcomes = outcomes_from_ranks(ranks);
    const auto hist = rank_histogram(outcomes);
    std::uint64_t histSum = 0, ranked = 0;
    for (const auto v : hist) histSum += v;
    for (const auto& r : ranks) ranked += r.has_value();
    c.require(histSum == ranked, "sum(histogram) != ranked count");
    c.require(mrr(outcomes) <= accuracy_at_k(outcomes, 10) + 1e-15, "mrr > accuracy");
  }

  const double took = seconds_since(t0);
  c.require(took < 1.0, "metric suite exceeded 1 s");
  std::ostringstream note;
  note << "1000 randomized sets, " << format_double(took, 3) << " s";
  c.note(note.str());
}

// criterion 2 — lazy pipeline equals the eager oracle on >= 100 corpora
void criterion_oracle_equivalence(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t corpora = 0, ranks = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SyntheticSpec spec;
    spec.packages = 4 + static_cast<int>(seed % 47);  // up to 50
    spec.symbolsPerPackage =
        std::min(4 + static_cast<int>(seed % 40), 2000 / spec.packages);
    spec.groupSize = 1 + static_cast<int>(seed % 5);
    spec.collisionRate = static_cast<double>(seed % 11) / 10.0;
    spec.pInt = static_cast<double>(seed % 5) / 4.0;
    spec.unitsPerPackage = 1 + static_cast<int>(seed % 2);
    spec.methodsPerUnit = 1;
    spec.referencesPerMethod = 2;
    spec.unresolvedRate = seed % 7 == 0 ? 0.15 : 0.0;
    const Repository repo = generate_synthetic_corpus(spec, seed);
    const SymbolIndex index = build_index(repo);
    const auto cases = extract_benchmark_cases(repo);
    if (cases.empty()) continue;
    ++corpora;
    for (const StrategyKind kind : {StrategyKind::flatGlobal, StrategyKind::packageAware}) {
      const auto outcomes = evaluate_cases(repo, index, cases, {kind});
      for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto expected = testutil::oracle::rank(repo, cases[i].site.packageName,
                                                     cases[i].prefix, true, kind,
                                                     cases[i].targetName, 10);
        const auto got = outcomes[i].rank
                             ? std::optional<std::size_t>(static_cast<std::size_t>(*outcomes[i].rank))
                             : std::nullopt;
        ++ranks;
        if (got != expected) {
          c.require(false, "rank mismatch vs oracle (seed " + std::to_string(seed) + ", case " +
                               std::to_string(i) + ", " + std::string(to_string(kind)) + ")");
          return;
        }
      }
    }
  }
  const double took = seconds_since(t0);
  c.require(corpora >= 100, "fewer than 100 corpora with cases");
  c.require(took < 60.0, "oracle equivalence exceeded 60 s");
  std::ostringstream note;
  note << corpora << " corpora, " << ranks << " ranks, " << format_double(took, 2) << " s";
  c.note(note.str());
}

SyntheticSpec locality_spec(double pInt) {
  SyntheticSpec spec;
  spec.packages = 12;
  spec.groupSize = 4;
  spec.symbolsPerPackage = 24;
  spec.collisionRate = 0.85;
  // one long shared token keeps cross-package prefix collisions alive at
  // every masked length 2..8
  spec.collisionTokens = {"Spandrel"};
  spec.pInt = pInt;
  spec.unitsPerPackage = 2;
  spec.methodsPerUnit = 2;
  spec.referencesPerMethod = 3;
  return spec;
}

// criterion 3 — locality analog: package-aware wins by >= 5 MRR points
void criterion_locality(Check& c) {
  const std::uint64_t seed = 13;
  const Repository repo = generate_synthetic_corpus(locality_spec(1.0), seed);
  const auto cases = extract_benchmark_cases(repo);
  c.require(!cases.empty(), "no cases generated");

  // every prefix length must see at least one cross-package collision that
  // sorts before its target
  std::map<int, int> earlierDecoys;
  for (const BenchmarkCase& bc : cases) {
    bool found = false;
    repo.for_each_symbol([&](const Package& p, const Unit&, const SymbolDef& d) {
      if (found || p.name == bc.site.packageName) return;
      found = d.name != bc.targetName && d.name < bc.targetName &&
              testutil::oracle::starts_with(d.name, bc.prefix, true);
    });
    if (found) ++earlierDecoys[bc.prefixLength];
  }
  for (int L = 2; L <= 8; ++L)
    c.require(earlierDecoys[L] >= 1,
              "no lexicographically-earlier cross-package collision at prefix length " +
                  std::to_string(L));

  const BenchReport flat = run_benchmark(repo, {StrategyKind::flatGlobal});
  const BenchReport pa = run_benchmark(repo, {StrategyKind::packageAware});
  const double flatMrr = flat.frameworkRows.front().mrr;
  const double paMrr = pa.frameworkRows.front().mrr;

  const double flatExpected = oracle_overall_mrr(repo, cases, StrategyKind::flatGlobal);
  const double paExpected = oracle_overall_mrr(repo, cases, StrategyKind::packageAware);
  c.require(flatMrr == flatExpected, "flat MRR does not match the eager oracle exactly");
  c.require(paMrr == paExpected, "package-aware MRR does not match the eager oracle exactly");
  c.require((paMrr - flatMrr) * 100.0 >= 5.0, "improvement below 5 points");

  std::ostringstream note;
  note << "MRR " << format_double(flatMrr * 100.0, 2) << " -> " << format_double(paMrr * 100.0, 2)
       << " (delta " << format_double((paMrr - flatMrr) * 100.0, 2) << ", oracle-exact)";
  c.note(note.str());
}

// criterion 4 — adversarial analog: negative delta is reported unmodified
void criterion_negative_delta(Check& c) {
  const std::uint64_t seed = 13;
  const Repository repo = generate_synthetic_corpus(locality_spec(0.0), seed);
  const auto cases = extract_benchmark_cases(repo);
  c.require(!cases.empty(), "no cases generated");

  // colliding local decoys: some case's requesting package defines a
  // different name matching the typed prefix
  bool localDecoy = false;
  for (const BenchmarkCase& bc : cases) {
    const Package* pkg = repo.find_package(bc.site.packageName);
    for (const Unit& u : pkg->units)
      for (const SymbolDef& d : u.definedSymbols)
        localDecoy = localDecoy || (d.name != bc.targetName &&
                                    testutil::oracle::starts_with(d.name, bc.prefix, true));
  }
  c.require(localDecoy, "corpus has no colliding local decoys");

  const BenchReport flat = run_benchmark(repo, {StrategyKind::flatGlobal});
  const BenchReport pa = run_benchmark(repo, {StrategyKind::packageAware});
  const double flatMrr = flat.frameworkRows.front().mrr;
  const double paMrr = pa.frameworkRows.front().mrr;
  c.require(paMrr < flatMrr, "package-aware did not degrade on the adversarial corpus");

  const DeltaReport delta = compare(flat, pa);
  c.require(!delta.aggregates.empty() && delta.aggregates.front().scope == "Overall",
            "missing Overall aggregate");
  const DeltaCell overall = delta.aggregates.front().mrr.at(0);
  c.require(overall.delta < 0.0, "delta table clamped the negative value");

  // the rendered Δ row carries the same negative number
  const std::string csv = delta_csv(delta);
  const std::string expectedRow = "aggregate,Overall,mrr,all," + format_double(overall.without) +
                                  "," + format_double(overall.with) + "," +
                                  format_double(overall.delta);
  c.require(csv.find(expectedRow) != std::string::npos,
            "delta CSV row does not carry the negative delta");
  std::ostringstream table;
  write_delta_table(delta, table);
  c.require(table.str().find(format_double(overall.delta * 100.0, 2)) != std::string::npos,
            "delta text table does not carry the negative delta");

  std::ostringstream note;
  note << "MRR " << format_double(flatMrr * 100.0, 2) << " -> " << format_double(paMrr * 100.0, 2)
       << " (aggregate delta " << format_double(overall.delta * 100.0, 2) << ")";
  c.note(note.str());
}

// criterion 5 — laziness: saturated current tier pulls nothing global
void criterion_laziness(Check& c) {
  SyntheticSpec spec;
  spec.packages = 60;
  spec.groupSize = 6;
  spec.symbolsPerPackage = 40;
  spec.collisionRate = 1.0;
  spec.collisionTokens = {"Spa", "Spb", "Spe", "Spi"};
  spec.unitsPerPackage = 2;
  spec.methodsPerUnit = 0;  // definitions only
  spec.referencesPerMethod = 0;
  const Repository repo = generate_synthetic_corpus(spec, 99);
  const SymbolIndex index = build_index(repo);

  std::size_t contexts = 0;
  for (const Package& p : repo.packages) {
    for (const std::string prefix : {"S", "Sp"}) {
      if (index.package_scan(p.name, prefix, true).size() < 10) continue;
      ++contexts;
      CompletionContext ctx{&repo, p.name, prefix, true};
      ResultSet rs = make_pipeline(ctx, {StrategyKind::packageAware}, index);
      const auto top = rs.top(10);
      c.require(top.size() == 10, "saturated tier produced fewer than 10 candidates");
      c.require(rs.stats().pulledGlobal == 0, "global tier was pulled");
      c.require(rs.stats().pulledRelated == 0, "related tier was pulled");
      c.require(rs.stats().pulledCurrent == 10, "current tier pulled more than k");
      if (!c.ok) return;
    }
  }
  c.require(contexts >= 100, "fewer than 100 saturated contexts (got " +
                                 std::to_string(contexts) + ")");
  c.note(std::to_string(contexts) + " contexts, 0 global pulls");
}

// criterion 6 — prefix masking conformance
void criterion_prefix_masking(Check& c) {
  using testutil::RepoBuilder;
  {
    const Repository repo = RepoBuilder()
                                .pkg("P1").def("OrderedCollection")
                                .method("m").ref("OrderedCollection")
                                .build();
    const auto cases = extract_benchmark_cases(repo);
    const std::vector<std::string> expected = {"Or",     "Ord",     "Orde",   "Order",
                                               "Ordere", "Ordered", "OrderedC"};
    c.require(cases.size() == expected.size(), "OrderedCollection did not yield 7 cases");
    for (std::size_t i = 0; i < cases.size() && c.ok; ++i)
      c.require(cases[i].prefix == expected[i], "prefix mismatch at index " + std::to_string(i));
  }
  for (std::size_t len = 1; len <= 20 && c.ok; ++len) {
    std::string name = "A";
    while (name.size() < len) name += static_cast<char>('a' + (name.size() % 26));
    RepoBuilder b;
    b.pkg("P1").def(name).method("m").ref(name);
    const auto cases = extract_benchmark_cases(b.build());
    const std::size_t expected = std::min<std::size_t>(8, len) >= 2
                                     ? std::min<std::size_t>(8, len) - 1
                                     : 0;
    c.require(cases.size() == expected,
              "case count wrong for length " + std::to_string(len) + " (got " +
                  std::to_string(cases.size()) + ", want " + std::to_string(expected) + ")");
  }
  c.note("max(0, min(8, L) - 1) verified for L = 1..20");
}

// criterion 7 — determinism: byte-identical CSV minus timing columns
void criterion_determinism(Check& c) {
  SyntheticSpec spec;
  spec.packages = 10;
  spec.groupSize = 5;
  spec.symbolsPerPackage = 30;
  spec.collisionRate = 0.5;
  spec.pInt = 0.6;
  const Repository repo = generate_synthetic_corpus(spec, 42);
  for (const StrategyKind kind : {StrategyKind::flatGlobal, StrategyKind::packageAware}) {
    const std::string a =
        testutil::strip_timing_columns(report_csv(run_benchmark(repo, {kind})));
    const std::string b =
        testutil::strip_timing_columns(report_csv(run_benchmark(repo, {kind})));
    c.require(a == b, "CSV differs between runs for " + std::string(to_string(kind)));
    c.require(!a.empty(), "empty CSV");
  }
  c.note("both strategies byte-identical after stripping timing columns");
}

// criterion 8 — performance envelope
void criterion_performance(Check& c) {
  SyntheticSpec spec;
  spec.packages = 50;
  spec.groupSize = 5;
  spec.symbolsPerPackage = 200;  // 10k symbols
  spec.collisionRate = 0.5;
  spec.pInt = 0.7;
  spec.unitsPerPackage = 4;
  spec.methodsPerUnit = 5;
  spec.referencesPerMethod = 5;
  const Repository repo = generate_synthetic_corpus(spec, 7);

  const auto t0 = std::chrono::steady_clock::now();
  const BenchReport flat = run_benchmark(repo, {StrategyKind::flatGlobal});
  const BenchReport pa = run_benchmark(repo, {StrategyKind::packageAware});
  const double took = seconds_since(t0);

  c.require(flat.frameworkRows.front().queryCount == pa.frameworkRows.front().queryCount,
            "strategies saw different query counts");
  c.require(took < 30.0, "benchmark exceeded 30 s (" + format_double(took, 2) + " s)");
  std::ostringstream note;
  note << flat.frameworkRows.front().queryCount << " queries per strategy, "
       << format_double(took, 2) << " s";
  c.note(note.str());
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string label;
    std::function<void(Check&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "metric unit suite", criterion_metrics},
      {2, "oracle equivalence over 100 seeded corpora", criterion_oracle_equivalence},
      {3, "locality analog: package-aware wins by >= 5 MRR points", criterion_locality},
      {4, "adversarial analog: negative delta surfaces unmodified", criterion_negative_delta},
      {5, "laziness: saturated current tier, zero global pulls", criterion_laziness},
      {6, "prefix-masking conformance", criterion_prefix_masking},
      {7, "determinism: byte-identical CSV minus timing", criterion_determinism},
      {8, "performance envelope: 10k symbols under 30 s", criterion_performance},
  };

  int failures = 0;
  for (const Criterion& crit : criteria) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      crit.fn(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    const double took = seconds_since(t0);
    std::cout << (check.ok ? "[PASS]" : "[FAIL]") << " criterion " << crit.id << ": " << crit.label;
    if (!check.detail.empty()) std::cout << " - " << check.detail;
    std::cout << " (" << format_double(took, 2) << " s)\n";
    failures += check.ok ? 0 : 1;
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << '\n';
  return failures == 0 ? 0 : 1;
}
