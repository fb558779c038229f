#pragma once

// Command-line front end. Subcommands: stats, complete, bench, synth,
// compare. Exit codes: 0 success, 2 input error, 3 empty benchmark.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scopecomplete/scopecomplete.hpp"

namespace scopecomplete::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitEmptyBenchmark = 3;

namespace detail {

inline bool parse_prefix_range(const std::string& text, PrefixRange& range) {
  const std::size_t dots = text.find("..");
  if (dots == std::string::npos) return false;
  try {
    range.min = std::stoi(text.substr(0, dots));
    range.max = std::stoi(text.substr(dots + 2));
  } catch (const std::exception&) {
    return false;
  }
  return range.valid();
}

inline std::optional<StrategyKind> strategy_from_flag(const std::string& s) {
  if (s == "flat" || s == "flat-global") return StrategyKind::flatGlobal;
  if (s == "package-aware") return StrategyKind::packageAware;
  return std::nullopt;
}

struct OutputTarget {
  std::string path;  // empty = stdout

  // Opens the sink; `file` outlives the returned reference via the caller's scope.
  std::ostream& open(std::ofstream& file, std::ostream& fallback) const {
    if (path.empty()) return fallback;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
  }
};

}  // namespace detail

struct CliConfig {
  std::string corpusPath;
  std::string strategy = "package-aware";  // stats/complete/bench; bench also accepts "both"
  int k = 10;
  PrefixRange prefixRange{};
  bool caseSensitive = true;
  std::string testMarker = "Test";
  std::string outputFormat = "table";  // csv | json | table
  std::uint64_t seed = 1;
  std::string out;                      // file, or directory for bench --strategy both
  std::vector<std::string> onlyPackages;
  unsigned threads = 0;
};

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"package-aware identifier completion engine and benchmark harness"};
  app.require_subcommand(1);

  CliConfig cfg;
  std::string prefixRangeText = "2..8";

  auto add_corpus = [&](CLI::App* cmd) {
    cmd->add_option("--corpus-path", cfg.corpusPath, "corpus directory or single-file corpus")
        ->required();
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--output-format", cfg.outputFormat, "csv | json | table")
        ->check(CLI::IsMember({"csv", "json", "table"}));
    cmd->add_option("--out", cfg.out, "output path (directory for bench --strategy both)");
  };

  CLI::App* stats = app.add_subcommand("stats", "corpus statistics (framework overview table)");
  add_corpus(stats);

  CLI::App* complete = app.add_subcommand("complete", "one-shot completion query");
  std::string completePackage, completePrefix;
  add_corpus(complete);
  complete->add_option("--package", completePackage, "requesting package")->required();
  complete->add_option("--prefix", completePrefix, "typed prefix")->required();
  complete->add_option("--strategy", cfg.strategy, "flat | package-aware")
      ->check(CLI::IsMember({"flat", "flat-global", "package-aware"}));
  complete->add_option("--k", cfg.k, "number of suggestions");
  complete->add_option("--case-sensitive", cfg.caseSensitive, "true|false (default true)");

  CLI::App* bench = app.add_subcommand("bench", "run the prefix-masking benchmark");
  add_corpus(bench);
  bench->add_option("--strategy", cfg.strategy, "flat | package-aware | both")
      ->check(CLI::IsMember({"flat", "flat-global", "package-aware", "both"}));
  bench->add_option("--k", cfg.k, "top-k cutoff (default 10)");
  bench->add_option("--prefix-range", prefixRangeText, "prefix lengths, e.g. 2..8");
  bench->add_option("--case-sensitive", cfg.caseSensitive, "true|false (default true)");
  bench->add_option("--test-marker", cfg.testMarker, "substring marking test packages");
  bench->add_option("--only-packages", cfg.onlyPackages, "restrict to these packages")
      ->delimiter(',');
  bench->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
  add_format(bench);

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  SyntheticSpec synthSpec;
  std::string synthOut;
  synth->add_option("--out", synthOut, "corpus directory to write")->required();
  synth->add_option("--packages", synthSpec.packages, "package count");
  synth->add_option("--group-size", synthSpec.groupSize, "packages per name group");
  synth->add_option("--units-per-package", synthSpec.unitsPerPackage);
  synth->add_option("--methods-per-unit", synthSpec.methodsPerUnit);
  synth->add_option("--refs-per-method", synthSpec.referencesPerMethod);
  synth->add_option("--symbols-per-package", synthSpec.symbolsPerPackage);
  synth->add_option("--collision-rate", synthSpec.collisionRate, "shared-name rate in [0,1]");
  synth->add_option("--p-int", synthSpec.pInt, "internal-reference probability in [0,1]");
  synth->add_option("--unresolved-rate", synthSpec.unresolvedRate);
  synth->add_option("--name", synthSpec.repositoryName, "repository name");
  synth->add_option("--seed", cfg.seed, "generator seed");

  CLI::App* compareCmd = app.add_subcommand("compare", "delta table from two JSON bench reports");
  std::string withoutPath, withPath;
  compareCmd->add_option("--without", withoutPath, "baseline report (JSON)")->required();
  compareCmd->add_option("--with", withPath, "candidate report (JSON)")->required();
  compareCmd->add_option("--test-marker", cfg.testMarker, "substring marking test packages");
  add_format(compareCmd);

  try {
    std::vector<const char*> argv;
    argv.push_back("scopecomplete");
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help and friends
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (stats->parsed()) {
      const Repository repo = load_corpus(cfg.corpusPath);
      out << render_stats_table(repo.name, corpus_stats(repo));
      return kExitOk;
    }

    if (complete->parsed()) {
      if (cfg.k < 1) throw std::runtime_error("--k must be >= 1");
      const Repository repo = load_corpus(cfg.corpusPath);
      const SymbolIndex index = build_index(repo);
      const auto kind = detail::strategy_from_flag(cfg.strategy);
      if (!kind) throw std::runtime_error("unknown strategy: " + cfg.strategy);
      CompletionContext ctx{&repo, completePackage, completePrefix, cfg.caseSensitive};
      ResultSet rs = make_pipeline(ctx, Strategy{*kind}, index);
      std::size_t rank = 1;
      for (const Candidate& c : rs.top(static_cast<std::size_t>(cfg.k)))
        out << rank++ << "  " << c.name << "  " << to_string(c.tier) << "  " << c.originPackage
            << '\n';
      return kExitOk;
    }

    if (bench->parsed()) {
      if (cfg.k < 1) throw std::runtime_error("--k must be >= 1");
      if (!detail::parse_prefix_range(prefixRangeText, cfg.prefixRange))
        throw std::runtime_error("invalid --prefix-range (want MIN..MAX within 1..32): " +
                                 prefixRangeText);
      const Repository repo = load_corpus(cfg.corpusPath);
      BenchConfig bc;
      bc.k = cfg.k;
      bc.prefixRange = cfg.prefixRange;
      bc.caseSensitive = cfg.caseSensitive;
      bc.testMarker = cfg.testMarker;
      bc.threads = cfg.threads;
      if (!cfg.onlyPackages.empty()) {
        bc.filter.mode = CaseFilter::Mode::named;
        bc.filter.packages = cfg.onlyPackages;
      }
      bc.filter.testMarker = cfg.testMarker;

      const std::string ext = cfg.outputFormat == "table" ? "txt" : cfg.outputFormat;
      auto write_bench = [&](const BenchReport& r, std::ostream& sink) {
        if (cfg.outputFormat == "csv") write_report_csv(r, sink);
        else if (cfg.outputFormat == "json") write_report_json(r, sink);
        else write_report_table(r, sink);
      };

      if (cfg.strategy == "both") {
        const BenchReport without = run_benchmark(repo, Strategy{StrategyKind::flatGlobal}, bc);
        const BenchReport with = run_benchmark(repo, Strategy{StrategyKind::packageAware}, bc);
        const DeltaReport delta = compare(without, with, PartitionRule{cfg.testMarker});
        auto write_delta = [&](std::ostream& sink) {
          if (cfg.outputFormat == "csv") write_delta_csv(delta, sink);
          else if (cfg.outputFormat == "json") write_delta_json(delta, sink);
          else write_delta_table(delta, sink);
        };
        if (cfg.out.empty()) {
          out << "== " << without.strategyName << " ==\n";
          write_bench(without, out);
          out << "\n== " << with.strategyName << " ==\n";
          write_bench(with, out);
          out << "\n== delta ==\n";
          write_delta(out);
        } else {
          std::filesystem::create_directories(cfg.out);
          const std::filesystem::path dir = cfg.out;
          auto to_file = [&](const std::filesystem::path& p, auto&& writer) {
            std::ofstream f(p);
            if (!f) throw std::runtime_error("cannot write " + p.string());
            writer(f);
          };
          to_file(dir / ("bench_flat_global." + ext),
                  [&](std::ostream& s) { write_bench(without, s); });
          to_file(dir / ("bench_package_aware." + ext),
                  [&](std::ostream& s) { write_bench(with, s); });
          to_file(dir / ("delta." + ext), write_delta);
          out << "wrote " << (dir / ("bench_flat_global." + ext)).string() << ", "
              << (dir / ("bench_package_aware." + ext)).string() << ", "
              << (dir / ("delta." + ext)).string() << '\n';
        }
        return kExitOk;
      }

      const auto kind = detail::strategy_from_flag(cfg.strategy);
      if (!kind) throw std::runtime_error("unknown strategy: " + cfg.strategy);
      const BenchReport report = run_benchmark(repo, Strategy{*kind}, bc);
      std::ofstream file;
      write_bench(report, detail::OutputTarget{cfg.out}.open(file, out));
      return kExitOk;
    }

    if (synth->parsed()) {
      const Repository repo = generate_synthetic_corpus(synthSpec, cfg.seed);
      write_corpus(repo, synthOut);
      out << "wrote corpus with " << repo.packages.size() << " packages to " << synthOut << '\n';
      return kExitOk;
    }

    if (compareCmd->parsed()) {
      auto read = [&](const std::string& p) {
        std::ifstream f(p);
        if (!f) throw std::runtime_error("cannot read " + p);
        return read_report_json(f);
      };
      const BenchReport without = read(withoutPath);
      const BenchReport with = read(withPath);
      const DeltaReport delta = compare(without, with, PartitionRule{cfg.testMarker});
      std::ofstream file;
      std::ostream& sink = detail::OutputTarget{cfg.out}.open(file, out);
      if (cfg.outputFormat == "csv") write_delta_csv(delta, sink);
      else if (cfg.outputFormat == "json") write_delta_json(delta, sink);
      else write_delta_table(delta, sink);
      return kExitOk;
    }
  } catch (const EmptyBenchmark& e) {
    err << "error: " << e.what() << '\n';
    return kExitEmptyBenchmark;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  err << "error: no subcommand\n";
  return kExitInputError;
}

}  // namespace scopecomplete::cli
